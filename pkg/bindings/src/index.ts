/**
 * TypeScript client for mlpbench problem instances.
 *
 * Spawns `python -m mlpbench.bridge` and talks JSON lines over
 * stdin/stdout. No numerics live on this side: every objective call is
 * evaluated by the Python package, and float64 values survive the JSON
 * round trip exactly. Requests on one client are serialized through an
 * internal queue, so concurrent calls on a handle cannot interleave.
 */

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { createInterface, type Interface } from "node:readline";

export type Topology = "Tanh1" | "Tanh3" | "Tanh5" | "ReLU1" | "ReLU3" | "ReLU5";

export class BridgeError extends Error {
  constructor(
    readonly kind: string,
    message: string,
  ) {
    super(message);
    this.name = "BridgeError";
  }
}

export class BudgetExhaustedError extends BridgeError {
  constructor(message: string) {
    super("budget_exhausted", message);
    this.name = "BudgetExhaustedError";
  }
}

export class DimensionMismatchError extends BridgeError {
  constructor(message: string) {
    super("dimension_mismatch", message);
    this.name = "DimensionMismatchError";
  }
}

export class UnknownFunctionError extends BridgeError {
  constructor(message: string) {
    super("unknown_function", message);
    this.name = "UnknownFunctionError";
  }
}

function toError(kind: string, message: string): BridgeError {
  switch (kind) {
    case "budget_exhausted":
      return new BudgetExhaustedError(message);
    case "dimension_mismatch":
      return new DimensionMismatchError(message);
    case "unknown_function":
      return new UnknownFunctionError(message);
    default:
      return new BridgeError(kind, message);
  }
}

interface WireResponse {
  id: number | null;
  ok: boolean;
  result?: Record<string, unknown>;
  error?: { type: string; message: string };
}

/** Bridge encodes non-finite doubles as strings; JSON has no spelling for them. */
function decodeValue(raw: unknown): number {
  if (typeof raw === "number") return raw;
  if (raw === "inf") return Infinity;
  if (raw === "-inf") return -Infinity;
  if (raw === "nan") return NaN;
  throw new BridgeError("protocol", `unexpected value payload: ${String(raw)}`);
}

export interface BenchClientOptions {
  /** Python executable used to start the bridge (default "python3"). */
  python?: string;
  /** Extra arguments placed before `-m mlpbench.bridge`. */
  pythonArgs?: string[];
}

export interface MakeInstanceOptions {
  seed?: number;
  budget?: number;
}

export class BenchClient {
  private proc: ChildProcessWithoutNullStreams;
  private rl: Interface;
  private nextId = 1;
  private pending = new Map<
    number,
    { resolve: (r: Record<string, unknown>) => void; reject: (e: Error) => void }
  >();
  private queue: Promise<unknown> = Promise.resolve();
  private closed = false;
  private stderrTail = "";

  constructor(options: BenchClientOptions = {}) {
    const python = options.python ?? "python3";
    const args = [...(options.pythonArgs ?? []), "-m", "mlpbench.bridge"];
    this.proc = spawn(python, args, { stdio: ["pipe", "pipe", "pipe"] });
    this.proc.stderr.on("data", (chunk: Buffer) => {
      this.stderrTail = (this.stderrTail + chunk.toString()).slice(-2000);
    });
    this.rl = createInterface({ input: this.proc.stdout });
    this.rl.on("line", (line) => this.onLine(line));
    this.proc.on("exit", () => {
      const err = new BridgeError("closed", `bridge exited; stderr: ${this.stderrTail}`);
      for (const { reject } of this.pending.values()) reject(err);
      this.pending.clear();
      this.closed = true;
    });
  }

  private onLine(line: string): void {
    let response: WireResponse;
    try {
      response = JSON.parse(line) as WireResponse;
    } catch {
      return; // stray diagnostics on stdout are ignored
    }
    const waiter = response.id === null ? undefined : this.pending.get(response.id as number);
    if (!waiter) return;
    this.pending.delete(response.id as number);
    if (response.ok) {
      waiter.resolve(response.result ?? {});
    } else {
      const e = response.error ?? { type: "internal", message: "missing error payload" };
      waiter.reject(toError(e.type, e.message));
    }
  }

  /** Send one request; requests are strictly serialized in call order. */
  request(op: string, fields: Record<string, unknown> = {}): Promise<Record<string, unknown>> {
    const send = (): Promise<Record<string, unknown>> => {
      if (this.closed) return Promise.reject(new BridgeError("closed", "client is closed"));
      const id = this.nextId++;
      const payload = JSON.stringify({ id, op, ...fields }) + "\n";
      return new Promise((resolve, reject) => {
        this.pending.set(id, { resolve, reject });
        this.proc.stdin.write(payload);
      });
    };
    const next = this.queue.then(send, send);
    this.queue = next.catch(() => undefined);
    return next;
  }

  async version(): Promise<string> {
    const result = await this.request("version");
    return result.version as string;
  }

  async makeInstance(
    functionId: number,
    topology: Topology,
    options: MakeInstanceOptions = {},
  ): Promise<BoundInstance> {
    const fields: Record<string, unknown> = { function_id: functionId, topology };
    if (options.seed !== undefined) fields.seed = options.seed;
    if (options.budget !== undefined) fields.budget = options.budget;
    const result = await this.request("make_instance", fields);
    return new BoundInstance(
      this,
      result.handle as string,
      result.label as string,
      result.dimension as number,
      result.budget as number,
    );
  }

  async close(): Promise<void> {
    if (this.closed) return;
    this.closed = true;
    try {
      const id = this.nextId++;
      this.proc.stdin.write(JSON.stringify({ id, op: "shutdown" }) + "\n");
    } catch {
      // process may already be gone
    }
    this.rl.close();
    await new Promise<void>((resolve) => {
      this.proc.once("exit", () => resolve());
      setTimeout(() => {
        this.proc.kill();
        resolve();
      }, 2000).unref();
    });
  }
}

/**
 * One budgeted problem instance held by the Python side.
 *
 * `objective` evaluates full-batch training MSE and burns one unit of
 * the instance's evaluation budget; `testMse` is free. A BoundInstance
 * belongs to its client; calls after `close()` reject.
 */
export class BoundInstance {
  private lastFeUsed = 0;

  constructor(
    private readonly client: BenchClient,
    private readonly handle: string,
    readonly label: string,
    readonly dimension: number,
    readonly budget: number,
  ) {}

  /** Training-set MSE; consumes exactly one function evaluation. */
  async objective(params: ArrayLike<number>): Promise<number> {
    const result = await this.client.request("objective", {
      handle: this.handle,
      params: Array.from(params),
    });
    this.lastFeUsed = result.fe_used as number;
    return decodeValue(result.value);
  }

  /** Test-set MSE; free and side-effect free. */
  async testMse(params: ArrayLike<number>): Promise<number> {
    const result = await this.client.request("test_mse", {
      handle: this.handle,
      params: Array.from(params),
    });
    return decodeValue(result.value);
  }

  /** Budget meter state as tracked by the Python side. */
  async budgetState(): Promise<{ feUsed: number; limit: number }> {
    const result = await this.client.request("budget", { handle: this.handle });
    this.lastFeUsed = result.fe_used as number;
    return { feUsed: result.fe_used as number, limit: result.limit as number };
  }

  /** Evaluations consumed as of the last round trip. */
  get feUsed(): number {
    return this.lastFeUsed;
  }

  async close(): Promise<void> {
    await this.client.request("close", { handle: this.handle });
  }
}
