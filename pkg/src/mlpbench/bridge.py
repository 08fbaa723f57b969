"""JSON-lines stdio bridge for foreign-language bindings.

Run as ``python -m mlpbench.bridge``. Each stdin line is one request,
each stdout line the matching response; no numerics live here, every
objective call routes to the in-process problem instance.

Request:  {"id": <int>, "op": <str>, ...op fields...}
Response: {"id": <int>, "ok": true,  "result": {...}}
        | {"id": <int>, "ok": false, "error": {"type": <str>, "message": <str>}}

Ops:
  version                                  -> {"version": str}
  make_instance {function_id, topology, seed?, budget?} ->
      {"handle", "label", "dimension", "budget", "fe_used"}
  objective      {handle, params}          -> {"value", "fe_used"}  (1 FE)
  test_mse       {handle, params}          -> {"value", "fe_used"}  (free)
  budget         {handle}                  -> {"fe_used", "limit"}
  close          {handle}                  -> {"closed": true}
  shutdown                                 -> {"closed": true} and exit

Error types: usage, unknown_function, dimension_mismatch,
budget_exhausted, internal. Non-finite values are sent as the strings
"inf" / "-inf" / "nan" because JSON has no encoding for them.
"""

from __future__ import annotations

import json
import math
import sys

from .__about__ import __version__
from .instance import (
    DEFAULT_BUDGET,
    TOPOLOGIES,
    BudgetExhaustedError,
    BudgetMeter,
    build_instance,
)
from .network import DimensionError


class _BridgeError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _encode_value(value: float):
    if math.isfinite(value):
        return value
    if math.isnan(value):
        return "nan"
    return "inf" if value > 0 else "-inf"


class BridgeSession:
    """One bridge process: a handle table over instances and meters."""

    def __init__(self):
        self._handles: dict[str, tuple] = {}
        self._next_handle = 1

    def _get(self, request: dict, key: str):
        if key not in request:
            raise _BridgeError("usage", f"missing field {key!r}")
        return request[key]

    def _resolve(self, request: dict):
        handle = self._get(request, "handle")
        entry = self._handles.get(handle)
        if entry is None:
            raise _BridgeError("usage", f"unknown handle {handle!r}")
        return entry

    def _params(self, request: dict):
        params = self._get(request, "params")
        if not isinstance(params, list) or not all(
            isinstance(v, (int, float)) for v in params
        ):
            raise _BridgeError("usage", "params must be a list of numbers")
        return params

    def handle_request(self, request: dict) -> dict:
        op = request.get("op")
        if op == "version":
            return {"version": __version__}
        if op == "make_instance":
            function_id = self._get(request, "function_id")
            topology = self._get(request, "topology")
            if topology not in TOPOLOGIES:
                raise _BridgeError(
                    "usage", f"unknown topology {topology!r}; expected {list(TOPOLOGIES)}"
                )
            budget = request.get("budget", DEFAULT_BUDGET)
            seed = request.get("seed")
            try:
                inst = build_instance(int(function_id), topology, dataset_seed=seed)
            except KeyError as e:
                raise _BridgeError("unknown_function", str(e)) from None
            meter = BudgetMeter(limit=int(budget))
            handle = f"h{self._next_handle}"
            self._next_handle += 1
            self._handles[handle] = (inst, meter)
            return {
                "handle": handle,
                "label": inst.label,
                "dimension": inst.dimension,
                "budget": meter.limit,
                "fe_used": meter.used,
            }
        if op == "objective":
            inst, meter = self._resolve(request)
            value = inst.eval_train(meter, self._params(request))
            return {"value": _encode_value(value), "fe_used": meter.used}
        if op == "test_mse":
            inst, meter = self._resolve(request)
            value = inst.eval_test(self._params(request))
            return {"value": _encode_value(value), "fe_used": meter.used}
        if op == "budget":
            _, meter = self._resolve(request)
            return {"fe_used": meter.used, "limit": meter.limit}
        if op == "close":
            handle = self._get(request, "handle")
            self._handles.pop(handle, None)
            return {"closed": True}
        raise _BridgeError("usage", f"unknown op {op!r}")


def serve(stdin=None, stdout=None) -> None:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    session = BridgeSession()
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        request_id = None
        try:
            request = json.loads(line)
            request_id = request.get("id")
            if request.get("op") == "shutdown":
                _respond(stdout, request_id, {"closed": True})
                break
            result = session.handle_request(request)
            _respond(stdout, request_id, result)
        except _BridgeError as e:
            _respond_error(stdout, request_id, e.kind, str(e))
        except json.JSONDecodeError as e:
            _respond_error(stdout, request_id, "usage", f"bad JSON: {e}")
        except BudgetExhaustedError as e:
            _respond_error(stdout, request_id, "budget_exhausted", str(e))
        except DimensionError as e:
            _respond_error(stdout, request_id, "dimension_mismatch", str(e))
        except Exception as e:  # pragma: no cover - defensive
            _respond_error(stdout, request_id, "internal", f"{type(e).__name__}: {e}")


def _respond(stdout, request_id, result: dict) -> None:
    stdout.write(json.dumps({"id": request_id, "ok": True, "result": result}) + "\n")
    stdout.flush()


def _respond_error(stdout, request_id, kind: str, message: str) -> None:
    stdout.write(
        json.dumps(
            {"id": request_id, "ok": False, "error": {"type": kind, "message": message}}
        )
        + "\n"
    )
    stdout.flush()


if __name__ == "__main__":
    serve()
