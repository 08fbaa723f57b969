#!/usr/bin/env python3
"""Fill the full-suite plan's instance list with all 324 labels."""

from pathlib import Path

import yaml

from mlpbench.instance import suite_labels

PLAN = Path(__file__).resolve().parent / "full_suite_plan.yaml"


def main():
    data = yaml.safe_load(PLAN.read_text())
    data["instances"] = suite_labels()
    PLAN.write_text(yaml.safe_dump(data, sort_keys=False))
    print(f"wrote {len(data['instances'])} instance labels into {PLAN}")


if __name__ == "__main__":
    main()
