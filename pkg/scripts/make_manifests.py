#!/usr/bin/env python3
"""Regenerate the catalog and canonical-seed manifest files."""

from pathlib import Path

from mlpbench.functions import catalog, manifest_csv
from mlpbench.seeds import canonical_sample_seed, canonical_split_seed

OUT = Path(__file__).resolve().parent.parent / "manifests"


def main():
    OUT.mkdir(exist_ok=True)
    (OUT / "functions.csv").write_text(manifest_csv())

    lines = ["id,name,sample_seed,split_seed"]
    for spec in catalog():
        lines.append(
            f"{spec.id},{spec.name},{canonical_sample_seed(spec.id)},"
            f"{canonical_split_seed(spec.id)}"
        )
    (OUT / "canonical_seeds.csv").write_text("\n".join(lines) + "\n")
    print(f"wrote {OUT / 'functions.csv'} and {OUT / 'canonical_seeds.csv'}")


if __name__ == "__main__":
    main()
