"""Compare the relay-protocol vulnerability families with the GF(2) attacker."""

import argparse

from hybridkd.kms import kms_compare, kms_families, kms_masking_check, kms_vuln
from hybridkd.vulnset import format_set


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=3)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        c = kms_compare(n)
        formula = kms_vuln(n)
        print(f"n={n}: {c.subsets} subsets, formulas miss {len(c.oracle_only)}, over-claim {len(c.formula_only)}")
        print("  families:", {k: len(v) for k, v in kms_families(n).items()})
        print("  missing minimal sets:", format_set(s for s in c.oracle_minimal if s not in formula))
        print("  non-minimal formula sets:", format_set(s for s in formula if s not in c.oracle_minimal))
        print(f"  amended relay family matches the attacker: {c.amended_agrees}")
        print(f"  single relay view leaves s uniform: {all(kms_masking_check(n).values())}")


if __name__ == "__main__":
    main()
