"""Random-tree equivalence sweep between the vulnerability algebra and the attacker."""

import argparse
import time
from collections import Counter

from hybridkd.netgraph import Bundle, SecretShare, Series, Xor, elements
from hybridkd.simexec import oracle_check, random_protocol


def ops(tree, acc):
    for cls in (Bundle, Series, Xor, SecretShare):
        if isinstance(tree, cls):
            acc[cls.__name__] += 1
    for c in getattr(tree, "children", ()):
        ops(c, acc)
    return acc


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--trees", type=int, default=200)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--rounds", type=int, default=512)
    ap.add_argument("--max-elements", type=int, default=10)
    args = ap.parse_args()

    t0 = time.time()
    subsets = bad = 0
    sizes, kinds = Counter(), Counter()
    for seed in range(args.start, args.start + args.trees):
        graph, tree = random_protocol(seed, args.max_elements)
        rep = oracle_check(tree, graph, seed, rounds=args.rounds)
        subsets += rep.subsets_checked
        sizes[len(elements(tree))] += 1
        ops(tree, kinds)
        if not rep.ok:
            bad += 1
            print(f"seed {seed}: {len(rep.mismatches)} mismatches, e.g. {sorted(rep.mismatches[0][0]) if rep.mismatches else 'rate'}")
    print(f"{args.trees} trees, {subsets} subsets, {bad} trees with mismatches, {time.time() - t0:.1f} s")
    print("universe sizes:", dict(sorted(sizes.items())))
    print("combinators:", dict(kinds))


if __name__ == "__main__":
    main()
