"""Count acyclic parent maps by brute force over all n**n maps.

The counts pinned in ``rgforest.forest.FOREST_COUNTS`` came from this scan.
"""

import argparse
from itertools import product


def acyclic(parent):
    n = len(parent)
    for k in range(n):
        cur = k
        for _ in range(n):
            cur = parent[cur]
        # after n steps every walk sits on its cycle; only self-loops allowed
        if parent[cur] != cur:
            return False
    return True


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        count = sum(acyclic(p) for p in product(range(n), repeat=n))
        print(f"n={n}: {count} forests of {n ** n} parent maps")


if __name__ == "__main__":
    main()
