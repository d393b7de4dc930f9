"""Recompute the counting tables by exhaustive census.

    python3 demos/tables.py --q 4 5 7 8 9 --which 3
"""

import argparse
import time

from fq2perm.fields import build_field
from fq2perm.verify import emit_text, field_label, table

FIELDS = {4: (2, 2), 8: (2, 3), 9: (3, 2)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, nargs="+", default=[4, 5, 7, 8, 9, 11])
    ap.add_argument("--which", type=int, choices=(1, 2, 3), default=1)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    results = {}
    for q in args.q:
        ctx = build_field(*FIELDS.get(q, (q, 1)))
        t = time.time()
        results[field_label(ctx)] = table(ctx, args.which, jobs=args.jobs)
        print(f"# q={q}: {time.time() - t:.1f}s")
    print(emit_text(results), end="")


if __name__ == "__main__":
    main()
