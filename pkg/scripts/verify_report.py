"""Run every verification suite and print the table (or JSON with --json)."""
import argparse
import sys

from gaussiso.verify import verify_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rep = verify_all(args.seed)
    print(rep.to_json() if args.json else rep.table())
    if not args.json:
        for r in rep.results:
            print(f"  {r.claim_id:<24} {r.runtime_ms:>6d} ms")
    return 0 if rep.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
