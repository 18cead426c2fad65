import argparse
import sys
from pathlib import Path

from ytri.fixtures import regenerate
from ytri.settings import resolve_settings


def main():
    settings = resolve_settings()
    ap = argparse.ArgumentParser(description="Regenerate the fixture report corpus.")
    ap.add_argument("--path", default=str(settings.seeds_path))
    ap.add_argument("--out", default=str(settings.fixtures_dir))
    args = ap.parse_args()
    p = Path(args.path)
    if not p.exists():
        print(f"Seed file not found: {p}", file=sys.stderr)
        sys.exit(1)
    written = regenerate(p, Path(args.out), settings)
    print(f"Wrote {len(written)} fixtures to {args.out}.")


if __name__ == "__main__":
    main()
