"""Command-line front end: ``bringcert NAME [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .certify import CERTIFICATES, PREC_ENV, RunConfig, UnknownCertificate, run
from .report import dumps

NAMES = sorted(CERTIFICATES) + ["online-crosscheck", "all"]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bringcert",
                                 description="Recompute and certify the explicit formulas for Bring's curve.")
    ap.add_argument("certificate", choices=NAMES, help="certificate to run, or 'all'")
    ap.add_argument("--prec", type=int, default=None,
                    help=f"series precision (default 120, or ${PREC_ENV})")
    ap.add_argument("--order", choices=["grevlex", "lex"], default="grevlex",
                    help="monomial order for membership tests")
    ap.add_argument("--jmap-file", default=None, help="A(s), B(s) file to cross-check the derived j-map")
    ap.add_argument("--json", action="store_true", help="emit a JSON array of reports")
    ap.add_argument("--online", action="store_true", help="also compare q-expansions with LMFDB")
    ap.add_argument("--pair-cap", type=int, default=None, help="abort Buchberger after this many pairs")
    ap.add_argument("--time-cap", type=float, default=None, help="per-certificate wall-time limit (seconds)")
    ap.add_argument("--workers", type=int, default=1, help="parallel workers for 'all'")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _text(reports) -> str:
    lines = []
    for r in reports:
        extra = ""
        if "error" in r.witness:
            extra = f"  [{r.witness['error']}: {r.witness.get('message', '')}]"
        lines.append(f"{r.status.upper():8s} {r.name:22s} prec={r.precision_used:<4d} "
                     f"order={r.order_used or '-':10s} {r.millis:>7d} ms{extra}")
    return "\n".join(lines)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    kwargs = dict(order=args.order, jmap_file=args.jmap_file, output="json" if args.json else "text",
                  online=args.online, pair_cap=args.pair_cap, time_cap=args.time_cap, workers=args.workers)
    if args.prec is not None:
        kwargs["precision"] = args.prec
        kwargs["precision_source"] = "flag:--prec"
    try:
        cfg = RunConfig.from_env(**kwargs)
    except ValueError as exc:
        print(f"bringcert: {exc}", file=sys.stderr)
        return 2
    try:
        reports = run(args.certificate, cfg)
    except UnknownCertificate as exc:
        print(f"bringcert: unknown certificate {exc}", file=sys.stderr)
        return 2
    print(dumps(reports) if args.json else _text(reports))
    return 0 if all(r.ok for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
