"""Command-line driver: ``baileykit --verify NAME|all [--order N] ...``.

Exit codes: 0 every report equal, 1 some mismatch, 2 usage error,
3 some computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .catalog import Identity, VerificationReport, lookup, natural_key, registry, verify
from .errors import UsageError
from .series import Monomial

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message format ours
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="baileykit", description="Verify q-series identities coefficient by coefficient.")
    p.add_argument("--verify", action="append", metavar="NAME", help="identity name or 'all'; repeatable or comma separated")
    p.add_argument("--order", type=int, help="compare through q^N (inclusive); default per identity")
    p.add_argument("--n-max", type=int, help="largest index for pair and indexed checks")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="bind a parameter to a signed monomial, e.g. c=-q^1 or t=q^1/2")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--fail-fast", action="store_true", help="stop after the first report that is not equal")
    p.add_argument("--jobs", type=int, default=1, help="verify independent identities in this many processes")
    p.add_argument("--list", action="store_true", help="print the registry and exit")
    return p


def parse_param(text: str) -> tuple[str, Monomial]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise UsageError(f"--param expects NAME=VALUE, got {text!r}")
    try:
        return name.strip(), Monomial.parse(value.strip())
    except ValueError as exc:
        raise UsageError(f"--param {name}: {exc}") from exc


def resolve_targets(raw: Sequence[str]) -> list[Identity]:
    names: list[str] = []
    for chunk in raw:
        names.extend(part.strip() for part in chunk.split(",") if part.strip())
    if not names:
        raise UsageError("no identity named")
    if "all" in names:
        return list(registry())
    seen = {n: lookup(n) for n in names}
    return sorted(seen.values(), key=lambda e: natural_key(e.name))


def bindings_for(targets: Sequence[Identity], params: dict[str, Monomial]) -> dict[str, dict[str, Monomial]]:
    """Each parameter goes to the targets that declare it; a name no target declares is an error."""
    out = {t.name: {} for t in targets}
    for key, value in params.items():
        takers = [t for t in targets if key in t.defaults]
        if not takers:
            raise UsageError(f"no selected identity has a parameter named {key!r}")
        for t in takers:
            out[t.name][key] = value
    return out


def _run_one(args: tuple) -> VerificationReport:
    name, bindings, order, n_max = args
    return verify(name, bindings, order, n_max)


def format_text(r: VerificationReport) -> str:
    params = ", ".join(f"{k}={v}" for k, v in sorted(r.bindings.items()))
    head = f"{r.identity}" + (f" [{params}]" if params else "")
    secs = f"({r.elapsed:.2f} s)"
    note = f" ({r.detail})" if r.detail else ""
    if r.status == "equal":
        return f"{head}: equal through q^{r.order}{note} {secs}"
    if r.status == "mismatch":
        m = r.first_mismatch
        return f"{head}: MISMATCH at q^{m.exponent}: lhs={m.lhs} rhs={m.rhs}{note} {secs}"
    return f"{head}: ERROR {r.detail} {secs}"


def format_list() -> str:
    lines = []
    for e in registry():
        params = ", ".join(f"{k}={v}" for k, v in e.params) or "-"
        lines.append(f"{e.name:18s} {e.reference:22s} order={e.default_order:<4d} params: {params}\n    {e.summary}")
    return "\n".join(lines)


def exit_code(reports: Sequence[VerificationReport]) -> int:
    statuses = {r.status for r in reports}
    if "error" in statuses:
        return EXIT_ERROR
    if "mismatch" in statuses:
        return EXIT_MISMATCH
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.list:
        print(format_list())
        return EXIT_OK
    if not args.verify:
        parser.print_usage(sys.stderr)
        print("baileykit: error: nothing to do; pass --verify or --list", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.order is not None and args.order < 1:
            raise UsageError("--order must be at least 1")
        if args.n_max is not None and args.n_max < 0:
            raise UsageError("--n-max must be non-negative")
        params = dict(parse_param(p) for p in args.param)
        targets = resolve_targets(args.verify)
        bound = bindings_for(targets, params)
        for t in targets:  # type-check bindings before any work starts
            t.bind(bound[t.name])
    except UsageError as exc:
        print(f"baileykit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    jobs = [(t.name, bound[t.name], args.order, args.n_max) for t in targets]
    reports: list[VerificationReport] = []
    if args.jobs > 1 and not args.fail_fast:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_run_one, jobs))
    else:
        for job in jobs:
            r = _run_one(job)
            reports.append(r)
            if args.fail_fast and not r.equal:
                break
    reports.sort(key=lambda r: natural_key(r.identity))
    for r in reports:
        if args.format == "json":
            print(json.dumps(r.to_json(), sort_keys=False))
        else:
            print(format_text(r))
        if r.status == "error":
            print(f"{r.identity}: {r.detail}", file=sys.stderr)
    return exit_code(reports)


def entry_point() -> None:
    sys.exit(main())
