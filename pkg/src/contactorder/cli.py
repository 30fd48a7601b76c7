"""Batch front-end.

Three subcommands:

* ``invariants`` -- compute (or load from cache) the basic invariants of
  a group and print them in the canonical text format.
* ``basis`` -- print one contact-order basis, one derivation per block.
* ``verify`` -- run the whole identity pipeline for one or more groups
  and report every check.

Exit codes: 0 when everything passed, 1 when any verification failed,
2 on usage errors.  The invariant cache directory defaults to the
``CONTACTORDER_CACHE_DIR`` environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from contactorder.coxeter import (
    CoxeterError,
    SUPPORTED_LABELS,
    basic_invariants,
    load_invariants,
    normalize_label,
    realize,
    save_invariants,
)
from contactorder.filtration import (
    FiltrationContext,
    FiltrationError,
    VerificationReport,
    run_verification,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


def _default_cache_dir() -> Optional[str]:
    return os.environ.get("CONTACTORDER_CACHE_DIR") or None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contactorder",
        description="exact contact-order filtration bases and identity checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, multi_type=False):
        if multi_type:
            p.add_argument(
                "--type",
                action="append",
                required=True,
                metavar="LABEL",
                help="group label (repeatable); one of " + ", ".join(SUPPORTED_LABELS),
            )
        else:
            p.add_argument("--type", required=True, metavar="LABEL",
                           help="group label; one of " + ", ".join(SUPPORTED_LABELS))
        p.add_argument("--cache-dir", default=_default_cache_dir(),
                       help="invariant cache directory (env CONTACTORDER_CACHE_DIR)")
        p.add_argument("--invariants", metavar="FILE",
                       help="use basic invariants from this JSON file instead of searching")
        p.add_argument("--format", choices=("text", "records"), default="text",
                       help="text for human-readable, records for newline-delimited JSON")

    p_inv = sub.add_parser("invariants", help="compute and print basic invariants")
    add_common(p_inv)

    p_basis = sub.add_parser("basis", help="print one contact-order basis")
    add_common(p_basis)
    p_basis.add_argument("--m", type=int, required=True, help="filtration order (>= 0)")

    p_verify = sub.add_parser("verify", help="run the identity pipeline")
    add_common(p_verify, multi_type=True)
    p_verify.add_argument("--m-max", type=int, default=5, help="largest basis order certified")
    p_verify.add_argument("--k-max", type=int, default=2, help="largest flow order checked")
    p_verify.add_argument("--jobs", type=int, default=1,
                          help="verify this many group labels in parallel")
    p_verify.add_argument("--perturb", action="store_true",
                          help="sabotage one basis coefficient and require a failure witness")
    return parser


def _load_context(label: str, cache_dir, invariants_file) -> FiltrationContext:
    datum = realize(label)
    if invariants_file:
        inv = load_invariants(datum, invariants_file)
    else:
        inv = basic_invariants(datum, cache_dir=cache_dir)
        if cache_dir:
            save_invariants(inv, datum, os.path.join(cache_dir, f"{datum.label}.json"))
    return FiltrationContext(datum, inv)


def _cmd_invariants(args) -> int:
    label = normalize_label(args.type)
    ctx = _load_context(label, args.cache_dir, args.invariants)
    if args.format == "records":
        for i, p in enumerate(ctx.inv.polys):
            print(json.dumps({"label": label, "index": i + 1,
                              "degree": ctx.datum.degrees[i], "poly": p.render()}))
        print(json.dumps({"label": label, "delta": ctx.delta.render(),
                          "c": ctx.inv.c.render()}))
    else:
        for i, p in enumerate(ctx.inv.polys):
            print(f"P{i + 1} (degree {ctx.datum.degrees[i]}) = {p.render()}")
        print(f"delta = {ctx.delta.render()}")
        print(f"delta / Q = {ctx.inv.c.render()}")
    return EXIT_PASS


def _cmd_basis(args) -> int:
    if args.m < 0:
        raise _UsageError("--m must be nonnegative")
    label = normalize_label(args.type)
    ctx = _load_context(label, args.cache_dir, args.invariants)
    basis = ctx.filtration_basis(args.m)
    if args.format == "records":
        for j, theta in enumerate(basis):
            print(json.dumps({"label": label, "m": args.m, "index": j + 1,
                              "coeffs": [c.render() for c in theta.coeffs]}))
    else:
        for j, theta in enumerate(basis):
            print(f"# basis member {j + 1} of order {args.m}")
            print(theta.to_text())
    return EXIT_PASS


def _verify_one(label: str, cache_dir, invariants_file, m_max, k_max, perturb):
    try:
        ctx = _load_context(label, cache_dir, invariants_file)
    except (CoxeterError, FiltrationError, OSError, ValueError) as exc:
        return [VerificationReport(label, "invariant_set", {}, "fail", str(exc))]
    return run_verification(ctx, m_max=m_max, k_max=k_max, perturb=perturb)


def _cmd_verify(args) -> int:
    labels = [normalize_label(t) for t in args.type]
    if args.invariants and len(labels) > 1:
        raise _UsageError("--invariants applies to a single --type")
    jobs = max(1, args.jobs)
    work = [(lb, args.cache_dir, args.invariants, args.m_max, args.k_max, args.perturb)
            for lb in labels]
    if jobs > 1 and len(labels) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, len(labels))) as pool:
            results = list(pool.map(_verify_one_star, work))
    else:
        results = [_verify_one(*w) for w in work]

    all_pass = True
    for reports in results:
        for r in reports:
            all_pass = all_pass and r.passed
            if args.format == "records":
                print(json.dumps(r.to_record()))
            else:
                print(r.render_line())
    return EXIT_PASS if all_pass else EXIT_FAIL


def _verify_one_star(work):
    return _verify_one(*work)


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        if args.command == "invariants":
            return _cmd_invariants(args)
        if args.command == "basis":
            return _cmd_basis(args)
        return _cmd_verify(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoxeterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FiltrationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
