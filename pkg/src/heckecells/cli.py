"""Command-line surface: cell tables, stratification runs, j-ring checks.

Exit codes: 0 pass, 1 check failure, 2 usage error, 3 section budget
exceeded.  Output is deterministic for a fixed configuration: JSON is
emitted with sorted keys and fixed separators, reports embed the config
and tool version, and nothing time- or host-dependent is written.
"""

import argparse
import json
import os
import sys

from . import __version__
from .cells import compute_cells
from .hecke import hecke_data_cached, save_caches
from .weyl import weyl_group

KNOWN_TYPES = ("A1", "A2", "A3", "B2", "B3", "G2")


def _resolve_cache_dir(args):
    if args.cache_dir:
        return args.cache_dir
    return os.environ.get("HECKECELLS_CACHE_DIR") or None


def _parse_lambda(text: str, rank: int):
    """Parse a generator subset like ``s1,s3`` (1-based) into indices.

    >>> _parse_lambda("s1,s3", 3)
    (0, 2)
    >>> _parse_lambda("", 3)
    ()
    """
    if not text:
        return ()
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok.startswith("s") or not tok[1:].isdigit():
            raise ValueError(f"bad generator token {tok!r} (expected s1,s2,...)")
        k = int(tok[1:])
        if not 1 <= k <= rank:
            raise ValueError(f"generator {tok} out of range for rank {rank}")
        out.append(k - 1)
    return tuple(sorted(set(out)))


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_cells(args) -> int:
    g = weyl_group(args.type)
    cache_dir = _resolve_cache_dir(args)
    hd = hecke_data_cached(args.type, cache_dir)
    cd = compute_cells(args.type)
    cells = [
        {
            "index": i,
            "size": len(cd.left_cells[i]),
            "a": cd.a_of_left_cell(i),
            "f": cd.f_left[i],
            "distinguished_involution": g.format_element(cd.dist_inv[i]),
            "members": [g.format_element(w) for w in cd.left_cells[i]],
        }
        for i in range(len(cd.left_cells))
    ]
    data = {
        "tool": {"name": "heckecells", "version": __version__},
        "config": {"type": args.type, "lambda": None},
        "order": g.order,
        "left_cells": cells,
        "two_sided_count": len(cd.two_cells),
        "two_sided_f": list(cd.f_two),
        "leq_left": sorted([i, j] for (i, j) in cd.leq_left if i != j),
    }
    if args.lam is not None:
        lam = _parse_lambda(args.lam, g.rank)
        from .hmod import qperm_module

        mod, fil = qperm_module(args.type, lam)
        data["config"]["lambda"] = [f"s{k + 1}" for k in lam]
        data["qperm"] = {
            "dim": mod.dim,
            "group_cells": list(fil.group_cells),
            "f_levels": [cd.f_left[c] for c in fil.group_cells],
            "ranges": [list(r) for r in fil.ranges],
        }
    save_caches(hd, cache_dir)
    if args.format == "tsv":
        lines = ["index\tsize\ta\tf\tdistinguished_involution\tmembers"]
        for c in cells:
            lines.append(
                "{index}\t{size}\t{a}\t{f}\t{distinguished_involution}\t{m}".format(
                    m=",".join(c["members"]), **c
                )
            )
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_dump_json(data), args.out)
    return 0


def cmd_strat_verify(args) -> int:
    from .strat import SectionBudgetError, verify_strat

    cache_dir = _resolve_cache_dir(args)
    hd = hecke_data_cached(args.type, cache_dir)
    try:
        rep = verify_strat(
            args.type,
            args.e,
            variant=args.variant,
            budget=args.section_budget,
            jobs=args.jobs,
        )
    except SectionBudgetError as exc:
        partial = {
            "tool": {"name": "heckecells", "version": __version__},
            "config": {
                "type": args.type,
                "e": args.e,
                "variant": args.variant,
                "section_budget": args.section_budget,
            },
            "error": f"section budget exceeded: {exc}",
            "pass": False,
        }
        _emit(_dump_json(partial), args.out)
        return 3
    save_caches(hd, cache_dir)
    _emit(_dump_json(rep.data), args.out)
    return 0 if rep.passed else 1


def cmd_jring_verify(args) -> int:
    from .jring import varpi_fullrank_K, varpi_t1_rank, verify_lemma51

    cache_dir = _resolve_cache_dir(args)
    hd = hecke_data_cached(args.type, cache_dir)
    g = weyl_group(args.type)
    checked, violations = verify_lemma51(args.type)
    rank = varpi_t1_rank(args.type)
    ok = not violations and rank == g.order and varpi_fullrank_K(args.type)
    data = {
        "tool": {"name": "heckecells", "version": __version__},
        "config": {"type": args.type},
        "intertwining_checked": checked,
        "intertwining_violations": [list(v) for v in violations],
        "varpi_t1_rank": rank,
        "group_order": g.order,
        "varpi_fullrank_K": varpi_fullrank_K(args.type),
        "pass": ok,
    }
    save_caches(hd, cache_dir)
    _emit(_dump_json(data), args.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="heckecells",
        description="Exact cell, module and stratification checks for finite Weyl groups.",
    )
    p.add_argument("--version", action="version", version=f"heckecells {__version__}")
    sub = p.add_subparsers(dest="command")

    def common(sp, with_e=False, with_strat=False):
        sp.add_argument("--type", required=True, help="Cartan type, e.g. A2")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument(
            "--format", choices=("json", "tsv"), default="json", help="output format"
        )
        sp.add_argument("--cache-dir", default=None, help="disk cache directory")
        sp.add_argument("--jobs", type=int, default=1, help="parallel worker count")
        if with_e:
            sp.add_argument("--e", type=int, required=True, help="cyclotomic index e >= 1")
        if with_strat:
            sp.add_argument(
                "--variant",
                choices=("first", "second"),
                default="first",
                help="X~ construction variant",
            )
            sp.add_argument(
                "--section-budget",
                type=int,
                default=512,
                help="max sections per X~ build",
            )

    sp_cells = sub.add_parser("cells", help="left cells with a- and f-values")
    common(sp_cells)
    sp_cells.add_argument(
        "--lambda",
        dest="lam",
        default=None,
        help="generator subset like s1,s3: include the q-permutation filtration",
    )

    sp_strat = sub.add_parser("strat", help="stratifying-system checks")
    strat_sub = sp_strat.add_subparsers(dest="strat_command")
    sp_sv = strat_sub.add_parser("verify", help="run the full verification pipeline")
    common(sp_sv, with_e=True, with_strat=True)

    sp_jring = sub.add_parser("jring", help="asymptotic-ring checks")
    jring_sub = sp_jring.add_subparsers(dest="jring_command")
    sp_jv = jring_sub.add_parser("verify", help="intertwining identity and t=1 rank")
    common(sp_jv)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.command == "strat" and getattr(args, "strat_command", None) != "verify":
        sys.stderr.write("usage: heckecells strat verify --type T --e E\n")
        return 2
    if args.command == "jring" and getattr(args, "jring_command", None) != "verify":
        sys.stderr.write("usage: heckecells jring verify --type T\n")
        return 2
    if args.type not in KNOWN_TYPES:
        sys.stderr.write(f"unknown Cartan type {args.type!r}\n")
        return 2
    if getattr(args, "e", 1) < 1:
        sys.stderr.write("--e must be a positive integer\n")
        return 2
    if getattr(args, "format", "json") == "tsv" and args.command != "cells":
        sys.stderr.write("reports are JSON only; --format tsv applies to tables\n")
        return 2
    try:
        if args.command == "cells":
            return cmd_cells(args)
        if args.command == "strat":
            return cmd_strat_verify(args)
        return cmd_jring_verify(args)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
