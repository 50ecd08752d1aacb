"""Command line interface: ``dowlingkit <command> [options]``.

Exit status is 0 when every comparison made by the command matched, 1 on a
mismatch, 2 on bad input and 3 when an enumeration exceeds the size cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures, validation
from .dowling import (
    DowlingContext,
    EnumerationCapError,
    MalformedElementError,
    dowling_context,
    enumerate_poset,
    subposet_context,
)
from .groups import FiniteGroup, GroupError, action_from_json
from .invariants import (
    UnsupportedCaseError,
    char_poly_factored,
    dd_char_poly,
    motive_eval,
    motive_from_poset,
    rep_decomposition,
    whitney_hilbert,
)
from .layers import FiniteGSpace, SpaceError, orbit_config_count, removal_context
from .polynomial import format_poly
from .poset import PosetError, char_poly_bruteforce, mobius_table, whitney_ranks
from .wreath import labeled_partitions, orbit_fibers, orbit_names, orbits_bruteforce

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _verdict(ok: bool) -> str:
    return "MATCH" if ok else "MISMATCH"


def _load_json(path: str):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text else ""
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None


def _resolve_action(args):
    """The G-set of colors: from --space (its singular points) or --group/--action."""
    if args.space:
        return _space(args).singular_action
    if args.action is None:
        raise InputError("give --action (with --group) or --space")
    if Path(args.action).exists():
        return action_from_json(_load_json(args.action))
    group = None
    if args.group:
        group = _group_file(args.group) if Path(args.group).exists() else fixtures.group_by_name(args.group)
    action = fixtures.action_by_name(args.action, group)
    if group is not None and action.group.order != group.order:
        raise InputError(f"action {args.action!r} is defined for |G| = {action.group.order}, not {args.group}")
    return action


def _group_file(path):
    data = _load_json(path)
    data = data.get("group", data)
    try:
        return FiniteGroup(tuple(data["elements"]), data["table"], name=data.get("name", Path(path).stem))
    except KeyError as exc:
        raise InputError(f"{path}: missing key {exc.args[0]!r}") from None


def _space(args):
    if Path(args.space).exists():
        return FiniteGSpace(action_from_json(_load_json(args.space)), name=Path(args.space).stem)
    return fixtures.space_by_name(args.space, q=args.q, d=args.d, ginv=args.ginv)


def _removed_points(space, spec: str) -> list[int]:
    """T-spec: comma-separated point labels, or ``none``."""
    if spec.strip().lower() in ("", "none"):
        return []
    return [space.action.index(x.strip()) for x in spec.split(",")]


def _context(args) -> DowlingContext:
    if args.n is None or args.n < 1:
        raise InputError("--n must be a positive integer")
    if args.space and args.remove is not None:
        space = _space(args)
        ctx, _ = removal_context(space, args.n, _removed_points(space, args.remove))
        return ctx
    action = _resolve_action(args)
    if args.keep is not None:
        kept = [] if args.keep.strip().lower() in ("", "none") else [action.index(x.strip()) for x in args.keep.split(",")]
        return subposet_context(args.n, action, kept)
    return dowling_context(args.n, action)


def _closed_charpoly(ctx):
    """The factored form, or None for a subposet without one."""
    if not ctx.is_filtered:
        return char_poly_factored(ctx.n, ctx.group.order, ctx.action.size)
    if ctx.action.size == 1 and not ctx.allowed_singleton_orbits:
        return dd_char_poly(ctx.n, ctx.group.order)
    return None


def _poset(args, ctx):
    return enumerate_poset(ctx, cap=args.cap)


def _ambient(ctx):
    return ctx.n if ctx.action.size else ctx.n - 1


# -- commands -------------------------------------------------------------------------

def cmd_enumerate(args, out):
    ctx = _context(args)
    P = _poset(args, ctx)
    if args.format == "dot":
        out.write(P.to_dot("D", labeler=ctx.render))
        return EXIT_OK, None
    data = {"n_elements": P.n_elements, "rank_sizes": P.rank_sizes(), **P.to_json(labeler=ctx.render)}
    if args.format == "json":
        return EXIT_OK, data
    out.write(f"{P.n_elements} elements, rank sizes {P.rank_sizes()}\n")
    for r in range(P.max_rank + 1):
        out.write(f"rank {r}:\n")
        for x in range(P.n_elements):
            if P.rank[x] == r:
                out.write(f"  {ctx.render(P.labels[x])}\n")
    return EXIT_OK, None


def cmd_charpoly(args, out):
    ctx = _context(args)
    P = _poset(args, ctx)
    brute = char_poly_bruteforce(P, _ambient(ctx))
    factored = _closed_charpoly(ctx)
    ok = factored is None or factored == brute
    data = {
        "factored": format_poly(factored) if factored is not None else None,
        "brute": format_poly(brute),
        "verdict": _verdict(ok) if factored is not None else "NO CLOSED FORM",
    }
    if args.format == "json":
        return (EXIT_OK if ok else EXIT_MISMATCH), data
    out.write(f"factored: {data['factored'] or 'n/a'}\n")
    out.write(f"brute:    {data['brute']}\n")
    out.write(f"{data['verdict']}\n")
    return (EXIT_OK if ok else EXIT_MISMATCH), None


def cmd_orbits(args, out):
    ctx = _context(args)
    P = _poset(args, ctx)
    names = orbit_names(ctx)
    fibers = orbit_fibers(ctx, P)
    brute = {frozenset(o) for o in orbits_bruteforce(ctx, P)}
    ok = brute == {frozenset(f) for f in fibers.values()}
    expected = set(labeled_partitions(ctx.n, len(ctx.orbits), ctx.forbidden_orbits))
    ok = ok and expected == set(fibers)
    rows = [{"label": lam.render(names), "size": len(fibers[lam])}
            for lam in sorted(fibers, key=lambda x: x.sort_key())]
    data = {"n_orbits": len(rows), "n_wreath_orbits": len(brute), "orbits": rows, "verdict": _verdict(ok)}
    if args.format == "json":
        return (EXIT_OK if ok else EXIT_MISMATCH), data
    out.write(f"{len(rows)} orbits\n")
    for row in rows:
        out.write(f"  {row['label']}  size {row['size']}\n")
    out.write(f"wreath orbits {len(brute)} vs labeled partitions {len(rows)}: {data['verdict']}\n")
    return (EXIT_OK if ok else EXIT_MISMATCH), None


def cmd_whitney(args, out):
    ctx = _context(args)
    P = _poset(args, ctx)
    ranks = whitney_ranks(P, mobius_table(P))
    brute = [ranks.get(r, 0) for r in range(P.max_rank + 1)]
    try:
        closed = list(whitney_hilbert(ctx.n, ctx.group.order, ctx.action.size).coeffs) if not ctx.is_filtered else None
    except UnsupportedCaseError:
        closed = None
    ok = closed is None or closed == brute + [0] * (len(closed) - len(brute))
    data = {"mobius_sums": brute, "closed_form": closed,
            "verdict": _verdict(ok) if closed is not None else "NO CLOSED FORM"}
    if args.format == "json":
        return (EXIT_OK if ok else EXIT_MISMATCH), data
    out.write(f"|mu| sums by rank: {brute}\n")
    out.write(f"closed form:       {closed if closed is not None else 'n/a'}\n")
    out.write(f"{data['verdict']}\n")
    return (EXIT_OK if ok else EXIT_MISMATCH), None


def cmd_reps(args, out):
    ctx = _context(args)
    names = orbit_names(ctx)
    closed = whitney_hilbert(ctx.n, ctx.group.order, ctx.action.size)
    ranks = range(ctx.n + 1) if args.rank is None else [args.rank]
    ok = True
    data = {"ranks": []}
    for r in ranks:
        summands = rep_decomposition(ctx, r)
        total = sum(s.induced_dim for s in summands)
        good = total == closed[r]
        ok = ok and good
        data["ranks"].append({
            "rank": r,
            "summands": [{"label": s.label.render(names), "stabilizer_order": s.stabilizer_order,
                          "inner_dim": s.inner_dim, "induced_dim": s.induced_dim} for s in summands],
            "total": total, "closed_form": closed[r], "verdict": _verdict(good),
        })
    if args.format == "json":
        return (EXIT_OK if ok else EXIT_MISMATCH), data
    for row in data["ranks"]:
        out.write(f"WH_{row['rank']}:\n")
        for s in row["summands"]:
            out.write(f"  {s['label']}: |stab| {s['stabilizer_order']}, inner dim {s['inner_dim']}, "
                      f"dim {s['induced_dim']}\n")
        out.write(f"  total {row['total']} vs closed form {row['closed_form']}: {row['verdict']}\n")
    return (EXIT_OK if ok else EXIT_MISMATCH), None


def cmd_hasse(args, out):
    ctx = _context(args)
    P = _poset(args, ctx)
    if args.format == "json":
        return EXIT_OK, P.to_json(labeler=ctx.render)
    out.write(P.to_dot("D", labeler=ctx.render))
    return EXIT_OK, None


def cmd_count(args, out):
    if not args.space:
        raise InputError("count needs --space")
    if args.n is None or args.n < 1:
        raise InputError("--n must be a positive integer")
    space = _space(args)
    n = args.n
    if args.remove is None:
        brute = orbit_config_count(space, n)
        formula = motive_eval(space.size, n, space.group.order, len(space.singular))
    else:
        removed = _removed_points(space, args.remove)
        brute = orbit_config_count(space, n, removed)
        ctx, _ = removal_context(space, n, removed)
        formula = motive_from_poset(_poset(args, ctx), n, space.size)
    ok = brute == formula
    data = {"space": space.name, "n": n, "brute": brute, "formula": formula, "verdict": _verdict(ok)}
    if args.format == "json":
        return (EXIT_OK if ok else EXIT_MISMATCH), data
    out.write(f"brute={brute} formula={formula} {_verdict(ok)}\n")
    return (EXIT_OK if ok else EXIT_MISMATCH), None


def cmd_verify(args, out):
    results = validation.run_all(seed=args.seed)
    ok = all(r.ok for r in results)
    if args.format == "json":
        return (EXIT_OK if ok else EXIT_MISMATCH), {"results": [r.to_json() for r in results], "passed": ok}
    for r in results:
        out.write(r.summary() + "\n")
    out.write("ALL PASS\n" if ok else "FAILURES PRESENT\n")
    return (EXIT_OK if ok else EXIT_MISMATCH), None


COMMANDS = {
    "enumerate": cmd_enumerate,
    "charpoly": cmd_charpoly,
    "orbits": cmd_orbits,
    "whitney": cmd_whitney,
    "reps": cmd_reps,
    "hasse": cmd_hasse,
    "count": cmd_count,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dowlingkit", description="S-Dowling posets and orbit configuration spaces")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--group", help="Z<d> or a JSON group file")
    p.add_argument("--action", help="trivial<k>, point, empty, regular, regular+point, sign, hexagonal, "
                                    "square, or a JSON action file")
    p.add_argument("--space", help="affine, gm, or a JSON space file")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int, help="field size (prime)")
    p.add_argument("--d", type=int, help="order of the roots of unity acting")
    p.add_argument("--ginv", action="store_true", help="use x -> 1/x on gm")
    p.add_argument("--remove", metavar="T", help="comma-separated invariant set of points removed from X")
    p.add_argument("--keep", metavar="T", help="subposet D^T: comma-separated invariant set of colors whose "
                                               "singleton zero blocks are kept (others are dropped)")
    p.add_argument("--rank", type=int, help="single rank for reps")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--cap", type=int, help="enumeration size cap (default from DOWLINGKIT_CAP)")
    p.add_argument("--seed", type=int, default=validation.DEFAULT_SEED, help="seed for sampled checks")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        code, data = COMMANDS[args.command](args, out)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, GroupError, SpaceError, MalformedElementError, PosetError,
            UnsupportedCaseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if data is not None:
        out.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
