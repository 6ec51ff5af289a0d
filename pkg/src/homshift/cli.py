"""Command-line front end: one subcommand per construction.

Exit codes: 0 success, 2 invalid input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import cover, entropy, folding, graphcore, pattern, pivot
from .errors import (
    HomShiftError,
    InvalidInputError,
    InvalidParameterError,
    NothingToFoldError,
    ParityError,
    PreconditionError,
    RangeTooLargeError,
    ResourceLimitError,
    UnsupportedGraphError,
    UnsupportedRegionError,
)
from .height import height_matrix_csv, lift, range_table, range_table_csv

_KINDS = [
    (RangeTooLargeError, "range-too-large"),
    (ParityError, "parity"),
    (InvalidParameterError, "invalid-parameter"),
    (PreconditionError, "precondition"),
    (InvalidInputError, "invalid-input"),
    (UnsupportedGraphError, "unsupported-graph"),
    (UnsupportedRegionError, "unsupported-region"),
    (NothingToFoldError, "nothing-to-fold"),
    (ResourceLimitError, "resource-limit"),
]


def _kind(exc: Exception) -> str:
    for cls, name in _KINDS:
        if isinstance(exc, cls):
            return name
    return "error"


def _site(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"site must look like 0,0 (got {text!r})") from None


def _box(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(c) for c in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"box must look like 3x3 (got {text!r})") from None
    if any(e < 1 for e in dims):
        raise argparse.ArgumentTypeError("box extents must be positive")
    return dims


def _graph(args) -> graphcore.Graph | None:
    return graphcore.load_graph(args.graph) if getattr(args, "graph", None) else None


def _need_graph(args) -> graphcore.Graph:
    if not args.graph:
        raise InvalidInputError("--graph is required")
    return graphcore.load_graph(args.graph)


def _pattern(path, graph):
    if path is None:
        raise InvalidInputError("a pattern file is required")
    return pattern.load_pattern(path, graph=graph)


def _emit(args, obj, text: str) -> None:
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=False))
    else:
        print(text)


# --- subcommands ------------------------------------------------------------------

def cmd_analyze(args):
    rep = graphcore.analyze_graph(_need_graph(args))
    obj = rep.to_json()
    _emit(args, obj, "\n".join(f"{k}: {v}" for k, v in obj.items()))


def cmd_fold(args):
    seq = folding.fold_to_stiff(_need_graph(args))
    _emit(args, seq.to_json(), seq.trace())


def cmd_cover(args):
    g = _need_graph(args)
    verts = cover.cover_ball(g, args.radius, args.base)
    obj = {"base": verts[0].base, "radius": args.radius, "count": len(verts),
           "finite": cover.cover_is_finite(g, verts[0].base),
           "vertices": [v.to_json() for v in verts]}
    text = "\n".join(" ".join(v.walk) for v in verts) + f"\n{len(verts)} cover vertices"
    _emit(args, obj, text)


def cmd_lift(args):
    p = _pattern(args.pattern, _graph(args))
    lp = lift(p, args.anchor)
    text = "\n".join(f"{s}: {' '.join(w)}" for s, w in lp.walks.items())
    _emit(args, lp.to_json(), text)


def cmd_height(args):
    p = _pattern(args.pattern, _graph(args))
    lp = lift(p)
    if args.i is not None and args.j is not None:
        h = lp.height(args.i, args.j)
        _emit(args, {"i": list(args.i), "j": list(args.j), "height": h}, str(h))
    elif args.matrix:
        print(height_matrix_csv(lp), end="")
    else:
        rows = range_table(lp)
        obj = [{"radius": m, "range_ball": a, "range_sphere": b} for m, a, b in rows]
        _emit(args, obj, range_table_csv(lp).rstrip("\n"))


def cmd_patch(args):
    g = _graph(args)
    x = _pattern(args.x, g)
    y = _pattern(args.y, x.graph if g is None else g)
    res = folding.patch(x, y, args.n, args.k, allow_shift=args.shift, full=True)
    obj = pattern.pattern_to_json(res.z)
    obj["construction"] = {"shifted": res.shifted, "w1": res.w1, "v1": res.v1, "walk": res.walk, **res.radii}
    text = "\n".join(" ".join(row) for row in res.z.rows()) if res.z.region.d == 2 else json.dumps(obj)
    _emit(args, obj, text)


def cmd_pivot_chain(args):
    g = _graph(args)
    x = _pattern(args.x, g)
    y = _pattern(args.y, x.graph if g is None else g)
    chain = pivot.pivot_chain(x, y)
    obj = chain.to_json()
    text = "\n".join(f"{s}: {a} -> {b}" for s, a, b in chain.deltas) + f"\n{len(chain)} pivots"
    _emit(args, obj, text.lstrip("\n"))


def cmd_pivot_components(args):
    g = _graph(args)
    p = _pattern(args.pattern, g)
    frame = pivot.frame_sites(p.region, args.frame)
    boundary = p.restrict(frame) if frame else None
    rep = pivot.pivot_components(p.graph, p.region, boundary, args.moves_radius)
    text = f"{rep.component_count} component(s) among {rep.total} completions; sizes {rep.component_sizes}"
    _emit(args, rep.to_json(), text)


def cmd_entropy(args):
    g = _need_graph(args)
    if args.box:
        c = entropy.count_box_patterns(g, args.box)
        _emit(args, {"extents": list(args.box), "count": str(c)}, str(c))
        return
    rep = entropy.entropy_report(g, args.max_width)
    lines = ["box      count      log(count)/area"]
    for (e, c), v in zip(rep.box_counts, rep.per_site_log):
        lines.append(f"{'x'.join(map(str, e)):<8} {c:<10} {v:.6f}")
    lines.append("width    strip      cylinder")
    cyl = dict(rep.cylinder_estimates)
    for w, v in rep.strip_estimates:
        c = f"{cyl[w]:.6f}" if w in cyl else "-"
        lines.append(f"{w:<8} {v:.6f}   {c}")
    if rep.lower_bound_path2 is not None:
        lines.append(f"lower bound (three-vertex path): {rep.lower_bound_path2:.6f}")
    if rep.component_rule is not None:
        lines.append(f"component maximum: {rep.component_rule['max']}")
    lines.extend(rep.notes)
    _emit(args, rep.to_json(), "\n".join(lines))


def cmd_fillable(args):
    res = entropy.single_site_fillable(_need_graph(args), args.d)
    obj = {"d": args.d, "fillable": res.fillable, "witness": list(res.witness) if res.witness else None}
    text = "fillable" if res else f"not fillable; blocking tuple {list(res.witness)}"
    _emit(args, obj, text)


def cmd_periodic_count(args):
    c = entropy.periodic_count(_need_graph(args), args.d)
    _emit(args, {"d": args.d, "count": str(c)}, str(c))


def cmd_sample_pattern(args):
    g = _need_graph(args)
    box = args.box or (5,) * args.d
    rng = random.Random(args.seed)
    p = pattern.sample_pattern(g, pattern.Region.box((0,) * len(box), box), rng)
    ref = str(Path(args.graph))
    obj = pattern.pattern_to_json(p, graph_ref=ref)
    if args.output:
        Path(args.output).write_text(json.dumps(obj) + "\n")
    print(json.dumps(obj))


# --- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph JSON file")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seed", type=int, default=0, help="random seed (sampling commands only)")
    common.add_argument("--d", type=int, default=2, help="lattice dimension")

    parser = argparse.ArgumentParser(prog="homshift", description="Hom-shift constructions and oracles.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    add("analyze", cmd_analyze, "structural report for a graph")
    add("fold", cmd_fold, "fold the graph down to a stiff graph")
    sp = add("cover", cmd_cover, "list universal-cover vertices near the root")
    sp.add_argument("--radius", type=int, default=3)
    sp.add_argument("--base")
    sp = add("lift", cmd_lift, "lift a pattern to the universal cover")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--anchor", type=_site)
    sp = add("height", cmd_height, "heights and ranges of a pattern")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--i", type=_site)
    sp.add_argument("--j", type=_site)
    sp.add_argument("--matrix", action="store_true", help="print the full height matrix as CSV")
    sp = add("patch", cmd_patch, "glue x inside y across an annulus")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--shift", action="store_true", help="allow shifting x by e_1 for parity")
    sp = add("pivot-chain", cmd_pivot_chain, "chain of single-site changes from x to y")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp = add("pivot-components", cmd_pivot_components, "components of the move graph for a frame")
    sp.add_argument("--pattern", required=True, help="box pattern whose outer frame is kept fixed")
    sp.add_argument("--frame", type=int, default=2, help="frame width in layers")
    sp.add_argument("--moves-radius", type=int, default=1)
    sp = add("entropy", cmd_entropy, "box counts and strip estimates")
    sp.add_argument("--box", type=_box)
    sp.add_argument("--max-width", type=int, default=6)
    add("fillable", cmd_fillable, "single-site fillability check")
    add("periodic-count", cmd_periodic_count, "count patterns on the unit cube")
    sp = add("sample-pattern", cmd_sample_pattern, "random valid box pattern (testing utility)")
    sp.add_argument("--box", type=_box)
    sp.add_argument("--output")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except ResourceLimitError as exc:
        print(f"resource-limit: {exc}", file=sys.stderr)
        if exc.progress:
            print(f"progress: {json.dumps(exc.progress)}", file=sys.stderr)
        return 3
    except HomShiftError as exc:
        print(f"{_kind(exc)}: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"invalid-input: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
