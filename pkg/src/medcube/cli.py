"""Command line interface.

Exit codes: 0 success, 1 a validation or checked property failed,
2 bad input (parse or usage error).
"""

import argparse
import contextlib
import io
import json
import os
import random
import sys
from fractions import Fraction

import networkx as nx

from . import algebra, metric, models, squares, table, wallspace
from .rank import crossing_graph, is_additive, max_crossing_family, rank
from .complex import build_complex, check_local_cubulation, skeleton_from_vertices
from .errors import (
    AmbientExhausted,
    MedcubeError,
    NotMedianClosed,
    ParseError,
    UnknownVertex,
    UnknownWall,
)
from .fileformat import parse, serialize, serialize_wallspace
from .metric import fmt
from .model import MedianModel

PRESET_ENV = "MEDCUBE_PRESET_DIR"
RAW_PRESETS = {
    # {0,1}^3 without 111: not median-closed, used for the flag counterexample
    "hollow-cube": lambda: MedianModel(["w1", "w2", "w3"], range(7),
                                       {v: format(v, "03b") for v in range(7)},
                                       check=False),
}


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    """A checked property came out false; payload is still printed."""

    def __init__(self, payload, text):
        super().__init__(text)
        self.payload = payload
        self.text = text


# -- loading ----------------------------------------------------------------


def preset_names():
    names = set(models.PRESETS) | set(RAW_PRESETS)
    folder = os.environ.get(PRESET_ENV)
    if folder and os.path.isdir(folder):
        names |= {f[:-3] for f in os.listdir(folder) if f.endswith(".ws")}
    return sorted(names)


def load_preset(name, check=True):
    """Model and weights for a preset; built-ins first, then the preset dir."""
    if name in models.PRESETS:
        return models.PRESETS[name](), {}
    if name in RAW_PRESETS:
        m = RAW_PRESETS[name]()
        if check:
            m.validate()
        return m, {}
    folder = os.environ.get(PRESET_ENV)
    if folder:
        path = os.path.join(folder, name + ".ws")
        if os.path.exists(path):
            f = parse(path)
            return f.model(check), f.weights
    raise UsageError(f"unknown preset {name!r}")


def load(args, raw=False):
    check = not raw
    if args.preset and args.file:
        raise UsageError("give either FILE or --preset, not both")
    if args.preset:
        return load_preset(args.preset, check)
    if not args.file:
        raise UsageError("a FILE or --preset is required")
    try:
        f = parse(args.file)
    except OSError as e:
        raise UsageError(str(e))
    return f.model(check), f.weights


def load_ws(args):
    m, weights = load(args)
    return metric.WeightedWallspace(m, weights)


def resolve(model, ref):
    if ref == "center":
        return algebra.center(model)
    return model.vertex(ref)


def resolve_all(model, refs):
    return frozenset(resolve(model, r) for r in refs)


def labels(model, vs):
    return model.labels(vs)


# -- subcommands --------------------------------------------------------------


def cmd_validate(args):
    m, _ = load(args)
    report = table.verify_model_axioms(m)
    payload = {
        "vertices": len(m),
        "walls": m.n_walls,
        "median_closed": True,
        "rank": rank(m),
        "axioms": {law: len(v) for law, v in sorted(report.violations.items())},
    }
    text = [f"ok: {len(m)} vertices, {m.n_walls} walls, rank {payload['rank']}"]
    if args.sample:
        t = table.MedianTable.from_model(m)
        sampled = table.verify_axioms(t, budget=args.sample, seed=args.seed)
        payload["sampled"] = {
            "budget": args.sample,
            "seed": args.seed,
            "exhaustive": sampled.exhaustive,
            "violations": sampled.n_violations,
        }
        text.append(f"table check ({'exhaustive' if sampled.exhaustive else 'sampled'}, "
                    f"seed {args.seed}): {sampled.n_violations} violations")
        report_ok = report.ok and sampled.ok
    else:
        report_ok = report.ok
    text.append("axioms: " + ", ".join(f"{k}={v}" for k, v in payload["axioms"].items()))
    if not report_ok:
        raise CheckFailed(payload, "\n".join(text))
    return payload, "\n".join(text)


def cmd_median(args):
    m, _ = load(args)
    v = algebra.median(m, *(resolve(m, r) for r in args.vertices))
    return {"median": m.label(v)}, m.label(v)


def cmd_interval(args):
    m, _ = load(args)
    a, b = resolve(m, args.a), resolve(m, args.b)
    members = labels(m, algebra.interval(m, a, b).members)
    return ({"a": m.label(a), "b": m.label(b), "members": members, "size": len(members)},
            " ".join(members))


def cmd_hull(args):
    m, _ = load(args)
    S = resolve_all(m, args.vertices)
    H, depth = algebra.hull(m, S)
    members = labels(m, H)
    return ({"hull": members, "size": len(members), "depth": depth},
            f"depth {depth}, {len(members)} vertices\n" + " ".join(members))


def cmd_rank(args):
    m, _ = load(args)
    if args.interval:
        a, b = (resolve(m, r) for r in args.interval)
        sub = m.submodel(algebra.interval_members(m, a, b))
        fam = max_crossing_family(sub)
        payload = {"rank": len(fam), "walls": [sub.walls[i] for i in fam],
                   "additive": is_additive(m, a, b)}
        text = f"rank [{m.label(a)},{m.label(b)}] = {len(fam)}; additive: " \
               f"{str(payload['additive']).lower()}"
    else:
        fam = max_crossing_family(m)
        payload = {"rank": len(fam), "walls": [m.walls[i] for i in fam]}
        text = f"rank {len(fam)}"
    if payload["walls"]:
        text += "\nwalls: " + " ".join(payload["walls"])
    return payload, text


def cmd_intersect(args):
    m, _ = load(args)
    a, b, c, d = (resolve(m, r) for r in args.vertices)
    got = algebra.interval_intersection(m, (a, b), (c, d))
    members = labels(m, got)
    corners = None
    if got:
        corners = [m.label(algebra.median(m, a, b, c)), m.label(algebra.median(m, a, b, d))]
    payload = {"members": members, "empty": not got, "corners": corners}
    text = "empty" if not got else f"[{corners[0]}, {corners[1]}]: " + " ".join(members)
    return payload, text


def cmd_square_in(args):
    m, _ = load(args)
    a, b = resolve(m, args.a), resolve(m, args.b)
    quad = squares.find_square_in_interval(m, a, b)
    if quad is None:
        return {"square": None}, "none"
    names = [m.label(v) for v in quad]
    return {"square": names}, " ".join(names)


def cmd_flag_span(args):
    m, _ = load(args)
    cube = squares.flag_span(m, resolve(m, args.corner), [resolve(m, t) for t in args.tips])
    vmap = {"".join(map(str, k)): m.label(v) for k, v in sorted(cube.vertex_map.items())}
    text = "\n".join(f"{k} {v}" for k, v in vmap.items())
    return {"dim": cube.dim, "cube": labels(m, cube.vertex_set), "vertex_map": vmap}, text


def cmd_cubulate(args):
    m, _ = load(args, raw=True)
    system = wallspace.HalfspaceSystem.from_model(m)
    rep = wallspace.compare_cubulation(system)
    extra = [m.bits(v) for v in sorted(rep.extra)]
    payload = {"principal": len(rep.principal), "orientations": len(rep.cubulation),
               "strict": rep.strict, "extra": extra}
    text = (f"{len(rep.principal)} principal, {len(rep.cubulation)} consistent orientations"
            + (f"\nextra: {' '.join(extra)}" if extra else ""))
    return payload, text


def cube_entry(model, skel, cube):
    return {"base": model.label(cube.base), "walls": [skel.walls[i] for i in sorted(cube.walls)]}


def cmd_complex(args):
    m, _ = load(args, raw=True)
    skel = skeleton_from_vertices(m.walls, m.vertices, m.names)
    counts = {str(k): v for k, v in skel.counts().items()}
    maximal = [cube_entry(m, skel, c) for c in skel.maximal_cubes()]
    text = ["cells: " + ", ".join(f"dim {k}: {v}" for k, v in counts.items()),
            f"maximal cubes: {len(maximal)}"]
    for c in maximal:
        text.append(f"  {c['base']} + {{{', '.join(c['walls'])}}}")
    return {"counts": counts, "maximal": maximal}, "\n".join(text)


def cmd_check_local(args):
    m, _ = load(args, raw=True)
    skel = skeleton_from_vertices(m.walls, m.vertices, m.names)
    v = resolve(m, args.vertex)
    rep = check_local_cubulation(skel, v, args.dim)
    wit = {}
    for key, w in rep.witnesses.items():
        if key == "two_cofacets":
            wit[key] = {"directions": [m.walls[i] for i in w[0]], "count": w[1]}
        else:
            wit[key] = [m.walls[i] for i in w]
    payload = {"vertex": m.label(v), "dim": args.dim,
               "contained_in_n_cube": rep.contained_in_n_cube,
               "two_cofacets": rep.two_cofacets, "flag": rep.flag, "witnesses": wit}
    text = "\n".join(f"{k}: {str(payload[k]).lower()}"
                     for k in ("contained_in_n_cube", "two_cofacets", "flag"))
    if not rep.ok:
        raise CheckFailed(payload, text)
    return payload, text


def cmd_dist(args):
    ws = load_ws(args)
    d = metric.distance(ws, resolve(ws.model, args.u), resolve(ws.model, args.v))
    return {"distance": fmt(d)}, fmt(d)


def random_weights(model, seed):
    rng = random.Random(seed)
    return {w: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for w in model.walls}


def cmd_verify_metric(args):
    ws = load_ws(args)
    if args.random_weights:
        ws = ws.with_weights(random_weights(ws.model, args.seed))
    rep = metric.verify_median_metric(ws)
    m = ws.model
    bad = [{"triple": [m.label(v) for v in t], "between": [m.label(v) for v in xs]}
           for t, xs in rep.violations[:10]]
    payload = {"ok": rep.ok, "triples": rep.triples, "violations": len(rep.violations),
               "witnesses": bad, "weights": {w: fmt(x) for w, x in ws.weight_map().items()}}
    text = f"{'ok' if rep.ok else 'FAIL'}: {rep.triples} triples, {len(rep.violations)} violations"
    if not rep.ok:
        raise CheckFailed(payload, text)
    return payload, text


def cmd_subdivide(args):
    ws = load_ws(args)
    out = metric.subdivide_wall(ws, args.wall, args.n)
    text = serialize_wallspace(out)
    return {"file": text, "vertices": len(out.model), "walls": list(out.model.walls),
            "parents": dict(sorted(out.parents.items()))}, text.rstrip("\n")


def cmd_thicken(args):
    ws = load_ws(args)
    m = ws.model
    th = metric.thicken(ws, resolve_all(m, args.set))
    payload = {"region": labels(m, th.region), "new_walls": list(th.new_walls),
               "frontier": labels(m, th.frontier),
               "gap": None if th.gap is None else fmt(th.gap)}
    text = (f"region: {len(th.region)} vertices\nnew walls: {' '.join(th.new_walls) or '-'}\n"
            f"frontier: {' '.join(payload['frontier']) or '-'}\n"
            f"gap: {payload['gap'] or '-'}")
    return payload, text


def _exhaust(args, kind):
    ws = load_ws(args)
    seed = resolve_all(ws.model, args.seed)
    build = metric.floyd if kind == "floyd" else metric.build_exhaustion
    return build(ws, seed, args.layers)


def layer_rows(exh):
    m = exh.model
    gaps = exh.gaps()
    rows = []
    for i in range(1, exh.depth + 1):
        walls = exh.walls_of_layer(i)
        gap = gaps.get(i - 1)
        rows.append({
            "index": i,
            "size": len(exh.layer(i)),
            "new_walls": walls,
            "weight": fmt(exh.wallspace.weight(walls[0])) if walls else None,
            "gap_to_previous": None if gap is None else fmt(gap),
        })
    return rows


def cmd_exhaust(args):
    exh = _exhaust(args, "unit")
    rep = metric.check_exhaustion(exh)
    gap = metric.cauchy_gap_check(exh)
    rows = layer_rows(exh)
    payload = {
        "layers": rows,
        "min_inter_layer_distance": None if rep.min_gap is None else fmt(rep.min_gap),
        "restriction": rep.restriction,
        "convex": rep.convex,
        "median_metric": rep.median_metric,
        "cauchy": {"ok": gap.ok, "checked": gap.checked},
    }
    text = [f"layer {r['index']}: {r['size']} vertices, {len(r['new_walls'])} new walls"
            + (f", gap {r['gap_to_previous']}" if r["gap_to_previous"] else "") for r in rows]
    text.append(f"min inter-layer distance: {payload['min_inter_layer_distance'] or '-'}")
    text.append(f"cauchy gap check: {'ok' if gap.ok else 'FAIL'} ({gap.checked} points)")
    if not (rep.ok and gap.ok):
        raise CheckFailed(payload, "\n".join(text))
    return payload, "\n".join(text)


def cmd_floyd(args):
    exh = _exhaust(args, "floyd")
    rep = metric.floyd_check(exh)
    rows = layer_rows(exh)
    payload = {
        "layers": rows,
        "crossing_counts": {str(k): v for k, v in rep.crossing_counts.items()},
        "max_distance_to_seed": fmt(rep.max_distance),
        "single_crossing": rep.single_crossing,
    }
    text = [f"layer {r['index']}: {r['size']} vertices, weight {r['weight'] or '-'}, "
            f"max crossings {rep.crossing_counts[r['index']]}" for r in rows]
    text.append(f"max distance to seed: {fmt(rep.max_distance)}")
    return payload, "\n".join(text)


def cmd_retract(args):
    exh = _exhaust(args, "floyd" if args.floyd else "unit")
    r = metric.retract_layer(exh, args.layer)
    m = exh.model
    mapping = {m.label(u): m.label(v) for u, v in sorted(r.items())}
    text = "\n".join(f"{u} -> {v}" for u, v in mapping.items())
    return {"layer": args.layer, "map": mapping}, text


def to_dot(model, weights=None):
    skel = build_complex(model) if model.n_walls else None
    lines = ["graph medcube {"]
    for v in model.vertices:
        lines.append(f'  "{model.label(v)}";')
    for u, v, i in (skel.edges if skel else ()):
        label = model.walls[i]
        if weights and model.walls[i] in weights:
            label += " " + fmt(weights[model.walls[i]])
        lines.append(f'  "{model.label(u)}" -- "{model.label(v)}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def plane_coordinates(ws, max_components=12):
    """Coordinates from a split of the walls into two families, or None.

    Crossing walls must lie in different families; each connected part of
    the crossing graph can be flipped, and the first split (in a fixed
    order) giving an injective map is used. A vertex's coordinate in a
    family is the total weight of that family's walls having it on their
    1 side.
    """
    m = ws.model
    g = crossing_graph(m)
    if m.n_walls == 0 or not nx.is_bipartite(g):
        return None
    parts = sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])
    if len(parts) > max_components:
        return None
    base_colour = {}
    for part in parts:
        colour = nx.bipartite.color(g.subgraph(part))
        flip = colour[part[0]]
        base_colour.update({i: c ^ flip for i, c in colour.items()})
    for flips in range(1 << (len(parts) - 1)):
        colour = dict(base_colour)
        for k, part in enumerate(parts[1:]):
            if flips >> k & 1:
                for i in part:
                    colour[i] ^= 1
        coords = {}
        for v in m.vertices:
            xy = [Fraction(0), Fraction(0)]
            for i in range(m.n_walls):
                if m.side(v, i):
                    xy[colour[i]] += ws.weights[i]
            coords[v] = tuple(xy)
        if len(set(coords.values())) == len(coords):
            return coords
    return None


def to_svg(ws, scale=40, margin=30):
    coords = plane_coordinates(ws)
    if coords is None:
        return None
    m = ws.model
    xs = [float(x) for x, _ in coords.values()]
    ys = [float(y) for _, y in coords.values()]
    width = int((max(xs) - min(xs)) * scale + 2 * margin)
    height = int((max(ys) - min(ys)) * scale + 2 * margin)

    def at(v):
        x, y = coords[v]
        return ((float(x) - min(xs)) * scale + margin,
                height - ((float(y) - min(ys)) * scale + margin))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    for u, v, i in build_complex(m).edges:
        (x1, y1), (x2, y2) = at(u), at(v)
        out.append(f'  <line x1="{x1:g}" y1="{y1:g}" x2="{x2:g}" y2="{y2:g}" '
                   f'stroke="black"><title>{m.walls[i]}</title></line>')
    for v in m.vertices:
        x, y = at(v)
        out.append(f'  <circle cx="{x:g}" cy="{y:g}" r="3"><title>{m.label(v)}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_export_dot(args):
    ws = load_ws(args)
    if args.svg:
        svg = to_svg(ws)
        if svg is None:
            raise CheckFailed({"svg": None}, "walls do not split into two families; "
                                             "use DOT output")
        return {"svg": svg}, svg.rstrip("\n")
    dot = to_dot(ws.model, ws.weight_map())
    return {"dot": dot}, dot.rstrip("\n")


def cmd_preset(args):
    if args.list or not args.name:
        names = preset_names()
        return {"presets": names}, "\n".join(names)
    m, weights = load_preset(args.name, check=False)
    text = serialize(m, weights)
    return {"name": args.name, "file": text}, text.rstrip("\n")


# -- parser -------------------------------------------------------------------


def u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit int")
    return v


def positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive int")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="medcube", description="Finite median algebras, "
                                "cube complexes and wall metrics.")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, fn, help):
        c = sub.add_parser(name, help=help)
        c.add_argument("file", nargs="?", help="wallspace file")
        c.add_argument("--preset", help="built-in or preset-dir model instead of FILE")
        c.add_argument("--json", action="store_true", help="JSON output")
        c.set_defaults(fn=fn)
        return c

    c = command("validate", cmd_validate, "check closure and the median laws")
    c.add_argument("--sample", type=int, default=0,
                   help="also check the explicit table, sampling this many tuples")
    c.add_argument("--seed", type=u64, default=0, help="RNG seed for sampled checks")
    c = command("median", cmd_median, "median of three vertices")
    c.add_argument("vertices", nargs=3, metavar="V")
    c = command("interval", cmd_interval, "interval between two vertices")
    c.add_argument("a")
    c.add_argument("b")
    c = command("hull", cmd_hull, "convex hull and its join depth")
    c.add_argument("vertices", nargs="+", metavar="V")
    c = command("rank", cmd_rank, "rank of the model or of an interval")
    c.add_argument("--interval", nargs=2, metavar=("A", "B"))
    c = command("intersect", cmd_intersect, "intersection of [a,b] and [c,d]")
    c.add_argument("vertices", nargs=4, metavar="V")
    c = command("square-in", cmd_square_in, "a median square inside [a,b] at a")
    c.add_argument("a")
    c.add_argument("b")
    c = command("flag-span", cmd_flag_span, "cube spanned by pairwise square edges")
    c.add_argument("--corner", required=True)
    c.add_argument("--tips", nargs="+", required=True)
    command("cubulate", cmd_cubulate, "compare vertices with consistent orientations")
    command("complex", cmd_complex, "cells of the cube complex")
    c = command("check-local", cmd_check_local, "local cubulation conditions at a vertex")
    c.add_argument("--vertex", required=True)
    c.add_argument("--dim", type=positive, required=True)
    c = command("dist", cmd_dist, "weighted distance")
    c.add_argument("u")
    c.add_argument("v")
    c = command("verify-metric", cmd_verify_metric, "median metric check over all triples")
    c.add_argument("--random-weights", action="store_true",
                   help="replace weights by seeded random positive rationals")
    c.add_argument("--seed", type=u64, default=0, help="RNG seed for --random-weights")
    c = command("subdivide", cmd_subdivide, "split a wall into parallel copies")
    c.add_argument("--wall", required=True)
    c.add_argument("--n", type=positive, required=True)
    c = command("thicken", cmd_thicken, "1-thickening of a convex set")
    c.add_argument("--set", nargs="+", required=True, metavar="V")
    for name, fn, help in (("exhaust", cmd_exhaust, "unit-weight layered exhaustion"),
                           ("floyd", cmd_floyd, "layered exhaustion with weights 2^-i"),
                           ("retract", cmd_retract, "gate retraction between layers")):
        c = command(name, fn, help)
        c.add_argument("--seed", nargs="+", default=["center"],
                       help="seed vertices (names, bits or 'center')")
        c.add_argument("--layers", type=positive, required=True)
        if name == "retract":
            c.add_argument("--layer", type=positive, required=True)
            c.add_argument("--floyd", action="store_true")
    c = command("export-dot", cmd_export_dot, "DOT (or SVG for planar grids) export")
    c.add_argument("--svg", action="store_true")
    c = sub.add_parser("preset", help="print a preset as a wallspace file")
    c.add_argument("name", nargs="?")
    c.add_argument("--list", action="store_true")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_preset)
    return p


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "preset", None) and args.file and args.command == "hull":
        # with --preset the first vertex lands in the FILE slot
        args.vertices.insert(0, args.file)
        args.file = None
    try:
        payload, text = args.fn(args)
    except CheckFailed as e:
        _emit(args, e.payload, e.text)
        return 1
    except (ParseError, UsageError, UnknownVertex, UnknownWall) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except AmbientExhausted as e:
        print(f"error: {e} (largest achievable: {e.largest})", file=sys.stderr)
        return 1
    except NotMedianClosed as e:
        print(f"error: not median-closed: {e}", file=sys.stderr)
        return 1
    except MedcubeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    _emit(args, payload, text)
    return 0


def run(argv):
    """Run the CLI in-process; returns ``(exit code, stdout, stderr)``."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
