"""Plain-text wallspace files.

Grammar, one directive per line; ``#`` starts a comment::

    walls x>=1 y>=1
    vertex a 0 0
    vertex b 1 0
    weight x>=1 1/2
    layer 1 a b

``walls`` must come first and appear once. Weights are positive rationals
written ``p/q`` or as integers. Unknown directives are errors.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .metric import WeightedWallspace, fmt
from .model import MedianModel

_TOKEN = re.compile(r"\S+")
_RATIONAL = re.compile(r"^\d+(/\d+)?$")


@dataclass
class WallspaceFile:
    walls: tuple = ()
    vertices: list = field(default_factory=list)   # (name, int) in file order
    weights: dict = field(default_factory=dict)     # wall -> Fraction
    layers: dict = field(default_factory=dict)      # int -> list of names

    def model(self, check=True) -> MedianModel:
        verts = {}
        for name, v in self.vertices:
            verts[v] = name
        return MedianModel(self.walls, verts.keys(), verts, allow_parallel=True, check=check)

    def wallspace(self, check=True) -> WeightedWallspace:
        return WeightedWallspace(self.model(check), self.weights)


def _tokens(line):
    # (text, 1-based column)
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def parse_text(text) -> WallspaceFile:
    out = WallspaceFile()
    names, seen_bits = set(), {}
    have_walls = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        word, col = toks[0]
        args = toks[1:]
        if word == "walls":
            if have_walls:
                raise ParseError("walls declared twice", lineno, col)
            walls = [t for t, _ in args]
            for k, (t, c) in enumerate(args):
                if t in walls[:k]:
                    raise ParseError(f"duplicate wall {t!r}", lineno, c)
            out.walls = tuple(walls)
            have_walls = True
        elif word == "vertex":
            if not have_walls:
                raise ParseError("vertex before walls", lineno, col)
            if not args:
                raise ParseError("vertex needs a name", lineno, col + len(word))
            (name, ncol), bits = args[0], args[1:]
            if name in names:
                raise ParseError(f"duplicate vertex name {name!r}", lineno, ncol)
            if len(bits) != len(out.walls):
                c = bits[len(out.walls)][1] if len(bits) > len(out.walls) else len(raw.rstrip()) + 1
                raise ParseError(
                    f"vertex {name!r} has {len(bits)} bits, expected {len(out.walls)}",
                    lineno, c,
                )
            v = 0
            for t, c in bits:
                if t not in ("0", "1"):
                    raise ParseError(f"bit must be 0 or 1, got {t!r}", lineno, c)
                v = (v << 1) | int(t)
            if v in seen_bits:
                raise ParseError(f"vertex {name!r} repeats the bits of {seen_bits[v]!r}",
                                 lineno, ncol)
            seen_bits[v] = name
            names.add(name)
            out.vertices.append((name, v))
        elif word == "weight":
            if len(args) != 2:
                raise ParseError("expected: weight <wall> <p/q>", lineno, col)
            (wall, wcol), (val, vcol) = args
            if wall not in out.walls:
                raise ParseError(f"unknown wall {wall!r}", lineno, wcol)
            if not _RATIONAL.match(val):
                raise ParseError(f"weight must be p/q, got {val!r}", lineno, vcol)
            p, _, q = val.partition("/")
            if int(q or 1) == 0 or int(p) == 0:
                raise ParseError(f"weight must be a positive rational, got {val!r}", lineno, vcol)
            out.weights[wall] = Fraction(int(p), int(q or 1))
        elif word == "layer":
            if not args:
                raise ParseError("expected: layer <i> <names...>", lineno, col)
            idx, icol = args[0]
            if not idx.isdigit() or int(idx) < 1:
                raise ParseError(f"layer index must be a positive int, got {idx!r}", lineno, icol)
            for t, c in args[1:]:
                if t not in names:
                    raise ParseError(f"unknown vertex {t!r}", lineno, c)
            out.layers.setdefault(int(idx), []).extend(t for t, _ in args[1:])
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, col)
    if not have_walls:
        raise ParseError("missing walls line", 1, 1)
    return out


def parse(path) -> WallspaceFile:
    with open(path) as fh:
        return parse_text(fh.read())


def vertex_name(model, v):
    return model.names.get(v) or "v" + model.bits(v)


def serialize(model: MedianModel, weights=None, layers=None) -> str:
    """Canonical text: vertices sorted by bits, unnamed vertices named
    ``v<bits>``, weights in wall order as ``p/q``."""
    lines = ["walls " + " ".join(model.walls)]
    for v in model.vertices:
        bits = " ".join(model.bits(v))
        lines.append(f"vertex {vertex_name(model, v)} {bits}".rstrip())
    for w in model.walls:
        if weights and w in weights:
            lines.append(f"weight {w} {fmt(weights[w])}")
    for i in sorted(layers or {}):
        names = sorted(vertex_name(model, v) for v in layers[i])
        lines.append(f"layer {i} " + " ".join(names))
    return "\n".join(lines) + "\n"


def serialize_wallspace(ws: WeightedWallspace, layers=None) -> str:
    return serialize(ws.model, ws.weight_map(), layers)
