"""Line-oriented text formats for ribbon (di)graphs and the small value types."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .ribbon import HEAD, TAIL, RibbonDigraph, RibbonGraph

FIXTURES = ("fig1", "torus", "c3", "k4p")


class ParseError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno else msg)


@dataclass(frozen=True)
class Orientation:
    """Reference orientation: the side of each edge that is its tail."""

    tail_side: tuple[tuple[str, int], ...]

    def side(self, e: str) -> int:
        return dict(self.tail_side)[e]


def _records(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line.split()


def parse(text: str) -> "RibbonDigraph | tuple[RibbonGraph, dict[str, int]]":
    """Parse either format.

    A ribbon_graph comes back together with its `orient` data as a dict
    edge -> tail side (edges without an orient line are absent).
    """
    recs = list(_records(text))
    if not recs:
        raise ParseError("empty input")
    (n0, head), rest = recs[0], recs[1:]
    if head == ["ribbon_digraph"]:
        return _parse_digraph(rest)
    if head == ["ribbon_graph"]:
        return _parse_graph(rest)
    raise ParseError(f"expected 'ribbon_digraph' or 'ribbon_graph', got {' '.join(head)!r}", n0)


def _vertex_line(n, toks, seen):
    if len(toks) < 3 or toks[2] != "rotation":
        raise ParseError("expected 'vertex <vid> rotation <entries...>'", n)
    if toks[1] in seen:
        raise ParseError(f"vertex {toks[1]} declared twice", n)
    seen.add(toks[1])
    return toks[1], toks[3:]


def _parse_digraph(recs) -> RibbonDigraph:
    verts, arcs, rot, seen = [], [], {}, set()
    for n, toks in recs:
        kind = toks[0]
        if kind == "vertex":
            v, ents = _vertex_line(n, toks, seen)
            verts.append(v)
            out = []
            for ent in ents:
                a, sep, tag = ent.rpartition(":")
                if not sep or tag not in (TAIL, HEAD):
                    raise ParseError(f"bad arc-end {ent!r}; expected <arcid>:tail or <arcid>:head", n)
                out.append((a, tag))
            rot[v] = out
        elif kind == "arc":
            if len(toks) != 4:
                raise ParseError("expected 'arc <arcid> <tail> <head>'", n)
            arcs.append(tuple(toks[1:]))
        else:
            raise ParseError(f"unknown record {kind!r}", n)
    return RibbonDigraph.build(verts, arcs, rot)


def _parse_graph(recs):
    verts, edges, rot, seen = [], [], {}, set()
    orient_lines = []
    for n, toks in recs:
        kind = toks[0]
        if kind == "vertex":
            v, ents = _vertex_line(n, toks, seen)
            verts.append(v)
            out = []
            for ent in ents:
                e, sep, side = ent.rpartition(":")
                if not sep or side not in ("0", "1"):
                    raise ParseError(f"bad half-edge {ent!r}; expected <eid>:0 or <eid>:1", n)
                out.append((e, int(side)))
            rot[v] = out
        elif kind == "edge":
            if len(toks) != 4:
                raise ParseError("expected 'edge <eid> <vid> <vid>'", n)
            edges.append(tuple(toks[1:]))
        elif kind == "orient":
            if len(toks) != 4:
                raise ParseError("expected 'orient <eid> <tail> <head>'", n)
            orient_lines.append((n, toks[1:]))
        else:
            raise ParseError(f"unknown record {kind!r}", n)
    emap = {e: (a, b) for e, a, b in edges}
    orient = {}
    for n, (e, t, h) in orient_lines:
        if e not in emap:
            raise ParseError(f"orient for unknown edge {e}", n)
        a, b = emap[e]
        t_v, _, t_s = t.partition(":")
        h_v, _, h_s = h.partition(":")
        if a == b:
            # loop: sides must be spelled out as <vid>:<side>
            if t_v != a or h_v != a or {t_s, h_s} != {"0", "1"}:
                raise ParseError(f"orient for loop {e} must read 'orient {e} {a}:<side> {a}:<side>'", n)
            orient[e] = int(t_s)
        elif (t_v, h_v) == (a, b):
            orient[e] = 0
        elif (t_v, h_v) == (b, a):
            orient[e] = 1
        else:
            raise ParseError(f"orient {e} {t} {h} does not match the edge's endpoints", n)
        if (t_s and int(t_s) != orient[e]) or (h_s and int(h_s) != 1 - orient[e]):
            raise ParseError(f"orient {e}: side tags contradict the endpoints", n)
    return RibbonGraph.build(verts, edges, rot), orient


def load(path: "str | Path"):
    p = Path(path)
    try:
        text = p.read_text()
    except FileNotFoundError:
        text = fixture_text(p.name)
    return parse(text)


def fixture_text(name: str) -> str:
    stem = name[:-7] if name.endswith(".ribbon") else name
    if stem not in FIXTURES:
        raise FileNotFoundError(f"no such file or bundled fixture: {name}")
    return resources.files("ribbonpile.fixtures").joinpath(f"{stem}.ribbon").read_text()


def fixture(name: str):
    return parse(fixture_text(name))


def dump_digraph(d: RibbonDigraph) -> str:
    lines = ["ribbon_digraph"]
    for v, ents in d.rotation:
        lines.append(" ".join(["vertex", v, "rotation"] + [f"{a}:{t}" for a, t in ents]))
    for a, t, h in d.arcs:
        lines.append(f"arc {a} {t} {h}")
    return "\n".join(lines) + "\n"


def dump_graph(g: RibbonGraph, orient: Mapping[str, int] | None = None) -> str:
    lines = ["ribbon_graph"]
    for v, ents in g.rotation:
        lines.append(" ".join(["vertex", v, "rotation"] + [f"{e}:{s}" for e, s in ents]))
    for e, a, b in g.edges:
        lines.append(f"edge {e} {a} {b}")
    for e, s in (orient or {}).items():
        a, b = g.edge_map[e]
        if a == b:
            lines.append(f"orient {e} {a}:{s} {a}:{1 - s}")
        else:
            t, h = (a, b) if s == 0 else (b, a)
            lines.append(f"orient {e} {t} {h}")
    return "\n".join(lines) + "\n"


def fmt_chips(vertices: Sequence[str], x: Mapping[str, int]) -> str:
    return " ".join(["chips"] + [f"{v}={x.get(v, 0)}" for v in vertices])


def fmt_rotors(rotors: Mapping[str, str]) -> str:
    return " ".join(["rotors"] + [f"{v}={a}" for v, a in rotors.items()])


def parse_assignments(text: str, what: str = "value") -> dict[str, str]:
    """'a=1,b=-2' or 'a=1 b=-2' -> {'a': '1', 'b': '-2'}."""
    out = {}
    for tok in text.replace(",", " ").split():
        k, sep, v = tok.partition("=")
        if not sep or not k or not v:
            raise ParseError(f"bad {what} assignment {tok!r}; expected key=value")
        if k in out:
            raise ParseError(f"{what} for {k} given twice")
        out[k] = v
    return out


def parse_chips(text: str) -> dict[str, int]:
    try:
        return {k: int(v) for k, v in parse_assignments(text, "chip").items()}
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"chip counts must be integers: {text!r}") from None


def parse_ids(text: str) -> list[str]:
    return text.replace(",", " ").split()
