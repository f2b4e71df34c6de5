"""Plain-text netlist format, one element per line.

::

    KIND NAME NODE_FROM NODE_TO VALUE [# provenance]
    KCAP NAME NODE_A NODE_B C_A C_B C_M [# provenance]

``KIND`` is one of G, L, C (real values) or I, V (complex ``re,im`` RMS
phasors). Comment lines start with ``#``; the writer emits ``# nodes:``
and ``# coordinates:`` lines that the reader uses to restore node order
and the coordinate map.
"""

from __future__ import annotations

from .analogy import GROUND, PASSIVE, SOURCES, Branch, CoupledCapacitorPair, Netlist
from .errors import NetlistSyntaxError

HEADER = (
    "# force-current analogue: node voltage = velocity [m/s], branch current = force [N]",
)


def _num(x: float) -> str:
    return repr(float(x))


def _cnum(z: complex) -> str:
    z = complex(z)
    return f"{_num(z.real)},{_num(z.imag)}"


def write_netlist(net: Netlist, norton_omega: float | None = None) -> str:
    lines = list(HEADER)
    if norton_omega is None:
        lines.append(
            "# frequency independent: sources are RMS phasors, omega is given at solve time"
        )
    else:
        lines.append(f"# current sources are Norton equivalents evaluated at omega = {_num(norton_omega)} rad/s")
    if net.title:
        lines.append(f"# title: {net.title}")
    lines.append("# nodes: " + " ".join(net.nodes))
    if net.coordinates:
        lines.append("# coordinates: " + " ".join(net.coordinates))
    for b in net.branches:
        value = _cnum(b.value) if b.kind in SOURCES else _num(b.value)
        line = f"{b.kind} {b.name} {b.n_from} {b.n_to} {value}"
        lines.append(line + (f" # {b.provenance}" if b.provenance else ""))
    for c in net.couplings:
        line = f"KCAP {c.name} {c.node_a} {c.node_b} {_num(c.C_A)} {_num(c.C_B)} {_num(c.mutual)}"
        lines.append(line + (f" # {c.provenance}" if c.provenance else ""))
    return "\n".join(lines) + "\n"


def _parse_complex(tok: str, lineno: int) -> complex:
    try:
        re_, im = tok.split(",")
        return complex(float(re_), float(im))
    except ValueError:
        raise NetlistSyntaxError(f"line {lineno}: bad complex value {tok!r}") from None


def _parse_float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise NetlistSyntaxError(f"line {lineno}: bad number {tok!r}") from None


def read_netlist(text: str) -> Netlist:
    nodes: list[str] = []
    coords: tuple[str, ...] = ()
    title = ""
    branches = []
    couplings = []
    seen = [GROUND]

    def note(*labels):
        for lab in labels:
            if lab not in seen:
                seen.append(lab)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("nodes:"):
                nodes = body[len("nodes:"):].split()
            elif body.startswith("coordinates:"):
                coords = tuple(body[len("coordinates:"):].split())
            elif body.startswith("title:"):
                title = body[len("title:"):].strip()
            continue
        body, _, prov = line.partition("#")
        tok = body.split()
        prov = prov.strip()
        kind = tok[0].upper()
        if kind == "KCAP":
            if len(tok) != 7:
                raise NetlistSyntaxError(f"line {lineno}: KCAP needs 6 fields, got {len(tok) - 1}")
            _, name, a, b, ca, cb, cm = tok
            couplings.append(
                CoupledCapacitorPair(
                    name, a, b, _parse_float(ca, lineno), _parse_float(cb, lineno),
                    _parse_float(cm, lineno), provenance=prov,
                )
            )
            note(a, b)
        elif kind in PASSIVE + SOURCES:
            if len(tok) != 5:
                raise NetlistSyntaxError(f"line {lineno}: {kind} needs 4 fields, got {len(tok) - 1}")
            _, name, n1, n2, v = tok
            value = _parse_complex(v, lineno) if kind in SOURCES else _parse_float(v, lineno)
            branches.append(Branch(kind, name, n1, n2, value, prov))
            note(n1, n2)
        else:
            raise NetlistSyntaxError(f"line {lineno}: unknown element kind {tok[0]!r}")
    if nodes:
        missing = [n for n in seen if n not in nodes]
        if missing:
            raise NetlistSyntaxError(f"nodes {missing} not declared in the nodes line")
    else:
        nodes = seen
    return Netlist(tuple(nodes), tuple(branches), tuple(couplings), coords, title)
