"""Force-current electrical analogue of a second-order mechanical model.

Mapping: force -> current, velocity -> node voltage, mass -> grounded
capacitor ``C = m``, spring -> inductor ``L = 1/k``, damper -> conductance
``G = d``. Inertial coupling between the two frame coordinates becomes a
pair of electrostatically coupled capacitors.

Node ``"0"`` is the electrical ground and also the inertial frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .errors import (
    AssemblyError,
    DegenerateSourceError,
    ParameterError,
    UnsupportedTopologyError,
)
from .model import (
    HarmonicForceExcitation,
    HarmonicRoadExcitation,
    SecondOrderModel,
    excitation_phasors,
    force_excitation,
)

GROUND = "0"
PASSIVE = ("G", "L", "C")
SOURCES = ("I", "V")
_ZERO_TOL = 1e-12


class NodeId(NamedTuple):
    index: int
    label: str


@dataclass(frozen=True)
class Branch:
    """Two-terminal element from ``n_from`` to ``n_to``.

    Current sources push ``value`` from ``n_from`` into ``n_to``; voltage
    sources fix ``U[n_to] - U[n_from] = value``. Source values are RMS
    phasors.
    """

    kind: str
    name: str
    n_from: str
    n_to: str
    value: complex
    provenance: str = ""

    def __post_init__(self):
        if self.kind not in PASSIVE + SOURCES:
            raise ParameterError(f"unknown branch kind {self.kind!r}")
        if self.n_from == self.n_to:
            raise ParameterError(f"branch {self.name} connects {self.n_from} to itself")
        if self.kind == "L" and self.value == 0:
            raise ParameterError(f"inductor {self.name} has zero inductance")

    def admittance(self, omega: float) -> complex:
        if self.kind == "G":
            return complex(self.value)
        if self.kind == "L":
            return 1 / (1j * omega * self.value)
        if self.kind == "C":
            return 1j * omega * self.value
        raise AssemblyError(f"{self.kind} source {self.name} has no admittance")


@dataclass(frozen=True)
class CoupledCapacitorPair:
    """Two grounded capacitors sharing a mutual capacitance.

    The nodal stamp is ``j omega [[C_A, -p C_M], [-p C_M, C_B]]`` with
    ``p = polarity`` (+1 when both dots face the same way).
    """

    name: str
    node_a: str
    node_b: str
    C_A: float
    C_B: float
    C_M: float
    polarity: int = 1
    provenance: str = ""

    def __post_init__(self):
        if self.C_A <= 0 or self.C_B <= 0:
            raise ParameterError(f"{self.name}: self-capacitances must be positive")
        if self.C_A * self.C_B - self.C_M**2 <= 0:
            raise ParameterError(f"{self.name}: capacitance matrix is not positive definite")
        if self.polarity not in (1, -1):
            raise ParameterError("polarity must be +1 or -1")
        if self.node_a == self.node_b or GROUND in (self.node_a, self.node_b):
            raise ParameterError(f"{self.name}: needs two distinct non-ground nodes")

    @property
    def mutual(self) -> float:
        """Signed mutual capacitance as it appears in the stamp."""
        return self.polarity * self.C_M

    def stamp(self, omega: float) -> np.ndarray:
        jw = 1j * omega
        return jw * np.array([[self.C_A, -self.mutual], [-self.mutual, self.C_B]])


@dataclass(frozen=True)
class Netlist:
    """Node/branch graph of an analogue circuit.

    ``nodes[0]`` is always ground. ``coordinates`` lists, in mechanical
    coordinate order, the node that carries each coordinate's velocity.
    """

    nodes: tuple[str, ...]
    branches: tuple[Branch, ...]
    couplings: tuple[CoupledCapacitorPair, ...] = ()
    coordinates: tuple[str, ...] = ()
    title: str = ""

    def __post_init__(self):
        if not self.nodes or self.nodes[0] != GROUND:
            raise ParameterError("node list must start with ground '0'")
        if len(set(self.nodes)) != len(self.nodes):
            raise ParameterError("node labels must be unique")
        known = set(self.nodes)
        for b in self.branches:
            for n in (b.n_from, b.n_to):
                if n not in known:
                    raise ParameterError(f"branch {b.name} uses unknown node {n!r}")
        for c in self.couplings:
            for n in (c.node_a, c.node_b):
                if n not in known:
                    raise ParameterError(f"coupling {c.name} uses unknown node {n!r}")
        if len(set(self.coordinates)) != len(self.coordinates) or not set(
            self.coordinates
        ) <= known - {GROUND}:
            raise ParameterError("coordinate map must name distinct non-ground nodes")

    def node_id(self, label: str) -> NodeId:
        return NodeId(self.nodes.index(label), label)

    @property
    def has_voltage_sources(self) -> bool:
        return any(b.kind == "V" for b in self.branches)

    def count(self, kind: str) -> int:
        return sum(b.kind == kind for b in self.branches)


@dataclass(frozen=True, eq=False)
class AdmittanceSystem:
    omega: float
    Y: np.ndarray
    I: np.ndarray
    node_order: tuple[str, ...]
    floating_nodes: tuple[str, ...] = field(default=())

    @property
    def singular_warning(self) -> bool:
        return bool(self.floating_nodes)


def _road_node(label):
    return f"r{label}"


def _passive_branches(A, labels, kind, tyre_diag):
    """Split a symmetric coefficient matrix into two-terminal branches.

    Off-diagonal ``A[i, j]`` becomes a branch of strength ``-A[i, j]``
    between nodes i and j; what is left of each row sum after removing
    the tyre term goes to ground.
    """
    n = len(labels)
    out = []
    what = {"G": "damping", "L": "stiffness"}[kind]
    mat = {"G": "D", "L": "K"}[kind]

    def make(name, a, b, strength, prov):
        value = strength if kind == "G" else 1.0 / strength
        return Branch(kind, name, a, b, value, prov)

    for i in range(n):
        row = A[i] - np.eye(n)[i] * tyre_diag[i]
        scale = np.abs(A[i]).max(initial=0.0)
        s = row.sum()
        if abs(s) > _ZERO_TOL * scale:
            out.append(
                make(f"{kind}_{labels[i]}", labels[i], GROUND, s,
                     f"{what} of {labels[i]} to frame, row sum of {mat}")
            )
        for j in range(i + 1, n):
            if abs(A[i, j]) > _ZERO_TOL * scale:
                out.append(
                    make(f"{kind}_{labels[i]}{labels[j]}", labels[i], labels[j], -A[i, j],
                         f"{what} coupling -{mat}[{labels[i]},{labels[j]}]")
                )
    return out


def translate_force_current(
    model: SecondOrderModel,
    excitation: HarmonicRoadExcitation | HarmonicForceExcitation | None = None,
) -> Netlist:
    """Build the force-current analogue of ``model``.

    Road input is represented by voltage sources behind the tyre branches;
    apply :func:`to_norton` before assembling. An applied force becomes a
    current source. When ``excitation`` is None the model's own applied
    force is used, with source values independent of frequency.
    """
    labels = model.labels
    n = model.n
    M = model.M
    mscale = np.abs(M).max()
    pairs = [
        (i, j) for i in range(n) for j in range(i + 1, n)
        if abs(M[i, j]) > _ZERO_TOL * mscale
    ]
    if len(pairs) > 1:
        raise UnsupportedTopologyError(
            f"inertial coupling between {len(pairs)} coordinate pairs; only one "
            "coupled capacitor pair is supported"
        )
    coupled = set(pairs[0]) if pairs else set()

    branches: list[Branch] = []
    couplings: list[CoupledCapacitorPair] = []
    for i in range(n):
        if i not in coupled:
            branches.append(
                Branch("C", f"C_{labels[i]}", labels[i], GROUND, M[i, i], f"mass of {labels[i]}")
            )
    for i, j in pairs:
        couplings.append(
            CoupledCapacitorPair(
                f"K_{labels[i]}{labels[j]}", labels[i], labels[j], M[i, i], M[j, j], -M[i, j],
                provenance=f"inertial coupling M[{labels[i]},{labels[j]}]",
            )
        )

    tyre_k = np.zeros(n)
    tyre_d = np.zeros(n)
    road_nodes = []
    if isinstance(excitation, HarmonicRoadExcitation):
        if not model.axles:
            raise ParameterError("road excitation on a model without axles")
        for axle in model.axles:
            tyre_k[axle.coordinate] += axle.k_r
            tyre_d[axle.coordinate] += axle.d_r
    branches += _passive_branches(model.D, labels, "G", tyre_d)
    branches += _passive_branches(model.K, labels, "L", tyre_k)

    if isinstance(excitation, HarmonicRoadExcitation):
        ph = excitation_phasors(excitation, model)
        for axle, v in zip(model.axles, ph.velocity):
            lab = labels[axle.coordinate]
            r = _road_node(lab)
            road_nodes.append(r)
            branches.append(Branch("V", f"V_{lab}", GROUND, r, complex(v), f"road velocity under {lab}"))
            if axle.d_r > 0:
                branches.append(Branch("G", f"G_r{lab}", r, lab, axle.d_r, f"tyre damping under {lab}"))
            if axle.k_r > 0:
                branches.append(Branch("L", f"L_r{lab}", r, lab, 1.0 / axle.k_r, f"tyre stiffness under {lab}"))
    else:
        if excitation is None:
            forces = model.applied_force if model.applied_force is not None else np.zeros(n)
        else:
            forces = excitation.forces
        for i, q in enumerate(forces):
            if q != 0:
                branches.append(
                    Branch("I", f"I_{labels[i]}", GROUND, labels[i], complex(q),
                           f"applied force on {labels[i]}")
                )
    return Netlist(
        (GROUND,) + tuple(labels) + tuple(road_nodes),
        tuple(branches),
        tuple(couplings),
        tuple(labels),
    )


def pi_equivalent(c: CoupledCapacitorPair) -> tuple[Branch, Branch, Branch]:
    """Two shunt capacitors and one series capacitor with the same stamp."""
    cm = c.mutual
    return (
        Branch("C", f"{c.name}_a", c.node_a, GROUND, c.C_A - cm, f"{c.name} shunt at {c.node_a}"),
        Branch("C", f"{c.name}_b", c.node_b, GROUND, c.C_B - cm, f"{c.name} shunt at {c.node_b}"),
        Branch("C", f"{c.name}_ab", c.node_a, c.node_b, cm, f"{c.name} series"),
    )


def expand_couplings(net: Netlist) -> Netlist:
    """Replace every coupled pair by its Pi network."""
    extra = tuple(b for c in net.couplings for b in pi_equivalent(c))
    return replace(net, branches=net.branches + extra, couplings=())


def norton_transform(v_src: complex, series_admittance: complex) -> tuple[complex, complex]:
    """Voltage source behind ``series_admittance`` -> (current, shunt admittance)."""
    if series_admittance == 0:
        raise DegenerateSourceError("cannot transform a source behind zero admittance")
    return series_admittance * v_src, series_admittance


def to_norton(net: Netlist, omega: float) -> Netlist:
    """Replace each grounded voltage source and its series branches.

    Every branch from the source node to a node ``p`` is reconnected from
    ``p`` to ground and a current source ``y V`` is injected at ``p``.
    The source node disappears. Current values depend on ``omega``.
    """
    branches = list(net.branches)
    dead = set()
    for vb in [b for b in branches if b.kind == "V"]:
        if GROUND not in (vb.n_from, vb.n_to):
            raise AssemblyError(f"voltage source {vb.name} is not grounded")
        r = vb.n_to if vb.n_from == GROUND else vb.n_from
        v = vb.value if vb.n_to == r else -vb.value
        if any(r in (c.node_a, c.node_b) for c in net.couplings):
            raise AssemblyError(f"source node {r} carries a capacitor coupling")
        attached = [b for b in branches if b is not vb and r in (b.n_from, b.n_to)]
        if any(b.kind in SOURCES for b in attached):
            raise AssemblyError(f"source node {r} has another source attached")
        if not attached:
            raise DegenerateSourceError(f"voltage source {vb.name} drives nothing")
        groups: dict[str, list[Branch]] = {}
        for b in attached:
            p = b.n_to if b.n_from == r else b.n_from
            groups.setdefault(p, []).append(b)
        new = []
        for p, bs in groups.items():
            y = sum(b.admittance(omega) for b in bs)
            cur, _ = norton_transform(v, y)
            for b in bs:
                new.append(replace(b, n_from=p, n_to=GROUND))
            suffix = vb.name[2:] if vb.name.startswith("V_") else vb.name
            if p != GROUND:
                new.append(Branch("I", f"I_{suffix}" if len(groups) == 1 else f"I_{suffix}_{p}",
                                  GROUND, p, cur, f"Norton equivalent of {vb.name}"))
        drop = {id(vb)} | {id(b) for b in attached}
        branches = [b for b in branches if id(b) not in drop] + new
        dead.add(r)
    return replace(
        net, nodes=tuple(x for x in net.nodes if x not in dead), branches=tuple(branches)
    )


def assemble_admittance(net: Netlist, omega: float) -> AdmittanceSystem:
    """Stamp the nodal system ``Y U = I`` with ground eliminated."""
    if not omega > 0:
        raise AssemblyError(f"omega must be positive, got {omega!r}")
    if net.has_voltage_sources:
        raise AssemblyError("voltage sources present; apply to_norton first")
    order = net.nodes[1:]
    idx = {lab: k for k, lab in enumerate(order)}
    n = len(order)
    Y = np.zeros((n, n), dtype=complex)
    I = np.zeros(n, dtype=complex)
    touched = np.zeros(n, dtype=bool)
    for b in net.branches:
        i, j = idx.get(b.n_from), idx.get(b.n_to)
        if b.kind == "I":
            if j is not None:
                I[j] += b.value
            if i is not None:
                I[i] -= b.value
            continue
        y = b.admittance(omega)
        for k in (i, j):
            if k is not None:
                Y[k, k] += y
                touched[k] = True
        if i is not None and j is not None:
            Y[i, j] -= y
            Y[j, i] -= y
    for c in net.couplings:
        a, b = idx[c.node_a], idx[c.node_b]
        ix = np.ix_([a, b], [a, b])
        Y[ix] += c.stamp(omega)
        touched[[a, b]] = True
    floating = tuple(lab for lab, t in zip(order, touched) if not t)
    return AdmittanceSystem(omega, Y, I, order, floating)


def coordinate_system(net: Netlist, omega: float) -> AdmittanceSystem:
    """Assemble and reorder rows/columns into mechanical coordinate order."""
    sys = assemble_admittance(net, omega)
    if not net.coordinates or set(net.coordinates) != set(sys.node_order):
        return sys
    perm = [sys.node_order.index(c) for c in net.coordinates]
    return AdmittanceSystem(
        omega, sys.Y[np.ix_(perm, perm)], sys.I[perm], tuple(net.coordinates), sys.floating_nodes
    )


def analogue_system(model: SecondOrderModel, excitation=None, omega=None) -> AdmittanceSystem:
    """Translate, Norton-transform and assemble in one step."""
    if excitation is None:
        if omega is None:
            raise ParameterError("need an excitation or a frequency")
        excitation = force_excitation(model, omega)
    w = excitation.omega if omega is None else omega
    net = to_norton(translate_force_current(model, excitation), w)
    return coordinate_system(net, w)
