"""Harmonic steady-state solution of a nodal admittance system."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .analogy import GROUND, AdmittanceSystem, Netlist, analogue_system
from .errors import SingularSystemError
from .formatting import fmt
from .model import SecondOrderModel, wrap_phase

PIVOT_TOL = 1e-13
RESIDUAL_TOL = 1e-9
COND_WARN = 1e12


def phase_deg(u) -> np.ndarray:
    """Phase in degrees on (-180, 180]; an exact zero reports 0 (not 180 for -0.0)."""
    u = np.asarray(u, dtype=complex)
    return np.where(u == 0, 0.0, np.degrees(wrap_phase(np.angle(u))))


@dataclass(frozen=True, eq=False)
class PhasorSolution:
    """Node-voltage phasors (RMS velocities) at one angular frequency."""

    omega: float
    node_voltages: np.ndarray
    node_order: tuple[str, ...]
    condition: float = 1.0
    residual: float = 0.0

    def __getitem__(self, label: str) -> complex:
        return complex(self.node_voltages[self.node_order.index(label)])

    def as_dict(self) -> dict[str, complex]:
        return {k: complex(v) for k, v in zip(self.node_order, self.node_voltages)}

    @property
    def rms(self) -> np.ndarray:
        return np.abs(self.node_voltages)

    @property
    def phase_deg(self) -> np.ndarray:
        return phase_deg(self.node_voltages)


def lu_checked(A: np.ndarray, labels=None, omega=None):
    """Partial-pivot LU of ``A``; raise when a pivot is negligible."""
    n = A.shape[0]
    if not np.all(np.isfinite(A)):
        raise SingularSystemError("matrix has non-finite entries", omega=omega)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", la.LinAlgWarning)
        lu, piv = la.lu_factor(A, check_finite=False)
    scale = np.abs(A).sum(axis=1).max(initial=0.0)
    pivots = np.abs(np.diag(lu))
    bad = np.flatnonzero(pivots <= PIVOT_TOL * scale) if n else []
    if scale == 0 or len(bad):
        k = int(bad[0]) if len(bad) else 0
        node = labels[k] if labels is not None and n else None
        where = f" at omega={omega!r} rad/s" if omega is not None else ""
        raise SingularSystemError(
            f"numerically singular system{where}: pivot for {node or k} vanishes",
            node=node, omega=omega,
        )
    return lu, piv


def condition_estimate(A: np.ndarray, lu: np.ndarray) -> float:
    """1-norm condition estimate from existing LU factors (LAPACK gecon)."""
    if A.size == 0:
        return 1.0
    (gecon,) = la.get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, np.linalg.norm(A, 1), norm="1")
    return math.inf if rcond == 0 else 1.0 / float(rcond)


def solve(sys: AdmittanceSystem) -> PhasorSolution:
    """Solve ``Y U = I`` by LU factorization with partial pivoting."""
    Y, I = sys.Y, sys.I
    lu, piv = lu_checked(Y, sys.node_order, sys.omega)
    U = la.lu_solve((lu, piv), I, check_finite=False)
    cond = condition_estimate(Y, lu)
    if cond > COND_WARN:
        warnings.warn(f"admittance matrix condition estimate {cond:.3g} at omega={sys.omega}")
    inorm = np.linalg.norm(I)
    residual = float(np.linalg.norm(Y @ U - I) / inorm) if inorm > 0 else 0.0
    return PhasorSolution(sys.omega, U, tuple(sys.node_order), cond, residual)


def _node_voltages(net: Netlist, u) -> dict[str, complex]:
    volts = dict(u.as_dict() if isinstance(u, PhasorSolution) else u)
    volts[GROUND] = 0j
    # raw netlists: source nodes take the source voltage
    pending = [b for b in net.branches if b.kind == "V"]
    while pending:
        rest = []
        for b in pending:
            if b.n_from in volts and b.n_to not in volts:
                volts[b.n_to] = volts[b.n_from] + b.value
            elif b.n_to in volts and b.n_from not in volts:
                volts[b.n_from] = volts[b.n_to] - b.value
            elif b.n_to not in volts:
                rest.append(b)
        if len(rest) == len(pending):
            raise ValueError("voltage source nodes cannot be resolved")
        pending = rest
    missing = set(net.nodes) - set(volts)
    if missing:
        raise ValueError(f"no voltage given for nodes {sorted(missing)}")
    return volts


def branch_currents(net: Netlist, u, omega: float) -> dict[str, complex]:
    """Current in every branch, directed from ``n_from`` to ``n_to``.

    Coupled capacitor pairs report one current per terminal, named
    ``<pair>:<node>``, flowing from that node to ground.
    """
    volts = _node_voltages(net, u)
    out: dict[str, complex] = {}
    for b in net.branches:
        if b.kind == "I":
            out[b.name] = complex(b.value)
        elif b.kind != "V":
            out[b.name] = b.admittance(omega) * (volts[b.n_from] - volts[b.n_to])
    for c in net.couplings:
        ia, ib = c.stamp(omega) @ np.array([volts[c.node_a], volts[c.node_b]])
        out[f"{c.name}:{c.node_a}"] = complex(ia)
        out[f"{c.name}:{c.node_b}"] = complex(ib)
    for b in net.branches:
        if b.kind == "V":
            leaving = sum(
                out[x.name] * ((x.n_from == b.n_to) - (x.n_to == b.n_to))
                for x in net.branches if x.kind != "V"
            )
            out[b.name] = complex(leaving)
    return out


def kcl_residuals(net: Netlist, currents: dict[str, complex]) -> dict[str, complex]:
    """Net current into every non-ground node; zero when KCL holds."""
    res = {n: 0j for n in net.nodes[1:]}
    for b in net.branches:
        c = currents[b.name]
        if b.n_to in res:
            res[b.n_to] += c
        if b.n_from in res:
            res[b.n_from] -= c
    for cp in net.couplings:
        for node in (cp.node_a, cp.node_b):
            res[node] -= currents[f"{cp.name}:{node}"]
    return res


def kcl_check(net: Netlist, currents: dict[str, complex]) -> float:
    """Largest KCL residual relative to the largest branch current."""
    scale = max((abs(c) for c in currents.values()), default=0.0)
    worst = max((abs(r) for r in kcl_residuals(net, currents).values()), default=0.0)
    return worst / scale if scale > 0 else worst


@dataclass(frozen=True)
class SinusoidRecord:
    """``sqrt(2) * rms * sin(omega t + phase)`` with the phase in degrees."""

    rms: float
    phase_deg: float
    omega: float

    def sample(self, t):
        return math.sqrt(2) * self.rms * np.sin(self.omega * np.asarray(t) + math.radians(self.phase_deg))

    def __str__(self):
        return f"sqrt(2)*{fmt(self.rms)}*sin({fmt(self.omega)}*t{self.phase_deg:+.2f})"


def to_sinusoid(phasor: complex, omega: float) -> SinusoidRecord:
    phasor = complex(phasor)
    return SinusoidRecord(abs(phasor), float(phase_deg(phasor)), omega)


@dataclass(frozen=True, eq=False)
class SweepRow:
    omega: float
    node_order: tuple[str, ...]
    voltages: np.ndarray
    error: str | None = None

    @property
    def rms(self):
        return np.abs(self.voltages)

    @property
    def phase_deg(self):
        return phase_deg(self.voltages)


def sweep(model: SecondOrderModel, excitation, omegas) -> list[SweepRow]:
    """Solve the analogue circuit at each angular frequency in ``omegas``.

    ``excitation`` is a template re-evaluated at every frequency (for a
    road this means the speed changes). None drives the model with its
    own applied force. A singular row is recorded with NaN voltages and
    the error text; the sweep carries on.
    """
    omegas = [float(w) for w in omegas]
    if any(not w > 0 for w in omegas):
        raise ValueError("sweep frequencies must be strictly positive")
    rows = []
    for w in omegas:
        exc = None if excitation is None else excitation.at_omega(w)
        sys = analogue_system(model, exc, w)
        try:
            sol = solve(sys)
            rows.append(SweepRow(w, sol.node_order, sol.node_voltages))
        except SingularSystemError as err:
            rows.append(SweepRow(w, sys.node_order, np.full(len(sys.node_order), np.nan + 0j), str(err)))
    return rows


SWEEP_HEADER = "omega_rad_s,node,rms,phase_deg,re,im"


def sweep_csv(rows: list[SweepRow]) -> str:
    lines = [SWEEP_HEADER]
    for row in rows:
        for lab, u, r, ph in zip(row.node_order, row.voltages, row.rms, row.phase_deg):
            lines.append(",".join([fmt(row.omega), lab, fmt(r), fmt(ph), fmt(u.real), fmt(u.imag)]))
    return "\n".join(lines) + "\n"
