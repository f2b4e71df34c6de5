"""Lumped-parameter vertical vehicle models and harmonic road input.

Every model is reduced to the second-order form ``M x'' + D x' + K x = Q(t)``
with symmetric matrices. Coordinates are ordered ``(a, b, d, t[, m])``:
the two frame attachment points, the front and rear unsprung masses and,
for three axles, the middle unsprung mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import NamedTuple

import numpy as np

from .errors import GeometryError, ParameterError

GRAVITY = 9.81
_SYM_TOL = 1e-12
_GEOM_TOL = 1e-9


def _check(name, value, *, strict=True):
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    if strict and value <= 0:
        raise ParameterError(f"{name} must be > 0, got {value!r}")
    if not strict and value < 0:
        raise ParameterError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True, kw_only=True)
class TwoDofParams:
    """Two masses in a chain, the first tied to the inertial frame.

    ``f_amplitude`` is the peak value of the harmonic force acting on the
    second mass and ``f_phase`` its phase in radians.
    """

    m1: float
    m2: float
    k1: float
    k2: float
    d1: float = 0.0
    d2: float = 0.0
    f_amplitude: float = 1.0
    f_phase: float = 0.0

    def __post_init__(self):
        _check("m1", self.m1)
        _check("m2", self.m2)
        # zero stiffness just removes the inductor branch
        for name in ("k1", "k2", "d1", "d2"):
            _check(name, getattr(self, name), strict=False)
        if not math.isfinite(self.f_amplitude) or not math.isfinite(self.f_phase):
            raise ParameterError("force amplitude and phase must be finite")


@dataclass(frozen=True, kw_only=True)
class HalfCarParams:
    m: float
    I_G: float
    m_ssd: float
    m_sst: float
    k_sd: float
    k_st: float
    d_sd: float
    d_st: float
    k_rd: float
    k_rt: float
    d_rd: float
    d_rt: float
    l_d: float
    l_t: float
    g: float = GRAVITY

    _positive = ("m", "I_G", "m_ssd", "m_sst", "k_sd", "k_st", "k_rd", "k_rt", "l_d", "l_t")
    _nonnegative = ("d_sd", "d_st", "d_rd", "d_rt")

    def __post_init__(self):
        for name in self._positive:
            _check(name, getattr(self, name))
        for name in self._nonnegative:
            _check(name, getattr(self, name), strict=False)

    @property
    def l(self) -> float:
        """Wheelbase, front to rear axle."""
        return self.l_d + self.l_t


@dataclass(frozen=True, kw_only=True)
class ThreeAxleParams(HalfCarParams):
    m_ssm: float
    k_sm: float
    d_sm: float
    k_rm: float
    d_rm: float
    l_a: float
    l_b: float

    _positive = HalfCarParams._positive + ("m_ssm", "k_sm", "k_rm", "l_a", "l_b")
    _nonnegative = HalfCarParams._nonnegative + ("d_sm", "d_rm")

    def __post_init__(self):
        super().__post_init__()
        if abs(self.l_a + self.l_b - self.l) > _GEOM_TOL * self.l:
            raise GeometryError(
                f"l_a + l_b = {self.l_a + self.l_b!r} differs from l_d + l_t = {self.l!r}"
            )


def param_names(cls) -> list[str]:
    """Field names of a parameter dataclass, in declaration order."""
    return [f.name for f in fields(cls)]


@dataclass(frozen=True)
class Axle:
    """A wheel: the coordinate it drives, its tyre and its position."""

    coordinate: int
    k_r: float
    d_r: float
    offset: float
    name: str = ""


@dataclass(frozen=True, eq=False)
class SecondOrderModel:
    """Symmetric ``M, D, K`` triple plus coordinate names and road wiring.

    ``applied_force`` holds generalized force phasors (RMS) for models
    driven by an external force instead of the road. ``gravity`` is the
    constant part of the generalized force; it never enters a harmonic
    solve.
    """

    M: np.ndarray
    D: np.ndarray
    K: np.ndarray
    labels: tuple[str, ...]
    axles: tuple[Axle, ...] = ()
    applied_force: np.ndarray | None = None
    gravity: np.ndarray | None = None
    params: object = field(default=None, repr=False)

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ParameterError(f"duplicate coordinate labels {self.labels}")
        for name in ("M", "D", "K"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (n, n):
                raise ParameterError(f"{name} has shape {a.shape}, expected {(n, n)}")
            scale = np.abs(a).max(initial=0.0)
            if np.abs(a - a.T).max(initial=0.0) > _SYM_TOL * scale:
                raise ParameterError(f"{name} is not symmetric")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        try:
            np.linalg.cholesky(self.M)
        except np.linalg.LinAlgError:
            raise ParameterError("mass matrix is not positive definite") from None
        if self.applied_force is not None:
            f = np.array(self.applied_force, dtype=complex)
            f.setflags(write=False)
            object.__setattr__(self, "applied_force", f)
        if self.gravity is None:
            object.__setattr__(self, "gravity", np.zeros(n))
        for axle in self.axles:
            if not 0 <= axle.coordinate < n:
                raise ParameterError(f"axle bound to unknown coordinate {axle.coordinate}")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def dynamic_stiffness(self, omega: float) -> np.ndarray:
        """``-omega^2 M + j omega D + K``."""
        return -omega**2 * self.M + 1j * omega * self.D + self.K


def build_two_dof(p: TwoDofParams) -> SecondOrderModel:
    M = np.diag([p.m1, p.m2])
    D = np.array([[p.d1 + p.d2, -p.d2], [-p.d2, p.d2]])
    K = np.array([[p.k1 + p.k2, -p.k2], [-p.k2, p.k2]])
    force = p.f_amplitude / math.sqrt(2) * np.exp(1j * p.f_phase)
    # the external force enters the second equation with a minus sign
    return SecondOrderModel(
        M, D, K, ("1", "2"), applied_force=np.array([0.0, -force]), params=p
    )


def _sprung_mass_block(p: HalfCarParams) -> np.ndarray:
    l2 = p.l**2
    m11 = (p.m * p.l_t**2 + p.I_G) / l2
    m22 = (p.m * p.l_d**2 + p.I_G) / l2
    m12 = (p.l_d * p.l_t * p.m - p.I_G) / l2
    return np.array([[m11, m12], [m12, m22]])


def _half_car_matrices(p: HalfCarParams, n: int):
    M = np.zeros((n, n))
    M[:2, :2] = _sprung_mass_block(p)
    M[2, 2] = p.m_ssd
    M[3, 3] = p.m_sst

    def chain(sd, st, rd, rt):
        A = np.zeros((n, n))
        A[0, 0] = sd
        A[1, 1] = st
        A[0, 2] = A[2, 0] = -sd
        A[1, 3] = A[3, 1] = -st
        A[2, 2] = rd + sd
        A[3, 3] = rt + st
        return A

    D = chain(p.d_sd, p.d_st, p.d_rd, p.d_rt)
    K = chain(p.k_sd, p.k_st, p.k_rd, p.k_rt)
    gravity = np.zeros(n)
    gravity[:4] = [
        -p.g * p.l_t * p.m / p.l,
        -p.g * p.l_d * p.m / p.l,
        -p.g * p.m_ssd,
        -p.g * p.m_sst,
    ]
    return M, D, K, gravity


def build_half_car(p: HalfCarParams) -> SecondOrderModel:
    M, D, K, gravity = _half_car_matrices(p, 4)
    axles = (
        Axle(2, p.k_rd, p.d_rd, 0.0, "d"),
        Axle(3, p.k_rt, p.d_rt, p.l, "t"),
    )
    return SecondOrderModel(M, D, K, ("a", "b", "d", "t"), axles, gravity=gravity, params=p)


def build_three_axle(p: ThreeAxleParams) -> SecondOrderModel:
    M, D, K, gravity = _half_car_matrices(p, 5)
    M[4, 4] = p.m_ssm
    gravity[4] = -p.g * p.m_ssm
    l, la, lb = p.l, p.l_a, p.l_b
    # middle suspension acts between x_m and x_c = (l_b x_a + l_a x_b) / l
    w = np.array([lb / l, la / l])
    for A, s, r in ((D, p.d_sm, p.d_rm), (K, p.k_sm, p.k_rm)):
        A[:2, :2] += s * np.outer(w, w)
        A[:2, 4] = A[4, :2] = -s * w
        A[4, 4] = r + s
    axles = (
        Axle(2, p.k_rd, p.d_rd, 0.0, "d"),
        Axle(3, p.k_rt, p.d_rt, l, "t"),
        Axle(4, p.k_rm, p.d_rm, la, "m"),
    )
    return SecondOrderModel(
        M, D, K, ("a", "b", "d", "t", "m"), axles, gravity=gravity, params=p
    )


def build_model(p) -> SecondOrderModel:
    """Dispatch on the parameter type."""
    if isinstance(p, ThreeAxleParams):
        return build_three_axle(p)
    if isinstance(p, HalfCarParams):
        return build_half_car(p)
    if isinstance(p, TwoDofParams):
        return build_two_dof(p)
    raise TypeError(f"no model builder for {type(p).__name__}")


@dataclass(frozen=True)
class HarmonicRoadExcitation:
    """Single-harmonic road unevenness travelled at constant speed.

    ``amplitude`` is the peak height Y [m], ``wavelength`` is lambda [m],
    ``speed`` is v [m/s]. ``axle_offsets`` overrides the axle positions
    stored on the model when given.
    """

    amplitude: float
    wavelength: float
    speed: float
    axle_offsets: tuple[float, ...] | None = None

    def __post_init__(self):
        _check("wavelength", self.wavelength)
        _check("speed", self.speed)
        _check("amplitude", self.amplitude, strict=False)

    @property
    def omega(self) -> float:
        return 2 * math.pi * self.speed / self.wavelength

    def at_omega(self, omega: float) -> HarmonicRoadExcitation:
        """Same road travelled at the speed that produces ``omega``."""
        return HarmonicRoadExcitation(
            self.amplitude, self.wavelength, omega * self.wavelength / (2 * math.pi),
            self.axle_offsets,
        )


@dataclass(frozen=True, eq=False)
class HarmonicForceExcitation:
    """Generalized force phasors (RMS) applied at angular frequency ``omega``."""

    omega: float
    forces: np.ndarray

    def __post_init__(self):
        _check("omega", self.omega)
        object.__setattr__(self, "forces", np.asarray(self.forces, dtype=complex))

    def at_omega(self, omega: float) -> HarmonicForceExcitation:
        return HarmonicForceExcitation(omega, self.forces)


def force_excitation(model: SecondOrderModel, omega: float) -> HarmonicForceExcitation:
    """Drive ``model`` with its own applied force at ``omega``."""
    if model.applied_force is None:
        raise ParameterError("model has no applied force")
    return HarmonicForceExcitation(omega, model.applied_force)


def wrap_phase(phi):
    """Reduce an angle in radians to (-pi, pi]."""
    r = np.mod(np.asarray(phi, dtype=float) + np.pi, 2 * np.pi) - np.pi
    r = np.where(r == -np.pi, np.pi, r)
    return float(r) if np.ndim(r) == 0 else r


class AxlePhasors(NamedTuple):
    omega: float
    coordinates: tuple[int, ...]
    phase: np.ndarray  # radians, wrapped
    velocity: np.ndarray
    displacement: np.ndarray


def excitation_phasors(e: HarmonicRoadExcitation, model: SecondOrderModel) -> AxlePhasors:
    """Velocity and displacement phasors of every tyre contact point.

    The front contact velocity is the phase reference. A contact point a
    distance ``s`` behind it lags by ``2 pi s / lambda``.
    """
    offsets = e.axle_offsets
    if offsets is None:
        offsets = tuple(a.offset for a in model.axles)
    if len(offsets) != len(model.axles):
        raise ParameterError(
            f"{len(offsets)} axle offsets given for {len(model.axles)} axles"
        )
    w = e.omega
    phase = wrap_phase(-2 * np.pi * np.asarray(offsets, dtype=float) / e.wavelength)
    velocity = e.amplitude * w / math.sqrt(2) * np.exp(1j * np.atleast_1d(phase))
    return AxlePhasors(
        w,
        tuple(a.coordinate for a in model.axles),
        np.atleast_1d(phase),
        velocity,
        velocity / (1j * w),
    )


def dependent_velocity_c(v_a, v_b, p: ThreeAxleParams):
    """Velocity of the middle-axle attachment point on the rigid frame.

    Works on phasors, sample arrays or plain numbers alike.
    """
    l_b = p.l_b
    return (l_b * v_a - l_b * v_b + p.l_d * v_b + p.l_t * v_b) / p.l
