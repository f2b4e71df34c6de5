"""Mechanical-domain reference solutions for checking the analogue circuit.

Two independent routes: the closed-form phasor ``j omega H(omega) Q`` and a
sampled reconstruction that transforms the road force to the frequency
domain, applies ``j omega_k H(omega_k)`` bin by bin and transforms back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from . import fft as dft
from .errors import CoordinateMismatchError, ParameterError, SingularSystemError
from .formatting import fmt
from .model import (
    HarmonicForceExcitation,
    HarmonicRoadExcitation,
    SecondOrderModel,
    ThreeAxleParams,
    dependent_velocity_c,
    excitation_phasors,
    force_excitation,
    wrap_phase,
)
from .solver import PhasorSolution, lu_checked

DEFAULT_PERIODS = 10
DEFAULT_SAMPLES = 1024
REALNESS_TOL = 1e-9


def frequency_response(model: SecondOrderModel, omega: float) -> np.ndarray:
    """``(-omega^2 M + j omega D + K)^-1``."""
    A = model.dynamic_stiffness(omega)
    lu = lu_checked(A, model.labels, omega)
    return la.lu_solve(lu, np.eye(model.n, dtype=complex), check_finite=False)


def _excitation(model, excitation):
    if excitation is None:
        raise ParameterError("an excitation is required")
    if isinstance(excitation, (int, float)):
        return force_excitation(model, float(excitation))
    return excitation


def harmonic_force_phasor(model: SecondOrderModel, excitation) -> np.ndarray:
    """Generalized force phasor of the harmonic part of the input.

    The constant gravity part is left out.
    """
    excitation = _excitation(model, excitation)
    if isinstance(excitation, HarmonicForceExcitation):
        return np.array(excitation.forces, dtype=complex)
    ph = excitation_phasors(excitation, model)
    Q = np.zeros(model.n, dtype=complex)
    for axle, v in zip(model.axles, ph.velocity):
        Q[axle.coordinate] += (axle.d_r + axle.k_r / (1j * ph.omega)) * v
    return Q


def closed_form_velocity_phasors(model: SecondOrderModel, excitation) -> np.ndarray:
    excitation = _excitation(model, excitation)
    w = excitation.omega
    return 1j * w * frequency_response(model, w) @ harmonic_force_phasor(model, excitation)


def has_point_c(model: SecondOrderModel) -> bool:
    return isinstance(model.params, ThreeAxleParams)


def with_point_c(model, labels, values):
    """Append the rigid-frame point c (three-axle models only)."""
    if not has_point_c(model):
        return tuple(labels), values
    a, b = values[labels.index("a")], values[labels.index("b")]
    c = dependent_velocity_c(a, b, model.params)
    return tuple(labels) + ("c",), np.concatenate([values, np.asarray(c)[None, ...]])


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Velocity samples [m/s], one row per coordinate."""

    dt: float
    samples: np.ndarray
    labels: tuple[str, ...]
    omega: float
    periods: int
    imag_residue: float = 0.0

    @property
    def n_samples(self) -> int:
        return self.samples.shape[-1]

    @property
    def samples_per_period(self) -> float:
        return self.n_samples / self.periods

    @property
    def t(self) -> np.ndarray:
        return self.dt * np.arange(self.n_samples)

    def rms(self) -> np.ndarray:
        return np.sqrt(np.mean(self.samples**2, axis=-1))

    def phasors(self) -> np.ndarray:
        """RMS phasors read off the tone bin, ``x = Re{sqrt(2) U e^{j omega t}}``."""
        n = self.n_samples
        k = np.arange(n)
        kernel = np.exp(-2j * np.pi * self.periods * k / n)
        return math.sqrt(2) * (self.samples @ kernel) / n

    def __getitem__(self, label: str) -> np.ndarray:
        return self.samples[self.labels.index(label)]


def road_force_samples(model: SecondOrderModel, e: HarmonicRoadExcitation, t) -> np.ndarray:
    """``d_r y' + k_r y`` under each tyre for ``y = Y sin(omega t - 2 pi s / lambda)``."""
    offsets = e.axle_offsets or tuple(a.offset for a in model.axles)
    w = e.omega
    Q = np.zeros((model.n, len(t)))
    for axle, s in zip(model.axles, offsets):
        arg = w * t - 2 * np.pi * s / e.wavelength
        y = e.amplitude * np.sin(arg)
        ydot = e.amplitude * w * np.cos(arg)
        Q[axle.coordinate] += axle.d_r * ydot + axle.k_r * y
    return Q


def spectral_velocities(
    model: SecondOrderModel,
    excitation,
    periods: int = DEFAULT_PERIODS,
    n_samples: int = DEFAULT_SAMPLES,
    dt: float | None = None,
) -> TimeSeries:
    """Steady-state velocities by transforming the sampled force.

    The default grid spans exactly ``periods`` excitation periods so the
    tone sits on bin ``periods``. An explicit ``dt`` must keep that
    alignment.
    """
    excitation = _excitation(model, excitation)
    w = excitation.omega
    T = 2 * math.pi / w
    if dt is None:
        dt = periods * T / n_samples
    cycles = n_samples * dt / T
    if abs(cycles - round(cycles)) > 1e-9 * max(cycles, 1.0) or round(cycles) < 1:
        raise ParameterError(
            f"excitation is not bin-aligned: {cycles!r} periods in the sampling window"
        )
    periods = int(round(cycles))
    if 2 * periods >= n_samples:
        raise ParameterError("excitation tone is at or above the Nyquist bin")

    t = dt * np.arange(n_samples)
    if isinstance(excitation, HarmonicRoadExcitation):
        Q = road_force_samples(model, excitation, t)
    else:
        F = np.asarray(excitation.forces, dtype=complex)
        Q = np.real(math.sqrt(2) * F[:, None] * np.exp(1j * w * t)[None, :])

    Qk = dft.fft(Q)
    half = n_samples // 2
    k = np.arange(1, half)
    wk = 2 * np.pi * k / (n_samples * dt)
    A = (-wk[:, None, None] ** 2 * model.M + 1j * wk[:, None, None] * model.D + model.K)
    try:
        X_pos = np.linalg.solve(A, Qk[:, 1:half].T[..., None])[..., 0]
    except np.linalg.LinAlgError:
        raise SingularSystemError("dynamic stiffness singular on a frequency bin") from None
    X = np.zeros_like(Qk)
    X[:, 1:half] = (1j * wk[:, None] * X_pos).T
    # DC and Nyquist stay zero; negative bins mirror the positive ones
    X[:, n_samples - k] = np.conj(X[:, k])
    x = dft.ifft(X)
    peak = np.abs(x).max(initial=0.0)
    residue = float(np.abs(x.imag).max(initial=0.0) / peak) if peak > 0 else 0.0
    labels, samples = with_point_c(model, model.labels, x.real)
    return TimeSeries(dt, samples, labels, w, periods, residue)


@dataclass(frozen=True, eq=False)
class ValidationReport:
    labels: tuple[str, ...]
    rms_mechanical: np.ndarray
    rms_electrical: np.ndarray
    relative_error: np.ndarray
    phase_delta_error: float  # worst pairwise phase-difference mismatch [deg]
    tolerance: float
    phase_tolerance: float

    @property
    def max_relative_error(self) -> float:
        return float(self.relative_error.max(initial=0.0))

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance and self.phase_delta_error <= self.phase_tolerance

    def table(self) -> str:
        lines = ["coordinate,rms_electrical,rms_mechanical,relative_error"]
        for lab, re_, rm, err in zip(
            self.labels, self.rms_electrical, self.rms_mechanical, self.relative_error
        ):
            lines.append(f"{lab},{fmt(re_)},{fmt(rm)},{fmt(err)}")
        lines.append(f"# max relative rms error {fmt(self.max_relative_error)} (tolerance {fmt(self.tolerance)})")
        lines.append(
            f"# max phase-difference mismatch {fmt(self.phase_delta_error)} deg "
            f"(tolerance {fmt(self.phase_tolerance)})"
        )
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


def _pairwise_phase(u):
    ph = np.angle(u)
    return np.degrees(wrap_phase(ph[:, None] - ph[None, :]))


def validate(
    electrical: PhasorSolution,
    mechanical,
    model: SecondOrderModel | None = None,
    tolerance: float = 1e-3,
    phase_tolerance: float = 0.01,
) -> ValidationReport:
    """Compare circuit node voltages with a mechanical reference.

    ``mechanical`` is a :class:`TimeSeries` or a vector of velocity
    phasors in the electrical node order. With a three-axle ``model`` the
    rigid-frame point c is added to the electrical side.
    """
    e_labels = tuple(electrical.node_order)
    e_vals = np.asarray(electrical.node_voltages)
    if model is not None:
        e_labels, e_vals = with_point_c(model, e_labels, e_vals)
    if isinstance(mechanical, TimeSeries):
        m_labels, m_rms, m_ph = mechanical.labels, mechanical.rms(), mechanical.phasors()
    else:
        m_vals = np.asarray(mechanical, dtype=complex)
        if m_vals.shape != (len(electrical.node_order),):
            raise CoordinateMismatchError(
                f"{m_vals.shape[0]} mechanical values for {len(electrical.node_order)} nodes"
            )
        m_labels = tuple(electrical.node_order)
        if model is not None:
            m_labels, m_vals = with_point_c(model, m_labels, m_vals)
        m_rms, m_ph = np.abs(m_vals), m_vals
    if set(m_labels) != set(e_labels) or len(m_labels) != len(e_labels):
        raise CoordinateMismatchError(f"electrical {e_labels} vs mechanical {m_labels}")
    order = [m_labels.index(lab) for lab in e_labels]
    m_rms, m_ph = np.asarray(m_rms)[order], np.asarray(m_ph)[order]
    e_rms = np.abs(e_vals)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(e_rms > 0, np.abs(m_rms - e_rms) / e_rms, np.abs(m_rms - e_rms))
    live = (e_rms > 1e-12 * e_rms.max(initial=0.0)) & (np.abs(m_ph) > 1e-12 * e_rms.max(initial=0.0))
    d = _pairwise_phase(e_vals[live]) - _pairwise_phase(m_ph[live])
    phase_err = float(np.abs(wrap_phase(np.radians(d))).max(initial=0.0)) if d.size else 0.0
    return ValidationReport(
        e_labels, m_rms, e_rms, rel, math.degrees(phase_err), tolerance, phase_tolerance
    )
