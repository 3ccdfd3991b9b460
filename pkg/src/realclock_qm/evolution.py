"""Density-matrix evolution in real-clock time.

Three routes are implemented and cross-checked against each other:

* smear_density    -- mixture of sharply evolved states weighted by the
                      clock-reading density (the defining integral).
* evolve_master    -- differential form: d(rho)/dT = -i[H, rho]
                      - sigma(T) [H, [H, rho]], stepped with classical RK4;
                      fundamental-limit clocks use exact per-interval
                      factors in the energy eigenbasis instead.
* analytic_offdiagonal / fundamental_decay_factor -- closed forms for the
                      off-diagonal elements, used as oracles.

The conditional-probability operations realize relational measurement:
"probability that O is in a window given the clock reads T in a window",
evaluated as a ratio of ideal-time integrals over a finite grid whose
adequacy is checked by doubling it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .clock_accuracy import decoherence_exponent
from .clocks import (
    ClockModel,
    ExpansionClock,
    FundamentalLimitClock,
    GaussianClock,
    IdealClock,
    pdf,
    sigma,
)
from .core import (
    DensityMatrix,
    EnergyDecomposition,
    HermitianOperator,
    Projector,
    build_projector,
    commutator,
    eigendecompose,
    unitary_evolve,
)
from .errors import (
    ClockFoldingError,
    DegenerateStateError,
    DimensionMismatchError,
    GridConvergenceError,
    InsufficientGridError,
    IntegrationFailureError,
    NonCommutingObservableError,
    UnsupportedClockKindError,
    ValidationError,
)

STEPPER_ORDER = 4


@dataclass(frozen=True)
class EvolutionConfig:
    """Numerical parameters: step size and the ideal-time quadrature grid."""

    step: float
    t_min: float
    t_max: float
    n_points: int
    quad_tol: float = 1e-8

    def __post_init__(self):
        if self.step <= 0:
            raise ValidationError(f"step must be positive, got {self.step}")
        if self.n_points < 3:
            raise ValidationError(f"need at least 3 grid points, got {self.n_points}")
        if not self.t_min < self.t_max:
            raise ValidationError(f"grid requires t_min < t_max, got [{self.t_min}, {self.t_max}]")
        if self.quad_tol <= 0:
            raise ValidationError(f"quad_tol must be positive, got {self.quad_tol}")

    def grid(self) -> np.ndarray:
        """Uniform grid with an odd number of points (even Simpson intervals)."""
        n = self.n_points if self.n_points % 2 == 1 else self.n_points + 1
        return np.linspace(self.t_min, self.t_max, n)


@dataclass(frozen=True)
class ConditionalQuery:
    """One relational question: observable window given a clock-reading window."""

    observable: HermitianOperator
    o_center: float
    o_halfwidth: float
    t_center: float
    t_halfwidth: float
    clock_operator: HermitianOperator | None = None

    def __post_init__(self):
        if self.o_halfwidth <= 0 or self.t_halfwidth <= 0:
            raise ValidationError("query halfwidths must be positive")


def _simpson_matrix(values: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Composite Simpson along axis 0 for stacked (scalar or matrix) samples."""
    return simpson(values, x=x, axis=0)


def _richardson_defect(values: np.ndarray, x: np.ndarray) -> float:
    """Error estimate: compare Simpson on the full grid against half resolution."""
    fine = _simpson_matrix(values, x)
    coarse = _simpson_matrix(values[::2], x[::2])
    return float(np.max(np.abs(fine - coarse))) / 15.0


def _phase_table(decomp: EnergyDecomposition, t: np.ndarray) -> np.ndarray:
    """exp(-i omega_n t) for every grid time; shape (len(t), dim)."""
    return np.exp(-1j * np.outer(t, decomp.eigenvalues))


def _trace_curves(
    rho: DensityMatrix,
    ops: list[np.ndarray],
    decomp: EnergyDecomposition,
    t: np.ndarray,
) -> list[np.ndarray]:
    """Tr(op * rho(t)) over the grid for each op, with rho evolving under decomp.

    In the energy eigenbasis Tr(op rho(t)) = sum_nm op~[m,n] rho~[n,m]
    e^{-i(omega_n - omega_m) t}; the phase table is shared between the ops
    and the contraction runs as two BLAS products per op.
    """
    v = decomp.eigenvectors
    rho_eig = v.conj().T @ rho.matrix @ v
    phases = _phase_table(decomp, t)
    phases_conj = phases.conj()
    curves = []
    for op in ops:
        op_eig = v.conj().T @ op @ v
        coeff = rho_eig * op_eig.T
        curves.append(np.real(np.sum((phases @ coeff) * phases_conj, axis=1)))
    return curves


def _trace_curve(
    rho: DensityMatrix, op: np.ndarray, decomp: EnergyDecomposition, t: np.ndarray
) -> np.ndarray:
    return _trace_curves(rho, [op], decomp, t)[0]


# ---------------------------------------------------------------------------
# Smearing route
# ---------------------------------------------------------------------------


def smear_density(
    rho_sys: DensityMatrix,
    hamiltonian: HermitianOperator,
    clock: ClockModel,
    reading: float,
    cfg: EvolutionConfig,
) -> DensityMatrix:
    """State at clock reading T: integral of U(t) rho U(t)^dagger P_t(T) dt.

    The quadrature grid must both cover the support of P_.(T) and resolve
    the density; the computed total weight is compared against 1 and a
    half-resolution Simpson check bounds the discretization error. The
    output is divided by the computed weight, which enforces the trace
    identity Tr(rho(T)) = Tr(rho_sys) exactly.
    """
    if rho_sys.dim != hamiltonian.dim:
        raise DimensionMismatchError(
            f"state dimension {rho_sys.dim} != Hamiltonian dimension {hamiltonian.dim}"
        )
    if isinstance(clock, IdealClock):
        return unitary_evolve(rho_sys, hamiltonian, reading)
    if not isinstance(clock, GaussianClock):
        raise UnsupportedClockKindError(
            f"smearing needs a pointwise clock density, not {type(clock).__name__}"
        )
    t = cfg.grid()
    weights = np.asarray(pdf(clock, reading, t), dtype=float)
    mass = float(_simpson_matrix(weights, t))
    if abs(mass - 1.0) > cfg.quad_tol:
        raise InsufficientGridError(
            f"grid [{cfg.t_min}, {cfg.t_max}] captures clock weight {mass:.12g} "
            f"instead of 1 (tol {cfg.quad_tol:.1e}); widen or refine it"
        )
    dec = eigendecompose(hamiltonian)
    v = dec.eigenvectors
    rho_eig = v.conj().T @ rho_sys.matrix @ v
    phases = _phase_table(dec, t)
    # rho~(t)_nm = rho~_nm e^{-i omega_nm t}, assembled for the whole grid
    stacked = np.einsum("tn,nm,tm->tnm", phases, rho_eig, phases.conj())
    integrand = stacked * weights[:, None, None]
    if _richardson_defect(integrand, t) > cfg.quad_tol:
        raise InsufficientGridError(
            "grid too coarse for the requested quadrature tolerance; refine it"
        )
    smeared_eig = _simpson_matrix(integrand, t) / mass
    return DensityMatrix(v @ smeared_eig @ v.conj().T)


# ---------------------------------------------------------------------------
# Master-equation route
# ---------------------------------------------------------------------------


def _master_rhs(rho: np.ndarray, h_mat: np.ndarray, sig: float) -> np.ndarray:
    c = h_mat @ rho - rho @ h_mat
    out = -1j * c
    if sig != 0.0:
        out -= sig * (h_mat @ c - c @ h_mat)
    return out


def _rk4_step(rho: np.ndarray, h_mat: np.ndarray, sig: float, h: float) -> np.ndarray:
    k1 = _master_rhs(rho, h_mat, sig)
    k2 = _master_rhs(rho + 0.5 * h * k1, h_mat, sig)
    k3 = _master_rhs(rho + 0.5 * h * k2, h_mat, sig)
    k4 = _master_rhs(rho + h * k3, h_mat, sig)
    out = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    out = 0.5 * (out + out.conj().T)
    return out / np.real(np.trace(out))


def _spectral_norm(h_mat: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(h_mat))))


def _check_step_size(h: float, h_norm: float, sig: float) -> None:
    stiffness = h * (h_norm * h_norm * sig + h_norm)
    if stiffness >= 0.1:
        raise ValidationError(
            f"step too large for this Hamiltonian/width-rate: "
            f"h*(|H|^2 sigma + |H|) = {stiffness:.3g} >= 0.1"
        )


def master_step(
    rho: DensityMatrix,
    hamiltonian: HermitianOperator,
    sigma_value: float,
    h: float,
    drift_a: float = 0.0,
    drift_a_rate: float = 0.0,
    h_norm: float | None = None,
) -> DensityMatrix:
    """One RK4 step of d(rho)/dT = -i[H, rho] - sigma [H, [H, rho]].

    The double-commutator sign is fixed by the closed-form solution
    rho_nm(T) = rho_nm(0) e^{-i omega_nm T} e^{-sigma omega_nm^2 T}: with
    this sign off-diagonals decay for sigma >= 0 and the generator is of
    Lindblad form with the single operator D = H. Trace is renormalized
    and Hermiticity re-symmetrized each step (both are roundoff-level).

    ``drift_a``/``drift_a_rate`` are the extension point for asymmetric
    reading distributions (first-order coefficient a(T) and its rate);
    they rescale the unitary drift to (1 - a') and the decoherence
    coefficient to (sigma - a). Both default to 0 and are excluded from
    the verified contracts. ``h_norm`` lets trajectory drivers reuse the
    spectral norm of H for the step-size check.
    """
    if rho.dim != hamiltonian.dim:
        raise DimensionMismatchError(
            f"state dimension {rho.dim} != Hamiltonian dimension {hamiltonian.dim}"
        )
    if sigma_value < 0:
        raise ValidationError(f"sigma must be nonnegative, got {sigma_value}")
    if h <= 0:
        raise ValidationError(f"step must be positive, got {h}")
    if h_norm is None:
        h_norm = _spectral_norm(hamiltonian.matrix)
    _check_step_size(h, h_norm, sigma_value)
    if drift_a == 0.0 and drift_a_rate == 0.0:
        raw = _rk4_step(rho.matrix, hamiltonian.matrix, sigma_value, h)
    else:
        h_eff = (1.0 - drift_a_rate) * hamiltonian.matrix
        raw = _rk4_step_general(rho.matrix, hamiltonian.matrix, h_eff,
                                sigma_value - drift_a, h)
    try:
        return DensityMatrix(raw)
    except ValidationError as exc:
        raise IntegrationFailureError(
            f"step produced an invalid state ({exc}); try a smaller step"
        ) from exc


def _general_rhs(rho, h_mat, drift_mat, sig):
    out = -1j * (drift_mat @ rho - rho @ drift_mat)
    if sig != 0.0:
        c = h_mat @ rho - rho @ h_mat
        out -= sig * (h_mat @ c - c @ h_mat)
    return out


def _rk4_step_general(rho, h_mat, drift_mat, sig, h):
    k1 = _general_rhs(rho, h_mat, drift_mat, sig)
    k2 = _general_rhs(rho + 0.5 * h * k1, h_mat, drift_mat, sig)
    k3 = _general_rhs(rho + 0.5 * h * k2, h_mat, drift_mat, sig)
    k4 = _general_rhs(rho + h * k3, h_mat, drift_mat, sig)
    out = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    out = 0.5 * (out + out.conj().T)
    return out / np.real(np.trace(out))


def evolve_master(
    rho0: DensityMatrix,
    hamiltonian: HermitianOperator,
    clock: ClockModel,
    t_final: float,
    cfg: EvolutionConfig,
) -> list[tuple[float, DensityMatrix]]:
    """Trajectory of the modified evolution from T = 0 to T = t_final.

    Expansion clocks supply sigma(T) per step (evaluated at the step
    midpoint); the ideal clock is the sigma = 0 limit. Fundamental-limit
    clocks are propagated exactly in the energy eigenbasis by multiplying
    each off-diagonal element per interval with
    exp(-i omega_nm dT) * exp(-omega_nm^2 * d(exponent)), where the
    exponent is T_P^(4/3) T^(2/3); pointwise sigma stepping would be
    ill-conditioned near the clock horizon.
    """
    if t_final < 0:
        raise ValidationError(f"t_final must be nonnegative, got {t_final}")
    if rho0.dim != hamiltonian.dim:
        raise DimensionMismatchError(
            f"state dimension {rho0.dim} != Hamiltonian dimension {hamiltonian.dim}"
        )
    if t_final == 0:
        return [(0.0, rho0)]

    n_steps = max(1, math.ceil(t_final / cfg.step - 1e-12))
    h = t_final / n_steps
    times = [k * h for k in range(n_steps + 1)]
    times[-1] = t_final

    if isinstance(clock, FundamentalLimitClock):
        if t_final >= clock.t_max:
            raise ValidationError(
                f"t_final={t_final} must stay below the clock horizon t_max={clock.t_max}"
            )
        return _evolve_fundamental(rho0, hamiltonian, clock, times)

    if isinstance(clock, IdealClock):
        sigma_of = lambda T: 0.0  # noqa: E731 - delta-sharp clock never widens
        drift_of = None
    elif isinstance(clock, ExpansionClock):
        sigma_of = lambda T: sigma(clock, T)  # noqa: E731
        drift_of = _expansion_drift(clock)
    else:
        raise UnsupportedClockKindError(
            f"master evolution supports ideal, expansion and fundamental-limit "
            f"clocks, not {type(clock).__name__}"
        )

    h_norm = _spectral_norm(hamiltonian.matrix)
    trajectory = [(0.0, rho0)]
    state = rho0
    for k in range(n_steps):
        mid = times[k] + 0.5 * h
        drift_a, drift_a_rate = drift_of(mid) if drift_of else (0.0, 0.0)
        state = master_step(state, hamiltonian, sigma_of(mid), h,
                            drift_a=drift_a, drift_a_rate=drift_a_rate, h_norm=h_norm)
        trajectory.append((times[k + 1], state))
    return trajectory


def _expansion_drift(clock: ExpansionClock):
    """Asymmetry coefficient a(T) and its rate, when the clock declares one."""
    if clock.a is None:
        return None

    def drift(reading: float) -> tuple[float, float]:
        step = 1e-6 * max(1.0, abs(reading))
        rate = (clock.a(reading + step) - clock.a(reading - step)) / (2 * step)
        return float(clock.a(reading)), float(rate)

    return drift


def _evolve_fundamental(
    rho0: DensityMatrix,
    hamiltonian: HermitianOperator,
    clock: FundamentalLimitClock,
    times: list[float],
) -> list[tuple[float, DensityMatrix]]:
    dec = eigendecompose(hamiltonian)
    v = dec.eigenvectors
    bohr = dec.bohr_frequencies
    bohr_sq = bohr * bohr
    rho_eig = v.conj().T @ rho0.matrix @ v
    trajectory = [(times[0], rho0)]
    exponent_prev = decoherence_exponent(1.0, times[0], clock.t_planck)
    for t_prev, t_next in zip(times[:-1], times[1:]):
        exponent_next = decoherence_exponent(1.0, t_next, clock.t_planck)
        factor = np.exp(-1j * bohr * (t_next - t_prev) - bohr_sq * (exponent_next - exponent_prev))
        rho_eig = rho_eig * factor
        exponent_prev = exponent_next
        trajectory.append((t_next, DensityMatrix(v @ rho_eig @ v.conj().T)))
    return trajectory


def analytic_offdiagonal(rho0_nm: complex, omega_nm: float, sig: float, t: float) -> complex:
    """Closed form rho_nm(T) = rho_nm(0) e^{-i omega_nm T} e^{-sigma omega_nm^2 T}."""
    if sig < 0:
        raise ValidationError(f"sigma must be nonnegative, got {sig}")
    if t < 0:
        raise ValidationError(f"time must be nonnegative, got {t}")
    return rho0_nm * np.exp(-1j * omega_nm * t) * math.exp(-sig * omega_nm * omega_nm * t)


def fundamental_decay_factor(omega_nm: float, t: float, t_planck: float) -> float:
    """Suppression exp(-omega_nm^2 * T_P^(4/3) * T^(2/3)) of an off-diagonal
    element under the best physically achievable clock."""
    return math.exp(-decoherence_exponent(omega_nm, t, t_planck))


# ---------------------------------------------------------------------------
# Probabilities
# ---------------------------------------------------------------------------


def ordinary_probability(rho: DensityMatrix, window: Projector) -> float:
    """Tr(P rho) / Tr(rho): probability of the projected outcome."""
    if rho.dim != window.matrix.shape[0]:
        raise DimensionMismatchError(
            f"state dimension {rho.dim} != projector dimension {window.matrix.shape[0]}"
        )
    tr = float(np.real(np.trace(rho.matrix)))
    if tr <= 0:
        raise DegenerateStateError("state has nonpositive trace")
    value = float(np.real(np.trace(window.matrix @ rho.matrix))) / tr
    return 0.0 if -1e-12 < value < 0.0 else value


def _doubled_grid(cfg: EvolutionConfig) -> np.ndarray:
    center = 0.5 * (cfg.t_min + cfg.t_max)
    half = cfg.t_max - cfg.t_min  # doubled span, same spacing
    base = cfg.grid()
    n = 2 * (len(base) - 1) + 1
    return np.linspace(center - half, center + half, n)


def _conditional_ratio(
    weight: np.ndarray, p_sys: np.ndarray, t: np.ndarray, label: str
) -> float:
    denominator = float(_simpson_matrix(weight, t))
    if denominator <= 0 or not math.isfinite(denominator):
        raise GridConvergenceError(
            f"clock never reads the requested window on the {label} grid"
        )
    numerator = float(_simpson_matrix(p_sys * weight, t))
    return numerator / denominator


def conditional_probability(
    rho_cl: DensityMatrix,
    rho_sys: DensityMatrix,
    h_cl: HermitianOperator,
    h_sys: HermitianOperator,
    query: ConditionalQuery,
    cfg: EvolutionConfig,
) -> float:
    """Probability that the observable is in its window given the clock
    (a genuine quantum subsystem) reads within its window.

    Clock and system are independent subsystems, so the defining ratio of
    ideal-time integrals factorizes into
    integral[ Tr(P_O rho_sys(t)) * Tr(P_T rho_cl(t)) ] /
    integral[ Tr(P_T rho_cl(t)) ].
    The infinite ideal-time range is replaced by the configured grid; the
    grid is then doubled (same spacing) and the result accepted only if it
    moves by less than quad_tol. The clock expectation must be strictly
    increasing over the grid (a clock must not read the same value twice).
    """
    if query.clock_operator is None:
        raise ValidationError("quantum route needs query.clock_operator")
    _require_narrow_reading_window(query, cfg)
    p_obs = build_projector(query.observable, query.o_center, query.o_halfwidth)
    p_reading = build_projector(query.clock_operator, query.t_center, query.t_halfwidth)
    dec_cl = eigendecompose(h_cl)
    dec_sys = eigendecompose(h_sys)

    def ratio_on(t: np.ndarray, label: str) -> float:
        readings, weight = _trace_curves(
            rho_cl, [query.clock_operator.matrix, p_reading.matrix], dec_cl, t
        )
        if np.any(np.diff(readings) <= 0):
            raise ClockFoldingError(
                "clock expectation value is not strictly increasing over the "
                f"{label} grid; shrink the grid to the clock's monotone range"
            )
        p_sys = _trace_curve(rho_sys, p_obs.matrix, dec_sys, t)
        return _conditional_ratio(weight, p_sys, t, label)

    base = ratio_on(cfg.grid(), "base")
    wide = ratio_on(_doubled_grid(cfg), "doubled")
    if abs(wide - base) >= cfg.quad_tol * max(1.0, abs(wide)):
        raise GridConvergenceError(
            f"result moved by {abs(wide - base):.3e} when the grid was doubled "
            f"(tol {cfg.quad_tol:.1e}); the ideal-time integral has not converged"
        )
    return wide


def _require_narrow_reading_window(query: ConditionalQuery, cfg: EvolutionConfig) -> None:
    if query.t_halfwidth >= 0.01 * (cfg.t_max - cfg.t_min):
        raise ValidationError(
            f"clock window halfwidth {query.t_halfwidth} must be below 1% of "
            f"the grid span {cfg.t_max - cfg.t_min}"
        )


def conditional_probability_analytic(
    clock: GaussianClock,
    rho_sys: DensityMatrix,
    h_sys: HermitianOperator,
    query: ConditionalQuery,
    cfg: EvolutionConfig,
) -> float:
    """Same relational probability with the clock replaced by its analytic
    reading density: the clock-projector trace becomes pdf(clock, T, t),
    whose window width cancels between numerator and denominator."""
    _require_narrow_reading_window(query, cfg)
    p_obs = build_projector(query.observable, query.o_center, query.o_halfwidth)
    dec_sys = eigendecompose(h_sys)

    def ratio_on(t: np.ndarray, label: str) -> float:
        weight = np.asarray(pdf(clock, query.t_center, t), dtype=float)
        p_sys = _trace_curve(rho_sys, p_obs.matrix, dec_sys, t)
        return _conditional_ratio(weight, p_sys, t, label)

    base = ratio_on(cfg.grid(), "base")
    wide = ratio_on(_doubled_grid(cfg), "doubled")
    if abs(wide - base) >= cfg.quad_tol * max(1.0, abs(wide)):
        raise GridConvergenceError(
            f"result moved by {abs(wide - base):.3e} when the grid was doubled "
            f"(tol {cfg.quad_tol:.1e}); the ideal-time integral has not converged"
        )
    return wide


# ---------------------------------------------------------------------------
# Conserved observables
# ---------------------------------------------------------------------------

COMMUTATOR_TOL = 1e-10
CONSERVATION_TOL = 1e-8


@dataclass(frozen=True)
class ConservationReport:
    """Trajectory of Tr(C rho(T)) for an observable commuting with H."""

    samples: tuple[tuple[float, float], ...]
    spread: float
    conserved: bool


def despagnat_conservation(
    observable: HermitianOperator,
    hamiltonian: HermitianOperator,
    rho0: DensityMatrix,
    clock: ClockModel,
    t_final: float,
    cfg: EvolutionConfig,
) -> ConservationReport:
    """Track Tr(C rho(T)) along the modified evolution.

    Quantities commuting with H are conserved even though the evolution is
    not unitary; that is what makes them usable as consistency probes. A
    non-commuting observable is rejected with the measured commutator norm.
    """
    comm_norm = float(np.max(np.abs(commutator(observable.matrix, hamiltonian.matrix))))
    if comm_norm > COMMUTATOR_TOL:
        raise NonCommutingObservableError(
            f"observable does not commute with H: max |[C, H]| = {comm_norm:.3e} "
            f"(tol {COMMUTATOR_TOL:.1e})",
            commutator_norm=comm_norm,
        )
    trajectory = evolve_master(rho0, hamiltonian, clock, t_final, cfg)
    samples = tuple(
        (t, float(np.real(np.trace(observable.matrix @ state.matrix))))
        for t, state in trajectory
    )
    values = [v for _, v in samples]
    spread = max(values) - min(values)
    return ConservationReport(samples=samples, spread=spread, conserved=spread <= CONSERVATION_TOL)


# ---------------------------------------------------------------------------
# Discretized quantum clock (free-particle wavepacket)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WavepacketClock:
    """A genuine quantum clock: free particle on a periodic position grid.

    The reading operator is position relative to the packet's start, so the
    expected reading is velocity * t with Gaussian fluctuations of width
    sigma_x(t). ``gaussian_model`` is the matched analytic clock (width and
    peak map from the exact free-packet solution) for cross-checks. Valid
    while the packet stays away from the periodic wrap.
    """

    rho: DensityMatrix
    hamiltonian: HermitianOperator
    reading_operator: HermitianOperator
    gaussian_model: GaussianClock
    positions: np.ndarray
    grid_spacing: float
    velocity: float
    x0: float

    def reading_values(self) -> np.ndarray:
        return self.positions - self.x0


def make_wavepacket_clock(
    n: int = 256,
    length: float = 70.0,
    mass: float = 40.0,
    sigma0: float = 2.0,
    x0: float = 25.5,
    velocity: float = 0.25,
) -> WavepacketClock:
    """Build the discretized free-particle clock.

    The momentum kick mass*velocity plus a few momentum widths must stay
    inside the grid's momentum zone pi*n/length, and the packet must not
    spread appreciably over the query horizon; the defaults satisfy both.
    """
    if n < 2 or length <= 0 or mass <= 0 or sigma0 <= 0 or velocity <= 0:
        raise ValidationError("wavepacket clock parameters must be positive")
    dx = length / n
    x = np.arange(n) * dx
    p0 = mass * velocity
    p_zone = math.pi / dx
    if p0 + 4.0 / (2.0 * sigma0) > p_zone:
        raise ValidationError(
            f"momentum kick {p0:.3g} (+tails) exceeds the grid momentum zone {p_zone:.3g}; "
            "increase n or reduce mass*velocity"
        )
    k_index = np.fft.fftfreq(n, d=dx) * 2.0 * math.pi  # momentum eigenvalues
    plane_waves = np.exp(1j * np.outer(x, k_index)) / math.sqrt(n)
    h_cl = plane_waves @ np.diag(k_index**2 / (2.0 * mass)) @ plane_waves.conj().T
    h_cl = 0.5 * (h_cl + h_cl.conj().T)

    psi = np.exp(1j * p0 * x) * np.exp(-((x - x0) ** 2) / (4.0 * sigma0**2))
    rho = DensityMatrix.from_pure(psi)

    spread_scale = 2.0 * mass * sigma0**2

    def width(reading: float) -> float:
        ideal_t = reading / velocity
        return sigma0 * math.sqrt(1.0 + (ideal_t / spread_scale) ** 2)

    model = GaussianClock(
        width=width,
        peak_map=lambda t: velocity * np.asarray(t, dtype=float),
        peak_rate=lambda t: np.full_like(np.asarray(t, dtype=float), velocity),
    )
    return WavepacketClock(
        rho=rho,
        hamiltonian=HermitianOperator(h_cl),
        reading_operator=HermitianOperator(np.diag(x - x0)),
        gaussian_model=model,
        positions=x,
        grid_spacing=dx,
        velocity=velocity,
        x0=x0,
    )
