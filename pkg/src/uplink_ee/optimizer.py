"""EE maximization: pilot reuse, density sweeps, antenna/UE dimensioning.

Implements the closed-form optimizers for the pilot reuse factor, the
UEs-per-cell at fixed antenna ratio, and the antennas at fixed UE count,
the alternating scheme that combines the last two, integer refinement,
and the finite-density scalar searches over the power-control coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import (
    EEReport,
    HardwareModel,
    InfeasibleError,
    OperatingPoint,
    ParameterError,
    PropagationModel,
    asymptotic_objective,
    b1bar,
    b2bar,
    energy_efficiency,
)


@dataclass(frozen=True)
class PilotSolution:
    """Smallest pilot reuse factor meeting the SINR target with equality."""

    beta_star: float
    b1: float
    b2: float
    feasible: bool  # beta_star >= 1 and beta_star * k <= S


@dataclass
class RelaxedOptimum:
    m_star: float
    k_star: float
    ee: float                     # bit/Joule
    iterations: int
    trajectory: list = field(default_factory=list)  # (m, k, ee) per step


@dataclass(frozen=True)
class IntegerOptimum:
    m: int
    k: int
    beta: float
    ee: float                     # bit/Joule
    neighborhood_radius_used: int


def optimal_pilot_reuse(
    m: float, k: float, rho: float, gamma: float, prop: PropagationModel
) -> PilotSolution:
    """Reuse factor that meets the SINR target with equality.

    Raises when no reuse factor can reach the target; an out-of-range
    result (beta < 1 or beta*k > S) is returned with feasible=False so the
    raw value stays inspectable.
    """
    a = prop.alpha
    s = prop.noise / rho
    b1 = 4 * k / (a - 2) ** 2 + (k + m) / (a - 1) + 2 * (k + s) / (a - 2)
    b2 = (k + s + 2 * k / (a - 2)) * (1 + s)
    margin = m - b2 * gamma
    if margin <= 0:
        raise InfeasibleError(
            f"no pilot reuse factor reaches SINR {gamma}: need m > {b2 * gamma:.3f}, got {m}"
        )
    beta_star = b1 * gamma / margin
    feasible = beta_star >= 1 and beta_star * k <= prop.block_len + 1e-12
    return PilotSolution(beta_star=beta_star, b1=b1, b2=b2, feasible=feasible)


# ---------------------------------------------------------------------------
# Asymptotic dimensioning (Theorems on K and M)


def _a_coeffs(gamma: float, prop: PropagationModel):
    a, S = prop.alpha, prop.block_len
    a0 = gamma / (S * (a - 1))
    a1 = (4 * gamma / (a - 2) ** 2 + gamma / (a - 1) + 2 * gamma / (a - 2)) / S
    a2 = (1 + 2 / (a - 2)) * gamma
    return a0, a1, a2


def overhead_slope(c_bar: float, gamma: float, prop: PropagationModel) -> float:
    """Pilot overhead per UE at fixed antennas-per-UE ratio.

    With m = c_bar * k the overhead beta*k/S equals this slope times k.
    """
    a, S = prop.alpha, prop.block_len
    denom = c_bar - (1 + 2 / (a - 2)) * gamma
    if denom <= 0:
        raise InfeasibleError(
            f"antenna ratio {c_bar:.3f} too small for SINR target {gamma}"
        )
    num = 4 * gamma / (a - 2) ** 2 + gamma / (a - 1) + 2 * gamma / (a - 2) + gamma * c_bar / (a - 1)
    return num / (S * denom)


def optimal_k_fixed_ratio(
    c_bar: float, gamma: float, prop: PropagationModel, hw: HardwareModel
) -> float:
    """EE-maximizing real-valued UE count at fixed m/k ratio."""
    G = overhead_slope(c_bar, gamma, prop)
    denom = hw.d1 * c_bar + G * (hw.c1 + hw.d0 * c_bar)
    disc = (G * hw.c0) ** 2 + hw.c0 * hw.d1 * c_bar + hw.c0 * G * (hw.c1 + hw.d0 * c_bar)
    return (math.sqrt(disc) - G * hw.c0) / denom


def max_m_for_reuse_constraint(k: float, gamma: float, prop: PropagationModel) -> float:
    """Largest antenna count keeping the optimal reuse factor >= 1.

    For targets at or above alpha - 1 the reuse factor stays above one for
    every antenna count, so the constraint is vacuous and the bound is
    infinite.
    """
    a = prop.alpha
    if gamma >= a - 1:
        return math.inf
    return (
        k * gamma * (1 + 4 / (a - 2) ** 2 + 1 / (a - 1) + 4 / (a - 2))
        / (1 - gamma / (a - 1))
    )


def optimal_m_fixed_k(
    k: float, gamma: float, prop: PropagationModel, hw: HardwareModel
) -> float:
    """EE-maximizing real-valued antenna count at fixed UE count.

    Uses the interior closed form; when that point would push the optimal
    reuse factor below 1 the constrained optimum sits on the reuse-factor
    boundary, whose antenna count is closed-form as well.
    """
    a0, a1, a2 = _a_coeffs(gamma, prop)
    if a0 * k >= 1:
        raise InfeasibleError(
            f"k = {k} too large for block length {prop.block_len} at SINR target {gamma}"
        )
    ratio = (hw.c0 + hw.c1 * k) / (hw.d0 * k + hw.d1 * k * k)
    disc = (
        a1 * a2 * k
        + a1 ** 2 * k ** 2
        + (1 - a0 * k) * (a1 * k + a0 * a2 * k) * ratio
        + a0 * a1 * a2 * k ** 2
        + a0 * a2 ** 2 * k
    )
    m_star = k * (a1 * k + a2 + math.sqrt(disc)) / (1 - a0 * k)
    m_boundary = max_m_for_reuse_constraint(k, gamma, prop)
    return m_star if m_star <= m_boundary else m_boundary


def feasible_start(
    gamma: float, prop: PropagationModel, hw: HardwareModel, m_max: float = 512
) -> tuple:
    """A feasible (m, k) seed for the alternating scheme."""
    k = 1.0
    m = math.ceil(2 * k * gamma * (1 + 2 / (prop.alpha - 2)))
    while m <= m_max:
        try:
            if asymptotic_objective(m, k, gamma, prop, hw) > 0:
                return float(m), k
        except InfeasibleError:
            pass
        m *= 2
    raise InfeasibleError(f"no feasible starting point with m <= {m_max}")


def alternating_optimize(
    start_m: float,
    start_k: float,
    gamma: float,
    prop: PropagationModel,
    hw: HardwareModel,
    tol: float = 1e-10,
    max_iter: int = 100,
) -> RelaxedOptimum:
    """Alternate the K-step and M-step closed forms until the EE settles."""
    m, k = float(start_m), float(start_k)
    try:
        ee = asymptotic_objective(m, k, gamma, prop, hw)
    except InfeasibleError as exc:
        raise InfeasibleError(
            f"infeasible starting point ({start_m}, {start_k}); "
            f"use feasible_start() to obtain one"
        ) from exc
    if ee <= 0:
        raise InfeasibleError(
            f"infeasible starting point ({start_m}, {start_k}); "
            f"use feasible_start() to obtain one"
        )
    trajectory = [(m, k, ee)]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        c_bar = m / k
        k = optimal_k_fixed_ratio(c_bar, gamma, prop, hw)
        m = optimal_m_fixed_k(k, gamma, prop, hw)
        ee_new = asymptotic_objective(m, k, gamma, prop, hw)
        trajectory.append((m, k, ee_new))
        if abs(ee_new - ee) <= tol * abs(ee_new):
            ee = ee_new
            break
        ee = ee_new
    return RelaxedOptimum(m_star=m, k_star=k, ee=ee, iterations=iterations, trajectory=trajectory)


def _objective_or_none(m, k, gamma, prop, hw):
    if m < 1 or k < 1:
        return None
    try:
        v = asymptotic_objective(m, k, gamma, prop, hw)
    except (InfeasibleError, ParameterError):
        return None
    return v if v > 0 else None


def integer_refine(
    relaxed: RelaxedOptimum,
    gamma: float,
    prop: PropagationModel,
    hw: HardwareModel,
    initial_radius: int = 2,
    max_radius: int = 64,
) -> IntegerOptimum:
    """Best integer point near the relaxed optimum.

    Scans expanding square rings around the rounded relaxed solution and
    stops once a full ring brings no improvement (quasi-concavity makes
    the incumbent globally optimal at that point).  Ties break toward
    smaller m, then smaller k.
    """
    mc, kc = round(relaxed.m_star), round(relaxed.k_star)
    best = None  # (ee, m, k)

    def consider(m, k):
        nonlocal best
        v = _objective_or_none(m, k, gamma, prop, hw)
        if v is None:
            return False
        if best is None or v > best[0] or (v == best[0] and (m, k) < (best[1], best[2])):
            improved = best is None or v > best[0]
            best = (v, m, k)
            return improved
        return False

    radius_used = initial_radius
    for dm in range(-initial_radius, initial_radius + 1):
        for dk in range(-initial_radius, initial_radius + 1):
            consider(mc + dm, kc + dk)
    radius = initial_radius
    while radius < max_radius:
        radius += 1
        improved = False
        for dm in range(-radius, radius + 1):
            for dk in range(-radius, radius + 1):
                if max(abs(dm), abs(dk)) == radius:
                    improved |= consider(mc + dm, kc + dk)
        if improved:
            radius_used = radius
        else:
            break
    if best is None:
        raise InfeasibleError("no feasible integer point near the relaxed optimum")
    ee, m, k = best
    beta = optimal_pilot_reuse(m, k, math.inf, gamma, prop).beta_star
    return IntegerOptimum(m=m, k=k, beta=beta, ee=ee, neighborhood_radius_used=radius_used)


# ---------------------------------------------------------------------------
# Finite-density searches


def golden_section_max(fn, lo: float, hi: float, rel_tol: float = 1e-6, max_iter: int = 200):
    """Bracketed scalar maximization; returns (argmax, max)."""
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
        if abs(b - a) <= rel_tol * (abs(a) + abs(b)) / 2:
            break
    x = (a + b) / 2
    return x, fn(x)


def ee_at_density(
    lam: float,
    m: float,
    k: float,
    rho: float,
    gamma: float,
    prop: PropagationModel,
    hw: HardwareModel,
) -> EEReport:
    """Evaluate EE at a finite density with the reuse factor from the SINR target."""
    sol = optimal_pilot_reuse(m, k, rho, gamma, prop)
    beta = max(sol.beta_star, 1.0)
    if beta * k > prop.block_len:
        raise InfeasibleError(
            f"pilot overhead {beta * k:.1f} exceeds block length {prop.block_len}"
        )
    pt = OperatingPoint(lam=lam, m=m, k=k, beta=beta, rho=rho, gamma=gamma)
    return energy_efficiency(pt, prop, hw)


def ee_vs_density(
    rho_tilde: float,
    m: float,
    k: float,
    gamma: float,
    prop: PropagationModel,
    hw: HardwareModel,
    lambda_grid,
) -> list:
    """EE along a density grid with rho scaled proportionally to the density.

    The resulting EE is nondecreasing in the density and approaches the
    asymptotic objective from below.
    """
    if asymptotic_objective(m, k, gamma, prop, hw) <= 0:
        raise InfeasibleError(f"(m, k) = ({m}, {k}) cannot meet SINR target {gamma}")
    reports = []
    for lam in lambda_grid:
        if lam <= 0:
            raise ParameterError("density grid entries must be positive")
        reports.append(ee_at_density(lam, m, k, lam * rho_tilde, gamma, prop, hw))
    return reports


def optimize_rho_finite_lambda(
    lam: float,
    m: float,
    k: float,
    gamma: float,
    prop: PropagationModel,
    hw: HardwareModel,
    rel_tol: float = 1e-6,
):
    """Maximize EE over the power-control coefficient at fixed density.

    Searches the log domain over a wide noise-relative bracket; the reuse
    factor tracks the SINR target at every candidate.
    """

    def ee_of_log_rho(log_rho):
        rho = math.exp(log_rho)
        try:
            return ee_at_density(lam, m, k, rho, gamma, prop, hw).ee
        except InfeasibleError:
            return -math.inf

    lo = math.log(prop.noise * 1e-4)
    hi = math.log(prop.noise * 1e12)
    log_rho, best = golden_section_max(ee_of_log_rho, lo, hi, rel_tol=rel_tol)
    if not math.isfinite(best) or best <= 0:
        raise InfeasibleError(
            f"no feasible power-control coefficient for (m, k) = ({m}, {k}) at density {lam}"
        )
    rho = math.exp(log_rho)
    return rho, ee_at_density(lam, m, k, rho, gamma, prop, hw)


def _best_m_for_k(k, lam, gamma, prop, hw, m_max):
    """Integer m maximizing density-constrained EE at fixed k (unimodal scan)."""
    m_lo = max(k, 1)
    # coarse geometric grid, then refine around the best cell
    grid = sorted({m_lo, m_max} | {int(round(m_lo * (m_max / m_lo) ** (i / 14))) for i in range(15)})
    best = None
    for m in grid:
        try:
            rho, rep = optimize_rho_finite_lambda(lam, m, k, gamma, prop, hw, rel_tol=1e-4)
        except InfeasibleError:
            continue
        if best is None or rep.ee > best[0]:
            best = (rep.ee, m, rho, rep)
    if best is None:
        return None
    center = best[1]
    step = max(1, (m_max - m_lo) // 14)
    for m in range(max(m_lo, center - step), min(m_max, center + step) + 1):
        try:
            rho, rep = optimize_rho_finite_lambda(lam, m, k, gamma, prop, hw, rel_tol=1e-5)
        except InfeasibleError:
            continue
        if rep.ee > best[0] or (rep.ee == best[0] and m < best[1]):
            best = (rep.ee, m, rho, rep)
    return best


def optimize_for_ue_density(
    mu: float,
    gamma: float,
    prop: PropagationModel,
    hw: HardwareModel,
    m_max: int = 512,
):
    """EE maximization under a fixed UE density mu = k * lam.

    Grid search over integer UE counts (density follows as mu/k), with the
    antenna count scanned per UE count and the power-control coefficient
    optimized at every candidate.  Returns (IntegerOptimum, lam, rho).
    """
    if mu <= 0:
        raise ParameterError("UE density must be positive")
    best = None  # (ee, m, k, rho, report)
    k = 0
    misses = 0
    while k < prop.block_len:
        k += 1
        lam = mu / k
        res = _best_m_for_k(k, lam, gamma, prop, hw, m_max)
        if res is None:
            misses += 1
            if best is not None and misses > 3:
                break
            continue
        misses = 0
        ee, m, rho, rep = res
        if best is None or ee > best[0] or (ee == best[0] and (m, k) < (best[1], best[2])):
            best = (ee, m, k, rho, rep)
        elif best is not None and ee < 0.5 * best[0]:
            break  # EE falls off steeply past the optimum; stop scanning
    if best is None:
        raise InfeasibleError(f"no feasible configuration at UE density {mu}")
    ee, m, k, rho, rep = best
    sol = optimal_pilot_reuse(m, k, rho, gamma, prop)
    opt = IntegerOptimum(m=m, k=k, beta=max(sol.beta_star, 1.0), ee=ee, neighborhood_radius_used=0)
    return opt, mu / k, rho
