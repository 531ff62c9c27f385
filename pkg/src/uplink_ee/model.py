"""Closed-form uplink SINR/SE/ASE/AEC/EE calculus for a PPP cellular network.

All energies are Joule/symbol, distances km, densities per km^2.  The
power-control coefficient ``rho`` may be ``math.inf``, in which case every
noise-over-power term is exactly zero (the asymptotic regime), with no
floating-point cancellation.

Everything here is a pure function of its arguments and safe to call
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """A model parameter is outside its admissible domain."""


class InfeasibleError(ValueError):
    """The requested operating point cannot meet its constraints."""


class DegenerateModelError(ValueError):
    """The model is degenerate (e.g. zero total energy consumption)."""


@dataclass(frozen=True)
class PropagationModel:
    """Pathloss/noise environment.

    alpha     : pathloss exponent, must exceed 2
    omega     : linear propagation loss at 1 km (power ratio)
    noise     : receiver noise, Joule/symbol
    block_len : coherence block length S, symbols
    """

    alpha: float
    omega: float
    noise: float
    block_len: int

    def __post_init__(self):
        if not self.alpha > 2:
            raise ParameterError(f"pathloss exponent must exceed 2, got {self.alpha}")
        if not self.omega > 0:
            raise ParameterError("propagation loss omega must be positive")
        if not self.noise > 0:
            raise ParameterError("noise variance must be positive")
        if self.block_len < 1:
            raise ParameterError("coherence block must hold at least one symbol")


@dataclass(frozen=True)
class HardwareModel:
    """Amplifier efficiency and circuit-energy coefficients (Joule/symbol).

    eta : power amplifier efficiency, in (0, 1]
    c0  : static per-BS energy
    c1  : per-UE circuit energy
    d0  : per-antenna circuit energy
    d1  : per-antenna-per-UE signal-processing energy
    """

    eta: float
    c0: float
    c1: float
    d0: float
    d1: float

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise ParameterError(f"amplifier efficiency must be in (0,1], got {self.eta}")
        coeffs = (self.c0, self.c1, self.d0, self.d1)
        if any(c < 0 for c in coeffs):
            raise ParameterError("circuit-energy coefficients must be nonnegative")
        if not any(c > 0 for c in coeffs):
            raise ParameterError("at least one circuit-energy coefficient must be positive")


@dataclass(frozen=True)
class OperatingPoint:
    """Decision variables plus the SINR target.

    lam   : BS density, BS/km^2 (may be inf for pure asymptotic evaluation)
    m     : antennas per BS (real-valued; integrality is the optimizer's job)
    k     : UEs per cell (real-valued)
    beta  : pilot reuse factor, >= 1
    rho   : power-control coefficient, Joule/symbol (may be inf)
    gamma : SINR target, > 0
    """

    lam: float
    m: float
    k: float
    beta: float
    rho: float
    gamma: float

    def __post_init__(self):
        if not self.m > 0 or not self.k > 0:
            raise ParameterError("antenna and UE counts must be positive")
        if not self.beta >= 1:
            raise ParameterError(f"pilot reuse factor must be >= 1, got {self.beta}")
        if not self.rho > 0:
            raise ParameterError("power-control coefficient must be positive")
        if not self.gamma > 0:
            raise ParameterError("SINR target must be positive")

    def validate_density(self):
        if not self.lam > 0 or math.isinf(self.lam):
            raise ParameterError("finite-density evaluation needs lam > 0 and finite")


@dataclass(frozen=True)
class EEReport:
    """Evaluated metrics at one operating point."""

    sinr: float            # dimensionless
    se_per_ue: float       # bit/symbol/user
    ase: float             # bit/symbol/km^2
    aec: float             # Joule/symbol/km^2
    ee: float              # bit/Joule
    feasible: bool


def noise_over_power(pt: OperatingPoint, prop: PropagationModel) -> float:
    """sigma^2/rho, exactly 0.0 when rho is infinite."""
    return prop.noise / pt.rho


def sinr_lower_bound(pt: OperatingPoint, prop: PropagationModel) -> float:
    """Average-SINR lower bound for MRC with MMSE channel estimates.

    Strictly increasing in beta, m and rho; strictly decreasing in k.
    """
    a = prop.alpha
    s = noise_over_power(pt, prop)
    denom = (
        (pt.k + s) * (1 + 2 / (pt.beta * (a - 2)) + s)
        + 2 * pt.k / (a - 2) * (1 + s)
        + pt.k / pt.beta * (4 / (a - 2) ** 2 + 1 / (a - 1))
        + pt.m / (pt.beta * (a - 1))
    )
    return pt.m / denom


def se_lower_bound(pt: OperatingPoint, prop: PropagationModel) -> float:
    """Spectral efficiency lower bound, bit/symbol/user.

    The pilot overhead beta*k must fit inside the coherence block.
    """
    overhead = pt.beta * pt.k / prop.block_len
    if overhead > 1 + 1e-12:
        raise InfeasibleError(
            f"pilots exceed coherence block: beta*k = {pt.beta * pt.k:.3f} > S = {prop.block_len}"
        )
    prelog = max(0.0, 1.0 - overhead)
    return prelog * math.log2(1 + sinr_lower_bound(pt, prop))


def area_spectral_efficiency(pt: OperatingPoint, prop: PropagationModel) -> float:
    """ASE = lam * k * SE, bit/symbol/km^2."""
    return pt.lam * pt.k * se_lower_bound(pt, prop)


def average_uplink_power(pt: OperatingPoint, prop: PropagationModel) -> float:
    """Mean UE transmit power under statistical channel inversion, Joule/symbol."""
    pt.validate_density()
    a = prop.alpha
    return pt.rho * prop.omega * math.gamma(a / 2 + 1) / (math.pi * pt.lam) ** (a / 2)


def area_energy_consumption(
    pt: OperatingPoint, prop: PropagationModel, hw: HardwareModel
) -> float:
    """AEC: radiated plus circuit energy per area, Joule/symbol/km^2."""
    S = prop.block_len
    if pt.rho == 0 or math.isinf(pt.rho):
        radiated = 0.0
    else:
        radiated = (
            (S - pt.beta * pt.k + 1) / S
            * average_uplink_power(pt, prop) / hw.eta
            * pt.k
        )
    circuit = hw.c0 + hw.c1 * pt.k + hw.d0 * pt.m + hw.d1 * pt.m * pt.k
    return pt.lam * (radiated + circuit)


def energy_efficiency(
    pt: OperatingPoint, prop: PropagationModel, hw: HardwareModel
) -> EEReport:
    """Assemble the full report at a finite-density operating point."""
    sinr = sinr_lower_bound(pt, prop)
    overhead_ok = pt.beta * pt.k <= prop.block_len + 1e-12
    se = se_lower_bound(pt, prop) if overhead_ok else 0.0
    ase = pt.lam * pt.k * se
    aec = area_energy_consumption(pt, prop, hw)
    if aec <= 0:
        raise DegenerateModelError("area energy consumption is zero")
    return EEReport(
        sinr=sinr,
        se_per_ue=se,
        ase=ase,
        aec=aec,
        ee=ase / aec,
        feasible=bool(sinr >= pt.gamma - 1e-12 and pt.beta >= 1 and overhead_ok),
    )


# ---------------------------------------------------------------------------
# Asymptotic (infinite-density, infinite-power) regime


def b1bar(m: float, k: float, prop: PropagationModel) -> float:
    a = prop.alpha
    return k * (4 / (a - 2) ** 2 + 1 / (a - 1) + 2 / (a - 2)) + m / (a - 1)


def b2bar(k: float, prop: PropagationModel) -> float:
    return k * (1 + 2 / (prop.alpha - 2))


def asymptotic_objective(
    m: float, k: float, gamma: float, prop: PropagationModel, hw: HardwareModel
) -> float:
    """Infinite-density EE objective, bit/Joule.

    The density factor cancels and the radiated energy vanishes, leaving a
    per-cell rate over per-cell circuit energy.  The pilot reuse factor is
    implicitly set to the value that meets the SINR target with equality.
    May return a negative value when the pilot overhead would exceed the
    block; callers treat nonpositive values as infeasible.
    """
    if k <= 0:
        raise ParameterError("k must be positive")
    margin = m - b2bar(k, prop) * gamma
    if margin <= 0:
        raise InfeasibleError(
            f"SINR target {gamma} unreachable at m = {m}: need m > {b2bar(k, prop) * gamma:.3f}"
        )
    S = prop.block_len
    prelog = 1 - (k / S) * b1bar(m, k, prop) * gamma / margin
    energy = hw.c0 + hw.c1 * k + hw.d0 * m + hw.d1 * m * k
    return k * prelog * math.log2(1 + gamma) / energy
