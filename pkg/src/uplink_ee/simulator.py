"""Monte Carlo validation of the stochastic-geometry closed forms.

Geometry follows the typical-UE construction: the serving distance is
Rayleigh distributed, the remaining BSs form a PPP outside that radius,
and each cell reusing the typical pilot is flagged independently.  The
interference expectations are estimated from the typical UE's own
geometry (its serving distance against the interfering-BS radii), which
is the exchange-symmetric form whose mean the closed-form constants equal
exactly; a per-realization analytic tail removes the window-truncation
bias.  Full planar realizations with cell-uniform UE placement are also
available for inspection and diagnostics.

All estimators run in fixed-size realization chunks with per-chunk
counter-based RNG streams, so results are bit-identical for any degree of
parallelism.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import spatial, stats

from .model import ParameterError, PropagationModel

CHUNK = 4096
THREADS_ENV = "UPLINK_EE_THREADS"


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, index))))


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo settings plus the operating point under test."""

    realization_count: int
    window_radius: float          # km
    seed: int
    lam: float                    # BS/km^2
    m: float
    k: float
    beta: float
    rho: float                    # Joule/symbol, may be inf
    gamma: float

    def __post_init__(self):
        if self.realization_count < 1:
            raise ParameterError("need at least one realization")
        if self.window_radius <= 0 or self.lam <= 0:
            raise ParameterError("window radius and density must be positive")

    def rayleigh_scale(self) -> float:
        return 1.0 / math.sqrt(2 * math.pi * self.lam)

    def truncation_bound(self, prop: PropagationModel) -> float:
        """Analytic out-of-window interference, relative to the in-model mean.

        Ratio of the expected interference from beyond the window to the
        per-pilot closed-form value 2/(alpha-2).
        """
        a = prop.alpha
        mean_da = math.gamma(a / 2 + 1) / (math.pi * self.lam) ** (a / 2)
        tail = 2 * math.pi * self.lam * mean_da * self.window_radius ** (2 - a) / (a - 2)
        return tail / (2 / (a - 2))


def default_window_radius(lam: float, prop: PropagationModel, rel_bound: float = 0.01) -> float:
    """Smallest window whose analytic truncation bound meets `rel_bound`."""
    a = prop.alpha
    mean_da = math.gamma(a / 2 + 1) / (math.pi * lam) ** (a / 2)
    return (math.pi * lam * mean_da / rel_bound) ** (1 / (a - 2))


# ---------------------------------------------------------------------------
# Full planar geometry (inspection / diagnostics)


@dataclass(frozen=True)
class UERecord:
    own_cell_distance: float      # km, to the serving BS of its cell
    distance_to_typical_bs: float # km, to the typical UE's serving BS


@dataclass(frozen=True)
class InterfererRecord:
    bs_distance_to_origin: float
    ue_records: tuple
    pilot_collision: bool


@dataclass(frozen=True)
class GeometryRealization:
    serving_distance: float
    interferers: tuple


def sample_geometry(
    cfg: McConfig,
    rng: np.random.Generator,
    max_attempts: int = 1000,
) -> GeometryRealization:
    """One full planar draw with cell-uniform UE placement.

    UEs of each interfering cell are rejection-sampled uniformly over that
    BS's Voronoi cell within the window (candidates from a disk around the
    BS, accepted when the BS is their nearest).  After `max_attempts`
    failed candidates the nearest-miss candidate is kept.
    """
    R = cfg.window_radius
    d0 = float(rng.rayleigh(cfg.rayleigh_scale()))
    if d0 >= R:
        raise ParameterError(
            f"serving distance draw {d0:.3f} km exceeds window radius {R} km; enlarge the window"
        )
    bs0 = np.array([d0, 0.0])
    n = rng.poisson(cfg.lam * math.pi * (R * R - d0 * d0))
    radii = np.sqrt(d0 * d0 + rng.random(n) * (R * R - d0 * d0))
    angles = rng.random(n) * 2 * math.pi
    bs = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    all_bs = np.vstack([bs0[None, :], bs])
    tree = spatial.cKDTree(all_bs)
    k = int(round(cfg.k))
    prop_radius = 3.0 / math.sqrt(cfg.lam)
    records = []
    for j in range(n):
        accepted = []              # (x, y) pairs uniform over cell j's region
        best_pt, best_margin = None, -math.inf
        attempts = 0
        while len(accepted) < k and attempts < max_attempts:
            batch = max(4 * (k - len(accepted)), 32)
            attempts += batch
            ang = rng.random(batch) * 2 * math.pi
            rad = prop_radius * np.sqrt(rng.random(batch))
            pts = bs[j] + np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
            nearest_dist, nearest_idx = tree.query(pts)
            hit = nearest_idx == j + 1
            accepted.extend(pts[hit][: k - len(accepted)])
            if not hit.all():
                own = np.hypot(pts[~hit, 0] - bs[j, 0], pts[~hit, 1] - bs[j, 1])
                margin = nearest_dist[~hit] - own
                i = int(np.argmax(margin))
                if margin[i] > best_margin:
                    best_margin, best_pt = float(margin[i]), pts[~hit][i]
        while len(accepted) < k:
            accepted.append(best_pt)
        ues = tuple(
            UERecord(
                own_cell_distance=float(np.hypot(*(pt - bs[j]))),
                distance_to_typical_bs=float(np.hypot(*(pt - bs0))),
            )
            for pt in accepted
        )
        records.append(
            InterfererRecord(
                bs_distance_to_origin=float(radii[j]),
                ue_records=ues,
                pilot_collision=bool(rng.random() < 1.0 / cfg.beta),
            )
        )
    return GeometryRealization(serving_distance=d0, interferers=tuple(records))


# ---------------------------------------------------------------------------
# Vectorized radial engine


@dataclass
class _ChunkSums:
    n: int = 0
    serving: np.ndarray = None          # serving distances of the chunk
    term_a: np.ndarray = None           # collision ratio sum, alpha power
    term_b: np.ndarray = None           # all-cells ratio sum, alpha power
    term_c: np.ndarray = None           # collision ratio sum, 2*alpha power
    count: np.ndarray = None            # interferers in window


def _simulate_chunk(cfg: McConfig, prop: PropagationModel, index: int, size: int) -> _ChunkSums:
    rng = _chunk_rng(cfg.seed, index)
    a = prop.alpha
    lam, R, beta = cfg.lam, cfg.window_radius, cfg.beta
    d = rng.rayleigh(cfg.rayleigh_scale(), size)
    inner = np.minimum(d, R)
    counts = rng.poisson(lam * math.pi * (R * R - inner * inner))
    total = int(counts.sum())
    idx = np.repeat(np.arange(size), counts)
    u = rng.random(total)
    r = np.sqrt(inner[idx] ** 2 + u * (R * R - inner[idx] ** 2))
    chi = rng.random(total) < 1.0 / beta
    ratio = (d[idx] / r) ** a
    ratio2 = (d[idx] / r) ** (2 * a)
    term_a = np.bincount(idx, weights=ratio * chi, minlength=size)
    term_b = np.bincount(idx, weights=ratio, minlength=size)
    term_c = np.bincount(idx, weights=ratio2 * chi, minlength=size)
    # exact conditional mean of the out-of-window contribution
    r0 = np.maximum(d, R)
    tail_a = 2 * math.pi * lam * d ** a * r0 ** (2 - a) / (a - 2)
    tail_c = 2 * math.pi * lam * d ** (2 * a) * r0 ** (2 - 2 * a) / (2 * a - 2)
    term_a = term_a + tail_a / beta
    term_b = term_b + tail_a
    term_c = term_c + tail_c / beta
    return _ChunkSums(n=size, serving=d, term_a=term_a, term_b=term_b, term_c=term_c, count=counts)


def _run_chunks(cfg: McConfig, prop: PropagationModel) -> _ChunkSums:
    n = cfg.realization_count
    sizes = [(i, min(CHUNK, n - i * CHUNK)) for i in range((n + CHUNK - 1) // CHUNK)]
    workers = _thread_count()
    if workers == 1:
        chunks = [_simulate_chunk(cfg, prop, i, s) for i, s in sizes]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda t: _simulate_chunk(cfg, prop, t[0], t[1]), sizes))
    out = _ChunkSums(
        n=n,
        serving=np.concatenate([c.serving for c in chunks]),
        term_a=np.concatenate([c.term_a for c in chunks]),
        term_b=np.concatenate([c.term_b for c in chunks]),
        term_c=np.concatenate([c.term_c for c in chunks]),
        count=np.concatenate([c.count for c in chunks]),
    )
    return out


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    reference: float

    @property
    def z_score(self) -> float:
        return (self.value - self.reference) / self.std_error if self.std_error else math.inf

    @property
    def rel_error(self) -> float:
        return self.value / self.reference - 1.0


def _estimate(samples: np.ndarray, reference: float) -> Estimate:
    return Estimate(
        value=float(samples.mean()),
        std_error=float(samples.std(ddof=1) / math.sqrt(len(samples))),
        reference=reference,
    )


def estimate_serving_distance(cfg: McConfig, prop: PropagationModel):
    """Serving-distance draws plus the KS statistic against the Rayleigh law."""
    sums = _run_chunks(cfg, prop)
    ks = stats.kstest(sums.serving, "rayleigh", args=(0, cfg.rayleigh_scale()))
    return sums.serving, ks


def estimate_average_power(cfg: McConfig, prop: PropagationModel) -> Estimate:
    """MC mean of the channel-inversion transmit power against its closed form.

    Every UE's serving distance follows the typical-UE law, so the serving
    draws across realizations are the own-cell distance sample.
    """
    a = prop.alpha
    sums = _run_chunks(cfg, prop)
    power = cfg.rho * prop.omega * sums.serving ** a
    reference = cfg.rho * prop.omega * math.gamma(a / 2 + 1) / (math.pi * cfg.lam) ** (a / 2)
    return _estimate(power, reference)


@dataclass(frozen=True)
class TermEstimates:
    """The three geometry expectations aggregated by the SINR denominator."""

    collision_alpha: Estimate      # vs 2/(beta*(alpha-2))
    all_cells_alpha: Estimate      # vs 2K/(alpha-2)
    collision_2alpha: Estimate     # vs 1/(beta*(alpha-1))


def estimate_sinr_denominator_terms(cfg: McConfig, prop: PropagationModel) -> TermEstimates:
    a = prop.alpha
    sums = _run_chunks(cfg, prop)
    return TermEstimates(
        collision_alpha=_estimate(sums.term_a, 2 / (cfg.beta * (a - 2))),
        all_cells_alpha=_estimate(cfg.k * sums.term_b, 2 * cfg.k / (a - 2)),
        collision_2alpha=_estimate(sums.term_c, 1 / (cfg.beta * (a - 1))),
    )


def closed_form_denominator(cfg: McConfig, prop: PropagationModel) -> float:
    a = prop.alpha
    s = prop.noise / cfg.rho
    k, beta, m = cfg.k, cfg.beta, cfg.m
    return (
        (k + s) * (1 + 2 / (beta * (a - 2)) + s)
        + 2 * k / (a - 2) * (1 + s)
        + k / beta * (4 / (a - 2) ** 2 + 1 / (a - 1))
        + m / (beta * (a - 1))
    )


@dataclass(frozen=True)
class EmpiricalSE:
    mean: float
    ci95: tuple
    closed_form: float

    @property
    def gap(self) -> float:
        return self.mean / self.closed_form - 1.0


def simulate_empirical_se(cfg: McConfig, prop: PropagationModel) -> EmpiricalSE:
    """Geometry-conditional SE averaged over realizations.

    The pilot-contamination slots of the SINR denominator are evaluated on
    each realization (the second-moment slot linearized so the conditional
    denominator stays mean-exact); the aggregate data-interference slot
    keeps its analytic mean.  The average is then an upper bound on the
    closed-form SE by convexity.
    """
    a = prop.alpha
    s = prop.noise / cfg.rho
    k, beta, m = cfg.k, cfg.beta, cfg.m
    S = prop.block_len
    sums = _run_chunks(cfg, prop)
    denom = (
        (k + s) * (1 + sums.term_a + s)
        + 2 * k / (a - 2) * (1 + s)
        + k * sums.term_a * 2 / (a - 2) + k / (beta * (a - 1))
        + m * sums.term_c
    )
    prelog = 1 - beta * k / S
    se = prelog * np.log2(1 + m / denom)
    mean = float(se.mean())
    half = 1.96 * float(se.std(ddof=1) / math.sqrt(len(se)))
    closed = prelog * math.log2(1 + m / closed_form_denominator(cfg, prop))
    return EmpiricalSE(mean=mean, ci95=(mean - half, mean + half), closed_form=closed)


# ---------------------------------------------------------------------------
# Signal-level (fading) simulation


@dataclass(frozen=True)
class SignalLevelReport:
    error_variance_rel: float        # relative error of the estimation-error variance
    error_variance_tol: float        # 3-sigma MC tolerance for it
    estimate_error_corr: float       # empirical estimate/error correlation
    corr_tol: float
    gain_over_target: Estimate       # E[p * |h|^2] / (M * rho) vs 1
    sample_count: int


def simulate_signal_level(
    cfg: McConfig,
    prop: PropagationModel,
    fading_draws: int = 256,
    geometry_draws: int = 64,
    budget: int = 50_000_000,
) -> SignalLevelReport:
    """Generate pilots, MMSE estimates and MRC statistics and validate them.

    Checks, per realized geometry: the per-antenna estimation-error
    variance against its conditional closed form; the orthogonality of the
    estimate and the estimation error; and the mean effective channel gain
    of the channel-inversion policy.
    """
    m = int(round(cfg.m))
    while fading_draws * geometry_draws * m > budget and fading_draws > 8:
        fading_draws //= 2
    a = prop.alpha
    s = prop.noise / cfg.rho
    rng = _chunk_rng(cfg.seed, 1_000_003)

    err_rel = []
    err_tol = []
    cross_sum = 0.0
    cross_sumsq = 0.0
    nsamp = 0
    for _ in range(geometry_draws):
        d = float(rng.rayleigh(cfg.rayleigh_scale()))
        R = cfg.window_radius
        n = rng.poisson(cfg.lam * math.pi * max(R * R - d * d, 0.0))
        r = np.sqrt(d * d + rng.random(n) * (R * R - d * d))
        chi = rng.random(n) < 1.0 / cfg.beta
        ratios = (d / r[chi]) ** a          # received contaminator power over rho
        contamination = float(ratios.sum())
        var_h = 1.0 / (prop.omega * d ** a)     # per-antenna variance of the serving channel
        # pilot observation scaled by 1/sqrt(rho): amp*h + contamination + scaled noise
        nf = fading_draws
        shape = (nf, m)
        amp = math.sqrt(prop.omega * d ** a)
        h = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(var_h / 2)
        z = amp * h
        if contamination > 0:
            g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            z = z + math.sqrt(contamination / 2) * g
        if not math.isinf(cfg.rho):
            w = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            z = z + math.sqrt(s / 2) * w
        denom = 1 + contamination + s
        h_hat = z / (amp * denom)
        delta = h - h_hat
        emp_var = float(np.mean(np.abs(delta) ** 2))
        ref_var = var_h * (1 - 1 / denom)
        if ref_var > 0:
            err_rel.append(emp_var / ref_var - 1.0)
            # |delta|^2 entries are exponential: relative sd of the mean is 1/sqrt(count)
            err_tol.append(3.0 / math.sqrt(nf * m))
        x = np.real(h_hat * np.conj(delta)).ravel() / var_h
        cross_sum += float(x.sum())
        cross_sumsq += float((x * x).sum())
        nsamp += nf * m
    # effective channel gain under channel inversion: p * |h|^2 with p = rho*omega*d^a
    gains = []
    per = 4096
    draws = max(1, 100_000 // per)
    for _ in range(draws):
        d = rng.rayleigh(cfg.rayleigh_scale(), per)
        var = 1.0 / (prop.omega * d ** a)
        h = (rng.standard_normal((per, m)) + 1j * rng.standard_normal((per, m)))
        norm2 = np.sum(np.abs(h) ** 2, axis=1) * var / 2
        # rho cancels between the power policy and the target, so the ratio
        # is well defined even in the noise-free limit
        gains.append(prop.omega * d ** a * norm2 / m)
    gains = np.concatenate(gains)
    cross_mean = cross_sum / nsamp
    cross_se = math.sqrt(max(cross_sumsq / nsamp - cross_mean**2, 0.0) / nsamp)
    return SignalLevelReport(
        error_variance_rel=float(np.mean(np.abs(err_rel))),
        error_variance_tol=float(np.mean(err_tol)),
        estimate_error_corr=cross_mean,
        corr_tol=3.0 * cross_se,
        gain_over_target=_estimate(gains, 1.0),
        sample_count=nsamp,
    )
