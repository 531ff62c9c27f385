"""Command-line front end.

Subcommands:
  evaluate   metrics at one operating point
  optimize   energy-efficiency maximization (asymptotic or per-UE-density)
  sweep      curves over a density / load axis, emitted as CSV
  simulate   Monte-Carlo validation of the closed-form bounds

Exit codes: 0 success, 1 usage/config error, 2 infeasible target.
CSV output carries '#'-prefixed metadata lines (config provenance, seed)
followed by a header row; numeric cells use the configured precision.
"""

from __future__ import annotations

import argparse
import io
import math
import sys

from . import model, optimizer, simulator
from .config import ConfigError, RunConfig, load_config, parse_grid, scenario_float
from .model import InfeasibleError, ParameterError

MBIT = 1e6


def _fmt(x, precision: int) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return f"{x:.{precision}g}"
    return str(x)


class CsvWriter:
    """CSV with commented metadata preamble."""

    def __init__(self, precision: int):
        self.precision = precision
        self.buf = io.StringIO()

    def meta(self, key: str, value) -> None:
        self.buf.write(f"# {key}: {value}\n")

    def header(self, columns) -> None:
        self.buf.write(",".join(columns) + "\n")

    def row(self, cells) -> None:
        self.buf.write(",".join(_fmt(c, self.precision) for c in cells) + "\n")

    def dump(self, path: str) -> None:
        text = self.buf.getvalue()
        if path:
            with open(path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _standard_meta(writer: CsvWriter, cfg: RunConfig, args, extra=()) -> None:
    writer.meta("command", args.command)
    writer.meta("config", args.config or "<defaults>")
    writer.meta("gamma", cfg.scenario["gamma"])
    writer.meta("seed", cfg.scenario["seed"])
    if cfg.defaulted:
        writer.meta("defaulted", " ".join(cfg.defaulted))
    for key, value in extra:
        writer.meta(key, value)


def _load(args) -> RunConfig:
    overrides = {}
    if args.gamma is not None:
        overrides["scenario.gamma"] = args.gamma
    if getattr(args, "seed", None) is not None:
        overrides["scenario.seed"] = args.seed
    cfg = load_config(args.config, overrides)
    if args.out:
        cfg.csv_path = args.out
    return cfg


def _gamma(cfg: RunConfig) -> float:
    g = scenario_float(cfg, "gamma")
    if g is None or g <= 0:
        raise ConfigError("gamma must be positive")
    return g


def _operating_point(cfg: RunConfig, gamma: float):
    """Resolve (m, k, beta, rho, lam) with defaulting for evaluate.

    Absent lambda or rho means the dense/noise-free asymptotic regime.
    Absent beta means the exact-target reuse factor for the given gamma.
    """
    m = scenario_float(cfg, "m", 89.0)
    k = scenario_float(cfg, "k", 10.0)
    rho = scenario_float(cfg, "rho", math.inf)
    lam = scenario_float(cfg, "lambda", math.inf)
    beta = scenario_float(cfg, "beta")
    if beta is None:
        sol = optimizer.optimal_pilot_reuse(m, k, rho, gamma, cfg.propagation)
        beta = max(sol.beta_star, 1.0)
    return m, k, beta, rho, lam


def _evaluate_point(cfg: RunConfig, gamma: float, m, k, beta, rho, lam):
    """EEReport for a point; dense-limit mode normalizes per base station."""
    point = model.OperatingPoint(lam=lam, m=m, k=k, beta=beta, rho=rho, gamma=gamma)
    if math.isinf(lam):
        sinr = model.sinr_lower_bound(point, cfg.propagation)
        se = model.se_lower_bound(point, cfg.propagation)
        hw = cfg.hardware
        energy = hw.c0 + hw.c1 * k + hw.d0 * m + hw.d1 * m * k
        return model.EEReport(
            sinr=sinr, se_per_ue=se, ase=k * se, aec=energy,
            ee=k * se / energy,
            feasible=bool(sinr >= gamma - 1e-12
                          and beta * k <= cfg.propagation.block_len + 1e-12),
        )
    return model.energy_efficiency(point, cfg.propagation, cfg.hardware)


def cmd_evaluate(args) -> int:
    cfg = _load(args)
    gamma = _gamma(cfg)
    m, k, beta, rho, lam = _operating_point(cfg, gamma)
    report = _evaluate_point(cfg, gamma, m, k, beta, rho, lam)

    writer = CsvWriter(cfg.precision)
    _standard_meta(writer, cfg, args, extra=[
        ("mode", "dense-limit" if math.isinf(lam) else "finite-density"),
    ])
    writer.header(["m", "k", "beta", "rho", "lambda",
                   "sinr", "se_per_ue", "ase", "aec", "ee", "feasible"])
    writer.row([m, k, beta, rho, lam, report.sinr, report.se_per_ue,
                report.ase, report.aec, report.ee, report.feasible])
    writer.dump(cfg.csv_path)

    print(f"SINR lower bound: {report.sinr:.4f}  "
          f"(target {gamma:g})", file=sys.stderr)
    print(f"Spectral efficiency per UE: {report.se_per_ue:.4f} bit/symbol",
          file=sys.stderr)
    print(f"Energy efficiency: {report.ee / MBIT:.4f} Mbit/J", file=sys.stderr)
    if not report.feasible:
        if beta * k > cfg.propagation.block_len:
            print("infeasible: pilots exceed coherence block "
                  f"(beta*k = {beta * k:.1f} > {cfg.propagation.block_len})",
                  file=sys.stderr)
        else:
            print("infeasible: SINR bound falls short of the target",
                  file=sys.stderr)
        return 2
    return 0


def cmd_optimize(args) -> int:
    cfg = _load(args)
    gamma = _gamma(cfg)
    prop, hw = cfg.propagation, cfg.hardware
    writer = CsvWriter(cfg.precision)
    mu = scenario_float(cfg, "mu")
    if mu is not None:
        opt, lam, rho = optimizer.optimize_for_ue_density(
            mu, gamma, prop, hw,
            m_max=int(scenario_float(cfg, "m_max", 512.0)),
        )
        _standard_meta(writer, cfg, args, extra=[("mode", "ue-density"), ("mu", mu)])
        writer.header(["m", "k", "beta", "rho", "lambda", "ee"])
        writer.row([opt.m, opt.k, opt.beta, rho, lam, opt.ee])
        writer.dump(cfg.csv_path)
        print(f"Optimum at UE density {mu:g}/km^2: M={opt.m} K={opt.k} "
              f"beta={opt.beta:.3f} lambda={lam:.3f}/km^2 rho={rho:.3e} J/symbol",
              file=sys.stderr)
        print(f"Energy efficiency: {opt.ee / MBIT:.4f} Mbit/J", file=sys.stderr)
        return 0

    start_m = scenario_float(cfg, "start_m", 20.0)
    start_k = scenario_float(cfg, "start_k", 1.0)
    relaxed = optimizer.alternating_optimize(start_m, start_k, gamma, prop, hw)
    integer = optimizer.integer_refine(relaxed, gamma, prop, hw)
    _standard_meta(writer, cfg, args, extra=[("mode", "dense-limit")])
    writer.header(["stage", "m", "k", "beta", "ee"])
    beta_relaxed = optimizer.optimal_pilot_reuse(
        relaxed.m_star, relaxed.k_star, math.inf, gamma, prop).beta_star
    writer.row(["relaxed", relaxed.m_star, relaxed.k_star, beta_relaxed, relaxed.ee])
    writer.row(["integer", integer.m, integer.k, integer.beta, integer.ee])
    writer.dump(cfg.csv_path)

    for i, (m_t, k_t, ee_t) in enumerate(relaxed.trajectory):
        print(f"  iteration {i}: M={m_t:.2f} K={k_t:.2f} "
              f"EE={ee_t / MBIT:.4f} Mbit/J", file=sys.stderr)
    print(f"Relaxed optimum: M={relaxed.m_star:.2f} K={relaxed.k_star:.2f} "
          f"EE={relaxed.ee / MBIT:.4f} Mbit/J "
          f"({relaxed.iterations} alternating iterations)", file=sys.stderr)
    print(f"Integer optimum: M={integer.m} K={integer.k} beta={integer.beta:.3f} "
          f"EE={integer.ee / MBIT:.4f} Mbit/J", file=sys.stderr)
    return 0


SWEEP_COLUMNS = ["value", "curve", "m", "k", "beta", "rho", "lambda",
                 "sinr", "se", "ase", "aec", "ee", "feasible"]


def _sweep_row(writer, value, curve, m, k, beta, rho, lam, report):
    writer.row([value, curve, m, k, beta, rho, lam, report.sinr,
                report.se_per_ue, report.ase, report.aec, report.ee,
                report.feasible])


def _sweep_lambda(cfg: RunConfig, gamma: float, writer: CsvWriter) -> None:
    prop, hw = cfg.propagation, cfg.hardware
    grid = parse_grid(cfg.scenario["lambda_grid"])
    m = scenario_float(cfg, "m")
    k = scenario_float(cfg, "k")
    if m is None or k is None:
        relaxed = optimizer.alternating_optimize(20.0, 1.0, gamma, prop, hw)
        integer = optimizer.integer_refine(relaxed, gamma, prop, hw)
        m, k = float(integer.m), float(integer.k)
    writer.meta("m", int(m))
    writer.meta("k", int(k))
    writer.header(SWEEP_COLUMNS)
    for lam in grid:
        rho, report = optimizer.optimize_rho_finite_lambda(lam, int(m), int(k), gamma, prop, hw)
        sol = optimizer.optimal_pilot_reuse(m, k, rho, gamma, prop)
        _sweep_row(writer, lam, "optimized-rho", int(m), int(k),
                   max(sol.beta_star, 1.0), rho, lam, report)


def _sweep_mu(cfg: RunConfig, gamma: float, writer: CsvWriter) -> None:
    prop, hw = cfg.propagation, cfg.hardware
    grid = parse_grid(cfg.scenario["mu_grid"])
    m_max = int(scenario_float(cfg, "m_max", 512.0))
    references = [(10, 1), (89, 10)]
    writer.header(SWEEP_COLUMNS)
    for mu in grid:
        opt, lam, rho = optimizer.optimize_for_ue_density(mu, gamma, prop, hw, m_max=m_max)
        report = optimizer.ee_at_density(lam, opt.m, opt.k, rho, gamma, prop, hw)
        _sweep_row(writer, mu, "optimized", opt.m, opt.k, opt.beta, rho, lam, report)
        for (m_ref, k_ref) in references:
            lam_ref = mu / k_ref
            rho_ref, rep_ref = optimizer.optimize_rho_finite_lambda(
                lam_ref, m_ref, k_ref, gamma, prop, hw)
            sol = optimizer.optimal_pilot_reuse(m_ref, k_ref, rho_ref, gamma, prop)
            _sweep_row(writer, mu, f"reference-{m_ref}x{k_ref}", m_ref, k_ref,
                       max(sol.beta_star, 1.0), rho_ref, lam_ref, rep_ref)


def _sweep_mk_surface(cfg: RunConfig, gamma: float, writer: CsvWriter) -> None:
    prop, hw = cfg.propagation, cfg.hardware
    m_grid = parse_grid(cfg.scenario["m_grid"])
    k_grid = parse_grid(cfg.scenario["k_grid"])
    writer.header(SWEEP_COLUMNS)
    for m in m_grid:
        for k in k_grid:
            try:
                ee = optimizer._objective_or_none(m, k, gamma, prop, hw)
            except InfeasibleError:
                ee = None
            if ee is None or ee <= 0:
                writer.row([m, "dense-limit", m, k, float("nan"), math.inf,
                            math.inf, float("nan"), 0.0, 0.0, float("nan"),
                            0.0, False])
                continue
            beta = optimizer.optimal_pilot_reuse(m, k, math.inf, gamma, prop).beta_star
            energy = (hw.c0 + hw.c1 * k + hw.d0 * m + hw.d1 * m * k)
            se = ee * energy / k
            writer.row([m, "dense-limit", m, k, beta, math.inf, math.inf,
                        gamma, se, k * se, energy, ee,
                        beta >= 1 and beta * k <= prop.block_len])


def cmd_sweep(args) -> int:
    cfg = _load(args)
    gamma = _gamma(cfg)
    writer = CsvWriter(cfg.precision)
    _standard_meta(writer, cfg, args, extra=[("axis", args.axis)])
    if args.axis == "lambda":
        _sweep_lambda(cfg, gamma, writer)
    elif args.axis == "mu":
        _sweep_mu(cfg, gamma, writer)
    else:
        _sweep_mk_surface(cfg, gamma, writer)
    writer.dump(cfg.csv_path)
    return 0


def _mc_config(cfg: RunConfig, gamma: float) -> simulator.McConfig:
    lam = scenario_float(cfg, "lambda", 10.0)
    m = scenario_float(cfg, "m", 89.0)
    k = scenario_float(cfg, "k", 10.0)
    rho = scenario_float(cfg, "rho", math.inf)
    beta = scenario_float(cfg, "beta")
    if beta is None:
        sol = optimizer.optimal_pilot_reuse(m, k, rho, gamma, cfg.propagation)
        beta = max(sol.beta_star, 1.0)
    radius = scenario_float(cfg, "window_radius")
    if radius is None:
        radius = simulator.default_window_radius(lam, cfg.propagation)
    return simulator.McConfig(
        realization_count=int(scenario_float(cfg, "realization_count", 1e5)),
        window_radius=radius,
        seed=int(scenario_float(cfg, "seed", 42.0)),
        lam=lam, m=int(m), k=int(k), beta=beta, rho=rho, gamma=gamma,
    )


def cmd_simulate(args) -> int:
    cfg = _load(args)
    gamma = _gamma(cfg)
    mc = _mc_config(cfg, gamma)
    prop = cfg.propagation
    checks = []   # (name, status, detail)
    small = mc.realization_count < 10_000   # statistical checks inconclusive

    bound = mc.truncation_bound(prop)
    checks.append(("window-truncation", "pass" if bound <= 0.01 else "fail",
                   f"neglected interference fraction bound {bound:.3e}"))

    serving, ks = simulator.estimate_serving_distance(mc, prop)
    scale = mc.rayleigh_scale()
    dist_mean = simulator._estimate(serving, scale * math.sqrt(math.pi / 2))
    ks_ok = ks.pvalue > 0.01
    checks.append(("serving-distance", _status(ks_ok, small),
                   f"KS p-value {ks.pvalue:.4f}, "
                   f"mean {dist_mean.value:.4f} vs {dist_mean.reference:.4f} km"))

    writer = CsvWriter(cfg.precision)
    _standard_meta(writer, cfg, args, extra=[
        ("lambda", mc.lam), ("m", mc.m), ("k", mc.k),
        ("beta", f"{mc.beta:.10g}"), ("realizations", mc.realization_count),
        ("window_radius", f"{mc.window_radius:.6g}"),
    ])
    writer.header(["check", "estimate", "std_error", "reference", "z"])
    writer.row(["serving_distance_mean", dist_mean.value, dist_mean.std_error,
                dist_mean.reference, dist_mean.z_score])

    if math.isfinite(mc.rho):
        power = simulator.estimate_average_power(mc, prop)
        ok = abs(power.z_score) < 3
        checks.append(("average-power", _status(ok, small),
                       f"{power.value:.4e} vs {power.reference:.4e} J/symbol "
                       f"(z={power.z_score:+.2f})"))
        writer.row(["average_power", power.value, power.std_error,
                    power.reference, power.z_score])
    else:
        checks.append(("average-power", "skip", "noise-free mode (no finite power)"))

    terms = simulator.estimate_sinr_denominator_terms(mc, prop)
    term_ok = True
    for name, est in [("collision_alpha", terms.collision_alpha),
                      ("all_cells_alpha", terms.all_cells_alpha),
                      ("collision_2alpha", terms.collision_2alpha)]:
        term_ok &= abs(est.z_score) < 3
        writer.row([name, est.value, est.std_error, est.reference, est.z_score])
    checks.append(("denominator-terms", _status(term_ok, small),
                   "z-scores "
                   f"{terms.collision_alpha.z_score:+.2f}/"
                   f"{terms.all_cells_alpha.z_score:+.2f}/"
                   f"{terms.collision_2alpha.z_score:+.2f}"))

    emp = simulator.simulate_empirical_se(mc, prop)
    half = (emp.ci95[1] - emp.ci95[0]) / 2
    jensen_ok = emp.ci95[1] >= emp.closed_form and emp.gap <= 0.10
    checks.append(("empirical-se", _status(jensen_ok, small),
                   f"empirical {emp.mean:.4f} >= closed {emp.closed_form:.4f}, "
                   f"gap {100 * emp.gap:.2f}%"))
    writer.row(["empirical_se", emp.mean, half / 1.96, emp.closed_form,
                (emp.mean - emp.closed_form) / (half / 1.96) if half else float("inf")])

    sig = simulator.simulate_signal_level(mc, prop)
    sig_ok = (sig.error_variance_rel <= sig.error_variance_tol
              and abs(sig.estimate_error_corr) <= sig.corr_tol
              and abs(sig.gain_over_target.rel_error) < 0.01)
    checks.append(("signal-level", _status(sig_ok, small),
                   f"error-variance dev {sig.error_variance_rel:.4f} "
                   f"(tol {sig.error_variance_tol:.4f}), "
                   f"orthogonality {sig.estimate_error_corr:+.2e}, "
                   f"effective gain dev {sig.gain_over_target.rel_error:+.4f}"))
    writer.row(["signal_gain", sig.gain_over_target.value,
                sig.gain_over_target.std_error, 1.0, sig.gain_over_target.z_score])

    writer.dump(cfg.csv_path)
    failed = False
    for name, status, detail in checks:
        print(f"[{status.upper():^12}] {name}: {detail}", file=sys.stderr)
        failed |= status == "fail"
    return 1 if failed else 0


def _status(ok: bool, small_sample: bool) -> str:
    if ok:
        return "pass"
    return "inconclusive" if small_sample else "fail"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uplink-ee",
        description="Uplink energy-efficiency analysis for random cellular networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, doc in [
        ("evaluate", cmd_evaluate, "metrics at one operating point"),
        ("optimize", cmd_optimize, "maximize energy efficiency"),
        ("sweep", cmd_sweep, "1-D or 2-D metric curves as CSV"),
        ("simulate", cmd_simulate, "Monte-Carlo validation checks"),
    ]:
        cmd = sub.add_parser(name, help=doc)
        cmd.add_argument("--config", default=None, help="INI configuration file")
        cmd.add_argument("--gamma", default=None, type=float, help="target SINR (linear)")
        cmd.add_argument("--out", default=None, help="CSV output path (default stdout)")
        if name == "sweep":
            cmd.add_argument("--axis", required=True,
                             choices=["lambda", "mu", "mk_surface"],
                             help="sweep variable")
        if name == "simulate":
            cmd.add_argument("--seed", default=None, type=int, help="base RNG seed")
        cmd.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (InfeasibleError,) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
