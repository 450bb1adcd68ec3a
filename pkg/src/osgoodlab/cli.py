"""Command-line scenario runner.

Every subcommand reads one scenario file, writes plain-text or CSV reports
into the output directory and exits with 0 (all checks pass), 1 (a check
failed) or 2 (configuration error).  Reports never depend on the thread
count, so runs with ``--threads 1`` and ``--threads 8`` are byte-identical.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .config import ConfigError, load_config
from .estimator import (AdmissibilityError, SearchFailure, choose_beta, explicit_bound_sec4,
                        global_bound_G, integral_estimate_check, local_bound,
                        local_estimate_check, pointwise_estimate_check, sandwich_check,
                        select_constants)
from .modulus import (Modulus, QuadratureError, check_modulus_axioms, classify_osgood,
                      osgood_integral)
from .norms import embedding_constant, log_sq_osgood, log_sq_sobolev
from .operator import OperatorSpec, check_assumptions, generate_ensemble, verify_growth_bound
from .report import EstimateReport, fmt, merge
from .weights import WeightCalculus, WeightOverflow, closed_form_log_psi_sec4, closed_form_theta_sec4

__all__ = ["main", "build_ensemble", "run_command", "OUT_ENV"]

OUT_ENV = "OSGOODLAB_OUT"
DEFAULT_OUT = "osgoodlab_out"
VERIFY_CHECKS = ("growth", "pointwise", "integral", "local", "global")


def _header(cmd, cfg, seed):
    return f"# osgoodlab {cmd}; scenario={cfg.spec.label}; seed={seed}\n"


# -- ensembles -------------------------------------------------------------

def _times(cfg, consts):
    T = cfg.spec.T
    pts = [np.linspace(0.0, T, cfg.grid.time_nodes), np.linspace(0.0, consts.sigma_bar, 9),
           [consts.sigma, consts.sigma_bar, cfg.estimate.T1]]
    return np.unique(np.concatenate(pts))


def build_ensemble(cfg, consts, seed, threads=1):
    """Random terminal data evolved to ``[0, T]``, each scaled into the admissible range.

    Terminal amplitudes are ``envelope(|xi|) (N + iN)/sqrt(2)`` drawn from
    ``numpy.random.default_rng(seed)`` (PCG64).  Every solution is then
    multiplied by the constant that puts ``log ||u(0)||^2_{H^0_{1,w}}`` at
    ``scale * log_y_max``; when no representable data are admissible the
    solutions are returned unscaled and flagged.
    """
    grid = cfg.grid.frequency_grid()
    rng = np.random.default_rng(seed)
    env = cfg.data.profile(grid.abs_xi)
    times = _times(cfg, consts)
    target = cfg.data.scale * consts.log_y_max
    sols, admissible = [], np.isfinite(target)
    data = []
    for _ in range(cfg.data.ensemble):
        z = rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size)
        data.append(env * z / math.sqrt(2))
    for sol in generate_ensemble(cfg.spec, grid, data, times, threads=threads):
        if admissible:
            ly = log_sq_osgood(sol.snapshot_at(0.0), 1.0, cfg.spec.omega, 0)
            sol = sol.rescaled((target - ly) / 2)
        sols.append(sol)
    return sols, bool(admissible)


def _failed_row(name, ident, reason):
    ident = f"{ident};{reason}".replace(",", ";").replace("\n", " ")
    return EstimateReport(name, [ident], [math.nan], [math.nan], [0.0])


def _prefixed(rep, k):
    rep.identifiers = [f"sol={k};{i}" for i in rep.identifiers]
    return rep


def verify_reports(cfg, seed, threads=1, tol=None):
    """Run every check of ``verify`` and return ``{check: EstimateReport}``."""
    # the growth check keeps its own tighter default unless --tol is given
    growth_tol = 1e-10 if tol is None else tol
    tol = cfg.estimate.tol if tol is None else tol
    est = cfg.estimate
    consts = select_constants(cfg.spec, est.T2, tau_override=est.tau)
    sols, _ = build_ensemble(cfg, consts, seed, threads)
    out = {k: [] for k in VERIFY_CHECKS}
    # a priori bound: twice the largest measured L^2 norm over the ensemble
    if cfg.data.D is None:
        log_sup = max(max(log_sq_sobolev(s.snapshot(j), 0) for j in range(len(s.times))) for s in sols)
        log_D = math.log(2.0) + 0.5 * log_sup
    else:
        log_D = math.log(cfg.data.D)
    for k, sol in enumerate(sols):
        out["growth"].append(_prefixed(verify_growth_bound(sol, tol=growth_tol), k))
        ident = f"sol={k}"
        ly = log_sq_osgood(sol.snapshot_at(0.0), 1.0, cfg.spec.omega, 0)
        try:
            beta = choose_beta(consts, log_y=ly).beta
        except (AdmissibilityError, WeightOverflow, ArithmeticError) as exc:
            for name in ("pointwise", "integral", "local"):
                out[name].append(_failed_row(name, ident, f"inadmissible: {exc}"))
        else:
            out["pointwise"].append(_prefixed(pointwise_estimate_check(sol, consts, beta, tol=tol), k))
            out["integral"].append(integral_estimate_check(sol, consts, beta, ident=ident, tol=tol))
            try:
                out["local"].append(local_estimate_check(sol, consts, est.nu, est.eps, ident=ident, tol=tol))
            except (AdmissibilityError, WeightOverflow, ArithmeticError) as exc:
                out["local"].append(_failed_row("local", ident, f"inadmissible: {exc}"))
        try:
            out["global"].append(sandwich_check(sol, est.T1, log_D=log_D, nu=est.nu, eps=est.eps,
                                                ident=ident, tol=tol))
        except (AdmissibilityError, WeightOverflow, ArithmeticError, RuntimeError) as exc:
            out["global"].append(_failed_row("global", ident, f"inadmissible: {exc}"))
    return {k: merge(k, v) for k, v in out.items()}, consts


# -- commands --------------------------------------------------------------

def cmd_check_modulus(cfg, seed, threads, tol):
    m = cfg.spec.omega
    ax = check_modulus_axioms(m)
    try:
        cls = classify_osgood(m)
    except QuadratureError as exc:
        cls = f"error: {exc}"
    lines = [f"modulus={m.name}", f"s_max={fmt(m.s_max)}",
             f"monotone={int(ax.monotone)}", f"concave={int(ax.concave)}",
             f"vanishes={int(ax.vanishes)}", f"axioms_ok={int(ax.ok)}", f"classification={cls}"]
    for k in range(1, 13):
        eps = 10.0 ** -k
        if eps < m.s_max:
            try:
                lines.append(f"osgood_integral[1e-{k}]={fmt(osgood_integral(m, eps))}")
            except QuadratureError as exc:
                lines.append(f"osgood_integral[1e-{k}]=error {exc}")
    text = _header("check-modulus", cfg, seed) + "\n".join(lines) + "\n"
    return (0 if ax.ok else 1), {"modulus.txt": text}


def cmd_constants(cfg, seed, threads, tol):
    try:
        c = select_constants(cfg.spec, cfg.estimate.T2, tau_override=cfg.estimate.tau)
    except SearchFailure as exc:
        text = _header("constants", cfg, seed) + f"search_failure={exc}\nworst_xi={exc.worst_xi}\n"
        return 1, {"constants.txt": text}
    return 0, {"constants.txt": _header("constants", cfg, seed) + c.to_text()}


def cmd_verify(cfg, seed, threads, tol):
    reps, consts = verify_reports(cfg, seed, threads, tol)
    files = {}
    summary = [f"constants.{line}" for line in consts.to_text().splitlines()]
    bad = 0
    for name, rep in reps.items():
        files[f"verify_{name}.csv"] = _header("verify", cfg, seed) + rep.to_csv()
        nfail = int(np.sum(~rep.passed))
        bad += nfail
        summary.append(f"{name}: items={len(rep)} failed={nfail}")
    files["verify_summary.txt"] = _header("verify", cfg, seed) + "\n".join(summary) + "\n"
    return (0 if bad == 0 else 1), files


def cmd_stability_curve(cfg, seed, threads, tol):
    est = cfg.estimate
    grid = cfg.grid.frequency_grid()
    consts = select_constants(cfg.spec, est.T2, tau_override=est.tau)
    ct = embedding_constant(cfg.spec.omega, est.nu, est.eps, grid).log_value
    D = 1.0 if cfg.data.D is None else cfg.data.D
    rows = ["y,log_y,G,log_G,iterations,local_bound,log_local_bound,status"]
    for y in sorted(est.y_list):
        ly = math.log(y)
        cells = [fmt(y), fmt(ly)]
        status = []
        try:
            G = global_bound_G(cfg.spec, est.T1, D, ly, grid, est.nu, est.eps)
            cells += [fmt(G.value), fmt(G.log_value), str(G.iterations)]
        except (AdmissibilityError, WeightOverflow, ArithmeticError) as exc:
            cells += ["inadmissible"] * 3
            status.append(f"G: {exc}")
        try:
            lb = local_bound(consts, ly, -math.inf, ct)
            cells += [fmt(math.exp(lb) if lb < 709 else math.inf), fmt(lb)]
        except (AdmissibilityError, WeightOverflow, ArithmeticError) as exc:
            cells += ["inadmissible"] * 2
            status.append(f"local: {exc}")
        cells.append(("; ".join(status) or "ok").replace(",", ";"))
        rows.append(",".join(cells))
    return 0, {"stability_curve.csv": _header("stability-curve", cfg, seed) + "\n".join(rows) + "\n"}


def loglog_rows(cfg):
    """Rows ``(section, item, quantity, value, ok)`` of the explicit-modulus demo."""
    ll = cfg.loglog
    sec4 = Modulus.sec4()
    rows = []
    wc = WeightCalculus(sec4, ll.lam, ll.q)
    for rho in ll.rho:
        quad = wc.theta(rho)
        closed = closed_form_theta_sec4(rho)
        err = abs(quad - closed) / max(abs(closed), 1e-300) if closed else abs(quad)
        rows.append(("theta", fmt(rho), "rel_err", err, err <= 1e-6))
    for y in ll.y:
        quad = float(wc.log_psi(y))
        closed = float(closed_form_log_psi_sec4(ll.lam, ll.q, y))
        err = abs(quad - closed) / max(abs(closed), 1e-300) if closed else abs(quad)
        rows.append(("log_psi", fmt(y), "rel_err", err, err <= 1e-6))
    psi1 = float(wc.psi(1.0))
    rows.append(("psi", fmt(1.0), "value", psi1, abs(psi1 / math.exp(math.e - 1) - 1) <= 1e-10))
    spec4 = OperatorSpec.constant(1, cfg.spec.T, kA=cfg.spec.kA, omega=sec4, label="sec4")
    consts = select_constants(spec4, ll.T2, sec4=True)
    prev = None
    for u0 in sorted(ll.u0_sq):
        b = explicit_bound_sec4(consts, math.log(u0), check_admissibility=False)
        item = fmt(u0)
        rows.append(("bound", item, "bound", b.bound, True))
        rows.append(("bound", item, "two_interval", b.two_interval, True))
        rows.append(("bound", item, "iterated", b.iterated, True))
        # bound must not decrease in u0; its exponent excess must drop strictly
        mono = prev is None or (b.bound >= prev.bound and b.exponent_excess < prev.exponent_excess)
        rows.append(("bound", item, "exponent_excess", b.exponent_excess, mono))
        rows.append(("bound", item, "admissible", float(b.admissible), True))
        prev = b
    last = -math.inf
    for zeta in sorted(ll.zeta):
        try:
            lr = float(wc.log_appendix_ratio(zeta))
        except (WeightOverflow, ArithmeticError):
            rows.append(("appendix", fmt(zeta), "truncated", math.nan, True))
            continue
        rows.append(("appendix", fmt(zeta), "log_ratio", lr, lr > last))
        last = lr
    return rows


def cmd_loglog_demo(cfg, seed, threads, tol):
    rows = loglog_rows(cfg)
    lines = ["section,item,quantity,value,pass"]
    lines += [f"{s},{i},{q},{fmt(v)},{int(ok)}" for s, i, q, v, ok in rows]
    code = 0 if all(r[4] for r in rows) else 1
    return code, {"loglog_demo.csv": _header("loglog-demo", cfg, seed) + "\n".join(lines) + "\n"}


COMMANDS = {
    "check-modulus": cmd_check_modulus,
    "constants": cmd_constants,
    "verify": cmd_verify,
    "stability-curve": cmd_stability_curve,
    "loglog-demo": cmd_loglog_demo,
}


def run_command(command, config, seed=None, threads=1, tol=None):
    """Run one subcommand; returns ``(exit_code, {filename: text})``."""
    cfg = load_config(config)
    if not check_assumptions(cfg.spec).ok:
        raise ConfigError(f"{cfg.name}: coefficients violate the ellipticity or bound assumptions")
    seed = cfg.data.seed if seed is None else seed
    return COMMANDS[command](cfg, seed, threads, tol)


def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return v


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scenario file (or a shipped name)")
    common.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    common.add_argument("--seed", type=_u64, default=None, help="override [data] seed")
    common.add_argument("--threads", type=_positive_int, default=1, help="worker threads")
    common.add_argument("--tol", type=float, default=None, help="override [estimate] tol")
    p = argparse.ArgumentParser(prog="osgoodlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    out = args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT
    try:
        code, files = run_command(args.command, args.config, args.seed, args.threads, args.tol)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    os.makedirs(out, exist_ok=True)
    for name in sorted(files):
        with open(os.path.join(out, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(files[name])
        print(os.path.join(out, name))
    print(f"{args.command}: {'ok' if code == 0 else 'checks failed'}")
    return code


if __name__ == "__main__":
    sys.exit(main())
