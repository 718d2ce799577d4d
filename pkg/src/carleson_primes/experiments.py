"""Batch experiments. Each returns tables and a JSON-able summary; the runner
writes them with a manifest that is enough to reproduce the run byte for byte.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import io as fio
from . import lambdaset as ls
from . import maximal as mx
from . import multiplier as mm
from .config import RunConfig
from .variation import jump_breakpoints, jump_count, variation_norm, vinf_proxy

__all__ = [
    "EXPERIMENTS",
    "run_experiment",
    "rerun_manifest",
    "error_decay",
    "norm_growth",
    "s_decay",
    "covering",
    "variation",
    "carleson",
    "loglog_slope",
    "shell_grid",
]

MAX_GRID = 1 << 22


def loglog_slope(x, y) -> float:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _sieve_reach(cfg):
    return max(cfg.j_max, mm.J_MAX)


# --- E_j decay ----------------------------------------------------------------


def error_decay(cfg: RunConfig, seed: int, inputs: dict):
    C = cfg.constants()
    lams = np.arange(cfg.lambda_points) / cfg.lambda_points
    if "lambda" in inputs:
        lams = np.concatenate([lams, fio.read_lambda_file(inputs["lambda"]).points])
    rows = []
    js = list(range(cfg.j_min, cfg.j_max + 1))
    sup_E, sup_m = [], []
    for j in js:
        M = 2 ** (j + 2)
        srange = mm.nu_s_range(j, C.alpha)
        if len(srange):
            mm.check_bump_disjointness(srange, C)
        beta = mm.FreqGrid.torus(M).points
        e_best = m_best = nu_best = 0.0
        for lam in lams:
            m = mm.m_j_grid(j, float(lam), M, _sieve_reach(cfg)).values
            m_best = max(m_best, float(np.max(np.abs(m))))
            if len(srange):
                nu = mm.nu_j_eval(j, C, beta - lam, check=False)
                nu_best = max(nu_best, float(np.max(np.abs(nu))))
                m = m - nu
            e_best = max(e_best, float(np.max(np.abs(m))))
        sup_E.append(e_best)
        sup_m.append(m_best)
        rows.append([j, e_best, m_best, nu_best, len(srange)])
    slope = loglog_slope(js, sup_E) if len(js) >= 2 else float("nan")
    for r in rows:
        r.append(slope)
    ratios = [b / a for a, b in zip(sup_E, sup_E[1:])]
    summary = {
        "fitted_slope": slope,
        "nonincreasing_within_10pct": bool(all(q <= 1.1 for q in ratios)),
        "max_successive_ratio": max(ratios) if ratios else None,
        "lambda_count": int(lams.size),
        "nu_identically_zero": bool(all(r[4] == 0 for r in rows)),
        "j_cutoff_s0": mm.j_cutoff(0, C.alpha),
    }
    cols = ["j", "sup_E_j", "sup_m_j", "sup_nu_j", "num_shells", "fitted_slope"]
    return {"error_decay": ("error_decay", cols, rows)}, summary


# --- multi-frequency norm growth -------------------------------------------


def norm_growth_setup(cfg: RunConfig, K: int, s: int = 0):
    """Template grid, frequencies, lambda grid and input windows for one K."""
    C = cfg.constants()
    Ns = float(C.N) ** s
    thetas = cfg.theta_spacing * np.arange(K)
    if not cfg.theta_spacing > 2.0 ** (-2 * s - 2):
        raise ValueError("theta_spacing does not give s-separated frequencies")
    top = thetas[-1] + 2 * C.a / Ns + 0.5
    h = 1.0 / (2 * top)
    template = mx.SignalR(h, 0.0, np.zeros(cfg.grid_size))
    step = 1.0 / (cfg.grid_size * h)
    if step > C.c / Ns / 4:
        raise mx.ShellGridMismatch(f"grid_size {cfg.grid_size} cannot resolve phi at s={s}")
    lams = np.linspace(-C.c / Ns, C.c / Ns, cfg.lambda_grid)
    active = [(float(t - C.c / Ns), 2 * C.c / Ns) for t in thetas]
    return template, thetas, lams, active


def norm_growth(cfg: RunConfig, seed: int, inputs: dict, s: int = 0):
    C = cfg.constants()
    ests = []
    for K in cfg.k_list:
        template, thetas, lams, active = norm_growth_setup(cfg, K, s)
        op = mx.multifreq_operator(thetas, s, C, lams, template)
        ests.append(mx.estimate_opnorm(op, template, 2.0, cfg.trials, seed, active))
    ks = list(cfg.k_list)
    vals = [e.value for e in ests]
    slope = loglog_slope(ks, vals) if len(ks) >= 2 else float("nan")
    rows = [[K, v, math.log2(K) ** 2, slope, e.maximizer_id] for K, v, e in zip(ks, vals, ests)]
    summary = {"fitted_slope": slope, "s": s, "trials": cfg.trials, "grid_size": cfg.grid_size}
    cols = ["K", "norm_estimate", "log2K_sq", "fitted_slope", "maximizer_id"]
    return {"norm_growth": ("norm_growth", cols, rows)}, summary


# --- C^s decay ----------------------------------------------------------------


def shell_grid(constants, s_max: int, lams, min_size: int, max_size: int = MAX_GRID):
    """A periodic grid whose band holds every shifted arc and whose step resolves chi_{s_max}."""
    w = float(constants.chi_s_radius(s_max))
    top = 1.0 + float(np.max(lams)) + 2 * w + 0.05
    bottom = float(np.min(lams)) - 2 * w - 0.05
    h = 1.0 / (2 * max(top, -bottom))
    need = 8.0 / (w * h)
    n = max(min_size, 1 << math.ceil(math.log2(need)))
    if n > max_size:
        raise mx.ShellGridMismatch(
            f"shell s={s_max} needs {n} samples, above the cap {max_size}; lower N or c"
        )
    return mx.SignalR(h, 0.0, np.zeros(n))


def s_decay(cfg: RunConfig, seed: int, inputs: dict):
    C = cfg.constants()
    if "lambda" in inputs:
        lam = fio.read_lambda_file(inputs["lambda"])
    else:
        lam = ls.lacunary(cfg.rho, 15, include_limit=False)
    template = shell_grid(C, max(cfg.s_list), lam.points, cfg.grid_size)
    rows = []
    table = {}
    for s in cfg.s_list:
        op, brackets = mx.cs_precomputed(template, s, lam, C)
        active = mx.cs_active(s, C, lam)
        for p in cfg.p_list:
            est = mx.estimate_opnorm(op, template, p, cfg.trials, seed, active)
            table[(s, p)] = est.value
            rows.append([s, p, est.value, float(np.max(brackets)), est.maximizer_id])
    l2 = [table[(s, 2.0)] for s in cfg.s_list] if 2.0 in cfg.p_list else []
    summary = {
        "grid_size": template.n,
        "lambda_count": len(lam),
        "l2_strictly_decreasing": bool(all(b < a for a, b in zip(l2, l2[1:]))) if l2 else None,
        "l2_ratios": [b / a for a, b in zip(l2, l2[1:])],
    }
    cols = ["s", "p", "norm_estimate", "plancherel_bracket", "maximizer_id"]
    return {"s_decay": ("s_decay", cols, rows)}, summary


# --- covering numbers ---------------------------------------------------------


def covering(cfg: RunConfig, seed: int, inputs: dict):
    tables = {}
    if "lambda" in inputs:
        lam = fio.read_lambda_file(inputs["lambda"])
        fit_set = lam
    else:
        lam = ls.lacunary(cfg.rho, cfg.k_max)
        fit_set = ls.lacunary(cfg.rho, cfg.fit_k_max)
        rows = []
        for k in range(cfg.k_max - 1):
            lo, hi = cfg.rho ** (-k - 1), cfg.rho ** (-k)
            n_lo = ls.covering_number(lam, lo)
            n_hi = ls.covering_number(lam, float(np.nextafter(hi, 0)))
            rows.append([k, lo, hi, n_lo, n_hi, k + 2])
        tables["covering_brackets"] = (
            "covering_brackets",
            ["k", "delta_lo", "delta_hi", "N_at_lo", "N_below_hi", "k_plus_2"],
            rows,
        )
    prof = ls.covering_profile(lam)
    tables["covering_profile"] = (
        "covering_profile",
        ["delta_from", "N"],
        [[lam.min_gap if len(lam) > 1 else 0.0, len(lam)]]
        + [[b, c] for b, c in zip(prof.breakpoints, prof.counts)],
    )
    fit = ls.pseudo_lacunary_fit(fit_set, cfg.fit_j_max)
    tables["pseudo_lacunary"] = (
        "pseudo_lacunary",
        ["j", "C_1_over_j", "residual"],
        [[int(j), c, r] for j, c, r in zip(fit.j, fit.C, fit.residuals)],
    )
    summary = {"A": fit.A, "M": fit.M, "degenerate": fit.degenerate, "size": len(lam)}
    if "covering_brackets" in tables:
        br = tables["covering_brackets"][2]
        summary["brackets_match"] = bool(all(r[3] == r[5] and r[4] == r[5] for r in br))
    return tables, summary


# --- variation of a path ------------------------------------------------------


def variation(cfg: RunConfig, seed: int, inputs: dict):
    if "path" not in inputs:
        raise ValueError("the variation experiment needs a path file")
    vp = fio.read_path_csv(inputs["path"])
    vr = {r: variation_norm(vp, r) for r in cfg.r_list}
    rows = [[r, vr[r]] for r in cfg.r_list]
    jumps = []
    violations = 0
    for t in jump_breakpoints(vp):
        for tt in (float(np.nextafter(t, 0)), float(t)):
            J = jump_count(vp, tt)
            jumps.append([tt, J])
            violations += sum(tt * J ** (1 / r) > vr[r] * (1 + 1e-12) for r in cfg.r_list)
    summary = {"vinf_proxy": vinf_proxy(vp), "jump_inequality_violations": int(violations),
               "length": len(vp), "K": vp.K}
    return {
        "variation": ("variation", ["r", "V_r"], rows),
        "jumps": ("jumps", ["t", "J_t"], jumps),
    }, summary


# --- the Carleson operator ----------------------------------------------------


def carleson(cfg: RunConfig, seed: int, inputs: dict):
    if "signal" not in inputs or "lambda" not in inputs:
        raise ValueError("the carleson experiment needs a signal file and a lambda file")
    f = fio.read_signal_csv(inputs["signal"])
    lam = fio.read_lambda_file(inputs["lambda"])
    p_max = 2**cfg.j_max
    out = mx.carleson_direct(f, lam, p_max)
    rows = [[n, float(v)] for n, v in zip(out.sites, np.abs(out.samples))]
    summary = {"p_max": p_max, "lambda_count": len(lam), "sup": float(np.max(np.abs(out.samples)))}
    return {"carleson": ("carleson", ["n", "value"], rows)}, summary


EXPERIMENTS = {
    "error_decay": error_decay,
    "norm_growth": norm_growth,
    "s_decay": s_decay,
    "covering": covering,
    "variation": variation,
    "carleson": carleson,
}


def _truncations(cfg: RunConfig) -> dict:
    return {"j_max": cfg.j_max, "grid_size": cfg.grid_size, "k_max": cfg.k_max,
            "fit_k_max": cfg.fit_k_max, "sieve_limit": 2 ** _sieve_reach(cfg)}


def run_experiment(name: str, cfg: RunConfig, seed: int, out_dir, inputs: dict | None = None) -> dict:
    """Run one experiment, write its CSVs, summary and manifest; return the manifest."""
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    inputs = {k: str(v) for k, v in (inputs or {}).items()}
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tables, summary = EXPERIMENTS[name](cfg, seed, inputs)
    outputs = {}
    for fname, (schema, cols, rows) in tables.items():
        p = fio.write_csv(out / f"{fname}.csv", schema, cols, rows)
        outputs[p.name] = fio.sha256_file(p)
    summ = out / "summary.json"
    summ.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    outputs[summ.name] = fio.sha256_file(summ)
    manifest = {
        "experiment": name,
        "seed": int(seed),
        "config": cfg.as_dict(),
        "truncations": _truncations(cfg),
        "inputs": {k: {"path": v, "sha256": fio.sha256_file(v)} for k, v in sorted(inputs.items())},
        "outputs": outputs,
        "manifest_version": 1,
    }
    fio.write_manifest(out / "manifest.json", manifest)
    return manifest


def rerun_manifest(manifest_path, out_dir) -> tuple[dict, dict]:
    """Rerun from a manifest; returns (new manifest, {file: matches}) against the recorded hashes."""
    old = fio.read_manifest(manifest_path)
    cfg = RunConfig.from_dict(old["config"])
    inputs = {}
    for k, rec in old.get("inputs", {}).items():
        if fio.sha256_file(rec["path"]) != rec["sha256"]:
            raise ValueError(f"input {k} at {rec['path']} changed since the recorded run")
        inputs[k] = rec["path"]
    new = run_experiment(old["experiment"], cfg, old["seed"], out_dir, inputs)
    same = {f: new["outputs"].get(f) == h for f, h in old["outputs"].items()}
    return new, same
