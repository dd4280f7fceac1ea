"""Monte Carlo harness: limit-shape and fluctuation experiments.

Reproduces the law-of-large-numbers picture (scaled profiles concentrate),
the Gaussian fluctuation statistics of the Y_k functionals, and the
box-removal heatmaps.  Every run is driven by a master seed with per-trial
substreams derived as SeedSequence([seed, trial]); per-trial results are
assembled in trial order before any floating-point reduction, so outputs are
bit-identical regardless of the worker count.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .shape import s_functional_numeric

CHUNK = 64

__all__ = [
    "ExperimentConfig",
    "sample_family_trial",
    "lln_experiment",
    "clt_experiment",
    "mean_delta_moments",
    "rectangle_removal_experiment",
    "HeatmapData",
    "profile_on_grid",
    "write_report",
]


@dataclass
class ExperimentConfig:
    """Configuration echoed into every report."""

    family: str = "regular"           # regular | rectangle-removal | explicit
    alpha: float | None = 1.0         # constant alpha rule ...
    g: float | None = None            # ... or double-scaling (g, gprime)
    gprime: float = 0.0
    n_grid: list = field(default_factory=lambda: [100])
    trials: int = 100
    seed: int = 0
    out_dir: str | None = None
    k_range: list = field(default_factory=lambda: [2, 3, 4])
    grid_span: float = 4.0
    grid_points: int = 321
    i: int = 0                        # rectangle side (rectangle-removal)
    jobs: int = 1
    s_ref: dict | None = None         # k -> reference limit value
    bootstrap: int = 400
    table: dict | None = None         # explicit family: partition-json -> weight

    def alpha_at(self, n: int) -> float:
        if self.g is None:
            return float(self.alpha)
        gam = self.g * math.sqrt(n) + self.gprime
        A = (-gam + math.sqrt(gam * gam + 4.0)) / 2.0
        return A * A

    def u_grid(self) -> np.ndarray:
        return np.linspace(-self.grid_span, self.grid_span, self.grid_points)

    def echo(self) -> dict:
        d = asdict(self)
        if d.get("table"):
            d["table"] = {k: float(v) for k, v in d["table"].items()}
        return d


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def sample_family_trial(cfg: ExperimentConfig, n: int, trial: int) -> np.ndarray:
    """One sampled diagram of the configured family, as a row-length array."""
    from .measures import sample_exact, sample_growth, sample_rectangle_removal

    rng = trial_rng(cfg.seed, trial)
    if cfg.family == "regular":
        lam = sample_growth(n, cfg.alpha_at(n), rng)
    elif cfg.family == "rectangle-removal":
        lam = sample_rectangle_removal(cfg.i, int(round(cfg.alpha_at(n))), rng)
    elif cfg.family == "explicit":
        measure = _explicit_measure(cfg, n)
        lam = sample_exact(measure, rng)
    else:
        raise ValueError("unknown family %r" % cfg.family)
    return np.array(lam.parts, dtype=np.int64)


def _explicit_measure(cfg: ExperimentConfig, n: int):
    from fractions import Fraction

    from .measures import measure_from_character, table_character
    from .partitions import Partition

    table = {Partition.from_json(k): Fraction(v) for k, v in cfg.table.items()}
    chi = table_character(n, table)
    A = math.sqrt(cfg.alpha_at(n))
    return measure_from_character(chi, A)


# ---------------------------------------------------------------------------
# Scaled profiles on a fixed grid
# ---------------------------------------------------------------------------


def profile_corners(parts: np.ndarray, w: float, h: float):
    """Corner (u, v) arrays (ascending u) of the anisotropic drawing."""
    if parts.size == 0 or parts[0] == 0:
        return np.array([0.0]), np.array([0.0])
    vals, idx, counts = np.unique(parts[::-1], return_index=True,
                                  return_counts=True)
    vals = vals[::-1].astype(float)          # decreasing distinct values
    counts = counts[::-1].astype(float)
    cum = np.concatenate([[0.0], np.cumsum(counts)])
    us = [-h * cum[-1]]
    vs = [h * cum[-1]]
    for j in range(len(vals) - 1, -1, -1):
        us.append(w * vals[j] - h * cum[j + 1])
        vs.append(w * vals[j] + h * cum[j + 1])
        us.append(w * vals[j] - h * cum[j])
        vs.append(w * vals[j] + h * cum[j])
    return np.array(us), np.array(vs)


def profile_on_grid(parts: np.ndarray, alpha: float, grid: np.ndarray) -> np.ndarray:
    """Unit-area scaled profile omega(u) sampled on the grid."""
    n = int(parts.sum())
    w = math.sqrt(alpha / n)
    h = 1.0 / math.sqrt(alpha * n)
    us, vs = profile_corners(parts, w, h)
    vals = np.interp(grid, us, vs)
    outside = (grid <= us[0]) | (grid >= us[-1])
    vals[outside] = np.abs(grid[outside])
    return vals


def profile_area(parts: np.ndarray, alpha: float) -> float:
    """Exact integral of (omega - |u|)/2 for the unit-area scaling.

    The trapezoid rule over the corner list is exact for the piecewise-linear
    omega; the |u| part is integrated in closed form (it has a kink at 0
    that the corner list need not contain).
    """
    n = int(parts.sum())
    w = math.sqrt(alpha / n)
    h = 1.0 / math.sqrt(alpha * n)
    us, vs = profile_corners(parts, w, h)
    if len(us) < 2:
        return 0.0
    omega_int = float(np.trapezoid(vs, us))
    abs_int = (us[-1] ** 2 + us[0] ** 2) / 2.0
    return (omega_int - abs_int) / 2.0


# ---------------------------------------------------------------------------
# Deterministic chunked execution
# ---------------------------------------------------------------------------


def _run_trials(worker, args, trials: int, jobs: int) -> list:
    """Map worker((args, start, stop)) over fixed 64-trial chunks, in order."""
    chunks = [(args, start, min(start + CHUNK, trials))
              for start in range(0, trials, CHUNK)]
    if jobs <= 1 or len(chunks) == 1:
        parts = [worker(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(worker, chunks))
    out = []
    for p in parts:
        out.extend(p)
    return out


def _profile_chunk(payload):
    (cfg_dict, n, grid), start, stop = payload
    cfg = ExperimentConfig(**cfg_dict)
    grid = np.asarray(grid)
    rows = []
    for t in range(start, stop):
        parts = sample_family_trial(cfg, n, t)
        rows.append((profile_on_grid(parts, cfg.alpha_at(n), grid),
                     profile_area(parts, cfg.alpha_at(n)), int(parts.sum())))
    return rows


def _yk_chunk(payload):
    (cfg_dict, n, ks), start, stop = payload
    cfg = ExperimentConfig(**cfg_dict)
    rows = []
    for t in range(start, stop):
        parts = sample_family_trial(cfg, n, t)
        alpha = cfg.alpha_at(n)
        scaled = [s_functional_numeric(parts, k, alpha) / float(n) ** (k / 2.0)
                  for k in ks]
        rows.append(scaled)
    return rows


# ---------------------------------------------------------------------------
# Law of large numbers
# ---------------------------------------------------------------------------


def lln_experiment(cfg: ExperimentConfig) -> dict:
    """Concentration of scaled profiles around the largest-n mean profile.

    For each n on the grid: the empirical mean profile on the u-grid, the
    exact area under the mean density, and the distribution (quartiles) of
    the per-trial sup distance to the reference profile (the mean profile at
    the largest n).  Passing families show the median distance decreasing
    along the grid.
    """
    grid = cfg.u_grid()
    per_n: dict[int, np.ndarray] = {}
    areas: dict[int, float] = {}
    boxes_ok = True
    for n in sorted(cfg.n_grid):
        rows = _run_trials(_profile_chunk, (cfg.echo(), n, grid.tolist()),
                           cfg.trials, cfg.jobs)
        profs = np.stack([r[0] for r in rows])
        areas[n] = float(np.mean([r[1] for r in rows]))
        boxes_ok = boxes_ok and all(r[2] == n for r in rows)
        per_n[n] = profs
    n_max = max(cfg.n_grid)
    reference = per_n[n_max].mean(axis=0)
    stats = {}
    for n, profs in per_n.items():
        dists = np.abs(profs - reference[None, :]).max(axis=1)
        stats[n] = {
            "median_sup_distance": float(np.median(dists)),
            "q25": float(np.quantile(dists, 0.25)),
            "q75": float(np.quantile(dists, 0.75)),
            "mean_area": areas[n],
        }
    medians = [stats[n]["median_sup_distance"] for n in sorted(cfg.n_grid)]
    report = {
        "experiment": "lln",
        "config": cfg.echo(),
        "grid": grid.tolist(),
        "reference_n": n_max,
        "stats": {str(n): s for n, s in stats.items()},
        "median_decreasing": all(a > b for a, b in zip(medians, medians[1:])),
        "boxes_conserved": boxes_ok,
        "mean_profiles": {str(n): per_n[n].mean(axis=0).tolist()
                          for n in per_n},
    }
    if cfg.out_dir:
        write_report(cfg.out_dir, report)
        for n in per_n:
            _write_mean_profile(cfg.out_dir, "mean_profile_n%d.csv" % n,
                                grid, per_n[n].mean(axis=0))
    return report


def _write_mean_profile(out_dir, name, grid, mean_prof):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w") as fh:
        fh.write("u,v\n")
        for u, v in zip(grid, mean_prof):
            fh.write("%.17g,%.17g\n" % (u, v))


# ---------------------------------------------------------------------------
# Central limit theorem
# ---------------------------------------------------------------------------


def _moments(x: np.ndarray) -> dict:
    m = x.mean()
    c = x - m
    m2 = float((c ** 2).mean())
    m3 = float((c ** 3).mean())
    m4 = float((c ** 4).mean())
    skew = m3 / m2 ** 1.5 if m2 > 0 else 0.0
    kurt = m4 / m2 ** 2 - 3.0 if m2 > 0 else 0.0
    return {"mean": float(m), "variance": m2, "skewness": skew,
            "excess_kurtosis": kurt}


def _bootstrap_ci(x: np.ndarray, stat, B: int, rng) -> tuple[float, float]:
    n = len(x)
    vals = np.empty(B)
    for b in range(B):
        vals[b] = stat(x[rng.integers(0, n, size=n)])
    return float(np.quantile(vals, 0.025)), float(np.quantile(vals, 0.975))


def clt_experiment(cfg: ExperimentConfig, skew_threshold: float = 0.15,
                   kurt_threshold: float = 0.3) -> dict:
    """Gaussianity statistics of the fluctuation functionals Y_k.

    Y_k = sqrt(n) (n^{-k/2} S_k - s_ref(k)); unless supplied, s_ref defaults
    to the empirical mean of n^{-k/2} S_k at the largest grid n (recorded in
    the report).  Reports per-k moments with bootstrap confidence intervals,
    pairwise covariances, and flags |skewness| / |excess kurtosis| against
    the thresholds.
    """
    ks = list(cfg.k_range)
    per_n: dict[int, np.ndarray] = {}
    for n in sorted(cfg.n_grid):
        rows = _run_trials(_yk_chunk, (cfg.echo(), n, ks), cfg.trials, cfg.jobs)
        per_n[n] = np.array(rows)  # trials x len(ks), values n^{-k/2} S_k
    n_max = max(cfg.n_grid)
    s_ref = {k: float(per_n[n_max][:, j].mean()) for j, k in enumerate(ks)}
    s_ref_source = "largest-n empirical mean"
    if cfg.s_ref:
        for k, v in cfg.s_ref.items():
            s_ref[int(k)] = float(v)
        s_ref_source = "supplied (with largest-n defaults)"
    report = {"experiment": "clt", "config": cfg.echo(),
              "s_ref": {str(k): v for k, v in s_ref.items()},
              "s_ref_source": s_ref_source, "stats": {}}
    boot_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 10 ** 9]))
    for n, scaled in per_n.items():
        y = np.sqrt(n) * (scaled - np.array([s_ref[k] for k in ks])[None, :])
        entry = {}
        for j, k in enumerate(ks):
            stats = _moments(y[:, j])
            if cfg.bootstrap:
                stats["skewness_ci"] = _bootstrap_ci(
                    y[:, j], lambda s: _moments(s)["skewness"],
                    cfg.bootstrap, boot_rng)
                stats["excess_kurtosis_ci"] = _bootstrap_ci(
                    y[:, j], lambda s: _moments(s)["excess_kurtosis"],
                    cfg.bootstrap, boot_rng)
            stats["gaussian_flags"] = {
                "skewness_ok": abs(stats["skewness"]) < skew_threshold,
                "kurtosis_ok": abs(stats["excess_kurtosis"]) < kurt_threshold,
            }
            entry["Y_%d" % k] = stats
        cov = np.cov(y.T) if y.shape[1] > 1 else np.array([[float(y.var())]])
        entry["covariance"] = cov.tolist()
        entry["samples"] = y.shape[0]
        report["stats"][str(n)] = entry
        report.setdefault("_samples", {})[n] = y
    if cfg.out_dir:
        emit = {k: v for k, v in report.items() if not k.startswith("_")}
        write_report(cfg.out_dir, emit)
        with open(os.path.join(cfg.out_dir, "ykstats.json"), "w") as fh:
            json.dump(emit["stats"], fh, indent=1)
    return report


def mean_delta_moments(cfg: ExperimentConfig, k_range: list[int]) -> dict:
    """Weak-topology diagnostics: int u^k E[Delta_n](u) du = 2 E[Y_{k+2}]/(k+1).

    Reported per n with bootstrap confidence intervals; no supremum-norm
    claim is made.
    """
    inner = ExperimentConfig(**{**cfg.echo(),
                                "k_range": [k + 2 for k in k_range],
                                "bootstrap": 0})
    clt = clt_experiment(inner)
    boot_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 2 * 10 ** 9]))
    out = {"experiment": "mean-delta-moments", "config": cfg.echo(),
           "s_ref": clt["s_ref"], "moments": {}}
    for n, y in clt["_samples"].items():
        entry = {}
        for j, k in enumerate(k_range):
            vals = 2.0 * y[:, j] / (k + 1)
            mean = float(vals.mean())
            lo, hi = _bootstrap_ci(vals, lambda s: float(s.mean()),
                                   max(cfg.bootstrap, 100), boot_rng)
            entry[str(k)] = {"estimate": mean, "ci": [lo, hi]}
        out["moments"][str(n)] = entry
    if cfg.out_dir:
        write_report(cfg.out_dir, out)
    return out


# ---------------------------------------------------------------------------
# Rectangle box-removal heatmaps
# ---------------------------------------------------------------------------


@dataclass
class HeatmapData:
    """Edge-frequency map over the scaled box grid plus the mean profile."""

    i: int
    alpha: int
    n: int
    trials: int
    seed: int
    w: float
    h: float
    segments: list          # (u1, v1, u2, v2, freq)
    grid: list
    mean_profile: list
    contained_in_square: bool
    boxes_conserved: bool

    def to_csv(self, stretch: float = 1.0) -> str:
        lines = ["u1,v1,u2,v2,freq"]
        for (u1, v1, u2, v2, f) in self.segments:
            lines.append("%.17g,%.17g,%.17g,%.17g,%.17g"
                         % (u1, v1 * stretch, u2, v2 * stretch, f))
        return "\n".join(lines) + "\n"

    def to_svg(self, stretch: float = 1.0, size: int = 640) -> str:
        return _heatmap_svg(self, stretch, size)


def _word_chunk(payload):
    (i, alpha, seed, R, C), start, stop = payload
    from .measures import sample_rectangle_removal

    words = []
    for t in range(start, stop):
        rng = trial_rng(seed, t)
        lam = sample_rectangle_removal(i, alpha, rng)
        padded = list(lam.parts) + [0] * (R - lam.length)
        x, y = 0, R
        word = []
        total = 0
        for _ in range(R + C):
            if y >= 1 and padded[y - 1] == x:
                word.append(1)
                y -= 1
            else:
                word.append(0)
                total += y
                x += 1
        words.append((tuple(word), total))
    return words


def rectangle_removal_experiment(i: int, alpha: int, trials: int, seed: int,
                                 out_dir: str | None = None, jobs: int = 1,
                                 grid_points: int = 161,
                                 emit_svg: bool = False) -> HeatmapData:
    """Heatmap of profile-segment frequencies for the box-removal ensemble.

    Bins are the edges of the anisotropically scaled box grid; a segment's
    frequency is the fraction of trials whose profile contains it.  Also
    emits the mean profile, the sqrt(n)-stretched variant of the heatmap,
    and containment/conservation checks against the scaled square.
    """
    nprime = alpha * i * i
    if nprime % 2:
        raise ValueError("alpha * i^2 must be even")
    n = nprime // 2
    R, C = alpha * i, i
    w = math.sqrt(alpha / n)
    h = 1.0 / math.sqrt(alpha * n)
    words = _run_trials(_word_chunk, (i, alpha, seed, R, C), trials, jobs)
    boxes_ok = all(total == n for _, total in words)
    counts: dict[tuple, int] = {}
    for word, _ in words:
        x, y = 0, R
        for step in word:
            if step == 1:
                key = ("v", x, y)
                y -= 1
            else:
                key = ("h", x, y)
                x += 1
            counts[key] = counts.get(key, 0) + 1
    segments = []
    for (kind, x, y), c in sorted(counts.items()):
        u1, v1 = x * w - y * h, x * w + y * h
        if kind == "v":
            u2, v2 = x * w - (y - 1) * h, x * w + (y - 1) * h
        else:
            u2, v2 = (x + 1) * w - y * h, (x + 1) * w + y * h
        segments.append((u1, v1, u2, v2, c / trials))
    # mean profile on a uniform grid spanning the scaled box
    span_lo, span_hi = -h * R - 0.25, w * C + 0.25
    grid = np.linspace(span_lo, span_hi, grid_points)
    acc = np.zeros_like(grid)
    contained = True
    sq = math.sqrt(2.0)
    for word, _ in words:
        us, vs = _word_profile(word, R, w, h)
        prof = np.interp(grid, us, vs)
        outside = (grid <= us[0]) | (grid >= us[-1])
        prof[outside] = np.abs(grid[outside])
        acc += prof
        if np.any(vs > 2 * sq - np.abs(us) + 1e-9):
            contained = False
    mean_prof = acc / len(words)
    if np.any(mean_prof > np.maximum(np.abs(grid), 2 * sq - np.abs(grid)) + 1e-9):
        contained = False
    data = HeatmapData(i=i, alpha=alpha, n=n, trials=trials, seed=seed, w=w,
                       h=h, segments=segments, grid=grid.tolist(),
                       mean_profile=mean_prof.tolist(),
                       contained_in_square=contained, boxes_conserved=boxes_ok)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "heatmap.csv"), "w") as fh:
            fh.write(data.to_csv())
        with open(os.path.join(out_dir, "heatmap_stretched.csv"), "w") as fh:
            fh.write(data.to_csv(stretch=math.sqrt(n)))
        _write_mean_profile(out_dir, "mean_profile.csv", grid, mean_prof)
        write_report(out_dir, {
            "experiment": "rectangle-removal",
            "config": {"i": i, "alpha": alpha, "trials": trials, "seed": seed,
                       "jobs": jobs, "grid_points": grid_points},
            "n": n, "w": w, "h": h,
            "contained_in_square": contained,
            "boxes_conserved": boxes_ok,
            "segments": len(segments),
        })
        if emit_svg:
            with open(os.path.join(out_dir, "heatmap.svg"), "w") as fh:
                fh.write(data.to_svg())
            with open(os.path.join(out_dir, "heatmap_stretched.svg"), "w") as fh:
                fh.write(data.to_svg(stretch=math.sqrt(n)))
    return data


def _word_profile(word, R, w, h):
    x, y = 0, R
    us = [x * w - y * h]
    vs = [x * w + y * h]
    for step in word:
        if step == 1:
            y -= 1
        else:
            x += 1
        us.append(x * w - y * h)
        vs.append(x * w + y * h)
    return np.array(us), np.array(vs)


def _heatmap_svg(data: HeatmapData, stretch: float, size: int) -> str:
    us = [s[0] for s in data.segments] + [s[2] for s in data.segments]
    vs = [s[1] * stretch for s in data.segments] + [s[3] * stretch
                                                    for s in data.segments]
    lo_u, hi_u = min(us) - 0.2, max(us) + 0.2
    lo_v, hi_v = -0.1, max(vs) + 0.2
    scale = size / max(hi_u - lo_u, hi_v - lo_v)

    def pt(u, v):
        return ((u - lo_u) * scale, (hi_v - v) * scale)

    lines = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">'
             % (int((hi_u - lo_u) * scale) + 1, int((hi_v - lo_v) * scale) + 1)]
    for (u1, v1, u2, v2, f) in data.segments:
        (x1, y1), (x2, y2) = pt(u1, v1 * stretch), pt(u2, v2 * stretch)
        lines.append('<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" '
                     'stroke="gray" stroke-opacity="%.4f" stroke-width="1.2"/>'
                     % (x1, y1, x2, y2, f))
    sq = math.sqrt(2.0)
    limit = [(-1.2 * sq, 1.2 * sq), (-sq, sq), (sq, sq), (1.2 * sq, 1.2 * sq)]
    path = " ".join("%.2f,%.2f" % pt(u, v * stretch) for u, v in limit)
    lines.append('<polyline points="%s" fill="none" stroke="blue" '
                 'stroke-dasharray="6,4" stroke-width="1.5"/>' % path)
    mean_pts = " ".join("%.2f,%.2f" % pt(u, v * stretch)
                        for u, v in zip(data.grid, data.mean_profile))
    lines.append('<polyline points="%s" fill="none" stroke="red" '
                 'stroke-width="1.0"/>' % mean_pts)
    lines.append("</svg>")
    return "\n".join(lines)


def write_report(out_dir: str, report: dict, name: str = "report.json"):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w") as fh:
        json.dump(report, fh, indent=1, sort_keys=True)
        fh.write("\n")
