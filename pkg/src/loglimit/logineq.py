"""Empirical verification of the logarithmic duality inequality

    |integral f g|  <=  C * ||f||_BMO * ||g||_L1 * [ |ln ||g||_L1| + ln(1 + ||g||_Linf) ]

on a fixed corpus of test fields, together with the Riesz/Zygmund L1 bound

    ||R_k h||_L1  <=  C0 + C0 * integral h ln+ h

for compactly supported h >= 0.  No numeric constant is asserted anywhere:
trials record the empirical ratio lhs / rhs-factor, and the scans only check
that the running maxima stay bounded as the grid is refined.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .grid import TWO_PI, GridSpec, ScalarField, riesz_transform
from .norms import bmo_seminorm, hardy_norm, lp_norm, zygmund_functional

TRIALS_CSV_HEADER = ("f_id", "g_id", "grid", "lhs", "bmo_f", "l1_g", "linf_g", "bracket", "ratio")


# ---------------------------------------------------------------------------
# fixed, versioned corpus of test fields
# ---------------------------------------------------------------------------


def _periodic_radius(grid: GridSpec, center=(np.pi, np.pi)) -> np.ndarray:
    x1, x2 = grid.coordinates()
    d1 = np.abs(x1 - center[0])
    d2 = np.abs(x2 - center[1])
    d1 = np.minimum(d1, TWO_PI - d1)
    d2 = np.minimum(d2, TWO_PI - d2)
    return np.sqrt(d1**2 + d2**2)


def dyadic_indicator(grid: GridSpec, level: int) -> ScalarField:
    """Indicator of the corner-anchored dyadic square of side 2pi * 2**-level."""
    n = grid.points_per_axis
    if not 0 <= level <= int(math.log2(n)):
        raise ValueError(f"dyadic level {level} unavailable on a {n} grid")
    s = n // 2**level
    v = np.zeros(grid.shape)
    v[:s, :s] = 1.0
    return ScalarField(grid, v)


def normalized_indicator(grid: GridSpec, area: float) -> ScalarField:
    """Unit-mass indicator h = value * 1_Q with value = 1 / |Q|, |Q| ~ area.

    The square is snapped to whole cells, so the realized measure (hence the
    realized height) is reported by the field itself: value = 1 / measure.
    """
    h = grid.spacing
    side_cells = max(1, round(math.sqrt(area) / h))
    side_cells = min(side_cells, grid.points_per_axis // 2)
    measure = (side_cells * h) ** 2
    v = np.zeros(grid.shape)
    v[:side_cells, :side_cells] = 1.0 / measure
    return ScalarField(grid, v)


def truncated_log(grid: GridSpec, center=(np.pi, np.pi)) -> ScalarField:
    """ln(1/|x - x0|) capped at the grid-scale value ln(1/h)."""
    r = _periodic_radius(grid, center)
    cap = math.log(1.0 / grid.spacing)
    with np.errstate(divide="ignore"):
        v = np.where(r > 0, np.log(1.0 / np.maximum(r, 1e-300)), np.inf)
    return ScalarField(grid, np.minimum(v, cap))


def gaussian_bump(grid: GridSpec, width: float, center=(np.pi, np.pi)) -> ScalarField:
    r = _periodic_radius(grid, center)
    return ScalarField(grid, np.exp(-(r**2) / (2.0 * width**2)))


def truncated_gaussian(grid: GridSpec, width: float, cutoff_radii: float = 3.0) -> ScalarField:
    """Gaussian bump hard-truncated to compact support of radius cutoff * width."""
    r = _periodic_radius(grid, (np.pi, np.pi))
    v = np.where(r <= cutoff_radii * width, np.exp(-(r**2) / (2.0 * width**2)), 0.0)
    return ScalarField(grid, v)


CORPUS_BUILDERS = (
    ("const_one", "constants", lambda grid: ScalarField(grid, np.ones(grid.shape))),
    ("mode_cos1", "modes", lambda grid: ScalarField.from_function(grid, lambda a, b: np.cos(a))),
    (
        "mode_coscos",
        "modes",
        lambda grid: ScalarField.from_function(grid, lambda a, b: np.cos(a) * np.cos(b)),
    ),
    (
        "step_half",
        "steps",
        lambda grid: ScalarField.from_function(grid, lambda a, b: np.where(a < np.pi, 1.0, -1.0)),
    ),
    ("ind_quarter", "indicators", lambda grid: dyadic_indicator(grid, 2)),
    ("ind_sixteenth", "indicators", lambda grid: dyadic_indicator(grid, 4)),
    ("log_cap", "logs", truncated_log),
    ("gauss_wide", "gaussians", lambda grid: gaussian_bump(grid, np.pi / 2)),
    ("gauss_mid", "gaussians", lambda grid: gaussian_bump(grid, np.pi / 8)),
    ("gauss_narrow", "gaussians", lambda grid: gaussian_bump(grid, np.pi / 32)),
    ("nind_4", "nind", lambda grid: normalized_indicator(grid, 1.0 / 4.0)),
    ("nind_16", "nind", lambda grid: normalized_indicator(grid, 1.0 / 16.0)),
)


def make_corpus(grid: GridSpec) -> list[tuple[str, str, ScalarField]]:
    """Deterministic (id, family, field) list of the fixed corpus."""
    return [(fid, family, build(grid)) for fid, family, build in CORPUS_BUILDERS]


# ---------------------------------------------------------------------------
# the main inequality
# ---------------------------------------------------------------------------


def log_bracket(l1_g: float, linf_g: float) -> float:
    """|ln ||g||_L1| + ln(1 + ||g||_Linf)."""
    if l1_g == 0:
        return 0.0
    return abs(math.log(l1_g)) + math.log1p(linf_g)


@dataclass(frozen=True)
class IneqTrial:
    """One evaluation of the duality inequality for a pair (f, g)."""

    f_id: str
    g_id: str
    grid_points: int
    lhs: float
    bmo_f: float
    l1_g: float
    linf_g: float
    bracket: float
    rhs_factor: float
    ratio: float | None
    degenerate: bool

    def csv_row(self) -> str:
        ratio = "" if self.ratio is None else f"{self.ratio:.17g}"
        return ",".join(
            [
                self.f_id,
                self.g_id,
                str(self.grid_points),
                f"{self.lhs:.17g}",
                f"{self.bmo_f:.17g}",
                f"{self.l1_g:.17g}",
                f"{self.linf_g:.17g}",
                f"{self.bracket:.17g}",
                ratio,
            ]
        )


def pairing(f: ScalarField, g: ScalarField) -> float:
    """Quadrature of integral f * g."""
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    return float(np.sum(f.values * g.values) * f.grid.cell_volume)


def verify_main_inequality(
    f: ScalarField,
    g: ScalarField,
    f_id: str = "f",
    g_id: str = "g",
    bmo_f: float | None = None,
) -> IneqTrial:
    """Empirical trial of |int f g| against ||f||_BMO ||g||_L1 [|ln..| + ln(1+..)].

    Degenerate trials (zero right-hand factor, e.g. g == 0 or constant f)
    carry ratio None.
    """
    lhs = abs(pairing(f, g))
    bmo = bmo_seminorm(f) if bmo_f is None else bmo_f
    l1g = lp_norm(g, 1)
    linfg = lp_norm(g, np.inf)
    bracket = log_bracket(l1g, linfg)
    rhs_factor = bmo * l1g * bracket
    degenerate = rhs_factor == 0.0
    ratio = None if degenerate else lhs / rhs_factor
    return IneqTrial(
        f_id, g_id, f.grid.points_per_axis, lhs, bmo, l1g, linfg, bracket, rhs_factor, ratio, degenerate
    )


def duality_ratio(f: ScalarField, g: ScalarField, bmo_f: float | None = None,
                  hardy_g: float | None = None) -> float | None:
    """Empirical constant of |int f g| <= C * ||f||_BMO * ||g||_H1 (None if degenerate)."""
    bmo = bmo_seminorm(f) if bmo_f is None else bmo_f
    hardy = hardy_norm(g) if hardy_g is None else hardy_g
    denom = bmo * hardy
    if denom == 0.0:
        return None
    return abs(pairing(f, g)) / denom


def riesz_l1_chain(g: ScalarField) -> dict:
    """Both sides of ||R_k g||_L1 <= c ||g||_L1 (1 + 2 ln(||g||_oo + 1) + |ln ||g||_L1|)."""
    l1g = lp_norm(g, 1)
    linfg = lp_norm(g, np.inf)
    rhs = l1g * (1.0 + 2.0 * math.log1p(linfg) + (abs(math.log(l1g)) if l1g > 0 else 0.0))
    out = {"rhs_factor": rhs, "l1": l1g, "linf": linfg}
    for axis in (1, 2):
        lhs = lp_norm(riesz_transform(g - g.mean(), axis), 1)
        out[f"lhs_{axis}"] = lhs
        out[f"c_{axis}"] = (lhs / rhs) if rhs > 0 else None
    return out


# ---------------------------------------------------------------------------
# Riesz L1 versus the Zygmund functional for compactly supported h
# ---------------------------------------------------------------------------


def support_extent(field: ScalarField) -> tuple[float, float]:
    """Periodic-aware extent of the support bounding box along each axis."""
    nz = field.values != 0
    h = field.grid.spacing
    extents = []
    for axis_occupied in (nz.any(axis=1), nz.any(axis=0)):
        idx = np.nonzero(axis_occupied)[0]
        if len(idx) == 0:
            extents.append(0.0)
            continue
        n = len(axis_occupied)
        gaps = np.diff(np.append(idx, idx[0] + n))  # circular gaps between occupied rows
        extents.append((n - (int(gaps.max()) - 1)) * h)
    return tuple(extents)


@dataclass(frozen=True)
class ZygmundTrial:
    h_id: str
    grid_points: int
    support: float
    llogl: float
    riesz_l1: tuple[float, float]
    constant: float  # max_k lhs_k / (1 + llogl)
    bound: float | None = None  # C0 + C0 * llogl once a corpus constant is known


def verify_zygmund_estimate(h: ScalarField, h_id: str = "h", c0: float | None = None) -> ZygmundTrial:
    """Record ||R_k h||_L1 per axis against C0 * (1 + int h ln+ h).

    h must be nonnegative with compact support: the support bounding box may
    occupy at most half the torus side per axis, which leaves the fourfold
    area margin used when a compactly supported function is wrapped onto the
    torus to emulate extension by zero.
    """
    if h.values.min() < 0:
        raise ValueError("h must be nonnegative")
    ext = support_extent(h)
    if max(ext) > np.pi * (1 + 1e-12):
        raise ValueError(
            f"support extent {max(ext):.3f} exceeds pi; h must be compactly supported "
            "in a sub-square of side at most half the torus"
        )
    llogl = zygmund_functional(h, 1.0)
    lhs = tuple(lp_norm(riesz_transform(h - h.mean(), axis), 1) for axis in (1, 2))
    constant = max(lhs) / (1.0 + llogl)
    bound = None if c0 is None else c0 * (1.0 + llogl)
    supp = float(np.count_nonzero(h.values) * h.grid.cell_volume)
    return ZygmundTrial(h_id, h.grid.points_per_axis, supp, llogl, lhs, constant, bound)


def zygmund_family_scan(grid: GridSpec, n_values=(2, 4, 8, 16, 32, 64)) -> dict:
    """Scan the unit-mass indicator family h = N * 1_{area 1/N}.

    Returns the trials, the corpus-wide constant C0 = max lhs / (1 + llogl),
    the per-axis least-squares slopes of ||R_k h||_L1 against ln N, and the
    matching slope of the Zygmund functional itself (identically 1 up to
    cell quantization of the realized mass).
    """
    trials = []
    for N in n_values:
        h = normalized_indicator(grid, 1.0 / N)
        trials.append(verify_zygmund_estimate(h, h_id=f"nind_{N}"))
    c0 = max(t.constant for t in trials)
    trials = [
        ZygmundTrial(t.h_id, t.grid_points, t.support, t.llogl, t.riesz_l1, t.constant,
                     bound=c0 * (1.0 + t.llogl))
        for t in trials
    ]
    log_n = np.array([math.log(1.0 / t.support) for t in trials])  # realized ln N
    llogl = np.array([t.llogl for t in trials])
    slope_llogl = float(np.polyfit(log_n, llogl, 1)[0])
    slopes = {}
    for axis in (0, 1):
        lhs = np.array([t.riesz_l1[axis] for t in trials])
        slopes[axis + 1] = float(np.polyfit(log_n, lhs, 1)[0])
    return {"trials": trials, "c0": c0, "slope_llogl": slope_llogl, "riesz_slopes": slopes}


# ---------------------------------------------------------------------------
# corpus scan across grid refinements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusScan:
    sizes: tuple[int, ...]
    trials: tuple[IneqTrial, ...]
    max_ratio: float
    max_ratio_by_size: dict
    max_ratio_by_family: dict
    ratio_slope: float | None  # d ln(max ratio) / d ln(size)
    duality_max_by_size: dict
    duality_slope: float | None
    chain_max_by_size: dict
    chain_slope: float | None
    elapsed_seconds: float

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(",".join(TRIALS_CSV_HEADER) + "\n")
            for t in self.trials:
                fh.write(t.csv_row() + "\n")


def _log_slope(sizes, values) -> float | None:
    sizes = [s for s, v in zip(sizes, values) if v > 0]
    vals = [v for v in values if v > 0]
    if len(vals) < 2:
        return None
    return float(np.polyfit(np.log(sizes), np.log(vals), 1)[0])


def scan_corpus(sizes=(32, 64, 128), corpus_builders=CORPUS_BUILDERS, sigma: float = 1.0) -> CorpusScan:
    """Deterministically enumerate all (f, g, size) trials over the corpus.

    Norms are computed once per (field, size); the trial table order is the
    enumeration order regardless of any ambient parallelism.
    """
    if len(corpus_builders) == 0 or len(sizes) == 0:
        raise ValueError("scan requires a nonempty corpus and at least one size")
    t_start = time.monotonic()
    trials: list[IneqTrial] = []
    max_by_size: dict[int, float] = {}
    max_by_family: dict[str, float] = {}
    duality_by_size: dict[int, float] = {}
    chain_by_size: dict[int, float] = {}
    for n in sizes:
        grid = GridSpec(n)
        fields = [(fid, fam, build(grid)) for fid, fam, build in corpus_builders]
        cache = {}
        for fid, _, fld in fields:
            cache[fid] = {
                "bmo": bmo_seminorm(fld),
                "l1": lp_norm(fld, 1),
                "linf": lp_norm(fld, np.inf),
                "hardy": hardy_norm(fld),
                "chain": riesz_l1_chain(fld),
            }
        best = 0.0
        best_dual = 0.0
        best_chain = 0.0
        for fid, fam, f in fields:
            for gid, _, g in fields:
                lhs = abs(pairing(f, g))
                info_f, info_g = cache[fid], cache[gid]
                bracket = log_bracket(info_g["l1"], info_g["linf"])
                rhs_factor = info_f["bmo"] * info_g["l1"] * bracket
                degenerate = rhs_factor == 0.0
                ratio = None if degenerate else lhs / rhs_factor
                trials.append(
                    IneqTrial(fid, gid, n, lhs, info_f["bmo"], info_g["l1"], info_g["linf"],
                              bracket, rhs_factor, ratio, degenerate)
                )
                if ratio is not None:
                    best = max(best, ratio)
                    max_by_family[fam] = max(max_by_family.get(fam, 0.0), ratio)
                denom = info_f["bmo"] * info_g["hardy"]
                if denom > 0:
                    best_dual = max(best_dual, lhs / denom)
        for fid, _, _ in fields:
            chain = cache[fid]["chain"]
            for axis in (1, 2):
                c = chain[f"c_{axis}"]
                if c is not None:
                    best_chain = max(best_chain, c)
        max_by_size[n] = best
        duality_by_size[n] = best_dual
        chain_by_size[n] = best_chain
    return CorpusScan(
        sizes=tuple(sizes),
        trials=tuple(trials),
        max_ratio=max(max_by_size.values()),
        max_ratio_by_size=max_by_size,
        max_ratio_by_family=max_by_family,
        ratio_slope=_log_slope(sizes, [max_by_size[n] for n in sizes]),
        duality_max_by_size=duality_by_size,
        duality_slope=_log_slope(sizes, [duality_by_size[n] for n in sizes]),
        chain_max_by_size=chain_by_size,
        chain_slope=_log_slope(sizes, [chain_by_size[n] for n in sizes]),
        elapsed_seconds=time.monotonic() - t_start,
    )
