"""Random ensembles, sharpness search, and the verification campaign.

Everything here is deterministic given the configured seed: the generator
draws in a fixed order, campaign aggregation sorts by spec index, and all
serialized numbers are rounded to 12 significant digits, so a repeated run
produces byte-identical JSON.
"""

from __future__ import annotations

import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import operators as ops
from .bounds import (
    BoundReport,
    TheoremId,
    check_all,
    evaluate,
    report_to_dict,
    round12,
)
from .operators import (
    Jacobi1D,
    LatticeJacobi,
    SpecFormatError,
    TruncationMode,
    spec_from_dict,
    spec_to_dict,
)

WORKERS_ENV = "JACOBI_BOUNDS_WORKERS"

_DISTRIBUTIONS = ("uniform_disc", "gaussian", "real", "imaginary")


# ---------------------------------------------------------------------------
# Ensemble configuration and generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnsembleConfig:
    family: str = "1d"
    support_min: int = 1
    support_max: int = 20
    magnitude_cap: float = 5.0
    distribution: str = "uniform_disc"
    count: int = 100
    seed: int = 0
    mode: TruncationMode = TruncationMode.HARD
    p_grid: tuple = (1.0,)
    alpha_grid: tuple = (0.0,)
    theta_grid: tuple = (0.0,)
    nu: int = 2
    box_side: int = 8

    def __post_init__(self):
        if self.family not in ("1d", "lattice"):
            raise SpecFormatError("family", f"expected '1d' or 'lattice', got {self.family!r}")
        if self.distribution not in _DISTRIBUTIONS:
            raise SpecFormatError(
                "distribution", f"expected one of {_DISTRIBUTIONS}, got {self.distribution!r}"
            )
        if self.count < 1:
            raise SpecFormatError("count", "count must be >= 1")
        if not (0 <= self.support_min <= self.support_max):
            raise SpecFormatError("support_min", "need 0 <= support_min <= support_max")
        if self.magnitude_cap < 0:
            raise SpecFormatError("magnitude_cap", "magnitude cap must be >= 0")
        if not isinstance(self.mode, TruncationMode):
            object.__setattr__(self, "mode", TruncationMode(self.mode))
        for name in ("p_grid", "alpha_grid", "theta_grid"):
            object.__setattr__(self, name, tuple(float(x) for x in getattr(self, name)))
        if any(p < 1 for p in self.p_grid):
            raise SpecFormatError("p_grid", "every p must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "EnsembleConfig":
        if not isinstance(d, dict):
            raise SpecFormatError("<root>", "config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise SpecFormatError(sorted(unknown)[0], "unknown config field")
        return cls(**d)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["mode"] = self.mode.value
        for name in ("p_grid", "alpha_grid", "theta_grid"):
            d[name] = list(d[name])
        return d


def _draw_value(rng: np.random.Generator, cfg: EnsembleConfig) -> complex:
    cap = cfg.magnitude_cap
    if cfg.distribution == "real":
        return complex(rng.uniform(-cap, cap))
    if cfg.distribution == "imaginary":
        return complex(0.0, rng.uniform(-cap, cap))
    if cfg.distribution == "uniform_disc":
        r = cap * np.sqrt(rng.uniform())
        phi = rng.uniform(0.0, 2.0 * np.pi)
        return complex(r * np.cos(phi), r * np.sin(phi))
    z = complex(rng.standard_normal(), rng.standard_normal()) * (cap / 3.0)
    if abs(z) > cap and abs(z) > 0:
        z *= cap / abs(z)
    return z


def _random_1d(rng: np.random.Generator, cfg: EnsembleConfig) -> Jacobi1D:
    ka = int(rng.integers(cfg.support_min, cfg.support_max + 1))
    kb = int(rng.integers(cfg.support_min, cfg.support_max + 1))
    a = tuple(1.0 + _draw_value(rng, cfg) for _ in range(ka))
    b = tuple(_draw_value(rng, cfg) for _ in range(kb))
    return Jacobi1D(a=a, b=b, truncation_mode=cfg.mode)


def _inner_sites(nu: int, box: int) -> list:
    return list(product(range(2, box), repeat=nu))


def _random_lattice(rng: np.random.Generator, cfg: EnsembleConfig) -> LatticeJacobi:
    sites = _inner_sites(cfg.nu, cfg.box_side)
    if not sites:
        raise SpecFormatError("box_side", "box too small for an interior support")
    n_sites = min(int(rng.integers(cfg.support_min, cfg.support_max + 1)), len(sites))
    chosen = rng.choice(len(sites), size=n_sites, replace=False)
    potential = tuple((sites[int(i)], _draw_value(rng, cfg)) for i in sorted(chosen))

    bonds = []
    site_set = set(sites)
    for s in sites:
        for axis in range(cfg.nu):
            t = list(s)
            t[axis] += 1
            t = tuple(t)
            if t in site_set:
                bonds.append((s, t))
    n_bonds = min(int(rng.integers(cfg.support_min, cfg.support_max + 1)), len(bonds))
    chosen_b = rng.choice(len(bonds), size=n_bonds, replace=False)
    bond_coeffs = tuple(
        (bonds[int(i)], 1.0 + _draw_value(rng, cfg)) for i in sorted(chosen_b)
    )
    return LatticeJacobi(
        dimension=cfg.nu,
        box_side=cfg.box_side,
        bond_coeffs=bond_coeffs,
        potential=potential,
        truncation_mode=cfg.mode,
    )


def generate_ensemble(cfg: EnsembleConfig) -> list:
    """Deterministic list of operator specs for the configured seed."""
    rng = np.random.default_rng(cfg.seed)
    maker = _random_1d if cfg.family == "1d" else _random_lattice
    return [maker(rng, cfg) for _ in range(cfg.count)]


# ---------------------------------------------------------------------------
# Sharpness search
# ---------------------------------------------------------------------------


@dataclass
class SearchState:
    current_spec: object
    current_objective: float
    step_scale: float
    iteration: int
    best_spec: object
    best_objective: float
    trace: list = field(default_factory=list)


def _coordinates(spec, real_only: bool) -> list:
    parts = ("re",) if real_only else ("re", "im")
    coords = []
    if isinstance(spec, Jacobi1D):
        for k in range(len(spec.a)):
            coords += [("a", k, part) for part in parts]
        for k in range(len(spec.b)):
            coords += [("b", k, part) for part in parts]
    else:
        for k in range(len(spec.bond_coeffs)):
            coords += [("a", k, part) for part in parts]
        for k in range(len(spec.potential)):
            coords += [("b", k, part) for part in parts]
    return coords


def _clamp(z: complex, centre: complex, cap: float) -> complex:
    d = z - centre
    if abs(d) > cap > 0:
        z = centre + d * (cap / abs(d))
    return z


def _nudge(spec, coord, delta: float, cap: float):
    kind, k, part = coord
    step = complex(delta, 0.0) if part == "re" else complex(0.0, delta)
    if isinstance(spec, Jacobi1D):
        if kind == "a":
            vals = list(spec.a)
            vals[k] = _clamp(vals[k] + step, 1.0, cap)
            return dataclasses.replace(spec, a=tuple(vals))
        vals = list(spec.b)
        vals[k] = _clamp(vals[k] + step, 0.0, cap)
        return dataclasses.replace(spec, b=tuple(vals))
    if kind == "a":
        vals = list(spec.bond_coeffs)
        key, v = vals[k]
        vals[k] = (key, _clamp(v + step, 1.0, cap))
        return dataclasses.replace(spec, bond_coeffs=tuple(vals))
    vals = list(spec.potential)
    key, v = vals[k]
    vals[k] = (key, _clamp(v + step, 0.0, cap))
    return dataclasses.replace(spec, potential=tuple(vals))


def sharpness_search(
    start,
    theorem_id,
    p: float = 1.0,
    alpha: float = 0.0,
    theta: float = 0.0,
    budget: int = 100,
    seed: int = 0,
    step_scale: float = 0.5,
    magnitude_cap: float = 5.0,
    real_only: bool = None,
) -> SearchState:
    """Hill-climb the ratio lhs/rhs of one bound over the coefficient space.

    Coordinate-wise random perturbations of the real and imaginary parts,
    step scale halved after 20 consecutive rejections, restart from a
    perturbed best when the scale bottoms out.  The objective is evaluated
    in HARD mode so every probe is an exact theorem instance; an objective
    above 1 + 1e-10 would contradict the bound and raises RuntimeError.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    tid = TheoremId(theorem_id)
    start = dataclasses.replace(start, truncation_mode=TruncationMode.HARD)
    if real_only is None:
        real_only = start.is_real
    rng = np.random.default_rng(seed)
    initial_step = step_scale

    def objective(spec) -> float:
        r = evaluate(tid, spec, p, alpha=alpha, theta=theta)
        if r.ratio > 1.0 + 1e-10:
            raise RuntimeError(
                f"objective {r.ratio} exceeds 1: bound violation or solver bug "
                f"({tid.value}, p={p}, alpha={alpha}, theta={theta})"
            )
        return r.ratio

    current = start
    value = objective(current)
    state = SearchState(
        current_spec=current,
        current_objective=value,
        step_scale=step_scale,
        iteration=1,
        best_spec=current,
        best_objective=value,
        trace=[(1, value)],
    )
    coords = _coordinates(start, real_only)
    if not coords:
        return state
    rejections = 0
    while state.iteration < budget:
        coord = coords[int(rng.integers(len(coords)))]
        delta = state.step_scale * rng.standard_normal()
        candidate = _nudge(state.current_spec, coord, delta, magnitude_cap)
        value = objective(candidate)
        state.iteration += 1
        if value > state.current_objective:
            state.current_spec = candidate
            state.current_objective = value
            rejections = 0
            if value > state.best_objective:
                state.best_spec = candidate
                state.best_objective = value
                state.trace.append((state.iteration, value))
        else:
            rejections += 1
            if rejections >= 20:
                state.step_scale /= 2.0
                rejections = 0
                if state.step_scale < 1e-4 * initial_step and state.iteration < budget:
                    # restart near the incumbent best
                    state.step_scale = initial_step
                    restarted = state.best_spec
                    for c in coords:
                        restarted = _nudge(
                            restarted,
                            c,
                            0.1 * initial_step * rng.standard_normal(),
                            magnitude_cap,
                        )
                    state.current_spec = restarted
                    state.current_objective = objective(restarted)
                    state.iteration += 1
    return state


# ---------------------------------------------------------------------------
# Stabilization diagnostics
# ---------------------------------------------------------------------------


def stabilization_check(
    spec, theorem_id, p: float = 1.0, alpha: float = 0.0, theta: float = 0.0
) -> dict:
    """Compare the bound's left-hand side at the configured and doubled sizes.

    Only meaningful in APPROXIMATE mode; a relative difference at or above
    1e-6 flags the truncation as unstabilized.
    """
    if spec.truncation_mode is not TruncationMode.APPROXIMATE:
        raise ValueError("stabilization_check requires an approximate-mode spec")
    first = evaluate(theorem_id, spec, p, alpha=alpha, theta=theta, _stabilize=False)
    second = evaluate(
        theorem_id, ops.enlarged(spec), p, alpha=alpha, theta=theta, _stabilize=False
    )
    denom = max(abs(first.lhs), abs(second.lhs))
    rel = abs(first.lhs - second.lhs) / denom if denom > 0 else 0.0
    return {
        "lhs": first.lhs,
        "lhs_doubled": second.lhs,
        "rel_diff": rel,
        "flagged": rel >= 1e-6,
    }


# ---------------------------------------------------------------------------
# Campaign
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CampaignEntry:
    spec_index: int
    variant: str  # "direct" or "tilted0" (real part of a complex lattice spec)
    spec: object
    reports: tuple


def _campaign_job(args):
    index, spec, p_grid, alpha_grid, theta_grid = args
    entries = [
        CampaignEntry(
            spec_index=index,
            variant="direct",
            spec=spec,
            reports=tuple(check_all(spec, p_grid, alpha_grid, theta_grid)),
        )
    ]
    if isinstance(spec, LatticeJacobi) and not spec.is_real:
        tilted = ops.tilt(spec, 0.0)
        entries.append(
            CampaignEntry(
                spec_index=index,
                variant="tilted0",
                spec=tilted,
                reports=tuple(check_all(tilted, p_grid, alpha_grid, theta_grid)),
            )
        )
    return entries


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_campaign(cfg: EnsembleConfig, workers: int = None) -> list:
    """Evaluate every applicable bound on every ensemble spec.

    Fans out across specs with a process pool when ``workers`` (or the
    ``JACOBI_BOUNDS_WORKERS`` environment variable) allows; aggregation is
    order-independent and the output is sorted, so the result does not
    depend on scheduling.
    """
    specs = generate_ensemble(cfg)
    jobs = [
        (i, spec, cfg.p_grid, cfg.alpha_grid, cfg.theta_grid)
        for i, spec in enumerate(specs)
    ]
    if workers is None:
        workers = default_workers()
    entries = []
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            entries.extend(_campaign_job(job))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(_campaign_job, jobs, chunksize=8):
                entries.extend(result)
    entries.sort(key=lambda e: (e.spec_index, e.variant))
    return entries


def campaign_violations(entries) -> list:
    out = []
    for entry in entries:
        for report in entry.reports:
            if not report.holds:
                out.append((entry.spec_index, entry.variant, report))
    return out


def _round_tree(obj):
    if isinstance(obj, float):
        return round12(obj)
    if isinstance(obj, list):
        return [_round_tree(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    return obj


def campaign_to_json(entries) -> str:
    payload = [
        {
            "spec_index": e.spec_index,
            "variant": e.variant,
            "spec": _round_tree(spec_to_dict(e.spec)),
            "reports": [report_to_dict(r) for r in e.reports],
        }
        for e in entries
    ]
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def search_to_json(state: SearchState) -> str:
    return json.dumps(
        {
            "best_objective": round12(state.best_objective),
            "best_spec": spec_to_dict(state.best_spec),
            "iterations": state.iteration,
            "trace": [[i, round12(v)] for i, v in state.trace],
        },
        sort_keys=True,
        separators=(",", ":"),
    )
