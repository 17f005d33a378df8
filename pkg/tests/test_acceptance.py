"""Acceptance suite: one test per criterion, one printed verdict line each.

The large seeded sweeps are shared between criteria through module-scoped
fixtures; caches are cleared where a criterion requires an honest recompute.
Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
import time

import numpy as np
import pytest

from jacobi_bounds.bounds import (
    TheoremId,
    c_p,
    angular_constants,
    check_all,
    clear_caches,
    evaluate,
    semiclassical_L,
    spectrum_for,
    tilted_eigenvalues,
)
from jacobi_bounds.eigen import eig_complex
from jacobi_bounds.harness import (
    EnsembleConfig,
    campaign_to_json,
    campaign_violations,
    generate_ensemble,
    run_campaign,
    sharpness_search,
)
from jacobi_bounds.lemmas import lemma1_check, lemma2_check
from jacobi_bounds.operators import Jacobi1D, build_1d
from jacobi_bounds.regions import Branch

from oracles import (
    bound_state_eigenvalue,
    classical_sum,
    free_eigenvalues,
    mp_c_p,
    mp_semiclassical_L,
    single_site_ratio_sweep_max,
)

BASE_SEED = 20_261_717
P_GRID = (1.0, 1.5, 2.0)
ALPHA_GRID = (0.0, 0.5, 1.0)
THETA_GRID = (0.0, math.pi / 6, math.pi / 3)
DISTRIBUTIONS = ("uniform_disc", "gaussian", "real", "imaginary")


def sweep_configs():
    """Four mixed-distribution slices of the 1000-spec criterion-4 ensemble."""
    return [
        EnsembleConfig(
            family="1d",
            support_min=0,
            support_max=20,
            magnitude_cap=5.0,
            distribution=dist,
            count=250,
            seed=BASE_SEED + i,
            p_grid=P_GRID,
            alpha_grid=ALPHA_GRID,
            theta_grid=THETA_GRID,
        )
        for i, dist in enumerate(DISTRIBUTIONS)
    ]


def run_sweep():
    parts = []
    for cfg in sweep_configs():
        parts.append((cfg.distribution, run_campaign(cfg, workers=1)))
    return parts


@pytest.fixture(scope="module")
def sweep_result():
    t0 = time.perf_counter()
    parts = run_sweep()
    elapsed = time.perf_counter() - t0
    return parts, elapsed


def _warm_up_solvers():
    eig_complex(build_1d(Jacobi1D(truncation_size=4)))


def test_criterion_1_eigensolver_exactness():
    _warm_up_solvers()
    spec = Jacobi1D(truncation_size=200)
    matrix = build_1d(spec)
    t0 = time.perf_counter()
    spectrum = eig_complex(matrix)
    elapsed = time.perf_counter() - t0
    got = np.sort(spectrum.expanded().real)
    err = np.abs(got - free_eigenvalues(200)).max()
    err = max(err, np.abs(spectrum.expanded().imag).max())
    assert err < 1e-10, f"free spectrum error {err}"
    assert elapsed < 1.0, f"eigensolve took {elapsed:.3f}s"
    print(f"\n[PASS] criterion 1: free N=200 max error {err:.2e}, {elapsed:.3f}s")


def test_criterion_2_bound_state_oracle():
    worst = 0.0
    for c in (3.0, -3.0, 3j, 3 + 4j, 1.5):
        spec = Jacobi1D(b=(complex(c),), truncation_size=80)
        spectrum = spectrum_for(spec)
        want = bound_state_eigenvalue(complex(c))
        err = min(abs(z - want) for z in spectrum.expanded())
        assert err < 1e-8, f"c={c}: eigenvalue error {err}"
        worst = max(worst, err)
    print(f"[PASS] criterion 2: single-site eigenvalues within {worst:.2e} of c + 1/c")


def test_criterion_3_constant_fidelity():
    assert abs(c_p(1.0) - 4 * math.sqrt(3) / (3 * math.pi)) < 1e-12
    assert abs(c_p(1.0) - mp_c_p(1.0)) < 1e-12
    assert abs(semiclassical_L(1.0, 1) - 2 / (3 * math.pi)) < 1e-12
    assert abs(semiclassical_L(1.0, 1) - mp_semiclassical_L(1.0, 1)) < 1e-12
    assert abs(semiclassical_L(1.0, 2) - 1 / (8 * math.pi)) < 1e-12
    assert abs(semiclassical_L(1.0, 2) - mp_semiclassical_L(1.0, 2)) < 1e-12
    assert angular_constants(1.0, 0.0)[1] == 2.0**1.5
    print("[PASS] criterion 3: constants match arbitrary-precision references")


def test_criterion_4_theorem_soundness_sweep(sweep_result):
    parts, elapsed = sweep_result
    total = 0
    checked_ids = set()
    for dist, entries in parts:
        bad = campaign_violations(entries)
        assert not bad, f"{dist}: {len(bad)} violations, first: {bad[:1]}"
        for entry in entries:
            total += len(entry.reports)
            checked_ids.update(r.theorem_id for r in entry.reports)
    for tid in (
        TheoremId.T1_halfpow,
        TheoremId.T1_pow,
        TheoremId.T01_halfpow,
        TheoremId.T01_pow,
        TheoremId.T02_halfpow,
        TheoremId.T02_pow,
        TheoremId.REFINED_52,
        TheoremId.T2_angular_halfpow,
        TheoremId.T2_angular_pow,
        TheoremId.T3_strip_8,
        TheoremId.T3_outer_91,
        TheoremId.T3_angle_10,
    ):
        assert tid in checked_ids
    assert elapsed < 300.0, f"sweep took {elapsed:.0f}s"
    print(
        f"[PASS] criterion 4: {total} reports over 1000 specs, "
        f"0 violations, {elapsed:.0f}s"
    )


def test_criterion_5_lemma_machinery():
    specs = []
    for cfg in sweep_configs():
        specs.extend(generate_ensemble(cfg))
    assert len(specs) == 1000
    worst_slack = math.inf
    worst_sa = 0.0
    for spec in specs:
        for alpha in (-2.0, -1.0, 0.0, 1.0, 2.0):
            for branch in (Branch.PLUS, Branch.MINUS):
                rep = lemma1_check(spec, alpha, branch)
                slacks = [m[3] for m in rep.margins]
                worst_slack = min(worst_slack, min(slacks))
                assert rep.holds, (spec, alpha, branch)
                if spec.is_real:
                    worst_sa = max(worst_sa, max(abs(s) for s in slacks))
                    assert worst_sa < 1e-9, (spec, alpha, branch)
            for p in (1.0, 2.0):
                assert lemma2_check(spec, alpha, p).holds, (spec, alpha, p)
    print(
        f"[PASS] criterion 5: partial-sum slacks >= {worst_slack:.2e}; "
        f"self-adjoint slack <= {worst_sa:.2e}"
    )


def test_criterion_6_multidimensional():
    t0 = time.perf_counter()
    cfg = EnsembleConfig(
        family="lattice",
        nu=2,
        box_side=12,
        support_min=1,
        support_max=20,
        magnitude_cap=5.0,
        distribution="uniform_disc",
        count=100,
        seed=BASE_SEED + 40,
        p_grid=(1.0, 2.0),
    )
    entries = run_campaign(cfg, workers=1)
    bad = campaign_violations(entries)
    assert not bad, f"{len(bad)} violations, first: {bad[:1]}"
    seen = {r.theorem_id for e in entries for r in e.reports}
    assert TheoremId.T4_multi_halfpow in seen and TheoremId.T4_multi_pow in seen
    assert TheoremId.HS_multi_halfpow in seen and TheoremId.HS_multi_pow in seen
    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0, f"lattice sweep took {elapsed:.0f}s"
    total = sum(len(e.reports) for e in entries)
    print(f"[PASS] criterion 6: {total} lattice reports, 0 violations, {elapsed:.0f}s")


def test_criterion_7_self_adjoint_reduction():
    cfg = EnsembleConfig(
        family="1d",
        support_min=1,
        support_max=12,
        magnitude_cap=5.0,
        distribution="real",
        count=100,
        seed=BASE_SEED + 50,
        p_grid=(1.0,),
    )
    worst = 0.0
    for spec in generate_ensemble(cfg):
        mu = tilted_eigenvalues(spec, 0.0)  # real route: QL on the tridiagonal
        for p, tid in ((1.0, TheoremId.T1_pow), (1.5, TheoremId.T1_halfpow)):
            complex_route = evaluate(tid, spec, p)
            real_lhs = classical_sum(mu, p)
            worst = max(worst, abs(complex_route.lhs - real_lhs))
            assert abs(complex_route.lhs - real_lhs) < 1e-9
            real_holds = real_lhs <= complex_route.rhs * (1 + 1e-10)
            assert real_holds == complex_route.holds
        for tid in (TheoremId.SA_single_74, TheoremId.SA_single_73):
            assert evaluate(tid, spec, 1.0).holds
    print(f"[PASS] criterion 7: pipelines agree on LHS within {worst:.2e}")


def test_criterion_8_determinism(sweep_result):
    parts, _ = sweep_result
    first = {dist: campaign_to_json(entries) for dist, entries in parts}
    clear_caches()
    second = {dist: campaign_to_json(entries) for dist, entries in run_sweep()}
    assert first == second
    nbytes = sum(len(v) for v in first.values())
    print(f"[PASS] criterion 8: repeated sweep byte-identical ({nbytes} bytes)")


def test_criterion_9_sharpness_telemetry():
    oracle = single_site_ratio_sweep_max(20.0)
    start = Jacobi1D(b=(2.0,), truncation_size=41)
    state = sharpness_search(
        start,
        TheoremId.T1_pow,
        p=1.0,
        budget=2000,
        seed=BASE_SEED,
        magnitude_cap=20.0,
        real_only=True,
    )
    assert state.best_objective <= oracle + 1e-9
    assert state.best_objective >= 0.99 * oracle, (
        f"search reached {state.best_objective:.6f}, oracle {oracle:.6f}"
    )
    print(
        f"[PASS] criterion 9: search ratio {state.best_objective:.6f} vs "
        f"sweep oracle {oracle:.6f}"
    )
