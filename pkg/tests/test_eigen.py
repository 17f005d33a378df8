import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_bounds.eigen import (
    ConvergenceError,
    Spectrum,
    cluster_multiplicities,
    eig_complex,
    eig_real_symmetric,
    eig_real_symtri,
    hessenberg_reduce,
    is_tridiagonal,
    qr_eigvals,
)
from jacobi_bounds.operators import Jacobi1D, LatticeJacobi, build_1d, build_lattice

from oracles import bound_state_eigenvalue, free_eigenvalues, sturm_extreme_eigenvalue


def sorted_eigs(spectrum: Spectrum) -> np.ndarray:
    return np.sort_complex(spectrum.expanded())


# ---------------------------------------------------------------------------
# hessenberg_reduce
# ---------------------------------------------------------------------------


def test_hessenberg_fast_path_tridiagonal():
    m = build_1d(Jacobi1D(truncation_size=3))
    assert hessenberg_reduce(m) is m


def test_hessenberg_fast_path_1x1():
    m = np.array([[2 + 1j]])
    out = hessenberg_reduce(m)
    assert out.shape == (1, 1) and out[0, 0] == 2 + 1j


def test_hessenberg_preserves_eigenvalues_of_lattice_matrix():
    lat = LatticeJacobi(
        dimension=2, box_side=2, potential={(1, 1): 1j, (2, 2): 0.5}
    )
    m = build_lattice(lat)
    h = hessenberg_reduce(m)
    assert np.abs(np.tril(h, -2)).max() < 1e-14 * np.linalg.norm(m)
    before = sorted_eigs(eig_complex(m))
    after = sorted_eigs(eig_complex(h))
    assert np.abs(before - after).max() < 1e-10


@given(st.integers(4, 8), st.integers(0, 1000))
@settings(max_examples=25, deadline=None)
def test_hessenberg_eigenvalue_invariance_random(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = hessenberg_reduce(m)
    before = sorted_eigs(eig_complex(m))
    after = sorted_eigs(eig_complex(h))
    assert np.abs(before - after).max() < 1e-9 * max(1.0, np.linalg.norm(m))


# ---------------------------------------------------------------------------
# eig_complex
# ---------------------------------------------------------------------------


def test_free_n3_closed_form():
    s = eig_complex(build_1d(Jacobi1D(truncation_size=3)))
    got = np.sort(s.expanded().real)
    want = np.array([-math.sqrt(2), 0.0, math.sqrt(2)])
    assert np.abs(got - want).max() < 1e-12
    assert all(rec.multiplicity == 1 for rec in s.eigenvalues)


def test_free_truncations_match_closed_form():
    for n in (3, 60, 200):
        s = eig_complex(build_1d(Jacobi1D(truncation_size=n)))
        got = np.sort(s.expanded().real)
        assert np.abs(got - free_eigenvalues(n)).max() < 1e-10
        assert np.abs(s.expanded().imag).max() < 1e-10


def test_single_real_site_bound_state():
    # independent oracles: the closed form c + 1/c for the half-line operator
    # and Sturm bisection on the truncated section itself
    spec = Jacobi1D(b=(3.0,), truncation_size=60)
    s = eig_complex(build_1d(spec))
    top = max(s.expanded(), key=lambda z: z.real)
    assert abs(top - bound_state_eigenvalue(3.0)) < 1e-8
    diag = [3.0] + [0.0] * 59
    off = [1.0] * 59
    assert abs(top.real - sturm_extreme_eigenvalue(diag, off)) < 1e-9
    assert abs(top.imag) < 1e-10


def test_single_complex_site_bound_state():
    spec = Jacobi1D(b=(3 + 4j,), truncation_size=60)
    s = eig_complex(build_1d(spec))
    want = bound_state_eigenvalue(3 + 4j)
    assert want == 3.12 + 3.84j
    best = min(s.expanded(), key=lambda z: abs(z - want))
    assert abs(best - want) < 1e-8


def test_spectrum_is_certified_and_residuals_small():
    s = eig_complex(build_1d(Jacobi1D(b=(2j, 1.0), truncation_size=40)))
    assert s.certified
    assert max(rec.residual for rec in s.eigenvalues) < s.certification_tol


def test_trace_matches_eigenvalue_sum():
    rng = np.random.default_rng(7)
    for n in (5, 12, 30):
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        s = eig_complex(m)
        total = (s.values() * s.multiplicities()).sum()
        assert abs(total - np.trace(m)) < 1e-9 * n * np.linalg.norm(m)


def test_eig_complex_matches_numpy_on_dense():
    rng = np.random.default_rng(42)
    m = rng.standard_normal((14, 14)) + 1j * rng.standard_normal((14, 14))
    got = sorted_eigs(eig_complex(m))
    want = np.sort_complex(np.linalg.eigvals(m))
    assert np.abs(got - want).max() < 1e-10


def test_defective_block_still_solved():
    # [[i, 1], [1, -i]] has a double eigenvalue 0 with a one-dimensional
    # eigenspace; the 2x2 closed form must return it exactly
    m = np.array([[1j, 1.0], [1.0, -1j]])
    s = eig_complex(m)
    assert s.source_order == 2
    assert max(abs(z) for z in s.expanded()) < 1e-12


def test_non_square_rejected():
    with pytest.raises(ValueError, match="square"):
        eig_complex(np.ones((2, 3)))


def test_qr_requires_hessenberg():
    with pytest.raises(ValueError, match="Hessenberg"):
        qr_eigvals(np.ones((4, 4)))


def test_convergence_error_names_block():
    m = build_1d(Jacobi1D(b=(1j, 2.0, -1.0), truncation_size=8))
    with pytest.raises(ConvergenceError, match=r"block rows \d+\.\.\d+"):
        qr_eigvals(m, max_sweeps=1)


# ---------------------------------------------------------------------------
# eig_real_symtri
# ---------------------------------------------------------------------------


def test_ql_free_n3():
    got = eig_real_symtri([0.0, 0.0, 0.0], [1.0, 1.0])
    want = np.array([-math.sqrt(2), 0.0, math.sqrt(2)])
    assert np.abs(got - want).max() < 1e-14


def test_ql_single_site_against_two_oracles():
    diag = [3.0] + [0.0] * 59
    off = [1.0] * 59
    got = eig_real_symtri(diag, off)
    assert abs(got[-1] - bound_state_eigenvalue(3.0).real) < 1e-8
    assert abs(got[-1] - sturm_extreme_eigenvalue(diag, off)) < 1e-10


def test_ql_1x1():
    assert np.array_equal(eig_real_symtri([5.0], []), np.array([5.0]))


def test_ql_free_n400():
    n = 400
    got = eig_real_symtri(np.zeros(n), np.ones(n - 1))
    assert np.abs(got - free_eigenvalues(n)).max() < 1e-10


def test_ql_rejects_inconsistent_lengths():
    with pytest.raises(ValueError, match="inconsistent"):
        eig_real_symtri([1.0, 2.0], [1.0, 1.0])


@given(st.integers(2, 12), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_real_tridiagonal_routes_agree(n, seed):
    rng = np.random.default_rng(seed)
    diag = rng.uniform(-3, 3, size=n)
    off = rng.uniform(-2, 2, size=n - 1)
    m = np.diag(diag).astype(complex)
    m += np.diag(off, 1) + np.diag(off, -1)
    via_qr = np.sort(eig_complex(m).expanded().real)
    via_ql = eig_real_symtri(diag, off)
    assert np.abs(via_qr - via_ql).max() < 1e-9 * max(1.0, np.linalg.norm(m))


def test_dense_real_symmetric_route():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((20, 20))
    a = (a + a.T) / 2
    got = eig_real_symmetric(a)
    want = np.sort(np.linalg.eigvalsh(a))
    assert np.abs(got - want).max() < 1e-10


# ---------------------------------------------------------------------------
# cluster_multiplicities
# ---------------------------------------------------------------------------


def test_cluster_pairs_nearby_values():
    s = cluster_multiplicities([1.0, 1.0 + 1e-12, 5.0], 1e-8)
    by_mult = sorted((rec.multiplicity, rec.value) for rec in s.eigenvalues)
    assert by_mult == [(1, 5.0), (2, pytest.approx(1.0))]
    assert s.source_order == 3


def test_cluster_keeps_separated_values_simple():
    s = cluster_multiplicities([1.0, 2.0, 3.0], 1e-8)
    assert [rec.multiplicity for rec in s.eigenvalues] == [1, 1, 1]


def test_cluster_chain_linkage():
    s = cluster_multiplicities([0.0, 1e-9, 2e-9], 1e-8)
    assert len(s.eigenvalues) == 1
    assert s.eigenvalues[0].multiplicity == 3


def test_cluster_multiplicity_totals_match_source_order():
    rng = np.random.default_rng(11)
    vals = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    s = cluster_multiplicities(vals, 1e-10)
    assert sum(rec.multiplicity for rec in s.eigenvalues) == s.source_order == 30


def test_is_tridiagonal_probe():
    assert is_tridiagonal(build_1d(Jacobi1D(truncation_size=5)))
    assert not is_tridiagonal(build_lattice(LatticeJacobi(dimension=2, box_side=2)))


def test_badly_scaled_dense_matrix_is_balanced():
    # entry magnitudes span more than 1e6, which switches the balancing on
    rng = np.random.default_rng(19)
    m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    m[0, :] *= 1e8
    m[:, 0] *= 1e-8
    got = sorted_eigs(eig_complex(m))
    want = np.sort_complex(np.linalg.eigvals(m))
    assert np.abs(got - want).max() < 1e-8 * np.abs(want).max()
