"""Dense eigensolvers with residual certificates.

Two independent routes are kept deliberately separate so they can
cross-check each other:

* :func:`eig_complex` - single-shift complex QR with deflation on the
  Hessenberg form, Wilkinson-style shift taken from the trailing 2 x 2
  block.  Works for any square complex matrix; tridiagonal input skips
  the reduction.
* :func:`eig_real_symtri` - implicit-shift QL for real symmetric
  tridiagonal matrices.

Every eigenvalue from the QR route carries a residual from one step of
inverse iteration, ||(M - lambda I) v|| / ||v||, measured against the
original input matrix.  A spectrum whose residuals all sit below the
certification tolerance (1e-8 times the matrix norm by default) is
certified.

The iteration kernels are plain scalar loops; when numba is importable they
are JIT-compiled, otherwise they run interpreted (same code, same results,
slower).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    import numba

    def _jit(fn):
        return numba.njit(cache=True)(fn)

except ImportError:  # pragma: no cover - exercised only without numba

    def _jit(fn):
        return fn


DEFLATION_RTOL = 1e-14
CERT_TOL_FACTOR = 1e-8
BALANCE_SPAN = 1e6


class ConvergenceError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Spectrum container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenvalueRecord:
    value: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class Spectrum:
    """Clustered eigenvalues of one matrix, with residual certificates."""

    eigenvalues: tuple
    source_order: int
    certification_tol: float

    def __post_init__(self):
        total = sum(rec.multiplicity for rec in self.eigenvalues)
        if total != self.source_order:
            raise ValueError(
                f"multiplicities sum to {total}, expected {self.source_order}"
            )

    @property
    def certified(self) -> bool:
        return all(rec.residual <= self.certification_tol for rec in self.eigenvalues)

    def values(self) -> np.ndarray:
        """Cluster centroids, one per record."""
        return np.array([rec.value for rec in self.eigenvalues], dtype=np.complex128)

    def multiplicities(self) -> np.ndarray:
        return np.array([rec.multiplicity for rec in self.eigenvalues], dtype=np.int64)

    def expanded(self) -> np.ndarray:
        """Eigenvalues repeated according to multiplicity (length source_order)."""
        return np.repeat(self.values(), self.multiplicities())

    def to_json_dicts(self) -> list:
        return [
            {
                "re": rec.value.real,
                "im": rec.value.imag,
                "mult": rec.multiplicity,
                "residual": rec.residual,
            }
            for rec in self.eigenvalues
        ]


# ---------------------------------------------------------------------------
# Structure probes and balancing
# ---------------------------------------------------------------------------


def _check_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m.astype(np.complex128, copy=False)


def is_tridiagonal(m: np.ndarray) -> bool:
    n = m.shape[0]
    if n <= 2:
        return True
    lower = np.tril(m, -2)
    upper = np.triu(m, 2)
    return not lower.any() and not upper.any()


def is_upper_hessenberg(m: np.ndarray) -> bool:
    return m.shape[0] <= 2 or not np.tril(m, -2).any()


def balance(m: np.ndarray, radix: float = 2.0) -> np.ndarray:
    """Diagonal similarity scaling (Parlett-Reinsch); eigenvalues unchanged."""
    a = np.array(m, dtype=np.complex128, copy=True)
    n = a.shape[0]
    done = False
    while not done:
        done = True
        for i in range(n):
            c = np.sum(np.abs(a[:, i])) - abs(a[i, i])
            r = np.sum(np.abs(a[i, :])) - abs(a[i, i])
            if c == 0.0 or r == 0.0:
                continue
            f = 1.0
            s = c + r
            while c < r / radix:
                c *= radix
                r /= radix
                f *= radix
            while c >= r * radix:
                c /= radix
                r *= radix
                f /= radix
            if (c + r) < 0.95 * s and f != 1.0:
                done = False
                a[i, :] /= f
                a[:, i] *= f
    return a


def _needs_balancing(m: np.ndarray) -> bool:
    mags = np.abs(m[m != 0])
    if mags.size == 0:
        return False
    return mags.max() / mags.min() > BALANCE_SPAN


# ---------------------------------------------------------------------------
# Hessenberg reduction
# ---------------------------------------------------------------------------


def hessenberg_reduce(m: np.ndarray) -> np.ndarray:
    """Unitarily similar upper-Hessenberg form via Householder reflectors.

    Tridiagonal input is returned unchanged (fast path).  Entries below the
    first subdiagonal of the result are exactly zero.
    """
    m = _check_square(m)
    n = m.shape[0]
    if n <= 2 or is_tridiagonal(m):
        return m
    h = np.array(m, dtype=np.complex128, copy=True)
    for k in range(n - 2):
        x = h[k + 1 :, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        alpha = -phase * xnorm
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm < 1e-300:
            continue
        v /= vnorm
        # similarity with P = I - 2 v v^H on the trailing block
        h[k + 1 :, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1 :, k:])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v.conj())
        h[k + 1, k] = alpha
        h[k + 2 :, k] = 0.0
    return h


# ---------------------------------------------------------------------------
# Complex QR iteration (single shift, deflation); scalar kernel, JIT-friendly
# ---------------------------------------------------------------------------


def _eig2x2_kernel(a, b, c, d):
    m = 0.5 * (a + d)
    det = a * d - b * c
    disc = np.sqrt(complex(m * m - det))
    if abs(m + disc) >= abs(m - disc):
        big = m + disc
    else:
        big = m - disc
    if big == 0:
        return m, m
    return big, det / big


def _qr_kernel(h, max_sweeps, norm_floor):
    """Returns (eigenvalues, status, lo, hi, sweeps); status -1 on stagnation."""
    n = h.shape[0]
    eigs = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    sweeps = 0
    stagnation = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            thresh = DEFLATION_RTOL * (abs(h[lo - 1, lo - 1]) + abs(h[lo, lo]))
            if thresh == 0.0:
                # zero diagonal pair; fall back to a norm-based threshold
                thresh = DEFLATION_RTOL * norm_floor
            if abs(h[lo, lo - 1]) <= thresh:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs[hi] = h[hi, hi]
            hi -= 1
            stagnation = 0
            continue
        if lo == hi - 1:
            l1, l2 = _eig2x2_kernel(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi])
            eigs[hi] = l1
            eigs[hi - 1] = l2
            hi -= 2
            stagnation = 0
            continue
        if sweeps >= max_sweeps:
            return eigs, -1, lo, hi, sweeps
        if stagnation > 0 and stagnation % 10 == 0:
            # exceptional shift to break limit cycles
            shift = complex(abs(h[hi, hi - 1]) + abs(h[hi - 1, hi - 2]), 0.0)
        else:
            l1, l2 = _eig2x2_kernel(
                h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi]
            )
            if abs(l1 - h[hi, hi]) <= abs(l2 - h[hi, hi]):
                shift = l1
            else:
                shift = l2
        # implicit single-shift sweep with bulge chasing
        x = h[lo, lo] - shift
        y = h[lo + 1, lo]
        for j in range(lo, hi):
            if j > lo:
                x = h[j, j - 1]
                y = h[j + 1, j - 1]
            # Givens rotation [[c, s], [-conj(s), c]] zeroing y against x
            if y == 0:
                cr = 1.0
                s = 0.0 + 0.0j
            elif x == 0:
                cr = 0.0
                s = np.conj(y) / abs(y)
            else:
                ax = abs(x)
                dd = math.hypot(ax, abs(y))
                cr = ax / dd
                s = (x / ax) * np.conj(y) / dd
            sc = np.conj(s)
            c0 = j - 1 if j > lo else lo
            for col in range(c0, hi + 1):
                t1 = h[j, col]
                t2 = h[j + 1, col]
                h[j, col] = cr * t1 + s * t2
                h[j + 1, col] = -sc * t1 + cr * t2
            if j > lo:
                h[j + 1, j - 1] = 0.0
            r1 = min(j + 2, hi) + 1
            for row in range(lo, r1):
                t1 = h[row, j]
                t2 = h[row, j + 1]
                h[row, j] = cr * t1 + sc * t2
                h[row, j + 1] = -s * t1 + cr * t2
        sweeps += 1
        stagnation += 1
    return eigs, 0, 0, 0, sweeps


_eig2x2_kernel = _jit(_eig2x2_kernel)
_qr_kernel = _jit(_qr_kernel)


def qr_eigvals(h: np.ndarray, max_sweeps: int = None) -> np.ndarray:
    """All eigenvalues of an upper-Hessenberg matrix, unordered.

    Deflates when a subdiagonal entry drops below
    ``DEFLATION_RTOL * (|h_kk| + |h_k+1,k+1|)``; raises
    :class:`ConvergenceError` naming the active block after ``max_sweeps``
    sweeps (default 30 n).
    """
    h = np.array(_check_square(h), copy=True)
    n = h.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.complex128)
    if not is_upper_hessenberg(h):
        raise ValueError("qr_eigvals expects an upper-Hessenberg matrix")
    if max_sweeps is None:
        max_sweeps = 30 * n
    eigs, status, lo, hi, sweeps = _qr_kernel(
        h, max_sweeps, float(np.linalg.norm(h))
    )
    if status != 0:
        raise ConvergenceError(
            f"QR iteration did not converge after {sweeps} sweeps; "
            f"stagnating block rows {lo}..{hi}"
        )
    return eigs


# ---------------------------------------------------------------------------
# Residuals and clustering
# ---------------------------------------------------------------------------


def _tridiag_residual_kernel(dl, dg, du, lam, rhs, pivot_floor):
    """Residual of one inverse-iteration step for a tridiagonal matrix.

    Solves (T - lam I) v = rhs by LU with partial pivoting (one extra
    superdiagonal of fill-in), then returns ||(T - lam I) v|| / ||v||.
    Vanishing pivots are replaced by a relative floor, the usual inverse
    iteration device for a shift that is (numerically) an exact eigenvalue.
    """
    n = dg.shape[0]
    low = dl.copy()
    mid = dg - lam
    up = du.copy()
    up2 = np.zeros(n, dtype=np.complex128)
    b = rhs.copy()
    mid0 = mid.copy()
    for i in range(n - 1):
        if abs(low[i]) > abs(mid[i]):
            # swap rows i, i+1
            mid_i = mid[i]
            mid[i] = low[i]
            low[i] = mid_i
            if i < n - 1:
                t = up[i]
                up[i] = mid[i + 1]
                mid[i + 1] = t
            if i < n - 2:
                up2[i] = up[i + 1]
                up[i + 1] = 0.0
            tb = b[i]
            b[i] = b[i + 1]
            b[i + 1] = tb
        if abs(mid[i]) < pivot_floor:
            mid[i] = pivot_floor
        factor = low[i] / mid[i]
        mid[i + 1] -= factor * up[i]
        if i < n - 2:
            up[i + 1] -= factor * up2[i]
        b[i + 1] -= factor * b[i]
    if abs(mid[n - 1]) < pivot_floor:
        mid[n - 1] = pivot_floor
    v = np.zeros(n, dtype=np.complex128)
    for i in range(n - 1, -1, -1):
        acc = b[i]
        if i < n - 1:
            acc -= up[i] * v[i + 1]
        if i < n - 2:
            acc -= up2[i] * v[i + 2]
        v[i] = acc / mid[i]
    # residual against the unfactored matrix
    vnorm = 0.0
    rnorm = 0.0
    for i in range(n):
        acc = mid0[i] * v[i]
        if i > 0:
            acc += dl[i - 1] * v[i - 1]
        if i < n - 1:
            acc += du[i] * v[i + 1]
        rnorm += abs(acc) ** 2
        vnorm += abs(v[i]) ** 2
    if vnorm == 0.0:
        return np.inf
    return math.sqrt(rnorm / vnorm)


_tridiag_residual_kernel = _jit(_tridiag_residual_kernel)


def residual_estimates(m: np.ndarray, values: np.ndarray) -> np.ndarray:
    """One inverse-iteration step per eigenvalue: ||(M - lambda I) v|| / ||v||."""
    m = _check_square(m)
    n = m.shape[0]
    rng = np.random.default_rng(0x5EED ^ n)
    start = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    out = np.empty(len(values), dtype=np.float64)
    if n > 0 and is_tridiagonal(m):
        dl = np.ascontiguousarray(np.diag(m, -1))
        dg = np.ascontiguousarray(np.diag(m))
        du = np.ascontiguousarray(np.diag(m, 1))
        scale = float(np.linalg.norm(m))
        floor = np.finfo(float).eps * max(scale, 1.0)
        for i, lam in enumerate(values):
            out[i] = _tridiag_residual_kernel(dl, dg, du, complex(lam), start, floor)
        return out
    eye = np.eye(n, dtype=np.complex128)
    for i, lam in enumerate(values):
        shift = lam
        v = None
        for attempt in range(4):
            try:
                v = np.linalg.solve(m - shift * eye, start)
                break
            except np.linalg.LinAlgError:
                shift = lam + (1.0 + abs(lam)) * 1e-14 * 10.0**attempt
        if v is None:
            out[i] = np.inf
            continue
        out[i] = np.linalg.norm(m @ v - lam * v) / np.linalg.norm(v)
    return out


def cluster_multiplicities(
    values,
    tol: float,
    residuals=None,
    source_order: int = None,
    certification_tol: float = None,
) -> Spectrum:
    """Greedy single-linkage clustering of eigenvalues within ``tol``.

    Chains count: values v1, v2 with |v1 - v2| <= tol land in one cluster
    even when further members are only close to one of them.  The cluster
    centroid is reported with multiplicity equal to the cluster size.
    """
    if tol <= 0:
        raise ValueError("clustering tolerance must be positive")
    values = np.asarray(values, dtype=np.complex128)
    n = len(values)
    if residuals is None:
        residuals = np.zeros(n)
    residuals = np.asarray(residuals, dtype=np.float64)
    if source_order is None:
        source_order = n
    if certification_tol is None:
        certification_tol = tol

    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = np.argsort(values.real, kind="stable")
    reals = values.real[order]
    for pos in range(n):
        i = order[pos]
        for qos in range(pos + 1, n):
            if reals[qos] - reals[pos] > tol:
                break
            j = order[qos]
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)

    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    records = []
    for members in groups.values():
        vals = values[members]
        centroid = complex(vals.mean())
        records.append(
            EigenvalueRecord(
                value=centroid,
                multiplicity=len(members),
                residual=float(residuals[members].max()) if len(members) else 0.0,
            )
        )
    records.sort(key=lambda r: (r.value.real, r.value.imag))
    return Spectrum(
        eigenvalues=tuple(records),
        source_order=source_order,
        certification_tol=certification_tol,
    )


# ---------------------------------------------------------------------------
# Top-level solvers
# ---------------------------------------------------------------------------


def eig_complex(
    m: np.ndarray,
    cluster_tol: float = None,
    certification_tol: float = None,
    max_sweeps: int = None,
) -> Spectrum:
    """Full spectrum of a square complex matrix with residual certificates.

    Badly scaled dense input (entry magnitudes spanning more than 1e6) is
    balanced by a diagonal similarity first; residuals and the default
    tolerances then refer to the balanced matrix, whose norm reflects the
    eigenvalue scale.
    """
    m = _check_square(m)
    n = m.shape[0]
    if n == 0:
        return Spectrum((), 0, 1.0)
    reference = m
    if not is_tridiagonal(m) and _needs_balancing(m):
        reference = balance(m)
    norm = np.linalg.norm(reference)
    scale = norm if norm > 0 else 1.0
    if cluster_tol is None:
        cluster_tol = 1e-8 * scale
    if certification_tol is None:
        certification_tol = CERT_TOL_FACTOR * scale
    work = reference
    if not is_upper_hessenberg(work):
        work = hessenberg_reduce(work)
    raw = qr_eigvals(work, max_sweeps=max_sweeps)
    res = residual_estimates(reference, raw)
    return cluster_multiplicities(
        raw,
        cluster_tol,
        residuals=res,
        source_order=n,
        certification_tol=certification_tol,
    )


def _ql_kernel(d, e):
    """Implicit-shift QL on (diag, offdiag); returns (diag, status, index)."""
    n = d.shape[0]
    eps = 2.220446049250313e-16
    for l in range(n):
        its = 0
        while True:
            m = n - 1
            for mm in range(l, n - 1):
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) <= eps * dd:
                    m = mm
                    break
            if m == l:
                break
            its += 1
            if its > 50:
                return d, -1, l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            if g >= 0:
                g = d[m] - d[l] + e[l] / (g + r)
            else:
                g = d[m] - d[l] + e[l] / (g - r)
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, 0, 0


_ql_kernel = _jit(_ql_kernel)


def eig_real_symtri(diag, offdiag) -> np.ndarray:
    """All eigenvalues of a real symmetric tridiagonal matrix, ascending.

    Implicit-shift QL iteration; accuracy on the order of 1e-12 times the
    matrix norm.  Raises :class:`ConvergenceError` if any eigenvalue needs
    more than 50 sweeps.
    """
    d = np.array([float(x) for x in diag], dtype=np.float64)
    n = len(d)
    e_in = [float(x) for x in offdiag]
    if len(e_in) != max(n - 1, 0):
        raise ValueError(
            f"offdiag length {len(e_in)} inconsistent with diag length {n}"
        )
    if n == 0:
        return np.empty(0)
    if n == 1:
        return d
    e = np.zeros(n, dtype=np.float64)
    e[: n - 1] = e_in
    d, status, idx = _ql_kernel(d, e)
    if status != 0:
        raise ConvergenceError(f"QL iteration failed to converge for eigenvalue {idx}")
    return np.sort(d)


def symmetric_tridiagonalize(m: np.ndarray):
    """Householder reduction of a dense real symmetric matrix to (diag, offdiag)."""
    a = np.asarray(m)
    if np.iscomplexobj(a):
        if np.abs(a.imag).max(initial=0.0) > 0:
            raise ValueError("matrix has nonzero imaginary part")
        a = a.real
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    if n == 0:
        return np.empty(0), np.empty(0)
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    for k in range(n - 2):
        x = a[k + 1 :, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        alpha = -math.copysign(xnorm, x[0] if x[0] != 0 else 1.0)
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm < 1e-300:
            continue
        v /= vnorm
        sub = a[k + 1 :, k + 1 :]
        u = sub @ v
        w = u - v * (v @ u)
        sub -= 2.0 * np.outer(v, w) + 2.0 * np.outer(w, v)
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha
        a[k + 2 :, k] = 0.0
        a[k, k + 2 :] = 0.0
    return np.diag(a).copy(), np.diag(a, -1).copy()


def eig_real_symmetric(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a dense real symmetric matrix, ascending (real route)."""
    d, e = symmetric_tridiagonalize(m)
    if len(d) == 0:
        return np.empty(0)
    return eig_real_symtri(d, e)
