"""Direct numerical checks of the partial-sum majorization machinery.

The complex eigenvalues in each tilted half-plane, ordered by decreasing
region-function value, are dominated partial-sum-wise by the eigenvalues of
the tilted real symmetric operator outside [-2, 2]:

    sum_{j<=n} ((Re lam+_j - 2) + alpha Im lam+_j)  <=  sum_{j<=n} (mu+_j - 2)
    sum_{j<=n} ((Re lam-_j + 2) + alpha Im lam-_j)  >=  sum_{j<=n} (mu-_j + 2)

Exhausted lists are padded with +-2, i.e. with zero contributions.  The
power-sum consequence replaces each term by its p-th positive/negative part;
the combined form adds the two branches and compares against
sum_k |mu+_k - 2|^p + |mu-_k + 2|^p.

Slacks are signed so that "holds" always means slack >= -1e-10.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .bounds import round12, spectrum_for, tilted_eigenvalues
from .regions import Branch, RegionParams, classify

SLACK_TOL = 1e-10
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class MajorizationReport:
    """Per-n partial-sum comparison for one branch (or the combined form)."""

    alpha: float
    branch: str
    n_max: int
    margins: tuple  # (n, lhs_partial, rhs_partial, slack)
    p: float = None

    @property
    def holds(self) -> bool:
        return all(m[3] >= -SLACK_TOL for m in self.margins)

    def to_json_dict(self) -> dict:
        return {
            "alpha": round12(self.alpha),
            "branch": self.branch,
            "p": round12(self.p) if self.p is not None else None,
            "margins": [
                [n, round12(lhs), round12(rhs), round12(slack)]
                for n, lhs, rhs, slack in self.margins
            ],
            "holds": self.holds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Lemma2Report:
    """Power-sum checks: one report per branch plus the combined form."""

    plus: MajorizationReport
    minus: MajorizationReport
    combined: MajorizationReport

    @property
    def holds(self) -> bool:
        return self.plus.holds and self.minus.holds and self.combined.holds

    def reports(self) -> tuple:
        return (self.plus, self.minus, self.combined)


# ---------------------------------------------------------------------------
# Eigenvalue lists
# ---------------------------------------------------------------------------


def _lambda_values(spec, alpha: float, branch: Branch) -> list:
    """Region-function values of the classified complex eigenvalues,
    multiplicities expanded, in the canonical nonincreasing order."""
    cs = classify(spectrum_for(spec), RegionParams(alpha=alpha))
    entries = cs.plus if branch is Branch.PLUS else cs.minus
    out = []
    for e in entries:
        out.extend([e.f_value] * e.multiplicity)
    return out


def _mu_gaps(spec, alpha: float, branch: Branch) -> list:
    """Values mu - 2 (plus branch) or -(mu + 2) (minus branch) for the tilted
    real eigenvalues outside [-2, 2], nonincreasing."""
    eigs = tilted_eigenvalues(spec, alpha)
    if branch is Branch.PLUS:
        gaps = [x - 2.0 for x in eigs if x > 2.0 + _EDGE_TOL]
    else:
        gaps = [-(x + 2.0) for x in eigs if x < -2.0 - _EDGE_TOL]
    gaps.sort(reverse=True)
    return gaps


def _partial(values: list, n: int) -> float:
    return sum(values[: min(n, len(values))])


def _default_n_max(*lists) -> int:
    return max(max((len(v) for v in lists), default=0) + 2, 3)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def lemma1_check(spec, alpha: float, branch: Branch, n_max: int = None) -> MajorizationReport:
    """Partial-sum domination of the raw region-function values.

    Plus branch: lhs_n <= rhs_n with slack = rhs - lhs.  The minus branch is
    oriented the other way, lhs_n >= rhs_n, and reported with
    slack = lhs - rhs, so nonnegative slack means "holds" on both branches.
    """
    if n_max is not None and n_max < 1:
        raise ValueError("n_max must be >= 1")
    lam = _lambda_values(spec, alpha, branch)
    mu = _mu_gaps(spec, alpha, branch)
    if n_max is None:
        n_max = _default_n_max(lam, mu)
    margins = []
    for n in range(1, n_max + 1):
        if branch is Branch.PLUS:
            lhs = _partial(lam, n)
            rhs = _partial(mu, n)
            slack = rhs - lhs
        else:
            # raw minus-branch sums are negatives of the f-values / gaps
            lhs = -_partial(lam, n)
            rhs = -_partial(mu, n)
            slack = lhs - rhs
        margins.append((n, lhs, rhs, slack))
    return MajorizationReport(
        alpha=alpha, branch=branch.value, n_max=n_max, margins=tuple(margins)
    )


def lemma2_check(spec, alpha: float, p: float, n_max: int = None) -> Lemma2Report:
    """Power-sum consequence: per-branch and combined partial-sum checks."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if n_max is not None and n_max < 1:
        raise ValueError("n_max must be >= 1")
    lam_p = [v**p for v in _lambda_values(spec, alpha, Branch.PLUS)]
    lam_m = [v**p for v in _lambda_values(spec, alpha, Branch.MINUS)]
    mu_p = [v**p for v in _mu_gaps(spec, alpha, Branch.PLUS)]
    mu_m = [v**p for v in _mu_gaps(spec, alpha, Branch.MINUS)]
    if n_max is None:
        n_max = _default_n_max(lam_p, lam_m, mu_p, mu_m)

    def margins_for(lhs_list, rhs_list):
        out = []
        for n in range(1, n_max + 1):
            lhs = _partial(lhs_list, n)
            rhs = _partial(rhs_list, n)
            out.append((n, lhs, rhs, rhs - lhs))
        return tuple(out)

    plus = MajorizationReport(
        alpha=alpha, branch="+", n_max=n_max, margins=margins_for(lam_p, mu_p), p=p
    )
    minus = MajorizationReport(
        alpha=alpha, branch="-", n_max=n_max, margins=margins_for(lam_m, mu_m), p=p
    )
    combined_lhs = [a + b for a, b in _zip_pad(lam_p, lam_m)]
    combined_rhs = [a + b for a, b in _zip_pad(mu_p, mu_m)]
    combined = MajorizationReport(
        alpha=alpha,
        branch="both",
        n_max=n_max,
        margins=margins_for(combined_lhs, combined_rhs),
        p=p,
    )
    return Lemma2Report(plus=plus, minus=minus, combined=combined)


def _zip_pad(xs: list, ys: list) -> list:
    n = max(len(xs), len(ys))
    return [
        (xs[i] if i < len(xs) else 0.0, ys[i] if i < len(ys) else 0.0)
        for i in range(n)
    ]
