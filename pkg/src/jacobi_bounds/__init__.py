"""Spectral power-sum bounds for complex Jacobi operators.

Build finite sections of perturbed Jacobi operators (half-line and lattice),
compute certified spectra, evaluate the eigenvalue power-sum inequalities
against coefficient sums, check the underlying partial-sum majorization
directly, and run seeded verification campaigns.
"""

from .bounds import (
    BoundReport,
    TheoremId,
    angular_constants,
    c_p,
    check_all,
    evaluate,
    gamma_fn,
    lhs_power_sum,
    reports_to_csv,
    reports_to_json,
    semiclassical_L,
    spectrum_for,
)
from .eigen import (
    ConvergenceError,
    Spectrum,
    cluster_multiplicities,
    eig_complex,
    eig_real_symtri,
    hessenberg_reduce,
)
from .harness import (
    EnsembleConfig,
    SearchState,
    generate_ensemble,
    run_campaign,
    sharpness_search,
    stabilization_check,
)
from .lemmas import Lemma2Report, MajorizationReport, lemma1_check, lemma2_check
from .operators import (
    Jacobi1D,
    LatticeJacobi,
    SpecFormatError,
    TruncationMode,
    adjoint_spec,
    build_1d,
    build_lattice,
    load_spec,
    perturbation_terms,
    spec_from_dict,
    spec_to_dict,
    tilt,
)
from .regions import (
    Branch,
    ClassifiedSpectrum,
    RegionParams,
    classify,
    f_region,
    in_psi,
    min_theta_for,
    neg_part,
    pos_part,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Branch",
    "ClassifiedSpectrum",
    "ConvergenceError",
    "EnsembleConfig",
    "Jacobi1D",
    "LatticeJacobi",
    "Lemma2Report",
    "MajorizationReport",
    "RegionParams",
    "SearchState",
    "SpecFormatError",
    "Spectrum",
    "TheoremId",
    "TruncationMode",
    "adjoint_spec",
    "angular_constants",
    "build_1d",
    "build_lattice",
    "c_p",
    "check_all",
    "classify",
    "cluster_multiplicities",
    "eig_complex",
    "eig_real_symtri",
    "evaluate",
    "f_region",
    "gamma_fn",
    "generate_ensemble",
    "hessenberg_reduce",
    "in_psi",
    "lemma1_check",
    "lemma2_check",
    "lhs_power_sum",
    "load_spec",
    "min_theta_for",
    "neg_part",
    "perturbation_terms",
    "pos_part",
    "reports_to_csv",
    "reports_to_json",
    "run_campaign",
    "semiclassical_L",
    "sharpness_search",
    "spec_from_dict",
    "spec_to_dict",
    "spectrum_for",
    "stabilization_check",
    "tilt",
]
