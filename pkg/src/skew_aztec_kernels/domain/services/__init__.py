"""Domain services for skew-Aztec rectangle tilings."""

from .cusp_airy import CuspRow, airy_like, cusp_airy, cusp_limit_check
from .finite_kernels import (
    DphiResult,
    GreenKernel,
    SymbolParams,
    blowup_check,
    bo_check,
    dphi_check,
    kgreen,
    phi,
    phi_hat,
    toeplitz_det,
)
from .geometry import (
    cell_graph,
    derived_params,
    is_tilable,
    red_dot_profile,
    su_to_xi_eta,
    xi_eta_to_su,
)
from .kasteleyn import KasteleynSystem, build, kenyon_probability, kred
from .limit_kernels import (
    ConvergenceRow,
    SymmetryReport,
    TacnodeKernel,
    convergence_table,
    dtac,
    dtac_terms,
    heaviside,
    symmetry_report,
    theta,
    theta_pm,
)
from .oracle import TilingOracle, correlation, enumerate_tilings, red_gap_probability
from .prelimit_kernel import (
    PreLimitKernel,
    PreLimitKernelParams,
    prelimit_L,
    prelimit_terms,
    prelimit_to_kred,
)
from .rendering import render_svg
from .sampler import SampleReport, sample, step
from .tiling import dots_of, paths_of, validate_tiling, weight

__all__ = [
    "ConvergenceRow",
    "CuspRow",
    "DphiResult",
    "GreenKernel",
    "KasteleynSystem",
    "PreLimitKernel",
    "PreLimitKernelParams",
    "SampleReport",
    "SymbolParams",
    "SymmetryReport",
    "TacnodeKernel",
    "TilingOracle",
    "airy_like",
    "blowup_check",
    "bo_check",
    "build",
    "cell_graph",
    "convergence_table",
    "correlation",
    "cusp_airy",
    "cusp_limit_check",
    "derived_params",
    "dots_of",
    "dphi_check",
    "dtac",
    "dtac_terms",
    "enumerate_tilings",
    "heaviside",
    "is_tilable",
    "kenyon_probability",
    "kgreen",
    "kred",
    "paths_of",
    "phi",
    "phi_hat",
    "prelimit_L",
    "prelimit_terms",
    "prelimit_to_kred",
    "red_dot_profile",
    "red_gap_probability",
    "render_svg",
    "sample",
    "step",
    "su_to_xi_eta",
    "symmetry_report",
    "theta",
    "theta_pm",
    "toeplitz_det",
    "validate_tiling",
    "weight",
    "xi_eta_to_su",
]
