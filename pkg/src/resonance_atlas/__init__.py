"""Resonances of radial step barriers in even dimensions.

The package computes scattering resonances of the Laplacian plus a step
potential on the unit ball, viewed as zeros of a characteristic function
on the sheets of the logarithmic resolvent surface.  It provides:

- scaled cylinder and Airy function evaluation (``special_functions``)
- the conformal map onto the eye-shaped region and its boundary
  (``surface_maps``)
- large-order leading terms, auxiliary expansions and the model zero
  lattice (``asymptotics``)
- the characteristic function, Newton and contour zero searches, and
  dominance-box enclosures (``engine``)
- counting functions, order fits and the log-integral route
  (``counting``)
- deterministic CSV/JSON writers (``report``) and optional figure
  rendering (``figures``), wired together by the CLI (``cli``).
"""

from .errors import (
    ConvergenceError,
    DomainError,
    FitError,
    ResonanceAtlasError,
)
from .scaled import ScaledComplex
from .special_functions import (
    AiryArgument,
    AiryCoefficients,
    airy_ai,
    airy_ai_prime,
    airy_asymptotic,
    bessel_j,
    bessel_j_prime,
    continue_bessel,
    continue_hankel1,
    hankel1,
    hankel1_prime,
)
from .surface_maps import (
    MapImage,
    RegionSpec,
    boundary_polyline,
    corner_height,
    corner_parameter,
    inverse_rho,
    k_boundary,
    map_image,
    omega1_contains,
    rho,
    rho_prime,
    zeta,
)
from .asymptotics import (
    AsymptoticSeed,
    AuxExpansion,
    aux_expansions,
    comparison_model,
    f0_leading,
    g0_leading,
    model_zero,
    seeds,
    uniform_bessel_leading,
    uniform_bessel_prime_leading,
    uniform_hankel_leading,
    uniform_hankel_prime_leading,
)
from .engine import (
    Channel,
    FREE_MAGNITUDE,
    Rectangle,
    ResonanceZero,
    RoucheBox,
    SheetPoint,
    StepPotential,
    build_rouche_box,
    contour_channel_zeros,
    count_zeros_box,
    count_zeros_rho_rectangle,
    covering_rectangle,
    find_channel_zeros,
    free_sheet_constant,
    interior_momentum,
    outgoing_wronskian,
    regular_wronskian,
    regular_wronskian_info,
    rescaled_characteristic,
    rouche_box_zero_count,
    sheet_wronskian,
    sheet_wronskian_continued,
    sheet_wronskian_grid,
    sheet_wronskian_prime,
    spherical_wronskian,
    verify_rouche_box,
)
from .counting import (
    CountingReport,
    assemble_counting,
    channel_ladder,
    channel_zeros,
    fit_order,
    harmonic_multiplicity,
    log_integral_order,
    growth_bound_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
