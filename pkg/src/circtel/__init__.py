"""Telegraph motion on the circle.

Closed-form laws, operators and scaling limits of the wrapped telegraph
process and its asymmetric and heavy-tailed variants, together with
exact-event samplers and a Monte Carlo verification harness.
"""

from .numerics import (
    DEFAULT_TOL,
    BesselOverflowError,
    ConvergenceError,
    ToleranceConfig,
    bessel_i0,
    bessel_i1,
    mittag_leffler,
    trig_pair,
    wrapped_normal_density,
)
from .telegraph_core import (
    LineLaw,
    PathSample,
    TelegraphParams,
    VelocitySign,
    char_fn,
    conditional_density,
    density_ac,
    joint_law,
    line_cdf,
    line_law,
    position,
    sample_marginal,
    sample_path,
    velocity_at,
)
from .circular import (
    Angle,
    CirclePoint,
    FourierCoefficient,
    WrappedLaw,
    circular_moment,
    covariance,
    fourier_coefficient,
    joint_moment,
    reconstruct_probability,
    sample_angles,
    wrap_conditional,
    wrap_law,
)
from .semigroup import (
    AnalyticPair,
    generator_apply,
    resolvent_apply,
    semigroup_apply,
    semigroup_quadrature,
)
from .oscillator import simulate_diffusion, z1_cdf, z1_law, z2_cdf, z2_law
from .asymmetric import (
    AsymmetricParams,
    KacLimitParams,
    asym_atoms,
    asym_density,
    asym_wrap,
    sample_asym_path,
)
from .heavy_tail import (
    HeavyTailParams,
    circular_stable_density,
    limit_moment_subdiffusive,
    limit_moment_superdiffusive,
    sample_heavy_path,
    sample_inverse_subordinator,
    sample_one_sided_stable,
    sample_symmetric_stable,
)

__version__ = "0.1.0"
