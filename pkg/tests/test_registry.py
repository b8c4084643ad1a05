import pytest

from circtel.harness import REGISTRY, SUITES, suite_checks

from conftest import run_check

# every documented oracle example and the one check that implements it
DERIVED = {
    'asym_atoms:pairing': 'asymmetric.atoms.mc',
    'asym_density:endpoint': 'asymmetric.density.endpoint',
    'asym_density:normalization': 'asymmetric.density.normalization',
    'asym_generator_apply:mc': 'asymmetric.generator.mc',
    'asym_kac_limit_check:drift': 'asymmetric.kac.drift',
    'asym_kac_limit_check:ladder': 'asymmetric.kac.ladder',
    'asym_pde_residual:endpoints': 'asymmetric.pde.endpoint_sweep',
    'asym_pde_residual:order': 'asymmetric.pde.residual',
    'sample_asym_path:reduction': 'asymmetric.sample_path.reduction',
    'asym_wrap:tv': 'asymmetric.wrap.mc',
    'circular_moment:mc': 'circular.circular_moment.mc',
    'circular_moment:alpha2': 'circular.circular_moment.trig_pair',
    'covariance:mc': 'circular.covariance.mc',
    'fourier_coefficient:k3': 'circular.fourier_coefficient.quadrature',
    'joint_moment:mc': 'circular.joint_moment.mc',
    'reconstruct_probability:cauchy': 'circular.reconstruct.cauchy',
    'reconstruct_probability:arc': 'circular.reconstruct.wrap_law_oracle',
    'wrap_conditional:n2': 'circular.wrap_conditional.order_stats',
    'wrap_law:mass': 'circular.wrap_law.multi_winding_mass',
    'cli:law-wrapped': 'cli.law.wrapped',
    'circular_tv:self': 'harness.circular_tv.self',
    'ks_distance:dkw': 'harness.ks_distance.dkw',
    'run_suite:telegraph-core': 'harness.run_suite.telegraph_core',
    'circular_stable_density:mc': 'heavy.circular_stable.mc',
    'sample_inverse_subordinator:ml': 'heavy.inverse.mittag_leffler',
    'joint_limit_moment:two-estimators': 'heavy.joint.two_estimators',
    'limit_moment_subdiffusive:mc': 'heavy.limit.subdiffusive',
    'limit_moment_superdiffusive:mc': 'heavy.limit.superdiffusive',
    'sample_one_sided_stable:cf': 'heavy.one_sided.cf',
    'sample_one_sided_stable:support': 'heavy.one_sided.support',
    'sample_heavy_path:mean': 'heavy.pareto.mean',
    'sample_heavy_path:tail-ratio': 'heavy.pareto.tail_ratio',
    'scaling_limit_check:alpha06': 'heavy.scaling.alpha06',
    'scaling_limit_check:alpha15': 'heavy.scaling.alpha15',
    'sample_symmetric_stable:cf': 'heavy.symmetric.cf',
    'sample_symmetric_stable:qq': 'heavy.symmetric.near_gaussian',
    'bessel_i0:1': 'numerics.bessel_i0.at_1',
    'bessel_i0:10': 'numerics.bessel_i0.at_10',
    'bessel_i1:1': 'numerics.bessel_i1.at_1',
    'bessel_i1:2': 'numerics.bessel_i1.at_2',
    'mittag_leffler:erfc': 'numerics.mittag_leffler.erfc_identity',
    'trig_pair:complex': 'numerics.trig_pair.complex_oracle',
    'wrapped_normal_density:zero': 'numerics.wrapped_normal.at_zero',
    'oscillator_convergence_check:final': 'oscillator.convergence.final',
    'oscillator_convergence_check:ladder': 'oscillator.convergence.ladder',
    'simulate_diffusion:drift': 'oscillator.em.drift',
    'simulate_diffusion:strong': 'oscillator.em.strong_slope',
    'z1_cdf:mc': 'oscillator.z1_cdf.mc',
    'z1_law:density': 'oscillator.z1_law.density_mc',
    'z2_cdf:mc': 'oscillator.z2_cdf.mc',
    'semigroup_apply:mc': 'semigroup.apply.mc',
    'generator_apply:richardson': 'semigroup.generator.richardson',
    'complex_telegraph_residual:heat': 'semigroup.heat.kac',
    'integral_equation_residual:z': 'semigroup.integral_equation',
    'semigroup_quadrature:z3': 'semigroup.quadrature.vs_series',
    'resolvent_apply:laplace': 'semigroup.resolvent.laplace',
    'complex_telegraph_residual:z2': 'semigroup.telegraph_equation.residual',
    'char_fn:xi3': 'telegraph.char_fn.fourier_quadrature',
    'conditional_density:n3': 'telegraph.conditional_density.order_stats',
    'density_ac:x0': 'telegraph.density_ac.bessel_oracle',
    'joint_law:opposite': 'telegraph.joint_law.opposite_sign',
    'position:bound': 'telegraph.position.support_bound',
    'sample_path:event-count': 'telegraph.sample_path.event_count',
    'velocity_at:parity': 'telegraph.velocity_at.parity',
}


def test_every_derived_example_has_exactly_one_check():
    registered = {}
    for c in suite_checks("all"):
        if c.derived:
            registered.setdefault(c.derived, []).append(c.check_id)
    assert {k: v for k, v in registered.items() if len(v) > 1} == {}
    assert {k: v[0] for k, v in registered.items()} == DERIVED


def test_every_suite_is_populated():
    for s in SUITES:
        assert suite_checks(s), s


def test_checks_are_documented_and_tagged():
    for c in REGISTRY.values():
        assert c.description, c.check_id
        assert c.derived or c.invariant, c.check_id


@pytest.mark.parametrize("check_id", sorted(c.check_id for c in suite_checks("all")))
def test_registered_check(check_id):
    rep = run_check(check_id)
    assert rep.passed, f"{rep.error_metric} = {rep.error:.4g} > {rep.tolerance:.3g} ({rep.note})"
