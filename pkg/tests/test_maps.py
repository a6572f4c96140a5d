import numpy as np
import numpy.testing as npt
import pytest

from hermkit import catalog
from hermkit.errors import (CriticalPoint, FibreDimension, MissingStructure)
from hermkit.hermitian import g_norm, nabla_j_tensor
from hermkit.manifold import Box, Chart, SamplePlan
from hermkit.maps import (KIND_CRITICAL, KIND_DEGENERATE, MapSpec, conformality,
                          condition_ii_residual, differential,
                          fibre_mean_curvature, holomorphy_residual,
                          homothety_residual, lift_structure,
                          second_fundamental_form, sff_tensor,
                          superminimality_residual, tension, tension_in_frame)
from hermkit.numdiff import orthonormalize


@pytest.fixture(scope="module")
def hopf():
    return catalog.hopf_map(1).maps["hopf"]


@pytest.fixture(scope="module")
def punctured1():
    return catalog.punctured_hopf(1).maps["hopf"]


@pytest.fixture(scope="module")
def torus_entry():
    return catalog.flat_torus()


CE_POINT = np.array([0.5, 0.7, 0.9, 1.1])


def flat_map(fn, source_dim=2, target_dim=2, lo=-2.0, hi=2.0):
    cfg = catalog.DEFAULT_CFG
    src = Chart(dim=source_dim, box=Box((lo,) * source_dim, (hi,) * source_dim),
                metric_fn=lambda x: np.eye(source_dim))
    tgt = Chart(dim=target_dim, box=Box((-1e3,) * target_dim, (1e3,) * target_dim),
                metric_fn=lambda x: np.eye(target_dim))
    return MapSpec(src, tgt, fn, cfg)


def test_differential_identity(torus_entry):
    spec = torus_entry.maps["identity"]
    d = differential(spec, np.array([0.8, 0.9]))
    npt.assert_allclose(d, np.eye(2), atol=1e-11)


def test_differential_constant():
    spec = flat_map(lambda x: np.array([1.0, 2.0]))
    d = differential(spec, np.array([0.1, 0.2]))
    npt.assert_allclose(d, 0.0, atol=1e-12)


def test_differential_hopf_rank(hopf):
    d = differential(hopf, CE_POINT)
    assert d.shape == (2, 4)
    assert np.linalg.matrix_rank(d, tol=1e-8) == 2


def test_holomorphy_identity(torus_entry):
    assert holomorphy_residual(torus_entry.maps["identity"], np.array([0.8, 0.9])) <= 1e-12


def test_holomorphy_conjugation_value(torus_entry):
    # direct 2x2 arithmetic: |d J - J' d|_F = 2 sqrt(2) for (x, y) -> (x, -y)
    val = holomorphy_residual(torus_entry.maps["conjugation"], np.array([0.8, 0.9]))
    npt.assert_allclose(val, 2.0 * np.sqrt(2.0), atol=1e-10)


def test_holomorphy_missing_structure():
    spec = flat_map(lambda x: np.array(x))
    with pytest.raises(MissingStructure):
        holomorphy_residual(spec, np.array([0.1, 0.1]))


def test_conformality_hopf_submersion(hopf):
    c = conformality(hopf, CE_POINT)
    assert c.regular
    npt.assert_allclose(c.dilation, 1.0, atol=1e-9)
    assert c.conformality_residual <= 1e-9
    assert len(c.vertical_basis) == 2 and len(c.horizontal_basis) == 2
    g = hopf.source.metric(CE_POINT, hopf.cfg)
    for v in c.vertical_basis:
        for h in c.horizontal_basis:
            assert abs(v @ g @ h) <= 1e-9


def test_conformality_punctured_dilation(punctured1):
    z = np.array([1.0, 0.25, 0.3, 0.15])
    z = 2.0 * z / np.linalg.norm(z)
    c = conformality(punctured1, z)
    npt.assert_allclose(c.dilation, 0.5, atol=1e-9)


def test_conformality_critical_constant():
    spec = flat_map(lambda x: np.array([1.0, 1.0]))
    c = conformality(spec, np.array([0.3, 0.4]))
    assert c.kind == KIND_CRITICAL
    assert c.dilation == 0.0


def test_conformality_partial_rank_degenerate():
    spec = flat_map(lambda x: np.array([x[0], 0.0]))
    c = conformality(spec, np.array([0.3, 0.4]))
    assert c.kind == KIND_DEGENERATE
    assert c.dilation == 0.0
    assert c.conformality_residual > 0.1


def test_sff_identity_and_linear(torus_entry):
    spec = torus_entry.maps["identity"]
    val = second_fundamental_form(spec, np.array([0.8, 0.9]), 0, 1)
    npt.assert_allclose(val, 0.0, atol=1e-9)
    linear = flat_map(lambda x: np.array([2.0 * x[0] + x[1], x[1] - x[0]]))
    val = second_fundamental_form(linear, np.array([0.2, 0.1]), 0, 0)
    npt.assert_allclose(val, 0.0, atol=1e-9)


def test_sff_symmetry_bitwise(hopf):
    a = second_fundamental_form(hopf, CE_POINT, 0, 2)
    b = second_fundamental_form(hopf, CE_POINT, 2, 0)
    assert np.array_equal(a, b)


def test_fibre_inclusion_is_geodesic(cfg):
    """The great-circle fibre of the Hopf projection has vanishing tension as a
    curve in the 3-sphere (trace of the second fundamental form)."""
    entry = catalog.hopf_fibre_inclusion()
    spec = entry.maps["inclusion"]
    td = tension(spec, np.array([0.05]))
    h = spec.target.metric(spec(np.array([0.05])), cfg)
    assert g_norm(h, td.tension) <= 1e-6


def test_tension_identity_flat(torus_entry):
    td = tension(torus_entry.maps["identity"], np.array([0.8, 0.9]))
    npt.assert_allclose(td.tension, 0.0, atol=1e-9)


def test_tension_square_map_harmonic(torus_entry):
    td = tension(torus_entry.maps["square"], np.array([0.8, 0.9]))
    npt.assert_allclose(td.tension, 0.0, atol=1e-7)
    assert td.lemma_residual <= 1e-7


def test_tension_frame_independent(hopf, rng):
    g = hopf.source.metric(CE_POINT, hopf.cfg)
    frame = orthonormalize([rng.normal(size=4) for _ in range(4)], g)
    via_frame = tension_in_frame(hopf, CE_POINT, frame.vectors)
    direct = tension(hopf, CE_POINT).tension
    npt.assert_allclose(via_frame, direct, atol=1e-5)


def test_fibre_mean_curvature_hopf(hopf):
    val = fibre_mean_curvature(hopf, CE_POINT)
    g = hopf.source.metric(CE_POINT, hopf.cfg)
    assert g_norm(g, val) <= 1e-6


def test_fibre_mean_curvature_needs_regular():
    spec = flat_map(lambda x: np.array([1.0, 1.0]))
    with pytest.raises(CriticalPoint):
        fibre_mean_curvature(spec, np.array([0.3, 0.4]))


def test_annulus_fibres_straight_and_dilation_scales(cfg):
    """Radial fibres are straight lines in the flat metric; rescaling the
    target multiplies the dilation but not the fibre curvature."""
    x = np.array([1.5, 0.6])
    for scale in (1.0, 1.7):
        entry = catalog.annulus_radial(target_scale=scale)
        spec = entry.maps["radial"]
        mc = fibre_mean_curvature(spec, x)
        assert np.linalg.norm(mc) <= 1e-7
        c = conformality(spec, x)
        npt.assert_allclose(c.dilation, scale / x[0], atol=1e-9)


def test_homothety_hopf_and_punctured(hopf, punctured1):
    assert homothety_residual(hopf, [CE_POINT]) <= 1e-6
    # grad(lambda^2) is proportional to the position vector, which is vertical
    z = np.array([1.4, 0.2, -0.3, 0.5])
    assert homothety_residual(punctured1, [z]) <= 1e-5


def test_homothety_mobius_composite_nonzero():
    entry = catalog.mobius_postcompose(catalog.hopf_map(1), (1.0, 0.3, 0.1, 1.0))
    spec = entry.maps["hopf"]
    assert homothety_residual(spec, [CE_POINT]) > 1e-3


def test_superminimality_constant_structure():
    entry = catalog.flat_t4()
    spec = entry.maps["projection"]
    x = np.array([0.8, 0.9, 1.0, 1.1])
    assert superminimality_residual(spec, entry.structures["J"], x) <= 1e-10


def test_lift_plus_reproduces_standard_structure(punctured1):
    lifted = lift_structure(punctured1, +1)
    x = np.array([1.4, 0.2, -0.3, 0.5])
    npt.assert_allclose(lifted(x), catalog.multiplication_by_i(2), atol=1e-10)
    t = nabla_j_tensor(punctured1.source, lifted, x, punctured1.cfg)
    assert np.max(np.abs(t)) <= 1e-7


def test_lift_minus_valid_but_not_parallel(punctured1):
    lifted = lift_structure(punctured1, -1)
    x = np.array([1.4, 0.2, -0.3, 0.5])
    inv = lifted.invariant_residuals([x], punctured1.cfg)
    assert inv["square"] <= 1e-9
    assert inv["compatibility"] <= 1e-9
    t = nabla_j_tensor(punctured1.source, lifted, x, punctured1.cfg)
    assert np.max(np.abs(t)) >= 1e-3


@pytest.mark.parametrize("orientation", [+1, -1])
def test_lift_makes_map_holomorphic(punctured1, orientation):
    """dphi J = J_target dphi holds by construction for either orientation."""
    lifted = lift_structure(punctured1, orientation)
    spec = MapSpec(punctured1.source, punctured1.target, punctured1.fn,
                   punctured1.cfg, source_structure=lifted,
                   target_structure=punctured1.target_structure)
    assert holomorphy_residual(spec, np.array([1.4, 0.2, -0.3, 0.5])) <= 1e-8


def test_lift_requires_two_dimensional_fibres():
    cfg = catalog.DEFAULT_CFG
    src = Chart(dim=3, box=Box((-1.0,) * 3, (1.0,) * 3), metric_fn=lambda x: np.eye(3))
    tgt = catalog.flat_chart(2, -2.0, 2.0)
    j_tgt = catalog.constant_structure(tgt, catalog.multiplication_by_i(1))
    omega = np.zeros((3, 3))
    omega[1, 2], omega[2, 1] = 1.0, -1.0
    spec = MapSpec(src, tgt, lambda x: np.array(x[:2]), cfg,
                   target_structure=j_tgt, fibre_orientation=lambda x: omega)
    with pytest.raises(FibreDimension):
        lift_structure(spec, +1)(np.zeros(3))


def test_lift_requires_orientation_and_target_structure(hopf):
    bare = MapSpec(hopf.source, hopf.target, hopf.fn, hopf.cfg)
    with pytest.raises(MissingStructure):
        lift_structure(bare, +1)
    no_orientation = MapSpec(hopf.source, hopf.target, hopf.fn, hopf.cfg,
                             target_structure=hopf.target_structure)
    with pytest.raises(MissingStructure):
        lift_structure(no_orientation, +1)


def test_condition_ii_product_projection():
    entry = catalog.flat_t4()
    spec = entry.maps["projection"]
    lifted = lift_structure(spec, +1)
    x = np.array([0.8, 0.9, 1.0, 1.1])
    assert condition_ii_residual(spec, lifted, [x]) <= 1e-9


def test_condition_ii_complex_line_target_trivial(punctured1):
    lifted = lift_structure(punctured1, +1)
    assert condition_ii_residual(punctured1, lifted,
                                 [np.array([1.4, 0.2, -0.3, 0.5])]) == 0.0


def test_condition_ii_punctured_two():
    spec = catalog.punctured_hopf(2).maps["hopf"]
    lifted = lift_structure(spec, +1)
    x = np.array([1.4, 0.2, -0.3, 0.5, 0.1, -0.2])
    assert condition_ii_residual(spec, lifted, [x]) <= 1e-6
