import math

import numpy as np
import numpy.testing as npt
import pytest

from hermkit import catalog
from hermkit.errors import EvaluationOutsideDomain, SingularMetric
from hermkit.manifold import (Box, Chart, Embedding, SamplePlan, VectorField,
                              christoffel, constant_field, coordinate_field,
                              covariant_derivative, embedded_pullbacks, gradient,
                              lie_bracket)
from hermkit.numdiff import DiffConfig


def flat2():
    return Chart(dim=2, box=Box((-2.0, -2.0), (2.0, 2.0)),
                 metric_fn=lambda x: np.eye(2), name="flat2")


def sphere2():
    return catalog.sphere_chart(2)


def test_box_contains_margin():
    box = Box((0.0,), (1.0,))
    assert box.contains([0.5])
    assert not box.contains([0.05], margin=0.1)
    with pytest.raises(ValueError):
        Box((1.0,), (0.0,))


def test_chart_requires_exactly_one_metric_source():
    with pytest.raises(ValueError):
        Chart(dim=1, box=Box((0.0,), (1.0,)))


def test_metric_rejects_asymmetry():
    chart = Chart(dim=2, box=Box((-1.0, -1.0), (1.0, 1.0)),
                  metric_fn=lambda x: np.array([[1.0, 0.5], [0.2, 1.0]]))
    with pytest.raises(SingularMetric):
        chart.metric(np.zeros(2))


def test_christoffel_flat_is_zero(cfg):
    gamma = christoffel(flat2(), np.array([0.3, 0.4]), cfg).symbols
    npt.assert_allclose(gamma, 0.0, atol=1e-12)


def test_christoffel_round_sphere_closed_form(cfg):
    """Round-sphere chart: Gamma^th_{ph ph} = -sin th cos th and
    Gamma^ph_{th ph} = cot th."""
    x = np.array([1.0, 0.8])
    gamma = christoffel(sphere2(), x, cfg).symbols
    npt.assert_allclose(gamma[0, 1, 1], -math.sin(1.0) * math.cos(1.0), atol=1e-9)
    npt.assert_allclose(gamma[1, 0, 1], 1.0 / math.tan(1.0), atol=1e-9)
    npt.assert_allclose(gamma[0, 0, 0], 0.0, atol=1e-9)


def test_christoffel_fubini_study_origin(cfg):
    """The projective-space metric is Euclidean to second order at w = 0."""
    chart = catalog.fs_chart(1)
    gamma = christoffel(chart, np.zeros(2), cfg).symbols
    npt.assert_allclose(gamma, 0.0, atol=1e-9)


def test_christoffel_lower_symmetry_exact(cfg):
    gamma = christoffel(sphere2(), np.array([0.9, 0.7]), cfg).symbols
    npt.assert_allclose(gamma, np.swapaxes(gamma, 1, 2), rtol=0, atol=0)


def test_christoffel_outside_domain(cfg):
    with pytest.raises(EvaluationOutsideDomain):
        christoffel(sphere2(), np.array([0.3, 0.7]), cfg)  # on the box edge


def test_covariant_derivative_flat_constants(cfg):
    chart = flat2()
    x_field = constant_field(chart, [1.0, 2.0])
    y_field = constant_field(chart, [0.5, -1.0])
    val = covariant_derivative(x_field, y_field, np.array([0.1, 0.2]), cfg)
    npt.assert_allclose(val, 0.0, atol=1e-12)


def test_covariant_derivative_meridians_are_geodesics(cfg):
    chart = sphere2()
    theta = coordinate_field(chart, 0)
    val = covariant_derivative(theta, theta, np.array([1.0, 0.8]), cfg)
    npt.assert_allclose(val, 0.0, atol=1e-9)


@pytest.mark.parametrize("entry_id,chart_key", [("ce-1-0", "ce"), ("cp-1", "cp")])
def test_metric_compatibility_probe(entry_id, chart_key, cfg, plan):
    """d_X g(Y, Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z), the defining property."""
    entry = catalog.get_entry(entry_id)
    chart = entry.charts[chart_key]
    d = chart.dim
    x_field = constant_field(chart, np.arange(1.0, d + 1.0) / d)
    y_field = VectorField(chart, lambda p: np.sin(p) + 1.5)
    z_field = VectorField(chart, lambda p: np.cos(p) * 0.5 + 1.0)
    for x in plan.points(chart, cfg):
        inner = lambda p: float(y_field(p) @ chart.metric(p, cfg) @ z_field(p))
        from hermkit.numdiff import partial
        lhs = sum(x_field(x)[i] * partial(inner, x, i, cfg) for i in range(d))
        g = chart.metric(x, cfg)
        rhs = (covariant_derivative(x_field, y_field, x, cfg) @ g @ z_field(x)
               + y_field(x) @ g @ covariant_derivative(x_field, z_field, x, cfg))
        assert abs(lhs - rhs) <= cfg.tolerance(10.0)


def test_lie_bracket_coordinate_fields_commute(cfg):
    chart = flat2()
    val = lie_bracket(coordinate_field(chart, 0), coordinate_field(chart, 1),
                      np.array([0.1, -0.4]), cfg)
    npt.assert_allclose(val, 0.0, atol=1e-12)


def test_lie_bracket_rotation_field(cfg):
    # [(-y, x), (1, 0)] = (0, -1) by expanding X^i d_i Y - Y^i d_i X
    chart = flat2()
    rot = VectorField(chart, lambda p: np.array([-p[1], p[0]]))
    ex = constant_field(chart, [1.0, 0.0])
    val = lie_bracket(rot, ex, np.array([0.3, 0.5]), cfg)
    npt.assert_allclose(val, [0.0, -1.0], atol=1e-10)


def test_lie_bracket_antisymmetry(cfg, rng):
    chart = flat2()
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2))
    x_field = VectorField(chart, lambda p: a @ np.sin(p))
    y_field = VectorField(chart, lambda p: b @ np.cos(p))
    x = np.array([0.2, 0.6])
    fwd = lie_bracket(x_field, y_field, x, cfg)
    bwd = lie_bracket(y_field, x_field, x, cfg)
    npt.assert_allclose(fwd, -bwd, atol=1e-9)


def test_lie_bracket_jacobi_identity(cfg):
    """Cyclic sum of nested brackets vanishes; nested differencing loosens the
    attainable tolerance to ~1e-5."""
    chart = flat2()
    x_field = VectorField(chart, lambda p: np.array([math.sin(p[1]), p[0] ** 2]))
    y_field = VectorField(chart, lambda p: np.array([p[0] * p[1], math.cos(p[0])]))
    z_field = VectorField(chart, lambda p: np.array([p[1] ** 2, p[0] + p[1]]))
    x = np.array([0.4, 0.3])
    total = np.zeros(2)
    for a, b, c in ((x_field, y_field, z_field), (y_field, z_field, x_field),
                    (z_field, x_field, y_field)):
        inner = VectorField(chart, lambda p, b=b, c=c: lie_bracket(b, c, p, cfg))
        total = total + lie_bracket(a, inner, x, cfg)
    npt.assert_allclose(total, 0.0, atol=1e-5)


def test_gradient_flat_linear(cfg):
    val = gradient(flat2(), lambda p: p[0], np.array([0.3, 0.1]), cfg)
    npt.assert_allclose(val, [1.0, 0.0], atol=1e-10)


def test_gradient_sphere_polar_angle(cfg):
    # g^{th th} = 1 on the round sphere, so grad(theta) = d/d theta
    val = gradient(sphere2(), lambda p: p[0], np.array([1.0, 0.8]), cfg)
    npt.assert_allclose(val, [1.0, 0.0], atol=1e-9)


def test_gradient_constant(cfg):
    val = gradient(sphere2(), lambda p: 2.5, np.array([1.0, 0.8]), cfg)
    npt.assert_allclose(val, 0.0, atol=1e-12)


def test_embedded_pullbacks_identity(cfg):
    emb = Embedding(2, lambda x: np.array(x, dtype=float))
    g, proj = embedded_pullbacks(emb, np.array([0.3, 0.4]), cfg)
    npt.assert_allclose(g, np.eye(2), atol=1e-10)
    npt.assert_allclose(proj, np.eye(2), atol=1e-10)


def test_embedded_pullbacks_unit_circle(cfg):
    emb = Embedding(2, lambda t: np.array([math.cos(t[0]), math.sin(t[0])]))
    g, _ = embedded_pullbacks(emb, np.array([0.7]), cfg)
    npt.assert_allclose(g, [[1.0]], atol=1e-10)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_projection_left_inverse_of_embedding(n, cfg):
    emb = catalog.sphere_embedding(n)
    x = np.linspace(0.4, 1.1, n)
    _, proj = embedded_pullbacks(emb, x, cfg)
    npt.assert_allclose(proj @ emb.dpsi(x, cfg), np.eye(n), atol=1e-9)


def test_sample_plan_reproducible():
    chart = sphere2()
    cfg = DiffConfig()
    plan = SamplePlan(seed=3, count=8)
    a = plan.points(chart, cfg)
    b = plan.points(chart, cfg)
    assert all(np.array_equal(p, q) for p, q in zip(a, b))
    margin = 4 * cfg.step
    assert all(chart.contains(p, margin) for p in a)


def test_sample_plan_validation():
    with pytest.raises(ValueError):
        SamplePlan(count=0)
    with pytest.raises(ValueError):
        SamplePlan(margin=-0.1)
