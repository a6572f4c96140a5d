import numpy as np
import numpy.testing as npt
import pytest

from hermkit import catalog
from hermkit.errors import DegenerateParameters
from hermkit.manifold import Embedding, SamplePlan


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_sphere_jacobian_matches_finite_differences(n, cfg, rng):
    fd_embedding = Embedding(n + 1, catalog.sphere_psi)
    for _ in range(3):
        theta = rng.uniform(0.35, 1.15, size=n)
        analytic = catalog.sphere_jacobian(theta)
        numeric = fd_embedding.dpsi(theta, cfg)
        npt.assert_allclose(analytic, numeric, atol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_points_on_unit_sphere(n, rng):
    for _ in range(3):
        theta = rng.uniform(0.35, 1.15, size=n)
        npt.assert_allclose(np.linalg.norm(catalog.sphere_psi(theta)), 1.0, atol=1e-14)


def test_real_complex_round_trip(rng):
    v = rng.normal(size=6)
    npt.assert_allclose(catalog.to_real(catalog.to_complex(v)), v)
    j = catalog.multiplication_by_i(3)
    npt.assert_allclose(j @ v, catalog.to_real(1j * catalog.to_complex(v)))
    npt.assert_allclose(j @ j, -np.eye(6))


def test_fs_metric_known_values():
    """At w = 0 the metric is Euclidean.  On the line (n = 1) it is conformal,
    ds^2 = |dw|^2 / (1+|w|^2)^2; for n = 2 the direction complex-orthogonal to
    w only contracts by one power of 1+|w|^2."""
    g1 = catalog.fs_metric(1)
    npt.assert_allclose(g1(np.zeros(2)), np.eye(2), atol=1e-14)
    w = np.array([0.7, 0.0])
    npt.assert_allclose(g1(w), np.eye(2) / (1.0 + 0.49) ** 2, atol=1e-12)
    g2 = catalog.fs_metric(2)
    gw = g2(np.array([0.7, 0.0, 0.0, 0.0]))
    npt.assert_allclose(gw[0, 0], 1.0 / (1.0 + 0.49) ** 2, atol=1e-12)
    npt.assert_allclose(gw[2, 2], 1.0 / (1.0 + 0.49), atol=1e-12)
    npt.assert_allclose(gw[3, 3], 1.0 / (1.0 + 0.49), atol=1e-12)


@pytest.mark.parametrize("entry_id", catalog.entry_ids())
def test_entry_objects_satisfy_invariants(entry_id, cfg):
    """Charts are positive-definite, structures satisfy J^2 = -I and metric
    compatibility, and maps land inside their target box at 20 seeded points."""
    entry = catalog.get_entry(entry_id)
    plan = SamplePlan(seed=13, count=20)
    for chart in entry.charts.values():
        for x in plan.points(chart, cfg):
            g = chart.metric(x, cfg)
            assert np.min(np.linalg.eigvalsh(g)) > 0
    for structure in entry.structures.values():
        points = plan.points(structure.chart, cfg)
        res = structure.invariant_residuals(points, cfg)
        assert res["square"] <= 1e-9
        assert res["compatibility"] <= 1e-9
    for spec in entry.maps.values():
        for x in plan.points(spec.source, cfg):
            y = spec(x)
            assert spec.target.contains(y, 4 * cfg.step), (entry_id, spec.name, x, y)


def test_product_metric_matches_ambient_lengths(cfg):
    """The product-sphere chart metric is the ambient restriction: pairings of
    coordinate vectors equal the Euclidean pairings of their images."""
    entry = catalog.calabi_eckmann(1, 1)
    chart = entry.charts["ce"]
    fd_embedding = Embedding(chart.embedding.ambient_dim, chart.embedding.psi)
    for x in SamplePlan(seed=3, count=5).points(chart, cfg):
        g = chart.metric(x, cfg)
        d = fd_embedding.dpsi(x, cfg)
        npt.assert_allclose(g, d.T @ d, atol=1e-9)


def test_affine_chart_coordinates_of_hopf_image(cfg):
    """The projection composed with the embedding divides out the first
    complex coordinate."""
    entry = catalog.hopf_map(1)
    spec = entry.maps["hopf"]
    x = np.array([0.5, 0.7, 0.9, 1.1])
    p = spec.source.embedding.psi(x)
    z = catalog.to_complex(p[:4])
    npt.assert_allclose(spec(x), catalog.to_real(z[1:] / z[0]), atol=1e-14)


def test_mobius_identity_parameters_reproduce_map(cfg):
    base = catalog.hopf_map(1)
    composed = catalog.mobius_postcompose(base, (1.0, 0.0, 0.0, 1.0))
    x = np.array([0.5, 0.7, 0.9, 1.1])
    npt.assert_allclose(composed.maps["hopf"](x), base.maps["hopf"](x), atol=1e-14)


def test_mobius_degenerate_parameters_rejected():
    with pytest.raises(DegenerateParameters):
        catalog.mobius_postcompose(catalog.hopf_map(1), (1.0, 2.0, 0.5, 1.0))
    with pytest.raises(DegenerateParameters):
        catalog.mobius_postcompose(catalog.punctured_hopf(2), (1.0, 0.0, 0.0, 1.0))


def test_registry_roundtrip():
    assert "hopf-s3" in catalog.entry_ids()
    with pytest.raises(KeyError):
        catalog.get_entry("no-such-entry")


def test_perturbed_target_is_conformally_stretched(cfg):
    flat = catalog.punctured_hopf(2)
    bent = catalog.punctured_hopf(2, perturbed=True)
    w = np.array([0.4, -0.2, 0.1, 0.3])
    g0 = flat.charts["target"].metric(w, cfg)
    g1 = bent.charts["target"].metric(w, cfg)
    npt.assert_allclose(g1, np.exp(0.5 * w[0]) * g0, atol=1e-12)
