"""Charts with metric fields, the Levi-Civita connection, brackets and gradients.

A :class:`Chart` is a coordinate box plus a metric field.  The metric is either
supplied directly (intrinsic) or derived from an embedding ``psi`` into
Euclidean space as ``Dpsi^T Dpsi``.  Everything is evaluated pointwise; there
are no atlases or transition functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numdiff
from .errors import EvaluationOutsideDomain, RankDeficient, SingularMetric
from .numdiff import Array, DiffConfig

#: Symmetry slack accepted from a user-supplied metric field.
METRIC_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Box:
    """Axis-aligned coordinate domain."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo/hi length mismatch")
        if any(l >= h for l, h in zip(self.lo, self.hi)):
            raise ValueError("empty box")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, x, margin: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        return bool(np.all(x >= lo + margin) and np.all(x <= hi - margin))

    def sample(self, rng: np.random.Generator, margin: float) -> Array:
        lo = np.asarray(self.lo) + margin
        hi = np.asarray(self.hi) - margin
        if np.any(lo >= hi):
            raise ValueError("margin leaves no interior to sample")
        return rng.uniform(lo, hi)


@dataclass(frozen=True)
class Embedding:
    """Parametrization of a chart inside Euclidean R^ambient_dim.

    ``jacobian`` is the analytic differential when available; otherwise the
    columns of D(psi) are produced by finite differences.
    """

    ambient_dim: int
    psi: Callable[[Array], Array]
    jacobian: Callable[[Array], Array] | None = None

    def dpsi(self, x: Array, cfg: DiffConfig) -> Array:
        if self.jacobian is not None:
            return np.asarray(self.jacobian(x), dtype=float)
        x = np.asarray(x, dtype=float)
        cols = [numdiff.partial(self.psi, x, i, cfg) for i in range(len(x))]
        return np.column_stack(cols)


@dataclass(frozen=True)
class Chart:
    """A coordinate domain with a metric field.

    Exactly one of ``metric_fn`` (intrinsic) and ``embedding`` must be given.
    Charts are immutable; all evaluation is pure.
    """

    dim: int
    box: Box
    metric_fn: Callable[[Array], Array] | None = None
    embedding: Embedding | None = None
    predicate: Callable[[Array], bool] | None = None
    name: str = ""

    def __post_init__(self):
        if (self.metric_fn is None) == (self.embedding is None):
            raise ValueError("give exactly one of metric_fn or embedding")
        if self.box.dim != self.dim:
            raise ValueError("box dimension does not match chart dimension")

    def contains(self, x, margin: float = 0.0) -> bool:
        ok = self.box.contains(x, margin)
        if ok and self.predicate is not None:
            ok = bool(self.predicate(np.asarray(x, dtype=float)))
        return ok

    def domain_predicate(self, margin: float = 0.0) -> Callable[[Array], bool]:
        return lambda p: self.contains(p, margin)

    def require_interior(self, x, cfg: DiffConfig, depth: float = 2.0) -> Array:
        """Check that a depth*step stencil around x stays inside the chart."""
        x = np.asarray(x, dtype=float)
        if not self.contains(x, depth * cfg.step):
            raise EvaluationOutsideDomain(
                f"{self.name or 'chart'}: point {x!r} closer than {depth}*step to the boundary")
        return x

    def metric(self, x, cfg: DiffConfig | None = None) -> Array:
        """Metric matrix at x; for embedded charts this is Dpsi^T Dpsi."""
        x = np.asarray(x, dtype=float)
        if self.metric_fn is not None:
            g = np.asarray(self.metric_fn(x), dtype=float)
        else:
            d = self.embedding.dpsi(x, cfg or DiffConfig())
            g = d.T @ d
        if np.max(np.abs(g - g.T)) > METRIC_SYMMETRY_TOL * max(1.0, np.max(np.abs(g))):
            raise SingularMetric(f"metric at {x!r} is not symmetric")
        return 0.5 * (g + g.T)

    def metric_inverse(self, x, cfg: DiffConfig | None = None) -> Array:
        g = self.metric(x, cfg)
        try:
            inv = np.linalg.inv(g)
        except np.linalg.LinAlgError as exc:
            raise SingularMetric(f"metric at {x!r} is singular") from exc
        if np.min(np.linalg.eigvalsh(g)) <= 0:
            raise SingularMetric(f"metric at {x!r} is not positive-definite")
        return inv


@dataclass(frozen=True)
class VectorField:
    """A chart-attached coordinate vector field."""

    chart: Chart
    fn: Callable[[Array], Array]

    def __call__(self, x) -> Array:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)


def constant_field(chart: Chart, v) -> VectorField:
    v = np.asarray(v, dtype=float)
    return VectorField(chart, lambda x: v)


def coordinate_field(chart: Chart, i: int) -> VectorField:
    e = np.zeros(chart.dim)
    e[i] = 1.0
    return constant_field(chart, e)


@dataclass(frozen=True)
class Christoffel:
    """Connection coefficients Gamma^k_{ij} at one point (k first index)."""

    point: Array
    symbols: Array  # shape (d, d, d), symbols[k, i, j]

    def __post_init__(self):
        if np.max(np.abs(self.symbols - np.swapaxes(self.symbols, 1, 2))) > 1e-12 * (
                1.0 + np.max(np.abs(self.symbols))):
            raise ValueError("Christoffel symbols must be symmetric in the lower pair")


def christoffel(chart: Chart, x, cfg: DiffConfig) -> Christoffel:
    """Levi-Civita symbols Gamma^k_{ij} = 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij)."""
    x = chart.require_interior(x, cfg)
    d = chart.dim
    g_inv = chart.metric_inverse(x, cfg)
    metric = lambda p: chart.metric(p, cfg)
    dg = np.stack([numdiff.partial(metric, x, i, cfg, domain=chart.domain_predicate())
                   for i in range(d)])  # dg[i, j, l] = d_i g_{jl}
    # combined[i, j, l] = d_i g_{jl} + d_j g_{il} - d_l g_{ij}
    combined = dg + np.transpose(dg, (1, 0, 2)) - np.transpose(dg, (1, 2, 0))
    gamma = 0.5 * np.einsum("kl,ijl->kij", g_inv, combined)
    gamma = 0.5 * (gamma + np.swapaxes(gamma, 1, 2))
    return Christoffel(x, gamma)


def covariant_derivative(x_field: VectorField, y_field: VectorField, x, cfg: DiffConfig) -> Array:
    """(nabla_X Y)^k = X^i d_i Y^k + Gamma^k_{ij} X^i Y^j at x."""
    if x_field.chart is not y_field.chart:
        raise ValueError("fields live on different charts")
    chart = x_field.chart
    x = np.asarray(x, dtype=float)
    gamma = christoffel(chart, x, cfg).symbols
    xv = x_field(x)
    yv = y_field(x)
    dy = np.stack([numdiff.partial(y_field, x, i, cfg) for i in range(chart.dim)])
    return np.einsum("i,ik->k", xv, dy) + np.einsum("kij,i,j->k", gamma, xv, yv)


def lie_bracket(x_field: VectorField, y_field: VectorField, x, cfg: DiffConfig) -> Array:
    """[X, Y]^k = X^i d_i Y^k - Y^i d_i X^k at x."""
    if x_field.chart is not y_field.chart:
        raise ValueError("fields live on different charts")
    chart = x_field.chart
    x = np.asarray(x, dtype=float)
    xv = x_field(x)
    yv = y_field(x)
    dy = np.stack([numdiff.partial(y_field, x, i, cfg) for i in range(chart.dim)])
    dx = np.stack([numdiff.partial(x_field, x, i, cfg) for i in range(chart.dim)])
    return np.einsum("i,ik->k", xv, dy) - np.einsum("i,ik->k", yv, dx)


def gradient(chart: Chart, f: Callable[[Array], float], x, cfg: DiffConfig) -> Array:
    """(grad f)^k = g^{kl} d_l f at x."""
    x = np.asarray(x, dtype=float)
    g_inv = chart.metric_inverse(x, cfg)
    df = np.array([float(numdiff.partial(f, x, i, cfg)) for i in range(chart.dim)])
    return g_inv @ df


def embedded_pullbacks(embedding: Embedding, x, cfg: DiffConfig) -> tuple[Array, Array]:
    """Derived metric and ambient-to-chart projection of an embedding.

    The projection ``P = (Dpsi^T Dpsi)^{-1} Dpsi^T`` is a left inverse of
    Dpsi, so tangent ambient vectors map back to their chart components.
    """
    x = np.asarray(x, dtype=float)
    d = embedding.dpsi(x, cfg)
    g = d.T @ d
    sv = np.linalg.svd(d, compute_uv=False)
    if sv[-1] <= sv[0] * numdiff.RANK_RTOL:
        raise RankDeficient(f"embedding differential is rank-deficient at {x!r}")
    projection = np.linalg.solve(g, d.T)
    return g, projection


def sample_points(chart: Chart, seed: int, count: int, margin: float) -> list[Array]:
    """Seeded interior samples; reproducible for equal arguments."""
    rng = np.random.default_rng(seed)
    pts = []
    attempts = 0
    while len(pts) < count:
        p = chart.box.sample(rng, margin)
        attempts += 1
        if chart.contains(p, margin):
            pts.append(p)
        if attempts > 100 * count:
            raise EvaluationOutsideDomain(
                f"{chart.name or 'chart'}: could not draw {count} interior samples")
    return pts


@dataclass(frozen=True)
class SamplePlan:
    """Seeded sampling recipe; identical plans reproduce identical point sets.

    ``margin`` defaults to 4*step of the active DiffConfig, which keeps every
    nested finite-difference stencil inside the chart.
    """

    seed: int = 0
    count: int = 20
    margin: float | None = None

    def __post_init__(self):
        if self.count <= 0:
            raise ValueError("count must be positive")
        if self.margin is not None and self.margin <= 0:
            raise ValueError("margin must be positive")

    def points(self, chart: Chart, cfg: DiffConfig) -> list[Array]:
        margin = self.margin if self.margin is not None else 4.0 * cfg.step
        return sample_points(chart, self.seed, self.count, margin)
