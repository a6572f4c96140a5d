"""Almost-complex structure fields: Hermitian frames, nabla J, div J, Lee field,
Nijenhuis tensor and the Kaehler / (1,2)-symplectic / cosymplectic / integrable
classification.

Complex tangent vectors are numpy complex arrays over chart coordinates; all
field machinery (metrics, connections, brackets) stays real-valued and the
complex-bilinear / Hermitian extensions of the metric are applied explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import numdiff
from .errors import RankDeficient
from .manifold import Chart, SamplePlan, VectorField, christoffel
from .numdiff import Array, DiffConfig, FrameBasis, orthonormalize

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class AlmostComplexField:
    """A field of endomorphisms J with J^2 = -I, compatible with the metric.

    ``source`` records how the field was built: ``intrinsic`` (given directly),
    ``ambient`` (an ambient-space rule pushed to the chart through an
    embedding), or ``lifted`` (produced by ``maps.lift_structure``).
    """

    chart: Chart
    fn: Callable[[Array], Array]
    source: str = "intrinsic"

    def __call__(self, x) -> Array:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def invariant_residuals(self, points: Sequence[Array], cfg: DiffConfig | None = None) -> dict:
        """Max residuals of J^2 + I and of g(JX, JY) - g(X, Y) over the points."""
        square = 0.0
        compat = 0.0
        for p in points:
            j = self(p)
            g = self.chart.metric(p, cfg)
            square = max(square, float(np.max(np.abs(j @ j + np.eye(len(j))))))
            compat = max(compat, float(np.max(np.abs(j.T @ g @ j - g))))
        return {"square": square, "compatibility": compat}


def bilinear(g: Array, z: Array, w: Array) -> complex:
    """Complex-bilinear extension of g (no conjugation)."""
    return complex(z @ g @ w)


def hermitian_inner(g: Array, z: Array, w: Array) -> complex:
    """Hermitian extension of g (conjugate-linear in the second slot)."""
    return complex(z @ g @ np.conj(w))


def g_norm(g: Array, v: Array) -> float:
    """Norm of a real or complex coordinate vector in (the extension of) g."""
    return float(np.sqrt(max(np.real(v @ g @ np.conj(v)), 0.0)))


def antiholomorphic_part(j: Array, w: Array) -> Array:
    """(0,1)-part (w + i J w) / 2 of a (possibly complex) vector."""
    return 0.5 * (w + 1j * (j @ w))


def holomorphic_part(j: Array, w: Array) -> Array:
    """(1,0)-part (w - i J w) / 2 of a (possibly complex) vector."""
    return 0.5 * (w - 1j * (j @ w))


@dataclass(frozen=True)
class HermitianFrame:
    """Orthonormal frame {e_1..e_m, Je_1..Je_m} with Z_k = (e_k - i Je_k)/sqrt(2).

    ``pivots`` records which candidate vectors seeded each e_k; re-running the
    construction with the same pivots at nearby points yields a smooth frame
    field.
    """

    real_frame: FrameBasis
    complex_frame: tuple  # m complex arrays Z_k; the conjugates span T^{0,1}
    pivots: tuple

    @property
    def m(self) -> int:
        return len(self.complex_frame)

    @property
    def e_vectors(self) -> tuple:
        return self.real_frame.vectors[: self.m]

    @property
    def je_vectors(self) -> tuple:
        return self.real_frame.vectors[self.m:]

    def frame_residual(self, g: Array) -> float:
        """Max deviation of <Z_k, conj(Z_l)> = delta_kl and <Z_k, Z_l> = 0."""
        worst = 0.0
        for k, zk in enumerate(self.complex_frame):
            for l, zl in enumerate(self.complex_frame):
                herm = bilinear(g, zk, np.conj(zl)) - (1.0 if k == l else 0.0)
                iso = bilinear(g, zk, zl)
                worst = max(worst, abs(herm), abs(iso))
        return worst


def _gs_project(v: Array, basis: list[Array], g: Array) -> Array:
    w = v.copy()
    for _ in range(2):
        for b in basis:
            w = w - (w @ g @ b) * b
    return w


def hermitian_frame(chart: Chart, j_field: AlmostComplexField, x, cfg: DiffConfig,
                    pivots: Sequence[int] | None = None) -> HermitianFrame:
    """Greedy Hermitian frame at x: pick a unit e_k, append Je_k, project, repeat.

    Candidates are the coordinate axes in order; with ``pivots`` given, exactly
    those candidate indices are used (the smooth-field construction).
    """
    x = np.asarray(x, dtype=float)
    d = chart.dim
    if d % 2 != 0:
        raise RankDeficient("almost complex structures need an even-dimensional chart")
    g = chart.metric(x, cfg)
    j = j_field(x)
    chol = np.linalg.cholesky(g)
    scale = np.linalg.norm(chol.T, ord=2)
    tol = scale * numdiff.RANK_RTOL
    e_list: list[Array] = []
    je_list: list[Array] = []
    used: list[int] = []

    def accepted() -> list[Array]:
        return [v for pair in zip(e_list, je_list) for v in pair]

    candidates = list(pivots) if pivots is not None else list(range(d))
    for idx in candidates:
        if len(e_list) == d // 2:
            break
        e = np.zeros(d)
        e[idx] = 1.0
        w = _gs_project(e, accepted(), g)
        n = np.sqrt(max(w @ g @ w, 0.0))
        if n <= tol:
            if pivots is not None:
                raise RankDeficient(f"recorded pivot {idx} became dependent")
            continue
        ek = w / n
        jek = _gs_project(j @ ek, accepted() + [ek], g)
        njk = np.sqrt(max(jek @ g @ jek, 0.0))
        if njk <= tol:
            raise RankDeficient("J e_k collapsed onto the accepted span; J or g is broken")
        e_list.append(ek)
        je_list.append(jek / njk)
        used.append(idx)
    if len(e_list) != d // 2:
        raise RankDeficient("could not complete a Hermitian frame from coordinate axes")
    real = FrameBasis(tuple(e_list + je_list), g)
    complex_frame = tuple((e - 1j * je) / SQRT2 for e, je in zip(e_list, je_list))
    return HermitianFrame(real, complex_frame, tuple(used))


def hermitian_frame_field(chart: Chart, j_field: AlmostComplexField, base_x, cfg: DiffConfig):
    """Frame field smooth near base_x: the base point's pivot order is frozen."""
    base = hermitian_frame(chart, j_field, base_x, cfg)

    def at(x) -> HermitianFrame:
        return hermitian_frame(chart, j_field, x, cfg, pivots=base.pivots)

    return at, base


def dj_stack(chart: Chart, j_field: AlmostComplexField, x, cfg: DiffConfig) -> Array:
    """Plain coordinate derivatives d_i J, stacked as [i, k, j]."""
    x = np.asarray(x, dtype=float)
    return np.stack([numdiff.partial(j_field, x, i, cfg, domain=chart.domain_predicate())
                     for i in range(chart.dim)])


def nabla_j_tensor(chart: Chart, j_field: AlmostComplexField, x, cfg: DiffConfig) -> Array:
    """Covariant derivative of J as the array T[i, k, j] = (nabla_i J)^k_j.

    (nabla_i J)^k_j = d_i J^k_j + Gamma^k_{il} J^l_j - Gamma^l_{ij} J^k_l.
    """
    x = np.asarray(x, dtype=float)
    dj = dj_stack(chart, j_field, x, cfg)
    gamma = christoffel(chart, x, cfg).symbols
    j = j_field(x)
    term2 = np.einsum("kil,lj->ikj", gamma, j)
    term3 = np.einsum("lij,kl->ikj", gamma, j)
    return dj + term2 - term3


def nabla_J(chart: Chart, j_field: AlmostComplexField, x, x_vec, y_vec, cfg: DiffConfig,
            tensor: Array | None = None) -> Array:
    """(nabla_X J) Y at x; extension-independent in both arguments."""
    t = nabla_j_tensor(chart, j_field, x, cfg) if tensor is None else tensor
    return np.einsum("ikj,i,j->k", t, np.asarray(x_vec, dtype=float),
                     np.asarray(y_vec, dtype=float))


def divergence_J(chart: Chart, j_field: AlmostComplexField, x, cfg: DiffConfig,
                 tensor: Array | None = None) -> Array:
    """div J = trace of nabla J over any g-orthonormal frame, as g^{ij}(nabla_i J)^k_j."""
    x = np.asarray(x, dtype=float)
    t = nabla_j_tensor(chart, j_field, x, cfg) if tensor is None else tensor
    g_inv = chart.metric_inverse(x, cfg)
    return np.einsum("ij,ikj->k", g_inv, t)


def divergence_J_frame(chart: Chart, j_field: AlmostComplexField, x, cfg: DiffConfig,
                       frame_vectors: Sequence[Array]) -> Array:
    """div J summed explicitly over a supplied g-orthonormal frame.

    Used to confirm frame independence of :func:`divergence_J`.
    """
    t = nabla_j_tensor(chart, j_field, x, cfg)
    out = np.zeros(chart.dim)
    for u in frame_vectors:
        out = out + nabla_J(chart, j_field, x, u, u, cfg, tensor=t)
    return out


def lee_vector(chart: Chart, j_field: AlmostComplexField, x, cfg: DiffConfig,
               tensor: Array | None = None) -> Array:
    """The Lee-type vector field J(div J) at x."""
    x = np.asarray(x, dtype=float)
    return j_field(x) @ divergence_J(chart, j_field, x, cfg, tensor=tensor)


def nijenhuis(chart: Chart, j_field: AlmostComplexField, x, x_vec, y_vec, cfg: DiffConfig,
              dj: Array | None = None) -> Array:
    """Nijenhuis tensor N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y].

    Evaluated on the constant-component extensions of X and Y, for which the
    bracket of the J-transformed fields contracts against d_i J directly.
    """
    x = np.asarray(x, dtype=float)
    xv = np.asarray(x_vec, dtype=float)
    yv = np.asarray(y_vec, dtype=float)
    j = j_field(x)
    d = dj_stack(chart, j_field, x, cfg) if dj is None else dj
    jx = j @ xv
    jy = j @ yv
    a1 = np.einsum("i,ikj,j->k", jx, d, yv)   # (JX)^i (d_i J) Y
    a2 = np.einsum("i,ikj,j->k", jy, d, xv)   # (JY)^i (d_i J) X
    a3 = j @ np.einsum("i,ikj,j->k", yv, d, xv)   # -J[JX, Y] on constant extensions
    a4 = j @ np.einsum("i,ikj,j->k", xv, d, yv)   # -J[X, JY] on constant extensions
    return a1 - a2 + a3 - a4


def nijenhuis_bracket_route(chart: Chart, j_field: AlmostComplexField, x, x_vec, y_vec,
                            cfg: DiffConfig) -> Array:
    """Literal bracket evaluation of N(X, Y); slow cross-check of :func:`nijenhuis`."""
    from .manifold import constant_field, lie_bracket

    x = np.asarray(x, dtype=float)
    xv = np.asarray(x_vec, dtype=float)
    yv = np.asarray(y_vec, dtype=float)
    j_at = j_field(x)
    xf = constant_field(chart, xv)
    yf = constant_field(chart, yv)
    jxf = VectorField(chart, lambda p: j_field(p) @ xv)
    jyf = VectorField(chart, lambda p: j_field(p) @ yv)
    term1 = lie_bracket(jxf, jyf, x, cfg)
    term2 = j_at @ lie_bracket(jxf, yf, x, cfg)
    term3 = j_at @ lie_bracket(xf, jyf, x, cfg)
    term4 = lie_bracket(xf, yf, x, cfg)
    return term1 - term2 - term3 - term4


def _cov_along(chart: Chart, v: Array, field_fn: Callable[[Array], Array], x,
               cfg: DiffConfig, gamma: Array) -> Array:
    """nabla_v W for a constant direction v and a real vector-field function."""
    dw = np.stack([numdiff.partial(field_fn, x, i, cfg) for i in range(chart.dim)])
    w = np.asarray(field_fn(x), dtype=float)
    return np.einsum("i,ik->k", v, dw) + np.einsum("kij,i,j->k", gamma, v, w)


def _cov_complex(chart: Chart, direction: Array, re_fn, im_fn, x, cfg: DiffConfig,
                 gamma: Array) -> Array:
    """Complex-bilinear covariant derivative along a complex direction at x."""
    a = np.real(direction)
    b = np.imag(direction)
    out = _cov_along(chart, a, re_fn, x, cfg, gamma) + 1j * _cov_along(chart, a, im_fn, x, cfg, gamma)
    out = out + 1j * (_cov_along(chart, b, re_fn, x, cfg, gamma)
                      + 1j * _cov_along(chart, b, im_fn, x, cfg, gamma))
    return out


@dataclass(frozen=True)
class StructureReport:
    """Residuals and verdicts of the pointwise structure classification.

    The complex-form residuals re-express the (1,2)-symplectic and
    cosymplectic conditions through Hermitian frame fields; they vanish
    together with the real-form residuals.
    """

    residual_kahler: float
    residual_12sympl: float
    residual_cosympl: float
    residual_integrable: float
    residual_12sympl_complex: float
    residual_cosympl_complex: float
    verdicts: dict
    samples: tuple
    tolerance: float
    scale: float

    def to_dict(self) -> dict:
        return {
            "residuals": {
                "kahler": self.residual_kahler,
                "one_two_symplectic": self.residual_12sympl,
                "cosymplectic": self.residual_cosympl,
                "integrable": self.residual_integrable,
                "one_two_symplectic_complex": self.residual_12sympl_complex,
                "cosymplectic_complex": self.residual_cosympl_complex,
            },
            "verdicts": dict(self.verdicts),
            "tolerance": self.tolerance,
            "scale": self.scale,
            "samples": [list(map(float, p)) for p in self.samples],
        }


def classify_structure(chart: Chart, j_field: AlmostComplexField, plan: SamplePlan,
                       cfg: DiffConfig, complex_form: bool = True,
                       points: Sequence[Array] | None = None) -> StructureReport:
    """Classify (chart, J) at the plan's sample points.

    Residuals are maxima over samples and frame vectors of:
    Kaehler ``|(nabla_X J) Y|``; (1,2)-symplectic
    ``|(nabla_X J) Y + (nabla_JX J) J Y|``; cosymplectic ``|div J|``;
    integrable ``|N(X, Y)|``.  With ``complex_form`` the equivalent Hermitian
    frame criteria ((0,1)-parts of nabla_{conj Z} W and of sum_k
    nabla_{conj Z_k} Z_k) are evaluated as well.  ``points`` overrides the
    plan's samples (used when a map pushes samples onto this chart).
    """
    points = plan.points(chart, cfg) if points is None else [np.asarray(p, dtype=float)
                                                             for p in points]
    r_kahler = r_12 = r_cosympl = r_nij = 0.0
    r_12_c = r_cos_c = 0.0
    scale = 1.0
    for x in points:
        g = chart.metric(x, cfg)
        j = j_field(x)
        gamma = christoffel(chart, x, cfg).symbols
        scale = max(scale, 1.0 + float(np.max(np.abs(gamma))) * (1.0 + float(np.max(np.abs(j)))))
        frame = hermitian_frame(chart, j_field, x, cfg)
        u = frame.real_frame.matrix  # d x d, columns are the frame
        dj = dj_stack(chart, j_field, x, cfg)
        t = dj + np.einsum("kil,lj->ikj", gamma, j) - np.einsum("lij,kl->ikj", gamma, j)
        ju = j @ u
        nab = np.einsum("ikj,ia,jb->kab", t, u, u)
        nab_j = np.einsum("ikj,ia,jb->kab", t, ju, ju)
        norms = np.sqrt(np.maximum(np.einsum("kab,kl,lab->ab", nab, g, nab), 0.0))
        r_kahler = max(r_kahler, float(np.max(norms)))
        s12 = nab + nab_j
        norms12 = np.sqrt(np.maximum(np.einsum("kab,kl,lab->ab", s12, g, s12), 0.0))
        r_12 = max(r_12, float(np.max(norms12)))
        delta = divergence_J(chart, j_field, x, cfg, tensor=t)
        r_cosympl = max(r_cosympl, g_norm(g, delta))
        for a in range(u.shape[1]):
            for b in range(a + 1, u.shape[1]):
                n_ab = nijenhuis(chart, j_field, x, u[:, a], u[:, b], cfg, dj=dj)
                r_nij = max(r_nij, g_norm(g, n_ab))
        if complex_form:
            frame_at, base = hermitian_frame_field(chart, j_field, x, cfg)
            cache: dict = {}  # stencil points repeat across frame-field components

            def frame_cached(p):
                p = np.asarray(p, dtype=float)
                key = p.tobytes()
                if key not in cache:
                    cache[key] = frame_at(p).complex_frame
                return cache[key]

            def z_re(p, k):
                return np.real(frame_cached(p)[k])

            def z_im(p, k):
                return np.imag(frame_cached(p)[k])

            m = base.m
            cosym_sum = np.zeros(chart.dim, dtype=complex)
            for k in range(m):
                zk = base.complex_frame[k]
                for l in range(m):
                    re_fn = lambda p, l=l: z_re(p, l)
                    im_fn = lambda p, l=l: z_im(p, l)
                    cov = _cov_complex(chart, np.conj(zk), re_fn, im_fn, x, cfg, gamma)
                    if l == k:
                        cosym_sum = cosym_sum + cov
                    r_12_c = max(r_12_c, g_norm(g, antiholomorphic_part(j, cov)))
            r_cos_c = max(r_cos_c, g_norm(g, antiholomorphic_part(j, cosym_sum)))
    tol = cfg.tolerance(scale)
    verdicts = {
        "kahler": r_kahler <= tol,
        "one_two_symplectic": r_12 <= tol,
        "cosymplectic": r_cosympl <= tol,
        "integrable": r_nij <= tol,
    }
    return StructureReport(r_kahler, r_12, r_cosympl, r_nij, r_12_c, r_cos_c,
                           verdicts, tuple(points), tol, scale)
