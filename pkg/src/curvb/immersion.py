"""Chart-level extrinsic geometry of immersed warped products.

Everything here works in explicit coordinates: an immersion is a map from
an m-dimensional chart (base coordinates first, fiber coordinates after)
into an ambient chart carrying a metric field.  Derivatives are central
finite differences, so the only inputs are plain callables; the trade-off
is a discretization error of roughly 1e-6..1e-8 at the default steps,
which the default inequality tolerance (1e-3) absorbs comfortably.

Sign conventions:
  * The Laplacian is the geometers' positive-spectrum one, Delta f = -f''
    in one flat dimension.  With this sign the warping function of the
    totally geodesic round 2-sphere inside the round 3-sphere satisfies
    Delta f / f = c exactly, which is the anchor the convention is pinned
    to (see ``laplacian_base``).
  * Curvature is contracted so that the round sphere of curvature c in its
    conformal chart reports sectional curvature +c (see ``chart_sectional``).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .bounds import ChenInterval, SectionalRange, chen_bounds
from .errors import (
    NotAWarpedProductMetric,
    RankDeficient,
    SingularMetric,
    SpecFileError,
)
from .exprs import compile_expression
from .geomcore import (
    FD_STEP_FIRST,
    FD_STEP_SECOND,
    fd_gradient,
    fd_jacobian,
    fd_second_partials,
    gram_schmidt,
)

__all__ = [
    "WarpedProductSpec",
    "ChartImmersion",
    "ExtrinsicReport",
    "FixtureBundle",
    "ambient_euclidean",
    "ambient_conformal",
    "christoffel",
    "chart_curvature",
    "chart_sectional",
    "induced_geometry",
    "mean_and_norms",
    "shape_operator",
    "laplacian_base",
    "check_inequality",
    "fixture_plane",
    "fixture_cylinder",
    "fixture_sphere_in_sphere",
    "make_fixture",
    "load_immersion_file",
    "FIXTURE_NAMES",
]

_WARPED_TOL = 1e-6
_RANK_TOL = 1e-8
_PD_TOL = 1e-12


# --------------------------------------------------------------------------
# ambient chart metrics
# --------------------------------------------------------------------------


def ambient_euclidean(dim: int):
    """Identity metric field on R^dim."""
    eye = np.eye(dim)

    def metric(x):
        return eye.copy()

    return metric


def ambient_conformal(c: float, dim: int):
    """Constant-curvature-c metric 4 delta_ij / (1 + c |x|^2)^2 on R^dim.

    For c > 0 this is the stereographic chart of the round sphere (minus a
    point); for c < 0 it is the Poincare ball on |x|^2 < 1/|c|; c = 0 gives
    a flat metric scaled by 4.  ``chart_sectional`` on random planes is the
    property test that this really has curvature c.
    """
    c = float(c)

    def metric(x):
        x = np.asarray(x, dtype=float)
        w = 1.0 + c * float(x @ x)
        return (4.0 / (w * w)) * np.eye(dim)

    return metric


# --------------------------------------------------------------------------
# chart curvature (used to validate ambient metrics, not in the hot path)
# --------------------------------------------------------------------------


def christoffel(metric, q, step: float = FD_STEP_FIRST) -> np.ndarray:
    """Christoffel symbols Gamma^k_{ij} of a chart metric field at q."""
    q = np.asarray(q, dtype=float)
    m = q.size
    dG = np.empty((m, m, m))  # dG[a, b, c] = d_a g_{bc}
    for a in range(m):
        qp = q.copy()
        qp[a] += step
        qm = q.copy()
        qm[a] -= step
        dG[a] = (np.asarray(metric(qp)) - np.asarray(metric(qm))) / (2.0 * step)
    g = np.asarray(metric(q))
    ginv = _inv_spd(g)
    term = (
        np.einsum("ilj->lij", dG)
        + np.einsum("jli->lij", dG)
        - dG
    )
    return 0.5 * np.einsum("kl,lij->kij", ginv, term)


def chart_curvature(metric, q, step: float = 5e-4) -> np.ndarray:
    """Fully covariant curvature tensor R[i,k,l,m] of a chart metric at q.

    Second metric derivatives by central differences plus the quadratic
    Christoffel correction.  The default step is a bit finer than the
    generic second-derivative step: truncation error grows with the
    metric's fourth derivatives (so with c^2 on conformal charts) and this
    keeps |K - c| under 1e-5 with margin for moderate c, while round-off
    (~eps/step^2 ~ 1e-9) stays negligible.  Oriented so that
    ``chart_sectional`` returns +c on the conformal chart of curvature c.
    """
    q = np.asarray(q, dtype=float)
    m = q.size
    g = np.asarray(metric(q))
    # ddG[a, b, c, d] = d_a d_b g_{cd}
    ddG = np.empty((m, m, m, m))
    for a in range(m):
        for b in range(a, m):
            if a == b:
                qp = q.copy()
                qp[a] += step
                qm = q.copy()
                qm[a] -= step
                val = (
                    np.asarray(metric(qp))
                    - 2.0 * g
                    + np.asarray(metric(qm))
                ) / (step * step)
            else:
                qpp = q.copy()
                qpp[[a, b]] += step
                qmm = q.copy()
                qmm[[a, b]] -= step
                qpm = q.copy()
                qpm[a] += step
                qpm[b] -= step
                qmp = q.copy()
                qmp[a] -= step
                qmp[b] += step
                val = (
                    np.asarray(metric(qpp))
                    - np.asarray(metric(qpm))
                    - np.asarray(metric(qmp))
                    + np.asarray(metric(qmm))
                ) / (4.0 * step * step)
            ddG[a, b] = val
            ddG[b, a] = val
    gamma = christoffel(metric, q, step=FD_STEP_FIRST)
    # R_{iklm} = 1/2 (g_{im,kl} + g_{kl,im} - g_{il,km} - g_{km,il})
    #           + g_{np} (G^n_{kl} G^p_{im} - G^n_{km} G^p_{il})
    second = 0.5 * (
        np.einsum("klim->iklm", ddG)
        + np.einsum("imkl->iklm", ddG)
        - np.einsum("kmil->iklm", ddG)
        - np.einsum("ilkm->iklm", ddG)
    )
    quad = np.einsum("np,nkl,pim->iklm", g, gamma, gamma) - np.einsum(
        "np,nkm,pil->iklm", g, gamma, gamma
    )
    # the classical index formula is oriented for the R(X,Y,X,Y)
    # contraction; swap the last pair so R(X,Y,Y,X)/gram gives +c on the
    # round sphere, matching the model-space convention
    return np.einsum("iklm->ikml", second + quad)


def chart_sectional(metric, q, X, Y, step: float = 5e-4) -> float:
    """Sectional curvature of span(X, Y) at q for a chart metric field."""
    q = np.asarray(q, dtype=float)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    g = np.asarray(metric(q))
    R = chart_curvature(metric, q, step=step)
    num = float(np.einsum("iklm,i,k,l,m->", R, X, Y, Y, X))
    gram = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    return num / gram


def _inv_spd(g):
    vals = np.linalg.eigvalsh(g)
    if vals.min() <= _PD_TOL:
        raise SingularMetric(
            f"metric not positive definite (min eigenvalue {vals.min():.3e})"
        )
    return np.linalg.inv(g)


# --------------------------------------------------------------------------
# warped products and immersions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WarpedProductSpec:
    """Warped product B x_f F described on a chart of the base.

    ``base_chart_metric`` maps an m1-vector to an (m1, m1) matrix; the
    fiber carries an arc-length chart (identity fiber metric), so the full
    product metric at (b, fib) is blockdiag(g_B(b), f(b)^2 I_{m2}).
    """

    m1: int
    m2: int
    base_chart_metric: object
    warping: object
    base_domain: tuple

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError(f"factor dimensions must be >= 1, got {self.m1}, {self.m2}")

    @property
    def m(self) -> int:
        return self.m1 + self.m2


@dataclass(frozen=True)
class ChartImmersion:
    """A map from an m-chart into an ambient chart with a metric field."""

    map: object
    ambient_metric: object
    ambient_dim: int


@dataclass(frozen=True)
class ExtrinsicReport:
    """Per-point outcome of the warped-product inequality check."""

    point: tuple
    H2: float
    h_norm2: float
    laplacian_f: float
    delta_f_over_f: float
    chen: ChenInterval
    passed: bool


def induced_geometry(imm: ChartImmersion, point):
    """Induced metric and second fundamental form of the immersion at point.

    Returns ``(g, h)`` with ``g[i, j] = gbar(d_i psi, d_j psi)`` (an (m, m)
    matrix) and ``h[i, j]`` the ambient components of the normal projection
    of the ambient covariant second derivative (an (m, m, ambient_dim)
    array).
    """
    point = np.asarray(point, dtype=float)
    E = fd_jacobian(imm.map, point, FD_STEP_FIRST)  # (ambient_dim, m)
    m = point.size
    if np.linalg.matrix_rank(E, tol=_RANK_TOL) < m:
        raise RankDeficient(
            f"immersion differential has rank < {m} at {tuple(point)}"
        )
    p_amb = np.asarray(imm.map(point), dtype=float)
    G = np.asarray(imm.ambient_metric(p_amb))
    g = E.T @ G @ E
    ginv = _inv_spd(g)

    dd = fd_second_partials(imm.map, point, FD_STEP_SECOND)  # (m, m, ambient_dim)
    gamma = christoffel(imm.ambient_metric, p_amb)  # (d, d, d)
    # ambient covariant second derivative: dd psi^k + Gamma^k_{ab} E^a_i E^b_j
    D = dd + np.einsum("kab,ai,bj->ijk", gamma, E, E)
    # normal projection: subtract the tangential part E ginv E^T G
    P = E @ ginv @ E.T @ G
    h = D - np.einsum("kA,ijA->ijk", P, D)
    return g, h


def mean_and_norms(metric, h_tensor, ambient_metric_at_point):
    """Squared mean curvature and squared norm of the second fundamental form.

    Both traces are taken in a metric-orthonormal frame obtained by
    Gram-Schmidt of the coordinate basis, so the values are chart
    independent.
    """
    g = np.asarray(metric, dtype=float)
    h = np.asarray(h_tensor, dtype=float)
    G = np.asarray(ambient_metric_at_point, dtype=float)
    m = g.shape[0]
    vals = np.linalg.eigvalsh(g)
    if vals.min() <= _PD_TOL:
        raise SingularMetric(
            f"induced metric not positive definite (min eigenvalue {vals.min():.3e})"
        )
    frame = gram_schmidt([np.eye(m)[i] for i in range(m)], metric=g)
    C = np.asarray(frame)  # C[a, i]: frame vector a in coordinates
    hf = np.einsum("ai,bj,ijk->abk", C, C, h)
    H = hf.trace(axis1=0, axis2=1) / m  # ambient vector
    H2 = float(H @ G @ H)
    h_norm2 = float(np.einsum("abk,kl,abl->", hf, G, hf))
    return H2, h_norm2


def shape_operator(imm: ChartImmersion, point, normal_field) -> np.ndarray:
    """Matrix of A_N in the coordinate basis: A_N d_i = alpha[a, i] d_a.

    ``normal_field`` maps a chart point to the ambient components of a
    normal vector along the immersion.  A_N is minus the tangential part of
    the ambient covariant derivative of N, extracted by solving against the
    induced metric; no second fundamental form enters, which is what makes
    the duality test between the two an actual cross-check.
    """
    point = np.asarray(point, dtype=float)
    E = fd_jacobian(imm.map, point, FD_STEP_FIRST)
    p_amb = np.asarray(imm.map(point), dtype=float)
    G = np.asarray(imm.ambient_metric(p_amb))
    g = E.T @ G @ E
    ginv = _inv_spd(g)
    dN = fd_jacobian(normal_field, point, FD_STEP_FIRST)  # (ambient_dim, m)
    gamma = christoffel(imm.ambient_metric, p_amb)
    N = np.asarray(normal_field(point), dtype=float)
    # covariant derivative along each coordinate direction
    DN = dN + np.einsum("kab,ai,b->ki", gamma, E, N)
    # tangential components: solve g alpha = -E^T G DN
    return -ginv @ (E.T @ G @ DN)


def laplacian_base(spec: WarpedProductSpec, base_point, *, _route: str = "divergence"):
    """Positive-spectrum Laplacian of the warping function on the base at a point.

    Computed as minus the chart divergence form,
    -(1/sqrt(det g)) d_i (sqrt(det g) g^{ij} d_j f), with nested central
    differences (inner step 1e-4 for grad f, outer 1e-3 for the
    divergence).  ``_route="covariant"`` evaluates the independent
    -g^{ij} (d_i d_j f - Gamma^k_{ij} d_k f) form instead; the two agree to
    discretization error and cross-check each other in the tests.

    Sign anchor: on a flat 1-dimensional base with f = sin t this returns
    +sin t, i.e. Delta f = -f''.
    """
    q = np.asarray(base_point, dtype=float)
    m1 = spec.m1
    if q.size != m1:
        raise ValueError(f"base point must have {m1} coordinates, got {q.size}")
    metric = spec.base_chart_metric
    f = spec.warping

    if _route == "covariant":
        g = np.asarray(metric(q))
        ginv = _inv_spd(g)
        gamma = christoffel(metric, q)
        grad = fd_gradient(f, q, FD_STEP_FIRST)
        hess = _scalar_hessian(f, q, FD_STEP_SECOND)
        cov = hess - np.einsum("kij,k->ij", gamma, grad)
        return -float(np.einsum("ij,ij->", ginv, cov))
    if _route != "divergence":
        raise ValueError(f"unknown Laplacian route {_route!r}")

    def flux(p):
        g = np.asarray(metric(p))
        ginv = _inv_spd(g)
        grad = fd_gradient(f, p, FD_STEP_FIRST)
        return math.sqrt(np.linalg.det(g)) * (ginv @ grad)

    g0 = np.asarray(metric(q))
    vals = np.linalg.eigvalsh(g0)
    if vals.min() <= _PD_TOL:
        raise SingularMetric(
            f"base metric not positive definite (min eigenvalue {vals.min():.3e})"
        )
    div = 0.0
    for i in range(m1):
        qp = q.copy()
        qp[i] += FD_STEP_SECOND
        qm = q.copy()
        qm[i] -= FD_STEP_SECOND
        div += (flux(qp)[i] - flux(qm)[i]) / (2.0 * FD_STEP_SECOND)
    return -div / math.sqrt(np.linalg.det(g0))


def _scalar_hessian(f, q, step):
    m = q.size
    H = np.empty((m, m))
    f0 = float(f(q))
    for i in range(m):
        for j in range(i, m):
            if i == j:
                qp = q.copy()
                qp[i] += step
                qm = q.copy()
                qm[i] -= step
                H[i, i] = (float(f(qp)) - 2.0 * f0 + float(f(qm))) / (step * step)
            else:
                qpp = q.copy()
                qpp[[i, j]] += step
                qmm = q.copy()
                qmm[[i, j]] -= step
                qpm = q.copy()
                qpm[i] += step
                qpm[j] -= step
                qmp = q.copy()
                qmp[i] -= step
                qmp[j] += step
                H[i, j] = H[j, i] = (
                    float(f(qpp)) - float(f(qpm)) - float(f(qmp)) + float(f(qmm))
                ) / (4.0 * step * step)
    return H


def check_inequality(
    spec: WarpedProductSpec,
    imm: ChartImmersion,
    points,
    srange: SectionalRange,
    tol: float = 1e-3,
):
    """Per-point reports of the warping-Laplacian inequality on an immersion.

    At each chart point (base coordinates first): verify the induced metric
    splits as blockdiag(g_B, f^2 I) to 1e-6 (else NotAWarpedProductMetric),
    compute H^2 and |h|^2, form the curvature-range interval from
    ``srange``'s theorem bounds, and compare Delta f / f against it.
    Reports come back in input order.
    """
    m1, m2 = spec.m1, spec.m2
    m = m1 + m2
    reports = []
    for point in points:
        q = np.asarray(point, dtype=float)
        if q.size != m:
            raise ValueError(f"point {point} has {q.size} coordinates, expected {m}")
        base = q[:m1]
        g, h = induced_geometry(imm, q)
        fval = float(spec.warping(base))
        gB = np.asarray(spec.base_chart_metric(base))
        model = np.zeros((m, m))
        model[:m1, :m1] = gB
        model[m1:, m1:] = fval * fval * np.eye(m2)
        resid = float(np.abs(g - model).max())
        if resid > _WARPED_TOL:
            raise NotAWarpedProductMetric(
                f"induced metric differs from g_B + f^2 g_F by {resid:.3e} "
                f"at {tuple(q)}"
            )
        p_amb = np.asarray(imm.map(q), dtype=float)
        G = np.asarray(imm.ambient_metric(p_amb))
        H2, h_norm2 = mean_and_norms(g, h, G)
        lap = float(laplacian_base(spec, base))
        ratio = lap / fval
        chen = chen_bounds(m1, m2, H2, h_norm2, srange.theorem_lo, srange.theorem_hi)
        passed = (chen.lower - tol) <= ratio <= (chen.upper + tol)
        reports.append(
            ExtrinsicReport(
                point=tuple(float(v) for v in q),
                H2=H2,
                h_norm2=h_norm2,
                laplacian_f=lap,
                delta_f_over_f=ratio,
                chen=chen,
                passed=passed,
            )
        )
    return reports


# --------------------------------------------------------------------------
# fixtures: closed-form immersions with known extrinsic data
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FixtureBundle:
    """A ready-to-check immersion: spec, chart map, sample points, range."""

    name: str
    spec: WarpedProductSpec
    imm: ChartImmersion
    points: tuple
    srange: SectionalRange
    normal_field: object = field(repr=False, default=None)


def _exact_range(lo: float, hi: float) -> SectionalRange:
    return SectionalRange(
        theorem_lo=float(lo),
        theorem_hi=float(hi),
        est_lo=float(lo),
        est_hi=float(hi),
        samples=0,
        seed=0,
    )


def _grid(urange, vrange, k: int = 5) -> tuple:
    us = np.linspace(urange[0], urange[1], k)
    vs = np.linspace(vrange[0], vrange[1], k)
    return tuple((float(u), float(v)) for u in us for v in vs)


def fixture_plane(k: int = 5) -> FixtureBundle:
    """Flat plane (u, v) -> (u, v, 0) in Euclidean 3-space, f = 1."""

    def psi(p):
        return np.array([p[0], p[1], 0.0])

    def normal(p):
        return np.array([0.0, 0.0, 1.0])

    spec = WarpedProductSpec(
        m1=1,
        m2=1,
        base_chart_metric=lambda b: np.eye(1),
        warping=lambda b: 1.0,
        base_domain=((-1.0, 1.0),),
    )
    imm = ChartImmersion(map=psi, ambient_metric=ambient_euclidean(3), ambient_dim=3)
    return FixtureBundle(
        name="plane",
        spec=spec,
        imm=imm,
        points=_grid((-1.0, 1.0), (-1.0, 1.0), k),
        srange=_exact_range(0.0, 0.0),
        normal_field=normal,
    )


def fixture_cylinder(radius: float = 1.0, k: int = 5) -> FixtureBundle:
    """Cylinder (u, v) -> (r cos(v/r), r sin(v/r), u), fiber arc length v."""
    r = float(radius)
    if r <= 0.0:
        raise ValueError(f"radius must be positive, got {radius}")

    def psi(p):
        return np.array([r * math.cos(p[1] / r), r * math.sin(p[1] / r), p[0]])

    def normal(p):
        return np.array([math.cos(p[1] / r), math.sin(p[1] / r), 0.0])

    spec = WarpedProductSpec(
        m1=1,
        m2=1,
        base_chart_metric=lambda b: np.eye(1),
        warping=lambda b: 1.0,
        base_domain=((-1.0, 1.0),),
    )
    imm = ChartImmersion(map=psi, ambient_metric=ambient_euclidean(3), ambient_dim=3)
    return FixtureBundle(
        name="cylinder",
        spec=spec,
        imm=imm,
        points=_grid((-1.0, 1.0), (0.0, 2.0), k),
        srange=_exact_range(0.0, 0.0),
        normal_field=normal,
    )


def fixture_sphere_in_sphere(c: float = 1.0, k: int = 5) -> FixtureBundle:
    """Totally geodesic round 2-sphere inside the round 3-sphere of curvature c.

    The ambient is the conformal chart of curvature c > 0; the surface is
    the chart sphere |x| = 1/sqrt(c) parametrized by arc length t along
    meridians and arc-length angle theta on the S^1 fiber:

        psi(t, theta) = (sin(s t) cos th, sin(s t) sin th, cos(s t)) / s,
        s = sqrt(c),  f(t) = sin(s t)/s.

    The warping satisfies Delta f / f = c = m1 c exactly, the eigenvalue
    case of the inequality.
    """
    c = float(c)
    if c <= 0.0:
        raise ValueError(f"fixture needs c > 0, got {c}")
    s = math.sqrt(c)

    def psi(p):
        t, th = p[0], p[1]
        return np.array(
            [
                math.sin(s * t) * math.cos(th) / s,
                math.sin(s * t) * math.sin(th) / s,
                math.cos(s * t) / s,
            ]
        )

    def normal(p):
        return s * psi(p)

    def warping(b):
        return math.sin(s * float(b[0])) / s

    spec = WarpedProductSpec(
        m1=1,
        m2=1,
        base_chart_metric=lambda b: np.eye(1),
        warping=warping,
        base_domain=((0.3 / s, (math.pi - 0.3) / s),),
    )
    imm = ChartImmersion(
        map=psi, ambient_metric=ambient_conformal(c, 3), ambient_dim=3
    )
    return FixtureBundle(
        name="sphere-in-sphere",
        spec=spec,
        imm=imm,
        points=_grid((0.4 / s, (math.pi - 0.4) / s), (0.2, 5.8), k),
        srange=_exact_range(c, c),
        normal_field=normal,
    )


FIXTURE_NAMES = ("plane", "cylinder", "sphere-in-sphere")


def make_fixture(
    name: str, *, c: float = 1.0, radius: float = 1.0, k: int = 5
) -> FixtureBundle:
    """Build a named fixture; parameters not used by the fixture are ignored.

    ``k`` is the per-axis sample count, so the bundle carries k^2 points.
    """
    if k < 2:
        raise ValueError(f"need at least 2 samples per axis, got {k}")
    if name == "plane":
        return fixture_plane(k=k)
    if name == "cylinder":
        return fixture_cylinder(radius=radius, k=k)
    if name == "sphere-in-sphere":
        return fixture_sphere_in_sphere(c=c, k=k)
    raise ValueError(f"unknown fixture {name!r}; expected one of {FIXTURE_NAMES}")


# --------------------------------------------------------------------------
# declarative immersion files
# --------------------------------------------------------------------------

_FIXTURE_KEYS = {"fixture", "c", "radius", "points"}
_INLINE_REQUIRED = {"m1", "m2", "vars", "map", "warping", "base_domain"}
_INLINE_OPTIONAL = {"ambient_c", "base_metric", "fiber_domain", "points"}


def _as_domain(value, count: int, label: str) -> tuple:
    try:
        dom = tuple((float(lo), float(hi)) for lo, hi in value)
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"{label} must be a list of [lo, hi] pairs") from exc
    if len(dom) != count:
        raise SpecFileError(f"{label} needs {count} [lo, hi] pairs, got {len(dom)}")
    for lo, hi in dom:
        if not lo < hi:
            raise SpecFileError(f"{label} interval [{lo}, {hi}] is empty")
    return dom


def _domain_grid(domains, total: int) -> tuple:
    """Product grid with ~``total`` points, shrunk 5% from each edge.

    The shrink keeps every sample far enough inside the declared domains
    that the finite-difference stencils never leave them.
    """
    dims = len(domains)
    k = max(2, round(total ** (1.0 / dims)))
    axes = []
    for lo, hi in domains:
        pad = 0.05 * (hi - lo)
        axes.append(np.linspace(lo + pad, hi - pad, k))
    mesh = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([ax.ravel() for ax in mesh], axis=-1)
    return tuple(tuple(float(v) for v in row) for row in flat)


def _load_inline(raw: dict, name: str, n_points: int) -> FixtureBundle:
    for key in _INLINE_REQUIRED - raw.keys():
        raise SpecFileError(f"immersion spec is missing required key {key!r}")
    try:
        m1 = int(raw["m1"])
        m2 = int(raw["m2"])
    except (TypeError, ValueError) as exc:
        raise SpecFileError("m1 and m2 must be integers") from exc
    if m1 < 1 or m2 < 1:
        raise SpecFileError(f"factor dimensions must be >= 1, got m1={m1}, m2={m2}")
    m = m1 + m2

    variables = raw["vars"]
    if not isinstance(variables, list) or len(variables) != m:
        raise SpecFileError(
            f"vars must list {m} coordinate names (base first), got {variables!r}"
        )
    base_vars = variables[:m1]

    chart = raw["map"]
    if not isinstance(chart, list) or len(chart) < m:
        raise SpecFileError(
            f"map must list at least {m} ambient coordinate expressions"
        )
    components = [compile_expression(src, variables) for src in chart]
    ambient_dim = len(components)

    def psi(p):
        return np.array([comp(p) for comp in components])

    warp = compile_expression(raw["warping"], base_vars)

    metric_rows = raw.get("base_metric")
    if metric_rows is None:
        eye = np.eye(m1)

        def base_metric(b):
            return eye.copy()

    else:
        if (
            not isinstance(metric_rows, list)
            or len(metric_rows) != m1
            or any(not isinstance(r, list) or len(r) != m1 for r in metric_rows)
        ):
            raise SpecFileError(f"base_metric must be an {m1}x{m1} expression matrix")
        entries = [
            [compile_expression(src, base_vars) for src in row] for row in metric_rows
        ]

        def base_metric(b):
            return np.array([[entry(b) for entry in row] for row in entries])

    base_domain = _as_domain(raw["base_domain"], m1, "base_domain")

    c_amb = float(raw.get("ambient_c", 0.0))
    if c_amb == 0.0:
        metric_field = ambient_euclidean(ambient_dim)
    else:
        metric_field = ambient_conformal(c_amb, ambient_dim)

    if "points" in raw:
        pts = raw["points"]
        if not isinstance(pts, list) or not pts:
            raise SpecFileError("points must be a non-empty list of chart points")
        points = []
        for row in pts:
            if not isinstance(row, list) or len(row) != m:
                raise SpecFileError(f"point {row!r} needs {m} coordinates")
            points.append(tuple(float(v) for v in row))
        points = tuple(points)
    else:
        if "fiber_domain" not in raw:
            raise SpecFileError(
                "immersion spec needs either explicit points or a fiber_domain "
                "to sample from"
            )
        fiber_domain = _as_domain(raw["fiber_domain"], m2, "fiber_domain")
        points = _domain_grid(base_domain + fiber_domain, n_points)

    spec = WarpedProductSpec(
        m1=m1,
        m2=m2,
        base_chart_metric=base_metric,
        warping=warp,
        base_domain=base_domain,
    )
    imm = ChartImmersion(map=psi, ambient_metric=metric_field, ambient_dim=ambient_dim)
    return FixtureBundle(
        name=name,
        spec=spec,
        imm=imm,
        points=points,
        srange=_exact_range(c_amb, c_amb),
        normal_field=None,
    )


def load_immersion_file(path, n_points: int = 25) -> FixtureBundle:
    """Load an immersion check setup from a declarative JSON file.

    Two shapes are accepted.  A named fixture,

        {"fixture": "sphere-in-sphere", "c": 1.0}

    with optional ``radius`` (cylinder), ``c`` (sphere-in-sphere) and
    ``points`` (total sample count, rounded to a grid); or an inline chart,

        {"m1": 1, "m2": 1, "vars": ["u", "v"],
         "map": ["cos(v)", "sin(v)", "u"], "warping": "1",
         "ambient_c": 0.0, "base_domain": [[-1, 1]],
         "fiber_domain": [[0, 2]]}

    whose expressions follow the grammar in :mod:`curvb.exprs`.  Inline
    specs may give explicit ``points`` (list of chart points) instead of
    ``fiber_domain``; otherwise a grid of about ``n_points`` samples is
    drawn from the declared domains.  ``ambient_c`` selects the ambient:
    0 the flat identity chart, otherwise the conformal chart of that
    curvature.  Malformed files raise SpecFileError.
    """
    path = str(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SpecFileError(f"cannot read immersion spec {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"immersion spec {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SpecFileError(f"immersion spec {path!r} must be a JSON object")

    name = os.path.splitext(os.path.basename(path))[0]
    if "fixture" in raw:
        unknown = raw.keys() - _FIXTURE_KEYS
        if unknown:
            raise SpecFileError(f"unknown keys in fixture spec: {sorted(unknown)}")
        total = raw.get("points", n_points)
        try:
            k = max(2, round(float(total) ** 0.5))
            bundle = make_fixture(
                str(raw["fixture"]),
                c=float(raw.get("c", 1.0)),
                radius=float(raw.get("radius", 1.0)),
                k=k,
            )
        except (TypeError, ValueError) as exc:
            raise SpecFileError(str(exc)) from exc
        return FixtureBundle(
            name=name,
            spec=bundle.spec,
            imm=bundle.imm,
            points=bundle.points,
            srange=bundle.srange,
            normal_field=bundle.normal_field,
        )

    unknown = raw.keys() - _INLINE_REQUIRED - _INLINE_OPTIONAL
    if unknown:
        raise SpecFileError(f"unknown keys in immersion spec: {sorted(unknown)}")
    try:
        n_points = int(n_points)
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"bad sample count {n_points!r}") from exc
    return _load_inline(raw, name, max(1, n_points))
