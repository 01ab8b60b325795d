"""Small dense linear algebra, orthonormal frames, finite differences.

Everything here is pure and reentrant; vectors are 1-D float64 arrays,
metrics are symmetric positive-definite matrices over the same index
set.  Dimensions stay small (n <= 16), so classical algorithms with one
reorthogonalization pass are accurate enough.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, DependentInput, EvaluationFailure

PIVOT_TOL = 1e-10

FD_STEP_FIRST = 1e-4
FD_STEP_SECOND = 1e-3


@dataclass(frozen=True)
class TwoFrame:
    """Orthonormal pair spanning a tangent 2-plane."""

    x: np.ndarray
    y: np.ndarray

    def is_orthonormal(self, tol: float = 1e-10) -> bool:
        return (
            abs(float(self.x @ self.x) - 1.0) <= tol
            and abs(float(self.y @ self.y) - 1.0) <= tol
            and abs(float(self.x @ self.y)) <= tol
        )


def gram_schmidt(vectors, metric=None):
    """Orthonormalize `vectors` w.r.t. `metric` (identity when None).

    Classical Gram-Schmidt with one reorthogonalization pass.  The first
    output stays parallel to the first input.  Raises DependentInput when
    a pivot norm falls under 1e-10.
    """
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if metric is not None:
        metric = np.asarray(metric, dtype=float)

    def inner(a, b):
        if metric is None:
            return float(a @ b)
        return float(a @ metric @ b)

    out: list[np.ndarray] = []
    for v in vecs:
        w = v.copy()
        for _ in range(2):  # second pass re-projects accumulated rounding
            for u in out:
                w = w - inner(u, w) * u
        norm2 = inner(w, w)
        if norm2 <= 0.0 or np.sqrt(norm2) < PIVOT_TOL:
            raise DependentInput(
                f"pivot norm {np.sqrt(max(norm2, 0.0)):.3e} below {PIVOT_TOL:g}"
            )
        out.append(w / np.sqrt(norm2))
    return out


def random_two_frame(dim: int, seed: int, metric=None) -> TwoFrame:
    """Deterministic random orthonormal 2-frame in R^dim."""
    if dim < 2:
        raise BadDimension(f"need dim >= 2 to span a plane, got {dim}")
    rng = np.random.default_rng(seed)
    while True:
        raw = rng.standard_normal((2, dim))
        try:
            x, y = gram_schmidt([raw[0], raw[1]], metric)
        except DependentInput:
            continue  # astronomically rare; redraw keeps determinism per seed
        return TwoFrame(x=x, y=y)


def fd_derivative(field, point, index: int, step: float = FD_STEP_FIRST) -> float:
    """Second-order central difference of a scalar field along one axis."""
    point = np.asarray(point, dtype=float)
    step = float(step)
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    up = point.copy()
    dn = point.copy()
    up[index] += step
    dn[index] -= step
    try:
        fu = float(field(up))
        fd = float(field(dn))
    except Exception as exc:  # surface the offending field, keep traceback
        raise EvaluationFailure(f"field evaluation failed near {point}") from exc
    return (fu - fd) / (2.0 * step)


def fd_gradient(field, point, step: float = FD_STEP_FIRST) -> np.ndarray:
    point = np.asarray(point, dtype=float)
    return np.array(
        [fd_derivative(field, point, i, step) for i in range(point.size)]
    )


def fd_jacobian(vmap, point, step: float = FD_STEP_FIRST) -> np.ndarray:
    """Jacobian of a vector-valued map, columns = partials."""
    point = np.asarray(point, dtype=float)
    cols = []
    for i in range(point.size):
        up = point.copy()
        dn = point.copy()
        up[i] += step
        dn[i] -= step
        cols.append((np.asarray(vmap(up), dtype=float) - np.asarray(vmap(dn), dtype=float)) / (2.0 * step))
    return np.stack(cols, axis=-1)


def fd_second_partials(vmap, point, step: float = FD_STEP_SECOND) -> np.ndarray:
    """All second partials of a vector-valued map, O(step^4) accurate.

    Returns an array indexed [i, j, ...out].  Diagonal entries use the
    five-point stencil; mixed entries Richardson-extrapolate the symmetric
    four-point cross (f(+i+j) - f(+i-j) - f(-i+j) + f(-i-j)) / 4h^2 from
    steps h and h/2.  The extra order keeps the rounding floor (~eps/h^2)
    dominant, about 1e-9 for unit-scale maps at the default step.
    """
    point = np.asarray(point, dtype=float)
    m = point.size
    f0 = np.asarray(vmap(point), dtype=float)
    out = np.empty((m, m) + f0.shape)

    def at(*bumps):
        q = point.copy()
        for idx, delta in bumps:
            q[idx] += delta
        return np.asarray(vmap(q), dtype=float)

    def cross(i, j, h):
        return (
            at((i, h), (j, h))
            - at((i, h), (j, -h))
            - at((i, -h), (j, h))
            + at((i, -h), (j, -h))
        ) / (4.0 * h**2)

    for i in range(m):
        out[i, i] = (
            -at((i, 2 * step))
            + 16.0 * at((i, step))
            - 30.0 * f0
            + 16.0 * at((i, -step))
            - at((i, -2 * step))
        ) / (12.0 * step**2)
        for j in range(i + 1, m):
            mixed = (4.0 * cross(i, j, step / 2.0) - cross(i, j, step)) / 3.0
            out[i, j] = mixed
            out[j, i] = mixed
    return out
