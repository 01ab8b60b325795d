"""Tangent-space models of the eight ambient geometries.

Five constant-curvature families (real, complex, quaternionic,
Sasakian, Kenmotsu space forms) and three unit-normalized Hermitian
symmetric models (complex two-plane Grassmannian, its noncompact dual,
complex quadric).  Each model fixes canonical structure operators on
R^n with the identity ambient metric and evaluates the full curvature
tensor R(X,Y,Z,W) for that geometry.

Canonical operator choices (any algebra-satisfying choice yields the
same curvature values; tests verify invariance under rotating the
quaternionic triple):

* complex structure J: block rotation (x, y) -> (-y, x) on halves;
* quaternionic triple: left multiplication by i, j, k on blocks of four
  coordinates (w, x, y, z) read as quaternions;
* Grassmannian J: right multiplication by i (commutes with the left
  multiplications, squares to -I);
* contact structure: xi = last basis vector, eta its dual, phi = block
  complex structure on the first n-1 coordinates, zero on xi;
* quadric: J as block rotation on halves, A = +1 on the first half and
  -1 on the second (conjugation), so the +1 eigenspace of A is the span
  of the first n/2 basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import DimensionMismatch, UnsupportedDimension, UnsupportedKind


class Kind(Enum):
    REAL_SPACE_FORM = "real"
    COMPLEX_SPACE_FORM = "complex"
    QUATERNIONIC_SPACE_FORM = "quaternionic"
    SASAKIAN_SPACE_FORM = "sasakian"
    KENMOTSU_SPACE_FORM = "kenmotsu"
    COMPLEX_GRASSMANNIAN = "grassmannian"
    HYPERBOLIC_GRASSMANNIAN = "hyperbolic-grassmannian"
    COMPLEX_QUADRIC = "quadric"


SPACE_FORM_KINDS = frozenset(
    {
        Kind.REAL_SPACE_FORM,
        Kind.COMPLEX_SPACE_FORM,
        Kind.QUATERNIONIC_SPACE_FORM,
        Kind.SASAKIAN_SPACE_FORM,
        Kind.KENMOTSU_SPACE_FORM,
    }
)
HERMITIAN_KINDS = frozenset(
    {Kind.COMPLEX_GRASSMANNIAN, Kind.HYPERBOLIC_GRASSMANNIAN, Kind.COMPLEX_QUADRIC}
)

_KIND_CODE = {
    Kind.REAL_SPACE_FORM: kernels.KIND_REAL,
    Kind.COMPLEX_SPACE_FORM: kernels.KIND_COMPLEX,
    Kind.QUATERNIONIC_SPACE_FORM: kernels.KIND_QUATERNIONIC,
    Kind.SASAKIAN_SPACE_FORM: kernels.KIND_SASAKIAN,
    Kind.KENMOTSU_SPACE_FORM: kernels.KIND_KENMOTSU,
    Kind.COMPLEX_GRASSMANNIAN: kernels.KIND_GRASSMANNIAN,
    Kind.HYPERBOLIC_GRASSMANNIAN: kernels.KIND_HYPERBOLIC_GRASSMANNIAN,
    Kind.COMPLEX_QUADRIC: kernels.KIND_QUADRIC,
}


def _validate(kind: Kind, n: int, c) -> None:
    if n < 2:
        raise UnsupportedDimension(f"ambient dimension must be >= 2, got {n}")
    if kind in (Kind.COMPLEX_SPACE_FORM, Kind.COMPLEX_QUADRIC) and n % 2:
        raise UnsupportedDimension(f"{kind.value} needs even dimension, got {n}")
    if (
        kind
        in (
            Kind.QUATERNIONIC_SPACE_FORM,
            Kind.COMPLEX_GRASSMANNIAN,
            Kind.HYPERBOLIC_GRASSMANNIAN,
        )
        and n % 4
    ):
        raise UnsupportedDimension(
            f"{kind.value} needs dimension divisible by 4, got {n}"
        )
    if kind in (Kind.SASAKIAN_SPACE_FORM, Kind.KENMOTSU_SPACE_FORM) and n % 2 == 0:
        raise UnsupportedDimension(f"{kind.value} needs odd dimension, got {n}")
    if kind in HERMITIAN_KINDS:
        if c is not None:
            raise ValueError(
                f"{kind.value} is unit-normalized and takes no curvature parameter"
            )
    elif c is None:
        raise ValueError(f"{kind.value} requires a curvature parameter c")


@dataclass(frozen=True)
class AmbientModel:
    """One of the eight model geometries with its parameters."""

    kind: Kind
    n: int
    c: float | None = None

    def __post_init__(self):
        _validate(self.kind, self.n, self.c)

    def describe(self) -> dict:
        out = {"kind": self.kind.value, "n": self.n}
        if self.kind in HERMITIAN_KINDS:
            out["normalization"] = "unit-normalized"
        else:
            out["c"] = self.c
        return out


@dataclass(frozen=True, eq=False)
class StructureOperators:
    """Concrete matrices realizing the model's structure tensors.

    Fields are None when the kind does not carry that operator.  eta is
    the metric dual of xi (identity ambient metric), kept explicit for
    clarity.
    """

    J: np.ndarray | None = None
    J_triple: tuple | None = None
    phi: np.ndarray | None = None
    xi: np.ndarray | None = None
    eta: np.ndarray | None = None
    A: np.ndarray | None = None
    _pack_cache: dict = field(default_factory=dict, repr=False)


def _complex_structure(n: int) -> np.ndarray:
    half = n // 2
    J = np.zeros((n, n))
    J[:half, half:] = -np.eye(half)
    J[half:, :half] = np.eye(half)
    return J


# Left multiplication by i, j, k and right multiplication by i on one
# quaternion block (w, x, y, z).
_LEFT_I = np.array(
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float
)
_LEFT_J = np.array(
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float
)
_LEFT_K = np.array(
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float
)
_RIGHT_I = np.array(
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float
)


def _quaternion_triple(n: int) -> tuple:
    blocks = np.eye(n // 4)
    return (
        np.kron(blocks, _LEFT_I),
        np.kron(blocks, _LEFT_J),
        np.kron(blocks, _LEFT_K),
    )


def build_structure(model: AmbientModel) -> StructureOperators:
    """Canonical structure operators for the model's kind and dimension."""
    _validate(model.kind, model.n, model.c)
    n = model.n
    kind = model.kind

    if kind == Kind.REAL_SPACE_FORM:
        return StructureOperators()

    if kind == Kind.COMPLEX_SPACE_FORM:
        return StructureOperators(J=_complex_structure(n))

    if kind == Kind.QUATERNIONIC_SPACE_FORM:
        return StructureOperators(J_triple=_quaternion_triple(n))

    if kind in (Kind.SASAKIAN_SPACE_FORM, Kind.KENMOTSU_SPACE_FORM):
        phi = np.zeros((n, n))
        phi[: n - 1, : n - 1] = _complex_structure(n - 1)
        xi = np.zeros(n)
        xi[n - 1] = 1.0
        return StructureOperators(phi=phi, xi=xi, eta=xi.copy())

    if kind in (Kind.COMPLEX_GRASSMANNIAN, Kind.HYPERBOLIC_GRASSMANNIAN):
        blocks = np.eye(n // 4)
        return StructureOperators(
            J=np.kron(blocks, _RIGHT_I), J_triple=_quaternion_triple(n)
        )

    if kind == Kind.COMPLEX_QUADRIC:
        half = n // 2
        A = np.zeros((n, n))
        A[:half, :half] = np.eye(half)
        A[half:, half:] = -np.eye(half)
        return StructureOperators(J=_complex_structure(n), A=A)

    raise UnsupportedKind(f"unknown model kind {kind!r}")


def kernel_pack(model: AmbientModel, ops: StructureOperators):
    """Uniform (kind, c, J, Jq, A, xi) tuple consumed by the kernels.

    Operators the kind does not use are passed as zero arrays; the
    contact phi rides in the J slot.  Cached on the operators object.
    """
    key = (model.kind, model.n, model.c)
    cached = ops._pack_cache.get(key)
    if cached is not None:
        return cached

    n = model.n
    zero_m = np.zeros((n, n))
    zero_t = np.zeros((3, n, n))
    zero_v = np.zeros(n)

    J = ops.phi if ops.phi is not None else (ops.J if ops.J is not None else zero_m)
    Jq = (
        np.ascontiguousarray(np.stack(ops.J_triple))
        if ops.J_triple is not None
        else zero_t
    )
    A = ops.A if ops.A is not None else zero_m
    xi = ops.xi if ops.xi is not None else zero_v

    pack = (
        _KIND_CODE[model.kind],
        float(model.c) if model.c is not None else 0.0,
        np.ascontiguousarray(J, dtype=float),
        Jq.astype(float),
        np.ascontiguousarray(A, dtype=float),
        np.ascontiguousarray(xi, dtype=float),
    )
    ops._pack_cache[key] = pack
    return pack


def _check_dims(model: AmbientModel, *vectors) -> tuple:
    out = []
    for v in vectors:
        arr = np.ascontiguousarray(v, dtype=float)
        if arr.shape != (model.n,):
            raise DimensionMismatch(
                f"expected vectors of dimension {model.n}, got shape {arr.shape}"
            )
        out.append(arr)
    return tuple(out)


def curvature(model: AmbientModel, ops: StructureOperators, X, Y, Z, W) -> float:
    """Full curvature tensor R(X,Y,Z,W) of the model geometry."""
    X, Y, Z, W = _check_dims(model, X, Y, Z, W)
    pack = kernel_pack(model, ops)
    return float(kernels.curvature_scalar(*pack, X, Y, Z, W))
