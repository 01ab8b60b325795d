import numpy as np
import pytest

from curvb import AmbientModel, Kind, StructureOperators, build_structure, curvature
from curvb.errors import DimensionMismatch, UnsupportedDimension

OP_TOL = 1e-12

# one representative (dimension, c) per kind, reused across suites
MODELS = {
    Kind.REAL_SPACE_FORM: (3, 2.0),
    Kind.COMPLEX_SPACE_FORM: (6, 4.0),
    Kind.QUATERNIONIC_SPACE_FORM: (8, -3.0),
    Kind.SASAKIAN_SPACE_FORM: (7, 5.0),
    Kind.KENMOTSU_SPACE_FORM: (5, -2.0),
    Kind.COMPLEX_GRASSMANNIAN: (8, None),
    Kind.HYPERBOLIC_GRASSMANNIAN: (8, None),
    Kind.COMPLEX_QUADRIC: (6, None),
}


def make(kind):
    n, c = MODELS[kind]
    model = AmbientModel(kind=kind, n=n, c=c)
    return model, build_structure(model)


def test_real_space_form_has_no_operators():
    _, ops = make(Kind.REAL_SPACE_FORM)
    assert ops.J is None and ops.J_triple is None
    assert ops.phi is None and ops.xi is None and ops.A is None


@pytest.mark.parametrize(
    "kind", [Kind.COMPLEX_SPACE_FORM, Kind.COMPLEX_GRASSMANNIAN, Kind.COMPLEX_QUADRIC]
)
def test_complex_structure_squares_to_minus_identity(kind):
    model, ops = make(kind)
    n = model.n
    assert np.abs(ops.J @ ops.J + np.eye(n)).max() < OP_TOL
    assert np.abs(ops.J + ops.J.T).max() < OP_TOL  # skew w.r.t. identity metric


@pytest.mark.parametrize(
    "kind",
    [
        Kind.QUATERNIONIC_SPACE_FORM,
        Kind.COMPLEX_GRASSMANNIAN,
        Kind.HYPERBOLIC_GRASSMANNIAN,
    ],
)
def test_quaternionic_triple_relations(kind):
    model, ops = make(kind)
    n = model.n
    J1, J2, J3 = ops.J_triple
    for Ja in (J1, J2, J3):
        assert np.abs(Ja @ Ja + np.eye(n)).max() < OP_TOL
        assert np.abs(Ja + Ja.T).max() < OP_TOL
    assert np.abs(J1 @ J2 - J3).max() < OP_TOL
    assert np.abs(J2 @ J3 - J1).max() < OP_TOL
    assert np.abs(J3 @ J1 - J2).max() < OP_TOL


@pytest.mark.parametrize(
    "kind", [Kind.COMPLEX_GRASSMANNIAN, Kind.HYPERBOLIC_GRASSMANNIAN]
)
def test_grassmannian_j_commutes_with_triple(kind):
    _, ops = make(kind)
    for Ja in ops.J_triple:
        assert np.abs(ops.J @ Ja - Ja @ ops.J).max() < OP_TOL


@pytest.mark.parametrize("kind", [Kind.SASAKIAN_SPACE_FORM, Kind.KENMOTSU_SPACE_FORM])
def test_contact_structure_relations(kind):
    model, ops = make(kind)
    n = model.n
    phi, xi, eta = ops.phi, ops.xi, ops.eta
    assert np.abs(phi @ phi + np.eye(n) - np.outer(xi, eta)).max() < OP_TOL
    assert np.abs(phi @ xi).max() < OP_TOL
    assert abs(eta @ xi - 1.0) < OP_TOL
    assert np.abs(phi + phi.T).max() < OP_TOL


def test_quadric_real_structure_relations():
    model, ops = make(Kind.COMPLEX_QUADRIC)
    n = model.n
    assert np.abs(ops.A @ ops.A - np.eye(n)).max() < OP_TOL
    assert np.abs(ops.A - ops.A.T).max() < OP_TOL
    assert np.abs(ops.A @ ops.J + ops.J @ ops.A).max() < OP_TOL


@pytest.mark.parametrize(
    "kind,n",
    [
        (Kind.COMPLEX_SPACE_FORM, 5),
        (Kind.COMPLEX_QUADRIC, 7),
        (Kind.QUATERNIONIC_SPACE_FORM, 6),
        (Kind.COMPLEX_GRASSMANNIAN, 10),
        (Kind.HYPERBOLIC_GRASSMANNIAN, 6),
        (Kind.SASAKIAN_SPACE_FORM, 4),
        (Kind.KENMOTSU_SPACE_FORM, 6),
        (Kind.REAL_SPACE_FORM, 1),
    ],
)
def test_dimension_constraints_rejected(kind, n):
    with pytest.raises(UnsupportedDimension):
        AmbientModel(kind=kind, n=n, c=None if kind.value in
                     ("grassmannian", "hyperbolic-grassmannian", "quadric") else 1.0)


def test_curvature_parameter_policy():
    with pytest.raises(ValueError):
        AmbientModel(kind=Kind.COMPLEX_GRASSMANNIAN, n=8, c=1.0)
    with pytest.raises(ValueError):
        AmbientModel(kind=Kind.REAL_SPACE_FORM, n=3, c=None)


def test_real_unit_curvature_value():
    model = AmbientModel(kind=Kind.REAL_SPACE_FORM, n=3, c=1.0)
    ops = build_structure(model)
    e = np.eye(3)
    assert abs(curvature(model, ops, e[0], e[1], e[1], e[0]) - 1.0) < 1e-14


def test_repeated_argument_kills_curvature():
    for kind in MODELS:
        model, ops = make(kind)
        rng = np.random.default_rng(5)
        X = rng.standard_normal(model.n)
        Z = rng.standard_normal(model.n)
        W = rng.standard_normal(model.n)
        assert abs(curvature(model, ops, X, X, Z, W)) < 1e-12


def test_holomorphic_plane_of_complex_form_reaches_c():
    model = AmbientModel(kind=Kind.COMPLEX_SPACE_FORM, n=4, c=4.0)
    ops = build_structure(model)
    e1 = np.eye(4)[0]
    Je1 = ops.J @ e1
    assert abs(curvature(model, ops, e1, Je1, Je1, e1) - 4.0) < 1e-14


def test_dimension_mismatch_raises():
    model, ops = make(Kind.COMPLEX_SPACE_FORM)
    good = np.zeros(model.n)
    bad = np.zeros(model.n + 1)
    with pytest.raises(DimensionMismatch):
        curvature(model, ops, bad, good, good, good)


@pytest.mark.parametrize("kind", list(MODELS))
def test_curvature_symmetries_and_bianchi(kind):
    model, ops = make(kind)
    rng = np.random.default_rng(17)
    for _ in range(30):
        X, Y, Z, W = rng.standard_normal((4, model.n))
        r = curvature(model, ops, X, Y, Z, W)
        assert abs(r + curvature(model, ops, Y, X, Z, W)) < 1e-10
        assert abs(r + curvature(model, ops, X, Y, W, Z)) < 1e-10
        assert abs(r - curvature(model, ops, Z, W, X, Y)) < 1e-10
        bianchi = (
            r
            + curvature(model, ops, Y, Z, X, W)
            + curvature(model, ops, Z, X, Y, W)
        )
        assert abs(bianchi) < 1e-10


def test_hyperbolic_grassmannian_is_minus_half_compact():
    compact, cops = make(Kind.COMPLEX_GRASSMANNIAN)
    dual, dops = make(Kind.HYPERBOLIC_GRASSMANNIAN)
    rng = np.random.default_rng(23)
    for _ in range(25):
        X, Y, Z, W = rng.standard_normal((4, 8))
        a = curvature(compact, cops, X, Y, Z, W)
        b = curvature(dual, dops, X, Y, Z, W)
        assert abs(b + 0.5 * a) < 1e-12


def test_quaternionic_curvature_invariant_under_triple_rotation():
    """Rotating (J1, J2, J3) by any SO(3) matrix gives another valid triple
    and must not change curvature values."""
    model, ops = make(Kind.QUATERNIONIC_SPACE_FORM)
    rng = np.random.default_rng(41)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    J = np.stack(ops.J_triple)
    rotated = tuple(np.einsum("ab,bij->aij", q, J))
    ops2 = StructureOperators(J_triple=rotated)
    for _ in range(20):
        X, Y, Z, W = rng.standard_normal((4, model.n))
        a = curvature(model, ops, X, Y, Z, W)
        b = curvature(model, ops2, X, Y, Z, W)
        assert abs(a - b) < 1e-10


def test_describe_reports_parameters():
    model = AmbientModel(kind=Kind.SASAKIAN_SPACE_FORM, n=5, c=5.0)
    desc = model.describe()
    assert desc == {"kind": "sasakian", "n": 5, "c": 5.0}
    hermitian = AmbientModel(kind=Kind.COMPLEX_QUADRIC, n=6)
    assert hermitian.describe()["normalization"] == "unit-normalized"
