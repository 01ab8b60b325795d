"""End-to-end acceptance gate.

Each test exercises one headline guarantee at its stated tolerance and
prints a single [PASS]/[FAIL] line (visible with ``pytest -s`` or on
failure).  Wall-clock budgets are asserted alongside the numerics; the
session-scoped warmup in conftest.py keeps JIT compilation out of the
measured time.
"""

import math
import time

import numpy as np

import curvb.kernels as kernels
from curvb import (
    AmbientModel,
    Kind,
    build_structure,
    certify_h,
    check_inequality,
    curvature,
    estimate_range,
    make_fixture,
    quadric_S,
    quadric_decompose,
    quadric_h,
    sectional,
    theorem_range,
)
from curvb._backend import USING_NUMBA
from curvb.geomcore import fd_gradient, random_two_frame
from curvb.spaces import kernel_pack

EQ_TOL = 1e-10

ALL_MODELS = (
    (Kind.REAL_SPACE_FORM, 3, 2.0),
    (Kind.COMPLEX_SPACE_FORM, 6, 4.0),
    (Kind.QUATERNIONIC_SPACE_FORM, 8, -3.0),
    (Kind.SASAKIAN_SPACE_FORM, 7, 5.0),
    (Kind.KENMOTSU_SPACE_FORM, 5, -2.0),
    (Kind.COMPLEX_GRASSMANNIAN, 8, None),
    (Kind.HYPERBOLIC_GRASSMANNIAN, 8, None),
    (Kind.COMPLEX_QUADRIC, 6, None),
)

CONTAINMENT_RUNS = (
    (Kind.COMPLEX_SPACE_FORM, 4, 4.0, 1.0, 4.0),
    (Kind.QUATERNIONIC_SPACE_FORM, 8, 4.0, 1.0, 4.0),
    (Kind.SASAKIAN_SPACE_FORM, 5, 5.0, 1.0, 5.0),
    (Kind.KENMOTSU_SPACE_FORM, 5, 5.0, -1.0, 5.0),
    (Kind.COMPLEX_GRASSMANNIAN, 8, None, -1.0, 8.0),
    (Kind.HYPERBOLIC_GRASSMANNIAN, 8, None, -4.0, 0.5),
    (Kind.COMPLEX_QUADRIC, 6, None, -2.3, 5.0),
)


def verdict(label: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}", flush=True)


def test_criterion_1_closed_forms_match_tensor_on_1000_pairs():
    budget_s = 10.0
    start = time.perf_counter()
    worst = 0.0
    for idx, (kind, n, c) in enumerate(ALL_MODELS):
        model = AmbientModel(kind=kind, n=n, c=c)
        pack = kernel_pack(model, build_structure(model))
        rng = np.random.default_rng(1000 + idx)
        raw_x = rng.standard_normal((1100, n))
        raw_y = rng.standard_normal((1100, n))
        Xh, Yh, valid = kernels.orthonormalize_pairs(raw_x, raw_y)
        assert int(valid.sum()) >= 1000
        Xh = np.ascontiguousarray(Xh[valid][:1000])
        Yh = np.ascontiguousarray(Yh[valid][:1000])
        tensor = kernels.batch_sectional(*pack, Xh, Yh)
        closed = kernels.batch_closed_form(*pack, Xh, Yh)
        worst = max(worst, float(np.abs(tensor - closed).max()))
    elapsed = time.perf_counter() - start
    ok = worst <= EQ_TOL and elapsed < budget_s
    verdict(
        "criterion-1",
        ok,
        f"8 kinds x 1000 orthonormal pairs, max |closed - tensor| = "
        f"{worst:.2e} (tol 1e-10), {elapsed:.1f}s < {budget_s:.0f}s",
    )
    assert worst <= EQ_TOL
    assert elapsed < budget_s


def test_criterion_2_sampled_ranges_stay_inside_theorem_intervals():
    budget_s = 60.0
    tol = 1e-6
    start = time.perf_counter()
    ok = True
    details = []
    for kind, n, c, lo, hi in CONTAINMENT_RUNS:
        model = AmbientModel(kind=kind, n=n, c=c)
        ops = build_structure(model)
        assert theorem_range(model) == (lo, hi)
        srange = estimate_range(model, ops, budget=5000, refine_steps=16, seed=0)
        contained = (
            srange.est_lo >= lo - tol
            and srange.est_hi <= hi + tol
            and srange.theorem_lo == lo
            and srange.theorem_hi == hi
        )
        if kind is Kind.COMPLEX_GRASSMANNIAN:
            contained = contained and srange.est_hi >= 8.0 - 1e-4
        ok = ok and contained
        details.append(f"{kind.value}[{srange.est_lo:.3f},{srange.est_hi:.3f}]")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < budget_s
    verdict(
        "criterion-2",
        ok,
        f"7 containment runs at budget 5000 (tol 1e-6): "
        f"{' '.join(details)}, {elapsed:.1f}s < {budget_s:.0f}s",
    )
    assert ok


def test_criterion_3_certified_minimum_beats_claimed_bound():
    budget_s = 5.0
    start = time.perf_counter()
    res = certify_h(tol=1e-3)
    elapsed = time.perf_counter() - start

    q = math.pi / 4.0
    value_err = abs(quadric_h(q, q) + 3.25)
    grad = fd_gradient(lambda p: quadric_h(p[0], p[1]), np.array([q, q]))
    grad_err = float(np.abs(grad - 0.5).max())

    fine = certify_h(tol=1e-6)
    regression_ok = abs(fine.enclosure_lo - (-3.2666676231429648)) < 1e-9
    if USING_NUMBA:
        regression_ok = (
            regression_ok
            and fine.enclosure_lo == -3.2666676231429648
            and fine.boxes_processed == 239
        )

    ok = (
        res.converged
        and res.enclosure_lo >= -3.3
        and value_err <= 1e-12
        and grad_err <= 1e-6
        and regression_ok
        and elapsed < budget_s
    )
    verdict(
        "criterion-3",
        ok,
        f"certified min in [{res.enclosure_lo:.10f}, {res.enclosure_hi:.10f}] "
        f">= -3.3, |h(pi/4,pi/4)+3.25| = {value_err:.1e}, "
        f"|grad - (0.5,0.5)| = {grad_err:.1e}, {elapsed:.2f}s < {budget_s:.0f}s",
    )
    assert ok


def test_criterion_4_additive_split_reproduces_curvature():
    model = AmbientModel(kind=Kind.COMPLEX_QUADRIC, n=8)
    ops = build_structure(model)
    worst = 0.0
    for seed in range(1000):
        frame = random_two_frame(8, seed=seed)
        k = sectional(model, ops, frame.x, frame.y)
        dec = quadric_decompose(ops, frame)
        worst = max(worst, abs(1.0 + quadric_S(dec, dec.alpha, dec.beta) - k))
    ok = worst <= EQ_TOL
    verdict(
        "criterion-4",
        ok,
        f"1000 quadric frames, max |1 + S - K| = {worst:.2e} (tol 1e-10)",
    )
    assert ok


def test_criterion_5_immersion_fixtures_satisfy_the_inequality():
    budget_s = 30.0
    start = time.perf_counter()
    ok = True
    details = []
    for name in ("plane", "cylinder", "sphere-in-sphere"):
        bundle = make_fixture(name, k=5)
        assert len(bundle.points) == 25
        reports = check_inequality(
            bundle.spec, bundle.imm, bundle.points, bundle.srange, tol=1e-3
        )
        all_passed = all(r.passed for r in reports)
        ok = ok and all_passed
        if name == "sphere-in-sphere":
            drift = max(abs(r.delta_f_over_f - 1.0) for r in reports)
            ok = ok and drift <= 1e-3
            details.append(f"{name}: max |Df/f - 1| = {drift:.1e}")
        else:
            details.append(f"{name}: {len(reports)}/25 inside")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < budget_s
    verdict(
        "criterion-5",
        ok,
        f"{'; '.join(details)}; {elapsed:.1f}s < {budget_s:.0f}s",
    )
    assert ok


def _operator_residual(kind, n, ops) -> float:
    eye = np.eye(n)
    worst = 0.0

    def upd(arr):
        nonlocal worst
        worst = max(worst, float(np.abs(arr).max()))

    if ops.J is not None:
        upd(ops.J @ ops.J + eye)
        upd(ops.J + ops.J.T)
    if ops.J_triple is not None:
        J1, J2, J3 = ops.J_triple
        for Ja in (J1, J2, J3):
            upd(Ja @ Ja + eye)
            upd(Ja + Ja.T)
        upd(J1 @ J2 - J3)
        upd(J2 @ J3 - J1)
        upd(J3 @ J1 - J2)
        if ops.J is not None:
            for Ja in (J1, J2, J3):
                upd(ops.J @ Ja - Ja @ ops.J)
    if ops.phi is not None:
        upd(ops.phi @ ops.phi + eye - np.outer(ops.xi, ops.eta))
        upd(ops.phi @ ops.xi)
        upd(np.array([ops.eta @ ops.xi - 1.0]))
        upd(ops.phi + ops.phi.T)
    if ops.A is not None:
        upd(ops.A @ ops.A - eye)
        upd(ops.A - ops.A.T)
        upd(ops.A @ ops.J + ops.J @ ops.A)
    return worst


def test_criterion_6_operator_and_tensor_identities():
    worst_op = 0.0
    worst_tensor = 0.0
    for kind, n, c in ALL_MODELS:
        model = AmbientModel(kind=kind, n=n, c=c)
        ops = build_structure(model)
        worst_op = max(worst_op, _operator_residual(kind, n, ops))
        rng = np.random.default_rng(60 + n)
        for _ in range(20):
            x, y, z, w = rng.standard_normal((4, n))
            r = curvature(model, ops, x, y, z, w)
            worst_tensor = max(
                worst_tensor,
                abs(r + curvature(model, ops, y, x, z, w)),
                abs(r + curvature(model, ops, x, y, w, z)),
                abs(r - curvature(model, ops, z, w, x, y)),
                abs(
                    r
                    + curvature(model, ops, y, z, x, w)
                    + curvature(model, ops, z, x, y, w)
                ),
            )
    ok = worst_op <= EQ_TOL and worst_tensor <= EQ_TOL
    verdict(
        "criterion-6",
        ok,
        f"operator residual {worst_op:.2e}, tensor symmetry residual "
        f"{worst_tensor:.2e} (tol 1e-10)",
    )
    assert ok
