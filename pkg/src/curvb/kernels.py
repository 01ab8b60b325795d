"""Hot numerical kernels, compiled with numba or vectorized with numpy.

Two families live here:

* curvature kernels — scalar and batched evaluation of the eight model
  curvature tensors, their orthonormal closed forms, and plane
  orthonormalization.  The numba path loops over frames with jitted
  scalar code; the numpy path evaluates the same formulas with
  vectorized batch expressions.  Both are exercised by the test suite.

* interval kernels — outward-rounded interval arithmetic and the
  enclosure of the comparison function h(x, y) and its gradient, used by
  the certification branch-and-bound.  These are scalar and share one
  source for both backends (jit is a no-op under the numpy backend).

Model kinds are passed as integer codes with a uniform operator pack
(J, quaternion triple, A, xi); operators a kind does not use are passed
as zero arrays and never touched by that kind's branch.
"""

from __future__ import annotations

import math

import numpy as np

from ._backend import USING_NUMBA, jit

KIND_REAL = 0
KIND_COMPLEX = 1
KIND_QUATERNIONIC = 2
KIND_SASAKIAN = 3
KIND_KENMOTSU = 4
KIND_GRASSMANNIAN = 5
KIND_HYPERBOLIC_GRASSMANNIAN = 6
KIND_QUADRIC = 7

_EPS = 2.220446049250313e-16
_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi


# --------------------------------------------------------------------------
# curvature kernels, scalar (jitted under the numba backend)
# --------------------------------------------------------------------------


@jit
def curvature_scalar(kind, c, J, Jq, A, xi, X, Y, Z, W):
    """R(X,Y,Z,W) for the model tangent space selected by `kind`.

    The ambient metric is the identity in these canonical models, so
    every pairing is a plain dot product.
    """
    gYZ = np.dot(Y, Z)
    gXZ = np.dot(X, Z)
    gXW = np.dot(X, W)
    gYW = np.dot(Y, W)
    base = gYZ * gXW - gXZ * gYW

    if kind == KIND_REAL:
        return c * base

    if kind == KIND_COMPLEX:
        JX = np.dot(J, X)
        JY = np.dot(J, Y)
        JZ = np.dot(J, Z)
        cplx = (
            np.dot(JY, Z) * np.dot(JX, W)
            - np.dot(JX, Z) * np.dot(JY, W)
            - 2.0 * np.dot(JX, Y) * np.dot(JZ, W)
        )
        return 0.25 * c * (base + cplx)

    if kind == KIND_QUATERNIONIC:
        acc = base
        for a in range(3):
            JaX = np.dot(Jq[a], X)
            JaY = np.dot(Jq[a], Y)
            JaZ = np.dot(Jq[a], Z)
            acc += (
                np.dot(JaY, Z) * np.dot(JaX, W)
                - np.dot(JaX, Z) * np.dot(JaY, W)
                - 2.0 * np.dot(JaX, Y) * np.dot(JaZ, W)
            )
        return 0.25 * c * acc

    if kind == KIND_SASAKIAN or kind == KIND_KENMOTSU:
        if kind == KIND_SASAKIAN:
            c1 = 0.25 * (c + 3.0)
            c2 = 0.25 * (c - 1.0)
        else:
            c1 = 0.25 * (c - 3.0)
            c2 = 0.25 * (c + 1.0)
        eX = np.dot(xi, X)
        eY = np.dot(xi, Y)
        eZ = np.dot(xi, Z)
        eW = np.dot(xi, W)
        pX = np.dot(J, X)  # phi is stored in the J slot for contact kinds
        pY = np.dot(J, Y)
        pZ = np.dot(J, Z)
        bracket = (
            eX * eZ * gYW
            - eY * eZ * gXW
            + eY * gXZ * eW
            - eX * gYZ * eW
            + np.dot(pY, Z) * np.dot(pX, W)
            - np.dot(pX, Z) * np.dot(pY, W)
            - 2.0 * np.dot(pX, Y) * np.dot(pZ, W)
        )
        return c1 * base + c2 * bracket

    if kind == KIND_GRASSMANNIAN or kind == KIND_HYPERBOLIC_GRASSMANNIAN:
        JX = np.dot(J, X)
        JY = np.dot(J, Y)
        JZ = np.dot(J, Z)
        acc = base + (
            np.dot(JY, Z) * np.dot(JX, W)
            - np.dot(JX, Z) * np.dot(JY, W)
            - 2.0 * np.dot(JX, Y) * np.dot(JZ, W)
        )
        for a in range(3):
            JaX = np.dot(Jq[a], X)
            JaY = np.dot(Jq[a], Y)
            JaZ = np.dot(Jq[a], Z)
            acc += (
                np.dot(JaY, Z) * np.dot(JaX, W)
                - np.dot(JaX, Z) * np.dot(JaY, W)
                - 2.0 * np.dot(JaX, Y) * np.dot(JaZ, W)
            )
            JaJX = np.dot(Jq[a], JX)
            JaJY = np.dot(Jq[a], JY)
            acc += np.dot(JaJY, Z) * np.dot(JaJX, W) - np.dot(JaJX, Z) * np.dot(
                JaJY, W
            )
        if kind == KIND_HYPERBOLIC_GRASSMANNIAN:
            return -0.5 * acc
        return acc

    # complex quadric
    JX = np.dot(J, X)
    JY = np.dot(J, Y)
    JZ = np.dot(J, Z)
    AX = np.dot(A, X)
    AY = np.dot(A, Y)
    JAX = np.dot(J, AX)
    JAY = np.dot(J, AY)
    return (
        base
        + np.dot(JY, Z) * np.dot(JX, W)
        - np.dot(JX, Z) * np.dot(JY, W)
        - 2.0 * np.dot(JX, Y) * np.dot(JZ, W)
        + np.dot(AY, Z) * np.dot(AX, W)
        - np.dot(AX, Z) * np.dot(AY, W)
        + np.dot(JAY, Z) * np.dot(JAX, W)
        - np.dot(JAX, Z) * np.dot(JAY, W)
    )


@jit
def closed_form_scalar(kind, c, J, Jq, A, xi, X, Y):
    """Orthonormal-pair sectional curvature via the per-kind closed form."""
    if kind == KIND_REAL:
        return c

    if kind == KIND_COMPLEX:
        t = np.dot(np.dot(J, X), Y)
        return 0.25 * c * (1.0 + 3.0 * t * t)

    if kind == KIND_QUATERNIONIC:
        s = 0.0
        for a in range(3):
            t = np.dot(np.dot(Jq[a], X), Y)
            s += t * t
        return 0.25 * c * (1.0 + 3.0 * s)

    if kind == KIND_SASAKIAN or kind == KIND_KENMOTSU:
        eX = np.dot(xi, X)
        eY = np.dot(xi, Y)
        t = np.dot(np.dot(J, X), Y)
        bracket = -eY * eY - eX * eX + 3.0 * t * t
        if kind == KIND_SASAKIAN:
            return 0.25 * (c + 3.0) + 0.25 * (c - 1.0) * bracket
        return 0.25 * (c - 3.0) + 0.25 * (c + 1.0) * bracket

    if kind == KIND_GRASSMANNIAN or kind == KIND_HYPERBOLIC_GRASSMANNIAN:
        JX = np.dot(J, X)
        JY = np.dot(J, Y)
        t = np.dot(JX, Y)
        acc = 1.0 + 3.0 * t * t
        for a in range(3):
            ta = np.dot(np.dot(Jq[a], X), Y)
            u = np.dot(np.dot(Jq[a], JY), Y) * np.dot(np.dot(Jq[a], JX), X)
            v = np.dot(np.dot(Jq[a], JX), Y)
            acc += 3.0 * ta * ta + u - v * v
        if kind == KIND_HYPERBOLIC_GRASSMANNIAN:
            return -0.5 * acc
        return acc

    # complex quadric
    JX = np.dot(J, X)
    AX = np.dot(A, X)
    AY = np.dot(A, Y)
    JAX = np.dot(J, AX)
    JAY = np.dot(J, AY)
    tJ = np.dot(JX, Y)
    tA = np.dot(AX, Y)
    tJA = np.dot(JAX, Y)
    return (
        1.0
        + 3.0 * tJ * tJ
        + np.dot(AY, Y) * np.dot(AX, X)
        - tA * tA
        + np.dot(JAY, Y) * np.dot(JAX, X)
        - tJA * tJA
    )


@jit
def _batch_sectional_loop(kind, c, J, Jq, A, xi, Xs, Ys, out):
    for b in range(Xs.shape[0]):
        X = Xs[b]
        Y = Ys[b]
        num = curvature_scalar(kind, c, J, Jq, A, xi, X, Y, Y, X)
        den = np.dot(X, X) * np.dot(Y, Y) - np.dot(X, Y) ** 2
        out[b] = num / den


@jit
def _batch_sectional_gram_loop(kind, c, J, Jq, A, xi, Xs, Ys, out, gram):
    for b in range(Xs.shape[0]):
        X = Xs[b]
        Y = Ys[b]
        num = curvature_scalar(kind, c, J, Jq, A, xi, X, Y, Y, X)
        den = np.dot(X, X) * np.dot(Y, Y) - np.dot(X, Y) ** 2
        gram[b] = den
        out[b] = num / den


@jit
def _batch_closed_loop(kind, c, J, Jq, A, xi, Xs, Ys, out):
    for b in range(Xs.shape[0]):
        out[b] = closed_form_scalar(kind, c, J, Jq, A, xi, Xs[b], Ys[b])


@jit
def _orthonormalize_pairs_loop(Xs, Ys, Xh, Yh, valid):
    tol = 1e-10
    for b in range(Xs.shape[0]):
        nx = math.sqrt(np.dot(Xs[b], Xs[b]))
        if nx < tol:
            valid[b] = False
            continue
        x = Xs[b] / nx
        proj = np.dot(x, Ys[b])
        w = Ys[b] - proj * x
        nw = math.sqrt(np.dot(w, w))
        if nw < tol:
            valid[b] = False
            continue
        Xh[b] = x
        Yh[b] = w / nw
        valid[b] = True


# --------------------------------------------------------------------------
# compass refinement of sample pairs (the package's hot loop)
# --------------------------------------------------------------------------
#
# Sectional curvature of the plane spanned by a raw pair equals
# R(X,Y,Y,X) / gram with gram = |X|^2 |Y|^2 - <X,Y>^2, so coordinate moves
# can be scored without re-orthonormalizing.  Specializing R(X,Y,Y,X) per
# kind leaves only dot products between {X, Y} and a handful of operator
# images (J X, Ja X, Ja J X, A X, J A X, ...).  Every operator appearing
# quadratically (Ja J, A, J A) is symmetric and every one appearing
# bilinearly (J, Ja) is skew, so a single-coordinate move X -> X + d e_i
# shifts each cached dot by an O(1) correction read off the cached images.
# That turns one trial from O(n^2) matvec work into a few flops.
#
# Scalar cache layout (S) and vector cache layout (V) by kind code:
#   all       S0 = <x,x>   S1 = <y,y>   S2 = <x,y>
#   1,3..7    S3 = <Jx,y>            V0 = Jx      V1 = Jy   (phi for 3,4)
#   3,4       S4 = <xi,x>  S5 = <xi,y>
#   2,5,6     S4+a = <Ja x, y>       V2+a = Ja x  V5+a = Ja y
#   5,6       S7+a = <Ja J y, y>     V8+a = Ja J x
#             S10+a = <Ja J x, x>    V11+a = Ja J y
#             S13+a = <Ja J x, y>
#   7         S4 = <Ax,x>  S5 = <Ay,y>  S6 = <Ax,y>    V2 = Ax  V3 = Ay
#             S7 = <Nx,x>  S8 = <Ny,y>  S9 = <Nx,y>    V4 = Nx  V5 = Ny
# with N = J A and M[a] = Ja J precomputed once per call.

_REFINE_GRAM_FLOOR = 1e-6


@jit
def _refine_build(kind, J, Jq, A, xi, M, N, x, y, V, S):
    S[0] = np.dot(x, x)
    S[1] = np.dot(y, y)
    S[2] = np.dot(x, y)
    if kind == KIND_REAL:
        return
    V[0] = np.dot(J, x)
    V[1] = np.dot(J, y)
    S[3] = np.dot(V[0], y)
    if kind == KIND_SASAKIAN or kind == KIND_KENMOTSU:
        S[4] = np.dot(xi, x)
        S[5] = np.dot(xi, y)
        return
    if (
        kind == KIND_QUATERNIONIC
        or kind == KIND_GRASSMANNIAN
        or kind == KIND_HYPERBOLIC_GRASSMANNIAN
    ):
        for a in range(3):
            V[2 + a] = np.dot(Jq[a], x)
            V[5 + a] = np.dot(Jq[a], y)
            S[4 + a] = np.dot(V[2 + a], y)
        if kind != KIND_QUATERNIONIC:
            for a in range(3):
                V[8 + a] = np.dot(M[a], x)
                V[11 + a] = np.dot(M[a], y)
                S[7 + a] = np.dot(V[11 + a], y)
                S[10 + a] = np.dot(V[8 + a], x)
                S[13 + a] = np.dot(V[8 + a], y)
        return
    if kind == KIND_QUADRIC:
        V[2] = np.dot(A, x)
        V[3] = np.dot(A, y)
        V[4] = np.dot(N, x)
        V[5] = np.dot(N, y)
        S[4] = np.dot(V[2], x)
        S[5] = np.dot(V[3], y)
        S[6] = np.dot(V[2], y)
        S[7] = np.dot(V[4], x)
        S[8] = np.dot(V[5], y)
        S[9] = np.dot(V[4], y)


@jit
def _refine_numerator(kind, c, S):
    gram = S[0] * S[1] - S[2] * S[2]
    if kind == KIND_REAL:
        return c * gram
    if kind == KIND_COMPLEX:
        return 0.25 * c * (gram + 3.0 * S[3] * S[3])
    if kind == KIND_QUATERNIONIC:
        s = S[4] * S[4] + S[5] * S[5] + S[6] * S[6]
        return 0.25 * c * (gram + 3.0 * s)
    if kind == KIND_SASAKIAN or kind == KIND_KENMOTSU:
        if kind == KIND_SASAKIAN:
            c1 = 0.25 * (c + 3.0)
            c2 = 0.25 * (c - 1.0)
        else:
            c1 = 0.25 * (c - 3.0)
            c2 = 0.25 * (c + 1.0)
        bracket = (
            3.0 * S[3] * S[3]
            + 2.0 * S[4] * S[5] * S[2]
            - S[5] * S[5] * S[0]
            - S[4] * S[4] * S[1]
        )
        return c1 * gram + c2 * bracket
    if kind == KIND_GRASSMANNIAN or kind == KIND_HYPERBOLIC_GRASSMANNIAN:
        acc = gram + 3.0 * S[3] * S[3]
        for a in range(3):
            acc += (
                3.0 * S[4 + a] * S[4 + a]
                + S[7 + a] * S[10 + a]
                - S[13 + a] * S[13 + a]
            )
        if kind == KIND_HYPERBOLIC_GRASSMANNIAN:
            return -0.5 * acc
        return acc
    return (
        gram
        + 3.0 * S[3] * S[3]
        + S[5] * S[4]
        - S[6] * S[6]
        + S[8] * S[7]
        - S[9] * S[9]
    )


@jit
def _refine_trial(kind, slot, coord, delta, x, y, J, Jq, A, xi, M, N, V, S, T):
    """Fill T with the scalar cache of the single-coordinate trial move."""
    for k in range(16):
        T[k] = S[k]
    i = coord
    if slot == 0:
        T[0] = S[0] + 2.0 * delta * x[i] + delta * delta
        T[2] = S[2] + delta * y[i]
    else:
        T[1] = S[1] + 2.0 * delta * y[i] + delta * delta
        T[2] = S[2] + delta * x[i]
    if kind == KIND_REAL:
        return
    if slot == 0:
        T[3] = S[3] - delta * V[1, i]
    else:
        T[3] = S[3] + delta * V[0, i]
    if kind == KIND_COMPLEX:
        return
    if kind == KIND_SASAKIAN or kind == KIND_KENMOTSU:
        if slot == 0:
            T[4] = S[4] + delta * xi[i]
        else:
            T[5] = S[5] + delta * xi[i]
        return
    if (
        kind == KIND_QUATERNIONIC
        or kind == KIND_GRASSMANNIAN
        or kind == KIND_HYPERBOLIC_GRASSMANNIAN
    ):
        for a in range(3):
            if slot == 0:
                T[4 + a] = S[4 + a] - delta * V[5 + a, i]
            else:
                T[4 + a] = S[4 + a] + delta * V[2 + a, i]
        if kind != KIND_QUATERNIONIC:
            for a in range(3):
                if slot == 0:
                    T[10 + a] = (
                        S[10 + a]
                        + 2.0 * delta * V[8 + a, i]
                        + delta * delta * M[a][i, i]
                    )
                    T[13 + a] = S[13 + a] + delta * V[11 + a, i]
                else:
                    T[7 + a] = (
                        S[7 + a]
                        + 2.0 * delta * V[11 + a, i]
                        + delta * delta * M[a][i, i]
                    )
                    T[13 + a] = S[13 + a] + delta * V[8 + a, i]
        return
    if kind == KIND_QUADRIC:
        if slot == 0:
            T[4] = S[4] + 2.0 * delta * V[2, i] + delta * delta * A[i, i]
            T[6] = S[6] + delta * V[3, i]
            T[7] = S[7] + 2.0 * delta * V[4, i] + delta * delta * N[i, i]
            T[9] = S[9] + delta * V[5, i]
        else:
            T[5] = S[5] + 2.0 * delta * V[3, i] + delta * delta * A[i, i]
            T[6] = S[6] + delta * V[2, i]
            T[8] = S[8] + 2.0 * delta * V[5, i] + delta * delta * N[i, i]
            T[9] = S[9] + delta * V[4, i]


@jit
def _refine_accept(kind, slot, coord, delta, x, y, J, Jq, A, M, N, V, S, T):
    """Commit the move held in T: shift the vector caches and the point."""
    i = coord
    if slot == 0:
        x[i] += delta
    else:
        y[i] += delta
    for k in range(16):
        S[k] = T[k]
    if kind == KIND_REAL:
        return
    side = slot  # V index offset: x-images live at even layout slots
    if slot == 0:
        for r in range(x.shape[0]):
            V[0, r] += delta * J[r, i]
    else:
        for r in range(x.shape[0]):
            V[1, r] += delta * J[r, i]
    if kind == KIND_COMPLEX or kind == KIND_SASAKIAN or kind == KIND_KENMOTSU:
        return
    if (
        kind == KIND_QUATERNIONIC
        or kind == KIND_GRASSMANNIAN
        or kind == KIND_HYPERBOLIC_GRASSMANNIAN
    ):
        for a in range(3):
            base = 2 + a if slot == 0 else 5 + a
            for r in range(x.shape[0]):
                V[base, r] += delta * Jq[a, r, i]
        if kind != KIND_QUATERNIONIC:
            for a in range(3):
                base = 8 + a if slot == 0 else 11 + a
                for r in range(x.shape[0]):
                    V[base, r] += delta * M[a, r, i]
        return
    if kind == KIND_QUADRIC:
        ab = 2 + side
        nb = 4 + side
        for r in range(x.shape[0]):
            V[ab, r] += delta * A[r, i]
            V[nb, r] += delta * N[r, i]


@jit
def _refine_rows_loop(kind, c, J, Jq, A, xi, Xs, Ys, best, sweeps, step0, sign):
    n = Xs.shape[1]
    M = np.zeros((3, n, n))
    if kind == KIND_GRASSMANNIAN or kind == KIND_HYPERBOLIC_GRASSMANNIAN:
        for a in range(3):
            M[a] = np.dot(Jq[a], J)
    N = np.zeros((n, n))
    if kind == KIND_QUADRIC:
        N = np.dot(J, A)
    V = np.empty((14, n))
    S = np.empty(16)
    T = np.empty(16)
    for b in range(Xs.shape[0]):
        x = Xs[b].copy()
        y = Ys[b].copy()
        _refine_build(kind, J, Jq, A, xi, M, N, x, y, V, S)
        fb = _refine_numerator(kind, c, S) / (S[0] * S[1] - S[2] * S[2])
        step = step0
        for _ in range(sweeps):
            for slot in range(2):
                for coord in range(n):
                    for ds in range(2):
                        delta = step if ds == 0 else -step
                        _refine_trial(
                            kind, slot, coord, delta, x, y, J, Jq, A, xi, M, N, V, S, T
                        )
                        gram = T[0] * T[1] - T[2] * T[2]
                        if gram <= _REFINE_GRAM_FLOOR:
                            continue
                        val = _refine_numerator(kind, c, T) / gram
                        if (sign > 0 and val > fb) or (sign < 0 and val < fb):
                            _refine_accept(
                                kind, slot, coord, delta, x, y, J, Jq, A, M, N, V, S, T
                            )
                            fb = val
            # re-orthonormalize so the caches never drift far from unit scale
            nx = math.sqrt(np.dot(x, x))
            x /= nx
            y -= np.dot(x, y) * x
            y /= math.sqrt(np.dot(y, y))
            _refine_build(kind, J, Jq, A, xi, M, N, x, y, V, S)
            fb = _refine_numerator(kind, c, S) / (S[0] * S[1] - S[2] * S[2])
            step *= 0.5
        Xs[b] = x
        Ys[b] = y
        best[b] = fb


def refine_pairs(kind, c, J, Jq, A, xi, Xs, Ys, sweeps, step0, direction):
    """Compass-refine each row pair in place toward min or max K.

    Coordinate moves on one slot at a time, both signs, fixed halving
    schedule.  Each row is polished independently, so any partition of the
    rows yields the same result.  Returns the per-row curvature after the
    final sweep.
    """
    best = np.empty(Xs.shape[0])
    if USING_NUMBA:
        _refine_rows_loop(
            kind, c, J, Jq, A, xi, Xs, Ys, best, sweeps, float(step0), direction
        )
        return best
    return _refine_pairs_np(kind, c, J, Jq, A, xi, Xs, Ys, best, sweeps, step0, direction)


def _refine_pairs_np(kind, c, J, Jq, A, xi, Xs, Ys, best, sweeps, step0, direction):
    num = _batch_curvature_xyyx_np(kind, c, J, Jq, A, xi, Xs, Ys)
    gram = _dots(Xs, Xs) * _dots(Ys, Ys) - _dots(Xs, Ys) ** 2
    best[:] = num / gram
    n = Xs.shape[1]
    step = float(step0)
    for _ in range(sweeps):
        for slot in (0, 1):
            cur = Xs if slot == 0 else Ys
            other = Ys if slot == 0 else Xs
            for coord in range(n):
                for delta in (step, -step):
                    trial = cur.copy()
                    trial[:, coord] += delta
                    num = _batch_curvature_xyyx_np(
                        kind, c, J, Jq, A, xi, trial, other
                    )
                    gram = _dots(trial, trial) * _dots(other, other) - _dots(
                        trial, other
                    ) ** 2
                    with np.errstate(divide="ignore", invalid="ignore"):
                        vals = num / gram
                    ok = gram > _REFINE_GRAM_FLOOR
                    if direction > 0:
                        better = ok & (vals > best)
                    else:
                        better = ok & (vals < best)
                    if better.any():
                        cur[better] = trial[better]
                        best[better] = vals[better]
        nx = np.sqrt(_dots(Xs, Xs))
        Xs /= nx[:, None]
        Ys -= _dots(Xs, Ys)[:, None] * Xs
        Ys /= np.sqrt(_dots(Ys, Ys))[:, None]
        step *= 0.5
    num = _batch_curvature_xyyx_np(kind, c, J, Jq, A, xi, Xs, Ys)
    gram = _dots(Xs, Xs) * _dots(Ys, Ys) - _dots(Xs, Ys) ** 2
    best[:] = num / gram
    return best


# --------------------------------------------------------------------------
# curvature kernels, vectorized numpy fallback
# --------------------------------------------------------------------------


def _dots(U, V):
    return np.einsum("bi,bi->b", U, V)


def _apply(M, V):
    return V @ M.T


def _batch_sectional_np(kind, c, J, Jq, A, xi, Xs, Ys):
    num = _batch_curvature_xyyx_np(kind, c, J, Jq, A, xi, Xs, Ys)
    den = _dots(Xs, Xs) * _dots(Ys, Ys) - _dots(Xs, Ys) ** 2
    return num / den


def _batch_curvature_xyyx_np(kind, c, J, Jq, A, xi, Xs, Ys):
    base = _dots(Ys, Ys) * _dots(Xs, Xs) - _dots(Xs, Ys) ** 2

    if kind == KIND_REAL:
        return c * base

    if kind == KIND_COMPLEX:
        JX = _apply(J, Xs)
        JY = _apply(J, Ys)
        term = (
            _dots(JY, Ys) * _dots(JX, Xs)
            - _dots(JX, Ys) * _dots(JY, Xs)
            - 2.0 * _dots(JX, Ys) * _dots(JY, Xs)
        )
        return 0.25 * c * (base + term)

    if kind == KIND_QUATERNIONIC:
        acc = base.copy()
        for a in range(3):
            JaX = _apply(Jq[a], Xs)
            JaY = _apply(Jq[a], Ys)
            acc += (
                _dots(JaY, Ys) * _dots(JaX, Xs)
                - _dots(JaX, Ys) * _dots(JaY, Xs)
                - 2.0 * _dots(JaX, Ys) * _dots(JaY, Xs)
            )
        return 0.25 * c * acc

    if kind in (KIND_SASAKIAN, KIND_KENMOTSU):
        if kind == KIND_SASAKIAN:
            c1, c2 = 0.25 * (c + 3.0), 0.25 * (c - 1.0)
        else:
            c1, c2 = 0.25 * (c - 3.0), 0.25 * (c + 1.0)
        eX = Xs @ xi
        eY = Ys @ xi
        pX = _apply(J, Xs)
        pY = _apply(J, Ys)
        gXY = _dots(Xs, Ys)
        bracket = (
            eX * eY * gXY
            - eY * eY * _dots(Xs, Xs)
            + gXY * eY * eX
            - _dots(Ys, Ys) * eX * eX
            + _dots(pY, Ys) * _dots(pX, Xs)
            - _dots(pX, Ys) * _dots(pY, Xs)
            - 2.0 * _dots(pX, Ys) * _dots(pY, Xs)
        )
        return c1 * base + c2 * bracket

    if kind in (KIND_GRASSMANNIAN, KIND_HYPERBOLIC_GRASSMANNIAN):
        JX = _apply(J, Xs)
        JY = _apply(J, Ys)
        acc = base + (
            _dots(JY, Ys) * _dots(JX, Xs)
            - _dots(JX, Ys) * _dots(JY, Xs)
            - 2.0 * _dots(JX, Ys) * _dots(JY, Xs)
        )
        for a in range(3):
            JaX = _apply(Jq[a], Xs)
            JaY = _apply(Jq[a], Ys)
            acc += (
                _dots(JaY, Ys) * _dots(JaX, Xs)
                - _dots(JaX, Ys) * _dots(JaY, Xs)
                - 2.0 * _dots(JaX, Ys) * _dots(JaY, Xs)
            )
            JaJX = _apply(Jq[a], JX)
            JaJY = _apply(Jq[a], JY)
            acc += _dots(JaJY, Ys) * _dots(JaJX, Xs) - _dots(JaJX, Ys) * _dots(
                JaJY, Xs
            )
        if kind == KIND_HYPERBOLIC_GRASSMANNIAN:
            return -0.5 * acc
        return acc

    JX = _apply(J, Xs)
    JY = _apply(J, Ys)
    AX = _apply(A, Xs)
    AY = _apply(A, Ys)
    JAX = _apply(J, AX)
    JAY = _apply(J, AY)
    return (
        base
        + _dots(JY, Ys) * _dots(JX, Xs)
        - _dots(JX, Ys) * _dots(JY, Xs)
        - 2.0 * _dots(JX, Ys) * _dots(JY, Xs)
        + _dots(AY, Ys) * _dots(AX, Xs)
        - _dots(AX, Ys) * _dots(AY, Xs)
        + _dots(JAY, Ys) * _dots(JAX, Xs)
        - _dots(JAX, Ys) * _dots(JAY, Xs)
    )


def _batch_closed_np(kind, c, J, Jq, A, xi, Xs, Ys):
    B = Xs.shape[0]
    if kind == KIND_REAL:
        return np.full(B, float(c))

    if kind == KIND_COMPLEX:
        t = _dots(_apply(J, Xs), Ys)
        return 0.25 * c * (1.0 + 3.0 * t * t)

    if kind == KIND_QUATERNIONIC:
        s = np.zeros(B)
        for a in range(3):
            t = _dots(_apply(Jq[a], Xs), Ys)
            s += t * t
        return 0.25 * c * (1.0 + 3.0 * s)

    if kind in (KIND_SASAKIAN, KIND_KENMOTSU):
        eX = Xs @ xi
        eY = Ys @ xi
        t = _dots(_apply(J, Xs), Ys)
        bracket = -eY * eY - eX * eX + 3.0 * t * t
        if kind == KIND_SASAKIAN:
            return 0.25 * (c + 3.0) + 0.25 * (c - 1.0) * bracket
        return 0.25 * (c - 3.0) + 0.25 * (c + 1.0) * bracket

    if kind in (KIND_GRASSMANNIAN, KIND_HYPERBOLIC_GRASSMANNIAN):
        JX = _apply(J, Xs)
        JY = _apply(J, Ys)
        t = _dots(JX, Ys)
        acc = 1.0 + 3.0 * t * t
        for a in range(3):
            ta = _dots(_apply(Jq[a], Xs), Ys)
            u = _dots(_apply(Jq[a], JY), Ys) * _dots(_apply(Jq[a], JX), Xs)
            v = _dots(_apply(Jq[a], JX), Ys)
            acc = acc + 3.0 * ta * ta + u - v * v
        if kind == KIND_HYPERBOLIC_GRASSMANNIAN:
            return -0.5 * acc
        return acc

    JX = _apply(J, Xs)
    AX = _apply(A, Xs)
    AY = _apply(A, Ys)
    JAX = _apply(J, AX)
    JAY = _apply(J, AY)
    tJ = _dots(JX, Ys)
    tA = _dots(AX, Ys)
    tJA = _dots(JAX, Ys)
    return (
        1.0
        + 3.0 * tJ * tJ
        + _dots(AY, Ys) * _dots(AX, Xs)
        - tA * tA
        + _dots(JAY, Ys) * _dots(JAX, Xs)
        - tJA * tJA
    )


def _orthonormalize_pairs_np(Xs, Ys):
    tol = 1e-10
    nx = np.sqrt(_dots(Xs, Xs))
    ok_x = nx >= tol
    safe_nx = np.where(ok_x, nx, 1.0)
    Xh = Xs / safe_nx[:, None]
    proj = _dots(Xh, Ys)
    W = Ys - proj[:, None] * Xh
    nw = np.sqrt(_dots(W, W))
    ok_w = nw >= tol
    safe_nw = np.where(ok_w, nw, 1.0)
    Yh = W / safe_nw[:, None]
    return Xh, Yh, ok_x & ok_w


# --------------------------------------------------------------------------
# batched public entry points (backend dispatch)
# --------------------------------------------------------------------------


def batch_sectional(kind, c, J, Jq, A, xi, Xs, Ys):
    """Sectional curvature of each row pair (full tensor route)."""
    if USING_NUMBA:
        out = np.empty(Xs.shape[0])
        _batch_sectional_loop(kind, c, J, Jq, A, xi, Xs, Ys, out)
        return out
    return _batch_sectional_np(kind, c, J, Jq, A, xi, Xs, Ys)


def batch_sectional_gram(kind, c, J, Jq, A, xi, Xs, Ys):
    """Sectional curvature of raw row pairs, plus each pair's Gram determinant.

    The value is exact for any basis of the plane (the numerator and the
    denominator rescale together), so callers that perturb coordinates can
    skip re-orthonormalization and instead reject rows whose determinant
    signals near-collinearity.
    """
    if USING_NUMBA:
        out = np.empty(Xs.shape[0])
        gram = np.empty(Xs.shape[0])
        _batch_sectional_gram_loop(kind, c, J, Jq, A, xi, Xs, Ys, out, gram)
        return out, gram
    num = _batch_curvature_xyyx_np(kind, c, J, Jq, A, xi, Xs, Ys)
    gram = _dots(Xs, Xs) * _dots(Ys, Ys) - _dots(Xs, Ys) ** 2
    return num / gram, gram


def batch_closed_form(kind, c, J, Jq, A, xi, Xs, Ys):
    """Closed-form sectional curvature of each (orthonormal) row pair."""
    if USING_NUMBA:
        out = np.empty(Xs.shape[0])
        _batch_closed_loop(kind, c, J, Jq, A, xi, Xs, Ys, out)
        return out
    return _batch_closed_np(kind, c, J, Jq, A, xi, Xs, Ys)


def orthonormalize_pairs(Xs, Ys):
    """Row-wise Gram-Schmidt; returns (Xhat, Yhat, valid mask)."""
    if USING_NUMBA:
        Xh = np.empty_like(Xs)
        Yh = np.empty_like(Ys)
        valid = np.empty(Xs.shape[0], dtype=np.bool_)
        _orthonormalize_pairs_loop(Xs, Ys, Xh, Yh, valid)
        return Xh, Yh, valid
    return _orthonormalize_pairs_np(Xs, Ys)


# --------------------------------------------------------------------------
# interval kernels (shared source; jit is identity under numpy backend)
# --------------------------------------------------------------------------


@jit
def _inflate(lo, hi):
    # outward rounding: pad by 4 eps relative to magnitude (>= 4 ulps)
    dlo = 4.0 * _EPS * max(1.0, abs(lo))
    dhi = 4.0 * _EPS * max(1.0, abs(hi))
    return lo - dlo, hi + dhi


@jit
def iv_add(alo, ahi, blo, bhi):
    return _inflate(alo + blo, ahi + bhi)


@jit
def iv_sub(alo, ahi, blo, bhi):
    return _inflate(alo - bhi, ahi - blo)


@jit
def iv_mul(alo, ahi, blo, bhi):
    p1 = alo * blo
    p2 = alo * bhi
    p3 = ahi * blo
    p4 = ahi * bhi
    return _inflate(min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4)))


@jit
def iv_scale(k, alo, ahi):
    lo = k * alo
    hi = k * ahi
    if lo > hi:
        lo, hi = hi, lo
    return _inflate(lo, hi)


@jit
def iv_sqr(alo, ahi):
    big = max(abs(alo), abs(ahi))
    if alo <= 0.0 <= ahi:
        return _inflate(0.0, big * big)
    small = min(abs(alo), abs(ahi))
    return _inflate(small * small, big * big)


@jit
def iv_cos(alo, ahi):
    if ahi - alo >= _TWO_PI:
        return -1.0, 1.0
    vlo = math.cos(alo)
    vhi = math.cos(ahi)
    out_lo = min(vlo, vhi)
    out_hi = max(vlo, vhi)
    # interior maximum at multiples of 2*pi
    k = math.ceil(alo / _TWO_PI)
    if k * _TWO_PI <= ahi:
        out_hi = 1.0
    # interior minimum at pi + multiples of 2*pi
    k = math.ceil((alo - math.pi) / _TWO_PI)
    if math.pi + k * _TWO_PI <= ahi:
        out_lo = -1.0
    lo, hi = _inflate(out_lo, out_hi)
    return max(lo, -1.0), min(hi, 1.0)


@jit
def iv_sin(alo, ahi):
    lo, hi = _inflate(alo - _HALF_PI, ahi - _HALF_PI)
    return iv_cos(lo, hi)


@jit
def h_point(x, y):
    """h(x, y) = cos(2x+2y) - 2 sin 2x sin 2y - cos^2 x cos^2 y."""
    return (
        math.cos(2.0 * x + 2.0 * y)
        - 2.0 * math.sin(2.0 * x) * math.sin(2.0 * y)
        - (math.cos(x) ** 2) * (math.cos(y) ** 2)
    )


@jit
def h_box(xlo, xhi, ylo, yhi):
    """Interval enclosure of h over a box."""
    x2lo, x2hi = iv_scale(2.0, xlo, xhi)
    y2lo, y2hi = iv_scale(2.0, ylo, yhi)
    slo, shi = iv_add(x2lo, x2hi, y2lo, y2hi)
    t1lo, t1hi = iv_cos(slo, shi)
    sxlo, sxhi = iv_sin(x2lo, x2hi)
    sylo, syhi = iv_sin(y2lo, y2hi)
    plo, phi = iv_mul(sxlo, sxhi, sylo, syhi)
    t2lo, t2hi = iv_scale(-2.0, plo, phi)
    cxlo, cxhi = iv_cos(xlo, xhi)
    cylo, cyhi = iv_cos(ylo, yhi)
    sqx_lo, sqx_hi = iv_sqr(cxlo, cxhi)
    sqy_lo, sqy_hi = iv_sqr(cylo, cyhi)
    qlo, qhi = iv_mul(sqx_lo, sqx_hi, sqy_lo, sqy_hi)
    t3lo, t3hi = iv_scale(-1.0, qlo, qhi)
    lo, hi = iv_add(t1lo, t1hi, t2lo, t2hi)
    return iv_add(lo, hi, t3lo, t3hi)


@jit
def h_grad_box(xlo, xhi, ylo, yhi):
    """Interval enclosure of (dh/dx, dh/dy) over a box.

    dh/dx = -2 sin(2x+2y) - 4 cos 2x sin 2y + sin 2x cos^2 y and the
    symmetric expression in y.
    """
    x2lo, x2hi = iv_scale(2.0, xlo, xhi)
    y2lo, y2hi = iv_scale(2.0, ylo, yhi)
    slo, shi = iv_add(x2lo, x2hi, y2lo, y2hi)
    sslo, sshi = iv_sin(slo, shi)
    common_lo, common_hi = iv_scale(-2.0, sslo, sshi)

    sxlo, sxhi = iv_sin(x2lo, x2hi)
    sylo, syhi = iv_sin(y2lo, y2hi)
    cxlo2, cxhi2 = iv_cos(x2lo, x2hi)
    cylo2, cyhi2 = iv_cos(y2lo, y2hi)
    cxlo, cxhi = iv_cos(xlo, xhi)
    cylo, cyhi = iv_cos(ylo, yhi)
    csqx_lo, csqx_hi = iv_sqr(cxlo, cxhi)
    csqy_lo, csqy_hi = iv_sqr(cylo, cyhi)

    m1lo, m1hi = iv_mul(cxlo2, cxhi2, sylo, syhi)
    m1lo, m1hi = iv_scale(-4.0, m1lo, m1hi)
    m2lo, m2hi = iv_mul(sxlo, sxhi, csqy_lo, csqy_hi)
    gx_lo, gx_hi = iv_add(common_lo, common_hi, m1lo, m1hi)
    gx_lo, gx_hi = iv_add(gx_lo, gx_hi, m2lo, m2hi)

    m3lo, m3hi = iv_mul(sxlo, sxhi, cylo2, cyhi2)
    m3lo, m3hi = iv_scale(-4.0, m3lo, m3hi)
    m4lo, m4hi = iv_mul(sylo, syhi, csqx_lo, csqx_hi)
    gy_lo, gy_hi = iv_add(common_lo, common_hi, m3lo, m3hi)
    gy_lo, gy_hi = iv_add(gy_lo, gy_hi, m4lo, m4hi)
    return gx_lo, gx_hi, gy_lo, gy_hi


def h_grid(xs, ys):
    """Vectorized h over 1-D coordinate arrays (pointwise, not interval)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    return (
        np.cos(2.0 * xs + 2.0 * ys)
        - 2.0 * np.sin(2.0 * xs) * np.sin(2.0 * ys)
        - np.cos(xs) ** 2 * np.cos(ys) ** 2
    )
