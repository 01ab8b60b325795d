"""Shared test setup.

The compiled kernels are exercised once per session before any test runs
so that timing assertions measure steady-state work rather than JIT
compilation (compiled code is also disk-cached between sessions).  Under
CURVB_BACKEND=numpy the warmup is essentially free.
"""

import numpy as np
import pytest

import curvb.kernels as kernels
from curvb import AmbientModel, Kind, build_structure, certify_h, curvature, estimate_range
from curvb.spaces import kernel_pack


@pytest.fixture(scope="session", autouse=True)
def warm_compiled_kernels():
    model = AmbientModel(kind=Kind.COMPLEX_QUADRIC, n=6)
    ops = build_structure(model)
    e = np.eye(6)
    curvature(model, ops, e[0], e[1], e[1], e[0])
    estimate_range(model, ops, budget=8, refine_steps=2, seed=0)

    pack = kernel_pack(model, ops)
    X = np.ascontiguousarray(e[:2])
    Y = np.ascontiguousarray(e[2:4])
    kernels.batch_sectional(*pack, X, Y)
    kernels.batch_closed_form(*pack, X, Y)
    kernels.batch_sectional_gram(*pack, X, Y)

    certify_h(tol=1e-2, max_boxes=500)
