"""Command-line front end emitting machine-readable reports.

Four subcommands: ``bounds`` (random-frame curvature range of a model
space vs. its theorem interval), ``certify-h`` (branch-and-bound
enclosure of the minimum of the quadric defect term h), ``check``
(warping-Laplacian inequality on an immersion fixture or spec file) and
``surface`` (plot-ready CSV grid of h).

Reports are JSON with a fixed schema (see README): same command and seed
give byte-identical output apart from the wall-time field.  Exit codes
are a stable contract: 0 pass, 1 mathematical failure (bound violated,
certificate not converged, inequality failing at a point), 2 usage error
(bad flags, malformed spec files, invalid model parameters).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .bounds import estimate_range, quadric_h
from .certify import certify_h, surface_grid, surface_to_csv
from .errors import (
    BadDimension,
    CurvbError,
    DimensionMismatch,
    SpecFileError,
    UnsupportedDimension,
    UnsupportedKind,
)
from .immersion import (
    FIXTURE_NAMES,
    check_inequality,
    load_immersion_file,
    make_fixture,
)
from .spaces import AmbientModel, Kind, build_structure

__all__ = ["RunReport", "main"]

# the certified claim checked by certify-h
H_CLAIM_LOWER = -3.3
# plot/report domain of h; certification inflates the upper endpoints by
# one ulp internally, the grid uses the exact quarter-period square
_H_BOX = ((0.0, math.pi / 2.0), (0.0, math.pi / 2.0))

_DIM_MULTIPLIER = {
    Kind.REAL_SPACE_FORM: 1,
    Kind.COMPLEX_SPACE_FORM: 2,
    Kind.QUATERNIONIC_SPACE_FORM: 4,
    Kind.COMPLEX_GRASSMANNIAN: 4,
    Kind.HYPERBOLIC_GRASSMANNIAN: 4,
    Kind.COMPLEX_QUADRIC: 2,
}
_DEFAULT_DIM = {
    Kind.REAL_SPACE_FORM: 3,
    Kind.COMPLEX_SPACE_FORM: 4,
    Kind.QUATERNIONIC_SPACE_FORM: 8,
    Kind.SASAKIAN_SPACE_FORM: 5,
    Kind.KENMOTSU_SPACE_FORM: 5,
    Kind.COMPLEX_GRASSMANNIAN: 8,
    Kind.HYPERBOLIC_GRASSMANNIAN: 8,
    Kind.COMPLEX_QUADRIC: 6,
}


class _UsageError(Exception):
    """Invalid invocation detected after argparse; mapped to exit code 2."""


@dataclasses.dataclass(frozen=True)
class RunReport:
    """One command invocation and its outcome, serializable to JSON."""

    command: str
    model: dict
    seed: int | None
    tolerances: dict
    results: object
    passed: bool
    wall_time_s: float
    version: str = __version__
    schema: int = 1

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "version": self.version,
            "command": self.command,
            "model": self.model,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "results": self.results,
            "pass": self.passed,
            "wall_time_s": self.wall_time_s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(
            command=data["command"],
            model=data["model"],
            seed=data["seed"],
            tolerances=data["tolerances"],
            results=data["results"],
            passed=data["pass"],
            wall_time_s=data["wall_time_s"],
            version=data["version"],
            schema=data["schema"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _jsonable(obj):
    """Recursively convert dataclasses/numpy scalars to JSON-safe values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: _jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def _emit(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _resolved_seed(explicit) -> int:
    """--seed wins; otherwise CURVB_SEED; otherwise 0."""
    if explicit is not None:
        return int(explicit)
    raw = os.environ.get("CURVB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"CURVB_SEED must be an integer, got {raw!r}") from None


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _resolution(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"resolution must be >= 2, got {value}")
    return value


def _resolve_dim(kind: Kind, dim, m) -> int:
    if dim is not None:
        return dim
    if m is not None:
        mult = _DIM_MULTIPLIER.get(kind)
        if mult is None:
            raise _UsageError(
                f"--m is not defined for {kind.value}; pass --dim (odd) instead"
            )
        return mult * m
    return _DEFAULT_DIM[kind]


def cmd_bounds(args) -> int:
    kind = Kind(args.model)
    seed = _resolved_seed(args.seed)
    n = _resolve_dim(kind, args.dim, args.m)
    model = AmbientModel(kind=kind, n=n, c=args.c)
    ops = build_structure(model)

    start = time.perf_counter()
    srange = estimate_range(
        model,
        ops,
        budget=args.budget,
        refine_steps=args.refine_steps,
        seed=seed,
        threads=args.threads,
    )
    wall = time.perf_counter() - start

    ok = (
        srange.est_lo >= srange.theorem_lo - args.tol
        and srange.est_hi <= srange.theorem_hi + args.tol
    )
    descriptor = model.describe()
    descriptor.update(
        {
            "budget": args.budget,
            "refine_steps": args.refine_steps,
            "threads": args.threads,
        }
    )
    report = RunReport(
        command="bounds",
        model=descriptor,
        seed=seed,
        tolerances={"containment": args.tol},
        results=_jsonable(srange),
        passed=bool(ok),
        wall_time_s=wall,
    )
    _emit(report.to_json(), args.out)
    return 0 if ok else 1


def cmd_certify_h(args) -> int:
    start = time.perf_counter()
    bound = certify_h(tol=args.tol, max_boxes=args.max_boxes)
    wall = time.perf_counter() - start

    if args.surface is not None:
        grid = surface_grid(quadric_h, _H_BOX, args.surface)
        surface_to_csv(grid, args.surface_out)

    ok = bound.converged and bound.enclosure_lo >= H_CLAIM_LOWER
    report = RunReport(
        command="certify-h",
        model={
            "objective": "h",
            "domain": [[float(lo), float(hi)] for lo, hi in _H_BOX],
            "max_boxes": args.max_boxes,
        },
        seed=None,
        tolerances={"tol": args.tol, "lower_bound_claim": H_CLAIM_LOWER},
        results=_jsonable(bound),
        passed=bool(ok),
        wall_time_s=wall,
    )
    _emit(report.to_json(), args.out)
    return 0 if ok else 1


def cmd_check(args) -> int:
    if (args.spec_file is None) == (args.fixture is None):
        raise _UsageError("give exactly one of SPEC_FILE or --fixture")

    if args.spec_file is not None:
        bundle = load_immersion_file(args.spec_file, n_points=args.points)
        descriptor = {"file": args.spec_file, "name": bundle.name}
    else:
        k = max(2, round(math.sqrt(args.points)))
        bundle = make_fixture(
            args.fixture,
            c=1.0 if args.c is None else args.c,
            radius=1.0 if args.radius is None else args.radius,
            k=k,
        )
        descriptor = {"fixture": bundle.name}
        if args.fixture == "sphere-in-sphere":
            descriptor["c"] = 1.0 if args.c is None else args.c
        if args.fixture == "cylinder":
            descriptor["radius"] = 1.0 if args.radius is None else args.radius
    descriptor["points"] = len(bundle.points)

    start = time.perf_counter()
    reports = check_inequality(
        bundle.spec, bundle.imm, bundle.points, bundle.srange, tol=args.tol
    )
    wall = time.perf_counter() - start

    ok = all(r.passed for r in reports)
    report = RunReport(
        command="check",
        model=descriptor,
        seed=None,
        tolerances={"inequality": args.tol},
        results=_jsonable(reports),
        passed=bool(ok),
        wall_time_s=wall,
    )
    _emit(report.to_json(), args.out)
    return 0 if ok else 1


def cmd_surface(args) -> int:
    grid = surface_grid(quadric_h, _H_BOX, args.resolution)
    if args.out is None or args.out == "-":
        surface_to_csv(grid, sys.stdout)
    else:
        surface_to_csv(grid, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvb",
        description=(
            "Numerical curvature-range bounds, certified minima, and "
            "warped-product immersion checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "bounds",
        help="estimate a model space's sectional curvature range and compare "
        "it against the theorem interval",
    )
    p.add_argument("model", choices=[k.value for k in Kind])
    p.add_argument(
        "--c",
        type=float,
        default=None,
        help="curvature parameter (required for space forms, rejected for "
        "the unit-normalized models)",
    )
    dims = p.add_mutually_exclusive_group()
    dims.add_argument("--dim", type=_positive_int, help="ambient dimension n")
    dims.add_argument(
        "--m",
        type=_positive_int,
        help="dimension parameter; n = m (real), 2m (complex, quadric), "
        "4m (quaternionic, Grassmannians)",
    )
    p.add_argument("--budget", type=_positive_int, default=5000)
    p.add_argument("--refine-steps", type=_nonneg_int, default=16)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument(
        "--tol",
        type=_positive_float,
        default=1e-6,
        help="outward containment tolerance for the pass flag",
    )
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser(
        "certify-h",
        help="certified lower/upper enclosure of min h over [0, pi/2]^2",
    )
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    p.add_argument("--max-boxes", type=_positive_int, default=200000)
    p.add_argument(
        "--surface",
        type=_resolution,
        default=None,
        metavar="N",
        help="also write an N x N CSV grid of h",
    )
    p.add_argument("--surface-out", default="h_surface.csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_certify_h)

    p = sub.add_parser(
        "check",
        help="warping-Laplacian inequality on an immersion fixture or spec file",
    )
    p.add_argument("spec_file", nargs="?", default=None)
    p.add_argument("--fixture", choices=FIXTURE_NAMES)
    p.add_argument("--c", type=float, default=None, help="ambient curvature")
    p.add_argument("--radius", type=float, default=None, help="cylinder radius")
    p.add_argument("--points", type=_positive_int, default=25)
    p.add_argument("--tol", type=_positive_float, default=1e-3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("surface", help="CSV grid of h over [0, pi/2]^2")
    p.add_argument("--resolution", type=_resolution, default=129)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_surface)

    return parser


_USAGE_EXCEPTIONS = (
    _UsageError,
    SpecFileError,
    UnsupportedDimension,
    UnsupportedKind,
    DimensionMismatch,
    BadDimension,
    ValueError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_EXCEPTIONS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CurvbError as exc:  # genuine mathematical/numerical failures
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
