"""Domains, control regions, data functions, and the training-point samplers.

Two domain shapes are supported: the unit ball and the centered cube (-1,1)^d.
Control regions are axis-aligned cubes, balls, their complements inside the
domain, or the whole domain. Region membership is closed for the region itself;
complement kinds exclude the closed set, so edges (measure zero for every
Monte-Carlo sum) are never double-counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

BALL = "ball"
CUBE = "cube"


@dataclass(frozen=True)
class Domain:
    kind: str  # "ball" (unit ball) | "cube" ((-1,1)^d)
    dim: int

    def __post_init__(self):
        if self.kind not in (BALL, CUBE):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")


def unit_ball(d: int) -> Domain:
    return Domain(BALL, d)


def centered_cube(d: int) -> Domain:
    return Domain(CUBE, d)


@dataclass(frozen=True)
class Region:
    """Control region, interpreted relative to a Domain.

    kinds: "cube" (|x_i| <= halfwidth for all i), "ball" (|x-center| <= radius),
    "complement_cube" / "complement_ball" (everything outside the closed set),
    "whole" (all of the domain).
    """

    kind: str
    halfwidth: float = 0.0
    center: Tuple[float, ...] = ()
    radius: float = 0.0

    def __post_init__(self):
        if self.kind not in ("cube", "ball", "complement_cube", "complement_ball", "whole"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.kind in ("cube", "complement_cube") and not self.halfwidth > 0.0:
            raise ValueError("cube regions need halfwidth > 0")
        if self.kind in ("ball", "complement_ball") and not self.radius > 0.0:
            raise ValueError("ball regions need radius > 0")


def whole_domain() -> Region:
    return Region("whole")


def indicator_batch(region: Region, X: np.ndarray) -> np.ndarray:
    """Characteristic function of the region, one 0/1 float per row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if region.kind == "whole":
        return np.ones(X.shape[0])
    if region.kind in ("cube", "complement_cube"):
        inside = np.max(np.abs(X), axis=1) <= region.halfwidth
    else:
        c = np.asarray(region.center, dtype=float)
        inside = np.linalg.norm(X - c, axis=1) <= region.radius
    if region.kind.startswith("complement_"):
        inside = ~inside
    return inside.astype(float)


def indicator(region: Region, x) -> int:
    return int(indicator_batch(region, np.asarray(x, dtype=float)[None, :])[0])


# ---------------------------------------------------------------------------
# Samplers. Every sampler makes a fixed sequence of generator calls so that a
# given seed reproduces point lists bit for bit.
# ---------------------------------------------------------------------------


def _sample_inside(domain: Domain, n: int, rng: np.random.Generator) -> np.ndarray:
    d = domain.dim
    if domain.kind == CUBE:
        return rng.uniform(-1.0, 1.0, size=(n, d))
    # Ball: Gaussian direction scaled by U^(1/d). Rejection from the cube is
    # hopeless in d=10 (acceptance ~2.5e-3); this is constant cost per sample.
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = rng.uniform(0.0, 1.0, size=n) ** (1.0 / d)
    return g * r[:, None]


def _sample_surface(domain: Domain, n: int, rng: np.random.Generator) -> np.ndarray:
    d = domain.dim
    if domain.kind == BALL:
        g = rng.standard_normal((n, d))
        return g / np.linalg.norm(g, axis=1, keepdims=True)
    # Cube: one of the 2d faces uniformly, uniform on the face.
    face = rng.integers(0, 2 * d, size=n)
    x = rng.uniform(-1.0, 1.0, size=(n, d))
    coord = face // 2
    sign = np.where(face % 2 == 0, 1.0, -1.0)
    x[np.arange(n), coord] = sign
    return x


def sample_interior(domain: Domain, T: float, n: int, rng: np.random.Generator):
    """n points (t, x) with t uniform on (0, T) and x uniform on the domain."""
    t = rng.uniform(0.0, T, size=n)
    x = _sample_inside(domain, n, rng)
    return t, x


def sample_boundary(domain: Domain, T: float, n: int, rng: np.random.Generator):
    """n points (t, x) with t uniform on (0, T) and x uniform on the boundary."""
    t = rng.uniform(0.0, T, size=n)
    x = _sample_surface(domain, n, rng)
    return t, x


def sample_slice(domain: Domain, t0: float, n: int, rng: np.random.Generator):
    """n points on the time slice t = t0, x uniform on the domain."""
    t = np.full(n, float(t0))
    x = _sample_inside(domain, n, rng)
    return t, x


@dataclass
class TrainBatch:
    """One iteration's sample: interior + lateral boundary (N1 each), initial
    and terminal slices (N2 = floor(N1/d) each)."""

    interior_t: np.ndarray
    interior_x: np.ndarray
    boundary_t: np.ndarray
    boundary_x: np.ndarray
    initial_x: np.ndarray
    terminal_x: np.ndarray
    n1: int
    n2: int
    T: float

    @property
    def dim(self) -> int:
        return self.interior_x.shape[1]


def sample_batch(domain: Domain, T: float, n1: int, rng: np.random.Generator) -> TrainBatch:
    if n1 < domain.dim:
        raise ValueError("need N1 >= d so that N2 = floor(N1/d) >= 1")
    n2 = n1 // domain.dim
    it, ix = sample_interior(domain, T, n1, rng)
    bt, bx = sample_boundary(domain, T, n1, rng)
    _, x0 = sample_slice(domain, 0.0, n2, rng)
    _, xT = sample_slice(domain, T, n2, rng)
    return TrainBatch(it, ix, bt, bx, x0, xT, n1=n1, n2=n2, T=float(T))


# ---------------------------------------------------------------------------
# The eight experimental situations.
# ---------------------------------------------------------------------------

DataFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DataFunctions:
    """Initial/terminal data; u1 and z1 are present only for wave problems."""

    u0: DataFn
    z0: DataFn
    u1: Optional[DataFn] = None
    z1: Optional[DataFn] = None


def _zero(X: np.ndarray) -> np.ndarray:
    return np.zeros(np.atleast_2d(X).shape[0])


def _radial_bump(scale: float) -> DataFn:
    # scale * sin(pi/2 * (1-|x|)^2.5) on the unit ball; |x| is the Euclidean
    # norm, and 1-|x| is floored at 0 so boundary rounding cannot produce NaN.
    def f(X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        r = np.linalg.norm(X, axis=1)
        return scale * np.sin(0.5 * np.pi * np.maximum(1.0 - r, 0.0) ** 2.5)

    return f


def _tent_product(scale: float) -> DataFn:
    # scale * prod_i (1 - |x_i|) on the centered cube.
    def f(X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return scale * np.prod(1.0 - np.abs(X), axis=1)

    return f


def control_cube_halfwidth(d: int) -> float:
    """sqrt(1/d - 1/(2 d^2)); the corner norm is sqrt(1 - 1/(2d)) < 1, so the
    cube sits inside the unit ball for every d."""
    return math.sqrt(1.0 / d - 1.0 / (2.0 * d * d))


@dataclass(frozen=True)
class Situation:
    sid: int
    equation: str  # "heat" | "wave"
    control: str  # "internal" | "bilinear"
    T: float
    domain: Domain
    region: Region
    data: DataFunctions


def situation_data(sid: int, d: int = 10) -> Situation:
    """Configuration of experiment `sid` in dimension d.

    1/5: heat on the unit ball, control on a centered cube, steer 0 -> radial bump.
    2/6: heat on the cube, control on the unit ball, steer tent -> e*tent.
    3/7: wave on the unit ball, control outside a closed off-center ball.
    4/8: wave on the cube, control outside a centered closed cube.
    5-8 repeat 1-4 with bilinear instead of internal control.
    """
    if sid not in range(1, 9):
        raise ValueError(f"situation id must be in 1..8, got {sid}")
    a = control_cube_halfwidth(d)
    e = math.e
    if sid in (1, 5):
        base = Situation(
            sid=sid,
            equation="heat",
            control="internal",
            T=1.0,
            domain=unit_ball(d),
            region=Region("cube", halfwidth=a),
            data=DataFunctions(u0=_zero, z0=_radial_bump(e - 1.0)),
        )
    elif sid in (2, 6):
        base = Situation(
            sid=sid,
            equation="heat",
            control="internal",
            T=1.0,
            domain=centered_cube(d),
            region=Region("ball", center=(0.0,) * d, radius=1.0),
            data=DataFunctions(u0=_tent_product(1.0), z0=_tent_product(e)),
        )
    elif sid in (3, 7):
        base = Situation(
            sid=sid,
            equation="wave",
            control="internal",
            T=3.0,
            domain=unit_ball(d),
            region=Region("complement_ball", center=(1.0 / d,) * d, radius=0.75),
            data=DataFunctions(
                u0=_zero,
                z0=_radial_bump(e - 1.0),
                u1=_zero,
                z1=_radial_bump(2.0 * e),
            ),
        )
    else:  # 4, 8
        base = Situation(
            sid=sid,
            equation="wave",
            control="internal",
            T=3.0,
            domain=centered_cube(d),
            region=Region("complement_cube", halfwidth=a),
            data=DataFunctions(
                u0=_tent_product(1.0),
                z0=_tent_product(e),
                u1=_tent_product(1.0),
                z1=_tent_product(e),
            ),
        )
    if sid >= 5:
        base = Situation(
            sid=sid,
            equation=base.equation,
            control="bilinear",
            T=base.T,
            domain=base.domain,
            region=base.region,
            data=base.data,
        )
    return base


def batch_to_csv(batch: TrainBatch, path) -> None:
    """Debug dump: one row per point, columns role, t, x_1..x_d."""
    d = batch.dim
    with open(path, "w") as fh:
        fh.write("role,t," + ",".join(f"x_{i + 1}" for i in range(d)) + "\n")
        blocks = [
            ("interior", batch.interior_t, batch.interior_x),
            ("boundary", batch.boundary_t, batch.boundary_x),
            ("initial", np.zeros(batch.n2), batch.initial_x),
            ("terminal", np.full(batch.n2, batch.T), batch.terminal_x),
        ]
        for role, t, x in blocks:
            for ti, xi in zip(t, x):
                fh.write(role + "," + repr(float(ti)) + "," + ",".join(repr(float(c)) for c in xi) + "\n")
