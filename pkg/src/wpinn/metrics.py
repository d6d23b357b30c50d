"""Test-time error metrics on independently sampled points.

The reported error is a sum of Monte-Carlo L2 norms: the equation error (the
discrete PDE residual over the space-time cylinder) plus the boundary error
(state on the lateral boundary, and position -- for waves also velocity --
mismatches at the initial and terminal slices). Each norm is the root of the
mean square over its own test set, i.e. a norm with respect to the normalized
measure; errors are therefore comparable across domains and dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fd import combine_dt
from .geometry import sample_boundary, sample_interior, sample_slice
from .losses import HEAT, INTERNAL, WAVE, ProblemSpec, _slice_points, discrete_pde_values
from .geometry import indicator_batch
from .nets import as_batch_field


@dataclass
class ErrorReport:
    total: float
    equation_error: float
    boundary_error: float
    n3: int
    n4: int
    equation: str
    control: str

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "equation_error": self.equation_error,
            "boundary_error": self.boundary_error,
            "N3": self.n3,
            "N4": self.n4,
            "equation": self.equation,
            "control": self.control,
        }


def _rms(values: np.ndarray) -> float:
    return float(np.sqrt(np.mean(values * values)))


def _evaluate(spec: ProblemSpec, u_net, f_net, rng: np.random.Generator, n3: int, n4: int) -> ErrorReport:
    h = spec.fd.h
    wave = spec.equation == WAVE
    u = as_batch_field(u_net)
    f = as_batch_field(f_net)

    t_in, x_in = sample_interior(spec.domain, spec.T, n3, rng)
    t_b, x_b = sample_boundary(spec.domain, spec.T, n3, rng)
    _, x0 = sample_slice(spec.domain, 0.0, n4, rng)
    _, xT = sample_slice(spec.domain, spec.T, n4, rng)

    op_vals, st = discrete_pde_values(u_net, spec.equation, t_in, x_in, spec.v, h)
    f0 = f(st.P0)
    if spec.control == INTERNAL:
        ctrl = f0 * indicator_batch(spec.region, x_in)
    else:
        ctrl = f0 * st.u_c
    equation_error = _rms(op_vals - ctrl)

    lateral = _rms(u(np.column_stack([t_b, x_b])))

    PI_all, _ = _slice_points(0.0, x0, h, with_velocity=wave)
    PT_all, _ = _slice_points(spec.T, xT, h, with_velocity=wave)
    uI_all = u(PI_all)
    uT_all = u(PT_all)
    init_err = _rms(uI_all[:n4] - spec.data.u0(x0))
    term_err = _rms(uT_all[:n4] - spec.data.z0(xT))
    boundary_error = lateral + init_err + term_err

    if wave:
        Dt0 = combine_dt(uI_all[:n4], uI_all[n4 : 2 * n4], uI_all[2 * n4 :], h)
        DtT = combine_dt(uT_all[:n4], uT_all[n4 : 2 * n4], uT_all[2 * n4 :], h)
        boundary_error += _rms(Dt0 - spec.data.u1(x0)) + _rms(DtT - spec.data.z1(xT))

    return ErrorReport(
        total=equation_error + boundary_error,
        equation_error=equation_error,
        boundary_error=boundary_error,
        n3=n3,
        n4=n4,
        equation=spec.equation,
        control=spec.control,
    )


def test_error_heat(spec: ProblemSpec, u_net, f_net, rng, n3: int = 10000, n4: int = 1000) -> ErrorReport:
    if spec.equation != HEAT:
        raise ValueError("test_error_heat needs a heat problem")
    return _evaluate(spec, u_net, f_net, rng, n3, n4)


def test_error_wave(spec: ProblemSpec, u_net, f_net, rng, n3: int = 10000, n4: int = 1000) -> ErrorReport:
    if spec.equation != WAVE:
        raise ValueError("test_error_wave needs a wave problem")
    return _evaluate(spec, u_net, f_net, rng, n3, n4)


def test_error(spec: ProblemSpec, u_net, f_net, rng, n3: int = 10000, n4: int = 1000) -> ErrorReport:
    """Dispatch on the problem's equation kind."""
    return _evaluate(spec, u_net, f_net, rng, n3, n4)
