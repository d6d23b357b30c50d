"""Discrete training losses for the four control problems.

Each loss couples a solution network u and a control network f through the
discrete PDE operator (finite-difference stencils), a lateral-boundary block,
and initial/terminal mismatch blocks. In weighted mode an adaptive weight
network multiplies every operator component and every boundary comparison, and
a penalty (subtracted from the objective, since the weights are maximized)
keeps each weight close to the constant 1. With all weights frozen at 1 and
the penalty dropped, the weighted loss is exactly the standard one.

Loss layout, heat:

    eq_term  = mean_i [ w_time*Dt u - w_diff*Lap u + w_nonlin*v(u) - w_ctrl*ctrl ]^2
    boundary = ( sum_bnd (w_bnd*u)^2
               + sum_init (w_iu*u(0,x) - w_id*u0(x))^2
               + sum_term (w_tu*u(T,x) - w_td*z0(x))^2 ) / (N1 + 2 N2)

with ctrl = f * 1_region (internal) or f * u (bilinear). The wave loss replaces
Dt by the centered second time difference and adds velocity mismatches at both
slices, inside the same boundary normalization. A mode flag splits the single
diffusion weight into one weight per coordinate direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .fd import FdConfig, combine_dt, combine_second, fd_dt, fd_dtt, fd_laplacian_parts
from .geometry import DataFunctions, Domain, Region, Situation, TrainBatch, indicator_batch
from .nets import (
    Mlp,
    MlpGrads,
    as_batch_field,
    as_point_field,
    calibrate_layers,
    forward_batch,
    forward_batch_cached,
    backprop_batch,
    constant_net,
    init_params,
    RELU3,
    SIGMOID,
    BOUNDED_HEAD,
)

HEAT = "heat"
WAVE = "wave"
INTERNAL = "internal"
BILINEAR = "bilinear"


def default_nonlinearity(u):
    return -u + u * u


def default_nonlinearity_prime(u):
    return -1.0 + 2.0 * u


@dataclass
class ProblemSpec:
    """Everything the losses and metrics need to know about one problem."""

    equation: str
    control: str
    d: int
    T: float
    domain: Domain
    region: Region
    data: DataFunctions
    v: Callable = default_nonlinearity
    dv: Callable = default_nonlinearity_prime
    lam: float = 1.0
    rho: float = 1.0
    fd: FdConfig = field(default_factory=FdConfig)

    def __post_init__(self):
        if self.equation not in (HEAT, WAVE):
            raise ValueError(f"unknown equation {self.equation!r}")
        if self.control not in (INTERNAL, BILINEAR):
            raise ValueError(f"unknown control kind {self.control!r}")
        if not (self.lam > 0.0 and self.rho > 0.0 and self.T > 0.0):
            raise ValueError("lambda, rho and T must be positive")
        if self.equation == WAVE and (self.data.u1 is None or self.data.z1 is None):
            raise ValueError("wave problems need u1 and z1 data")

    def check_batch(self, batch: TrainBatch) -> None:
        if batch.dim != self.d or batch.T != self.T:
            raise ValueError(
                f"batch (d={batch.dim}, T={batch.T}) does not match spec (d={self.d}, T={self.T})"
            )


def make_problem(situation: Situation, lam: float = 1.0, rho: float = 1.0, h: float = 1e-3) -> ProblemSpec:
    return ProblemSpec(
        equation=situation.equation,
        control=situation.control,
        d=situation.domain.dim,
        T=situation.T,
        domain=situation.domain,
        region=situation.region,
        data=situation.data,
        lam=lam,
        rho=rho,
        fd=FdConfig(h=h),
    )


# ---------------------------------------------------------------------------
# Weight networks: one bounded net per role. Interior roles multiply residual
# components at interior points, the boundary role acts on lateral points, and
# the slice roles act on the initial/terminal samples.
# ---------------------------------------------------------------------------

INTERIOR_ROLES = ("time", "nonlin", "control")
SLICE_ROLES_HEAT = ("init_u", "init_data", "term_u", "term_data")
SLICE_ROLES_WAVE = ("init_vel", "init_vel_data", "term_vel", "term_vel_data")


def weight_roles(equation: str, d: int, per_direction: bool = False) -> List[str]:
    diffusion = [f"diffusion_{j}" for j in range(d)] if per_direction else ["diffusion"]
    roles = ["time", *diffusion, "nonlin", "control", "boundary", *SLICE_ROLES_HEAT]
    if equation == WAVE:
        roles += list(SLICE_ROLES_WAVE)
    return roles


@dataclass
class WeightBundle:
    """Named collection of adaptive weight networks for one problem."""

    equation: str
    roles: List[str]
    nets: Dict[str, Mlp]
    per_direction: bool = False

    def __post_init__(self):
        if set(self.nets) != set(self.roles):
            missing = set(self.roles) ^ set(self.nets)
            raise ValueError(f"bundle roles do not match nets: {sorted(missing)}")

    def diffusion_roles(self) -> List[str]:
        return [r for r in self.roles if r.startswith("diffusion")]


def make_weight_bundle(
    equation: str,
    d: int,
    widths: Optional[List[int]] = None,
    seed: Union[int, np.random.Generator] = 0,
    per_direction: bool = False,
    head_range: Tuple[float, float] = (0.2, 5.0),
    probe: Optional[np.ndarray] = None,
) -> WeightBundle:
    """Fresh bundle of bounded-output weight networks, one per role.

    Default architecture: width 40, depth 3, cubic-ReLU hidden layers with a
    sigmoid final hidden layer, output pinned into head_range. When the range
    contains 1 the final layer is centered so every net starts at the identity
    weighting (output ~1): the weighted loss then begins as the standard loss
    and the adversary deviates only where amplification pays. A probe batch,
    when given, calibrates the hidden layers (see calibrate_layers)."""
    if widths is None:
        widths = [d + 1, 40, 40, 40, 1]
    activations = [RELU3] * (len(widths) - 3) + [SIGMOID]
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    roles = weight_roles(equation, d, per_direction)
    lo, hi = head_range
    nets = {}
    for role in roles:
        net = init_params(widths, activations, head=BOUNDED_HEAD, seed=rng, head_range=head_range)
        if probe is not None:
            calibrate_layers(net, probe)
        if lo < 1.0 < hi:
            p = (1.0 - lo) / (hi - lo)
            net.weights[-1] *= 0.01
            net.biases[-1][:] = np.log(p / (1.0 - p))
        nets[role] = net
    return WeightBundle(equation=equation, roles=roles, nets=nets, per_direction=per_direction)


def constant_weight_bundle(equation: str, d: int, value: float = 1.0, per_direction: bool = False) -> WeightBundle:
    """Bundle of zero-weight affine nets outputting exactly `value`; test helper."""
    roles = weight_roles(equation, d, per_direction)
    nets = {role: constant_net(d + 1, value) for role in roles}
    return WeightBundle(equation=equation, roles=roles, nets=nets, per_direction=per_direction)


def _role_points(role: str, batch: TrainBatch) -> np.ndarray:
    """(t, x) rows of the sample set a role's norm is estimated on."""
    if role in INTERIOR_ROLES or role.startswith("diffusion"):
        return np.column_stack([batch.interior_t, batch.interior_x])
    if role == "boundary":
        return np.column_stack([batch.boundary_t, batch.boundary_x])
    if role.startswith("init"):
        return np.column_stack([np.zeros(batch.n2), batch.initial_x])
    if role.startswith("term"):
        return np.column_stack([np.full(batch.n2, batch.T), batch.terminal_x])
    raise ValueError(f"unknown role {role!r}")


def penalty(weights: WeightBundle, batch: TrainBatch) -> float:
    """Sum over weight nets of mean (phi - 1)^2 over the net's own sample set."""
    total = 0.0
    for role in weights.roles:
        P = _role_points(role, batch)
        w = forward_batch(weights.nets[role], P)
        total += float(np.mean((w - 1.0) ** 2))
    return total


# ---------------------------------------------------------------------------
# LossBreakdown
# ---------------------------------------------------------------------------


@dataclass
class LossBreakdown:
    eq_term: float
    boundary_term: float
    penalty_term: float
    total: float

    @staticmethod
    def build(eq: float, bnd: float, pen: float, lam: float, rho: float) -> "LossBreakdown":
        return LossBreakdown(eq, bnd, pen, eq + lam * bnd - rho * pen)

    def csv_row(self, iteration: int) -> str:
        return ",".join(
            [str(iteration)]
            + [repr(v) for v in (self.eq_term, self.boundary_term, self.penalty_term, self.total)]
        )


# ---------------------------------------------------------------------------
# Interior stencil evaluation. One forward over every point the stencils
# probe; block index ranges are kept so gradient upstreams can be scattered
# back onto the same rows.
# ---------------------------------------------------------------------------


@dataclass
class InteriorStencil:
    P0: np.ndarray  # (n, d+1) interior centers
    u_c: np.ndarray
    D: np.ndarray  # discrete time derivative (first for heat, second for wave)
    L: np.ndarray  # (n, d) per-direction second differences
    lap: np.ndarray
    nrows: int
    blocks: Dict[str, slice]
    cache: Optional[object] = None


def _stack_interior_points(equation: str, t: np.ndarray, X: np.ndarray, h: float):
    n, d = X.shape
    blocks: Dict[str, slice] = {}
    mats: List[np.ndarray] = []

    def add(name: str, tt: np.ndarray, xx: np.ndarray):
        start = sum(m.shape[0] for m in mats)
        mats.append(np.column_stack([tt, xx]))
        blocks[name] = slice(start, start + n)

    add("c", t, X)
    if equation == HEAT:
        add("t1", t + h, X)
        add("t2", t + 2.0 * h, X)
    else:
        add("tm", t - h, X)
        add("tp", t + h, X)
    for j in range(d):
        e = np.zeros(d)
        e[j] = h
        add(f"xp{j}", t, X + e)
        add(f"xm{j}", t, X - e)
    return np.vstack(mats), blocks


def interior_stencil(
    u, equation: str, t: np.ndarray, X: np.ndarray, h: float, want_cache: bool = False
) -> InteriorStencil:
    t = np.asarray(t, dtype=float)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, d = X.shape
    P_all, blocks = _stack_interior_points(equation, t, X, h)
    cache = None
    if want_cache:
        vals, cache = forward_batch_cached(u, P_all)
    else:
        vals = as_batch_field(u)(P_all)
    u_c = vals[blocks["c"]]
    if equation == HEAT:
        D = combine_dt(u_c, vals[blocks["t1"]], vals[blocks["t2"]], h)
    else:
        D = combine_second(vals[blocks["tm"]], u_c, vals[blocks["tp"]], h)
    L = np.empty((n, d))
    for j in range(d):
        L[:, j] = combine_second(vals[blocks[f"xm{j}"]], u_c, vals[blocks[f"xp{j}"]], h)
    lap = L[:, 0].copy()
    for j in range(1, d):  # sequential sum, same order as the scalar Laplacian
        lap = lap + L[:, j]
    return InteriorStencil(
        P0=np.column_stack([t, X]),
        u_c=u_c,
        D=D,
        L=L,
        lap=lap,
        nrows=P_all.shape[0],
        blocks=blocks,
        cache=cache,
    )


def discrete_pde_values(u, equation: str, t: np.ndarray, X: np.ndarray, v: Callable, h: float):
    """Unweighted discrete operator values (time derivative - Laplacian + v(u))
    at the given points, plus the stencil evaluation they came from.

    Single combination site shared by the test metrics and by manufactured
    forcing fields, so that a forcing defined as the operator of a known state
    cancels bit for bit."""
    st = interior_stencil(u, equation, t, X, h)
    return st.D - st.lap + v(st.u_c), st


def _slice_points(t0: float, X: np.ndarray, h: float, with_velocity: bool):
    """Rows for a time slice; velocity adds the two forward-stencil shifts."""
    n = X.shape[0]
    cols = [np.column_stack([np.full(n, t0), X])]
    if with_velocity:
        cols.append(np.column_stack([np.full(n, t0 + h), X]))
        cols.append(np.column_stack([np.full(n, t0 + 2.0 * h), X]))
    return np.vstack(cols), n


# ---------------------------------------------------------------------------
# Loss assembly (and, on request, exact parameter gradients).
# ---------------------------------------------------------------------------


def loss_and_grads(
    spec: ProblemSpec,
    batch: TrainBatch,
    u_net,
    f_net,
    weights: Optional[WeightBundle] = None,
    want_grads: bool = False,
):
    """Evaluate the training loss; optionally also every parameter gradient.

    weights=None evaluates the standard form (all weights 1, no penalty).
    With want_grads=True, u_net, f_net and all bundle nets must be Mlp
    instances; the returned dict maps "u", "f", and "w:<role>" to MlpGrads.
    """
    spec.check_batch(batch)
    if weights is not None and weights.equation != spec.equation:
        raise ValueError("weight bundle equation does not match problem")
    h = spec.fd.h
    d = spec.d
    n1, n2 = batch.n1, batch.n2
    m = n1 + 2 * n2
    wave = spec.equation == WAVE

    st = interior_stencil(u_net, spec.equation, batch.interior_t, batch.interior_x, h, want_cache=want_grads)

    if want_grads:
        f0, f_cache = forward_batch_cached(f_net, st.P0)
    else:
        f0 = as_batch_field(f_net)(st.P0)

    ind = indicator_batch(spec.region, batch.interior_x)
    ctrl = f0 * ind if spec.control == INTERNAL else f0 * st.u_c

    # Weight values per role; caches and upstream accumulators for the ascent grads.
    w_vals: Dict[str, np.ndarray] = {}
    w_caches: Dict[str, object] = {}
    w_points: Dict[str, np.ndarray] = {}
    w_upstream: Dict[str, np.ndarray] = {}

    def weight_values(role: str, P: np.ndarray) -> np.ndarray:
        if weights is None:
            return np.ones(P.shape[0])
        net = weights.nets[role]
        if want_grads:
            out, cache = forward_batch_cached(net, P)
            w_caches[role] = cache
        else:
            out = forward_batch(net, P)
        w_vals[role] = out
        w_points[role] = P
        w_upstream[role] = np.zeros(P.shape[0])
        return out

    PB = np.column_stack([batch.boundary_t, batch.boundary_x])
    PI_all, _ = _slice_points(0.0, batch.initial_x, h, with_velocity=wave)
    PT_all, _ = _slice_points(batch.T, batch.terminal_x, h, with_velocity=wave)
    PI0 = PI_all[:n2]
    PT0 = PT_all[:n2]

    w_time = weight_values("time", st.P0)
    if weights is not None and weights.per_direction:
        W2 = np.column_stack([weight_values(f"diffusion_{j}", st.P0) for j in range(d)])
    else:
        w2 = weight_values("diffusion", st.P0)
        W2 = np.repeat(w2[:, None], d, axis=1)
    w_nonlin = weight_values("nonlin", st.P0)
    w_ctrl = weight_values("control", st.P0)
    w_bnd = weight_values("boundary", PB)
    w_iu = weight_values("init_u", PI0)
    w_id = weight_values("init_data", PI0)
    w_tu = weight_values("term_u", PT0)
    w_td = weight_values("term_data", PT0)

    # Interior residual and equation term.
    diff_term = W2[:, 0] * st.L[:, 0]
    for j in range(1, d):
        diff_term = diff_term + W2[:, j] * st.L[:, j]
    r = w_time * st.D - diff_term + w_nonlin * spec.v(st.u_c) - w_ctrl * ctrl
    eq = float(np.mean(r * r))

    # Boundary block.
    if want_grads:
        uB, uB_cache = forward_batch_cached(u_net, PB)
        uI_all, uI_cache = forward_batch_cached(u_net, PI_all)
        uT_all, uT_cache = forward_batch_cached(u_net, PT_all)
    else:
        u_field = as_batch_field(u_net)
        uB, uI_all, uT_all = u_field(PB), u_field(PI_all), u_field(PT_all)

    uI = uI_all[:n2]
    uT = uT_all[:n2]
    d0 = spec.data.u0(batch.initial_x)
    zT = spec.data.z0(batch.terminal_x)
    b_vals = w_bnd * uB
    e_init = w_iu * uI - w_id * d0
    e_term = w_tu * uT - w_td * zT
    bnd_sum = float(np.sum(b_vals * b_vals)) + float(np.sum(e_init * e_init)) + float(np.sum(e_term * e_term))

    if wave:
        w_ivu = weight_values("init_vel", PI0)
        w_ivd = weight_values("init_vel_data", PI0)
        w_tvu = weight_values("term_vel", PT0)
        w_tvd = weight_values("term_vel_data", PT0)
        Dt0 = combine_dt(uI, uI_all[n2 : 2 * n2], uI_all[2 * n2 :], h)
        DtT = combine_dt(uT, uT_all[n2 : 2 * n2], uT_all[2 * n2 :], h)
        u1v = spec.data.u1(batch.initial_x)
        z1v = spec.data.z1(batch.terminal_x)
        e_iv = w_ivu * Dt0 - w_ivd * u1v
        e_tv = w_tvu * DtT - w_tvd * z1v
        bnd_sum += float(np.sum(e_iv * e_iv)) + float(np.sum(e_tv * e_tv))

    bnd = bnd_sum / m

    # Penalty block (weighted mode only).
    pen = 0.0
    if weights is not None:
        for role in weights.roles:
            w = w_vals[role]
            pen += float(np.mean((w - 1.0) ** 2))

    breakdown = LossBreakdown.build(eq, bnd, pen, spec.lam, spec.rho)
    if not want_grads:
        return breakdown, None

    # ---- adjoint pass -----------------------------------------------------
    lam = spec.lam
    g = (2.0 / n1) * r  # d(eq)/d(residual_i)
    w2_rowsum = W2[:, 0].copy()
    for j in range(1, d):
        w2_rowsum = w2_rowsum + W2[:, j]

    up_all = np.zeros(st.nrows)
    if wave:
        dD_dc = -2.0 / (h * h)
        up_all[st.blocks["tm"]] = g * w_time / (h * h)
        up_all[st.blocks["tp"]] = g * w_time / (h * h)
    else:
        dD_dc = -3.0 / (2.0 * h)
        up_all[st.blocks["t1"]] = g * w_time * (2.0 / h)
        up_all[st.blocks["t2"]] = g * w_time * (-1.0 / (2.0 * h))
    c_up = g * (w_time * dD_dc + w2_rowsum * (2.0 / (h * h)) + w_nonlin * spec.dv(st.u_c))
    if spec.control == BILINEAR:
        c_up = c_up - g * w_ctrl * f0
    up_all[st.blocks["c"]] = c_up
    for j in range(d):
        up_all[st.blocks[f"xp{j}"]] = g * (-W2[:, j] / (h * h))
        up_all[st.blocks[f"xm{j}"]] = g * (-W2[:, j] / (h * h))

    u_grads = backprop_batch(u_net, st.cache, up_all)

    up_B = lam * (2.0 / m) * b_vals * w_bnd
    u_grads.add_(backprop_batch(u_net, uB_cache, up_B))

    up_I = np.zeros(PI_all.shape[0])
    up_T = np.zeros(PT_all.shape[0])
    up_I[:n2] = lam * (2.0 / m) * e_init * w_iu
    up_T[:n2] = lam * (2.0 / m) * e_term * w_tu
    if wave:
        gv0 = lam * (2.0 / m) * e_iv * w_ivu
        gvT = lam * (2.0 / m) * e_tv * w_tvu
        up_I[:n2] += gv0 * (-3.0 / (2.0 * h))
        up_I[n2 : 2 * n2] = gv0 * (2.0 / h)
        up_I[2 * n2 :] = gv0 * (-1.0 / (2.0 * h))
        up_T[:n2] += gvT * (-3.0 / (2.0 * h))
        up_T[n2 : 2 * n2] = gvT * (2.0 / h)
        up_T[2 * n2 :] = gvT * (-1.0 / (2.0 * h))
    u_grads.add_(backprop_batch(u_net, uI_cache, up_I))
    u_grads.add_(backprop_batch(u_net, uT_cache, up_T))

    if spec.control == INTERNAL:
        up_f = g * (-w_ctrl * ind)
    else:
        up_f = g * (-w_ctrl * st.u_c)
    f_grads = backprop_batch(f_net, f_cache, up_f)

    grads = {"u": u_grads, "f": f_grads}
    if weights is not None:
        w_upstream["time"] += g * st.D
        if weights.per_direction:
            for j in range(d):
                w_upstream[f"diffusion_{j}"] += g * (-st.L[:, j])
        else:
            w_upstream["diffusion"] += g * (-st.lap)
        w_upstream["nonlin"] += g * spec.v(st.u_c)
        w_upstream["control"] += g * (-ctrl)
        w_upstream["boundary"] += lam * (2.0 / m) * b_vals * uB
        w_upstream["init_u"] += lam * (2.0 / m) * e_init * uI
        w_upstream["init_data"] += lam * (2.0 / m) * e_init * (-d0)
        w_upstream["term_u"] += lam * (2.0 / m) * e_term * uT
        w_upstream["term_data"] += lam * (2.0 / m) * e_term * (-zT)
        if wave:
            w_upstream["init_vel"] += lam * (2.0 / m) * e_iv * Dt0
            w_upstream["init_vel_data"] += lam * (2.0 / m) * e_iv * (-u1v)
            w_upstream["term_vel"] += lam * (2.0 / m) * e_tv * DtT
            w_upstream["term_vel_data"] += lam * (2.0 / m) * e_tv * (-z1v)
        for role in weights.roles:
            n_role = w_points[role].shape[0]
            w_upstream[role] += -spec.rho * (2.0 / n_role) * (w_vals[role] - 1.0)
            grads[f"w:{role}"] = backprop_batch(weights.nets[role], w_caches[role], w_upstream[role])
    return breakdown, grads


def loss_heat(
    spec: ProblemSpec, batch: TrainBatch, u_net, f_net, weights: Optional[WeightBundle] = None
) -> LossBreakdown:
    """Discrete heat loss; weights=None gives the standard (unweighted) form."""
    if spec.equation != HEAT:
        raise ValueError("loss_heat needs a heat problem")
    breakdown, _ = loss_and_grads(spec, batch, u_net, f_net, weights, want_grads=False)
    return breakdown


def loss_wave(
    spec: ProblemSpec, batch: TrainBatch, u_net, f_net, weights: Optional[WeightBundle] = None
) -> LossBreakdown:
    """Discrete wave loss; weights=None gives the standard (unweighted) form."""
    if spec.equation != WAVE:
        raise ValueError("loss_wave needs a wave problem")
    breakdown, _ = loss_and_grads(spec, batch, u_net, f_net, weights, want_grads=False)
    return breakdown


def training_loss(
    spec: ProblemSpec, batch: TrainBatch, u_net, f_net, weights: Optional[WeightBundle] = None
) -> LossBreakdown:
    """Dispatch on the problem's equation kind."""
    breakdown, _ = loss_and_grads(spec, batch, u_net, f_net, weights, want_grads=False)
    return breakdown


# ---------------------------------------------------------------------------
# Scalar residuals (single point), built on the scalar stencils.
# ---------------------------------------------------------------------------


def _point_weights(spec: ProblemSpec, weights: Optional[WeightBundle], t: float, x: np.ndarray):
    d = spec.d
    if weights is None:
        return 1.0, np.ones(d), 1.0, 1.0
    p = as_point_field
    w_time = p(weights.nets["time"])(t, x)
    if weights.per_direction:
        w_diff = np.array([p(weights.nets[f"diffusion_{j}"])(t, x) for j in range(d)])
    else:
        w_diff = np.full(d, p(weights.nets["diffusion"])(t, x))
    w_nonlin = p(weights.nets["nonlin"])(t, x)
    w_ctrl = p(weights.nets["control"])(t, x)
    return w_time, w_diff, w_nonlin, w_ctrl


def residual_point_heat(
    spec: ProblemSpec, u_net, f_net, weights: Optional[WeightBundle], t: float, x
) -> float:
    """Pointwise weighted heat residual; weights=None uses unit weights."""
    x = np.asarray(x, dtype=float)
    h = spec.fd.h
    u = as_point_field(u_net)
    f = as_point_field(f_net)
    w_time, w_diff, w_nonlin, w_ctrl = _point_weights(spec, weights, t, x)
    uc = u(t, x)
    parts = fd_laplacian_parts(u, t, x, h)
    diff_term = float(w_diff[0]) * float(parts[0])
    for j in range(1, spec.d):
        diff_term = diff_term + float(w_diff[j]) * float(parts[j])
    if spec.control == INTERNAL:
        ctrl = f(t, x) * indicator_batch(spec.region, x[None, :])[0]
    else:
        ctrl = f(t, x) * uc
    return w_time * fd_dt(u, t, x, h) - diff_term + w_nonlin * spec.v(uc) - w_ctrl * ctrl


def residual_point_wave(
    spec: ProblemSpec, u_net, f_net, weights: Optional[WeightBundle], t: float, x
) -> float:
    """Pointwise weighted wave residual; weights=None uses unit weights."""
    x = np.asarray(x, dtype=float)
    h = spec.fd.h
    u = as_point_field(u_net)
    f = as_point_field(f_net)
    w_time, w_diff, w_nonlin, w_ctrl = _point_weights(spec, weights, t, x)
    uc = u(t, x)
    parts = fd_laplacian_parts(u, t, x, h)
    diff_term = float(w_diff[0]) * float(parts[0])
    for j in range(1, spec.d):
        diff_term = diff_term + float(w_diff[j]) * float(parts[j])
    if spec.control == INTERNAL:
        ctrl = f(t, x) * indicator_batch(spec.region, x[None, :])[0]
    else:
        ctrl = f(t, x) * uc
    return w_time * fd_dtt(u, t, x, h) - diff_term + w_nonlin * spec.v(uc) - w_ctrl * ctrl
