"""Coefficient models for u_t - Lap(a(t,x,u)u) + div(b(t,x,u)u) = 0.

A model carries beta(t,x,r) = a(t,x,r)*r and bstar(t,x,r) = b(t,x,r)*r
with their partial derivatives, a majorant h(x), and model constants.
``check_hypotheses`` samples a compact box and reports the empirical
monotonicity constant nu, the sup norms, the induced step threshold
lambda_zero = 2*nu/|bstar_r|_inf^2, and every violated inequality.

Closure conventions: ``t`` is a float, ``x`` an array of shape (d,) + S
(coordinate components stacked on axis 0), ``r`` an array of shape S.
Scalar-valued closures return shape S, vector-valued ones (d,) + S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateBox, NegativeDiffusion, NonFiniteCoefficient

Scalar = Callable[[float, np.ndarray, np.ndarray], np.ndarray]
Vector = Callable[[float, np.ndarray, np.ndarray], np.ndarray]

_FD_REL = 1e-5  # centered-difference fallback step: delta = 1e-5 * (1 + |arg|)
_FD2_REL = 1e-4  # wider step for second spatial differences


@dataclass
class CoefficientModel:
    """Immutable after construction; every closure is pure."""

    name: str
    beta: Scalar
    params: dict = field(default_factory=dict)
    beta_r: Optional[Scalar] = None
    beta_x: Optional[Vector] = None
    beta_t: Optional[Scalar] = None
    b: Optional[Vector] = None
    b_star: Optional[Vector] = None
    b_star_r: Optional[Vector] = None
    h_bound: Optional[Callable[[np.ndarray], np.ndarray]] = None
    b_div_x: Optional[Scalar] = None
    beta_lap_x: Optional[Scalar] = None

    def __post_init__(self):
        beta = self.beta
        if self.beta_r is None:
            def beta_r(t, x, r, _f=beta):
                d = _FD_REL * (1.0 + np.abs(r))
                return (_f(t, x, r + d) - _f(t, x, r - d)) / (2.0 * d)
            self.beta_r = beta_r
        if self.beta_t is None:
            def beta_t(t, x, r, _f=beta):
                d = _FD_REL * (1.0 + abs(t))
                return (_f(t + d, x, r) - _f(t - d, x, r)) / (2.0 * d)
            self.beta_t = beta_t
        if self.beta_x is None:
            def beta_x(t, x, r, _f=beta):
                comps = []
                for j in range(x.shape[0]):
                    d = _FD_REL * (1.0 + np.abs(x[j]))
                    xp, xm = x.copy(), x.copy()
                    xp[j] = x[j] + d
                    xm[j] = x[j] - d
                    comps.append((_f(t, xp, r) - _f(t, xm, r)) / (2.0 * d))
                return np.stack(comps)
            self.beta_x = beta_x
        if self.beta_lap_x is None:
            def beta_lap_x(t, x, r, _f=beta):
                out = np.zeros(np.broadcast(x[0], r).shape)
                for j in range(x.shape[0]):
                    d = _FD2_REL * (1.0 + np.abs(x[j]))
                    xp, xm = x.copy(), x.copy()
                    xp[j] = x[j] + d
                    xm[j] = x[j] - d
                    out = out + (_f(t, xp, r) - 2.0 * _f(t, x, r) + _f(t, xm, r)) / (d * d)
                return out
            self.beta_lap_x = beta_lap_x
        if self.b is not None:
            if self.b_star is None:
                def b_star(t, x, r, _b=self.b):
                    return _b(t, x, r) * r
                self.b_star = b_star
            if self.b_star_r is None:
                def b_star_r(t, x, r, _f=self.b_star):
                    d = _FD_REL * (1.0 + np.abs(r))
                    return (_f(t, x, r + d) - _f(t, x, r - d)) / (2.0 * d)
                self.b_star_r = b_star_r
            if self.b_div_x is None:
                def b_div_x(t, x, r, _b=self.b):
                    out = np.zeros(np.broadcast(x[0], r).shape)
                    for j in range(x.shape[0]):
                        d = _FD_REL * (1.0 + np.abs(x[j]))
                        xp, xm = x.copy(), x.copy()
                        xp[j] = x[j] + d
                        xm[j] = x[j] - d
                        out = out + (_b(t, xp, r)[j] - _b(t, xm, r)[j]) / (2.0 * d)
                    return out
                self.b_div_x = b_div_x
        if self.h_bound is None:
            self.h_bound = lambda x: np.zeros(x.shape[1:])

    @property
    def has_drift(self) -> bool:
        return self.b is not None


def diffusion_a(model: CoefficientModel, t: float, x: np.ndarray, r: np.ndarray) -> np.ndarray:
    """a = beta/r, continuously extended by beta_r at r = 0."""
    r = np.asarray(r, dtype=np.float64)
    safe = np.where(r != 0.0, r, 1.0)
    return np.where(r != 0.0, model.beta(t, x, r) / safe, model.beta_r(t, x, r))


@dataclass(frozen=True)
class CoefficientEval:
    beta: np.ndarray
    beta_r: np.ndarray
    beta_x: np.ndarray
    beta_t: np.ndarray
    b: np.ndarray
    b_star: np.ndarray
    b_star_r: np.ndarray
    a: np.ndarray
    sigma: np.ndarray


def eval_coefficients(model: CoefficientModel, t: float, x, r) -> CoefficientEval:
    """Evaluate every derived quantity at (t, x, r).

    Accepts scalar x (one-dimensional point) or an array shaped (d,) + S
    matching r's shape S. Raises NonFiniteCoefficient / NegativeDiffusion.
    """
    r = np.asarray(r, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == r.ndim:  # no leading component axis given
        x = x[None]
    d = x.shape[0]
    shape = r.shape
    zero_vec = np.zeros((d,) + shape)
    a = diffusion_a(model, t, x, r)
    if np.any(a < 0):
        raise NegativeDiffusion(f"a(t,x,r) < 0 at t={t}, model {model.name!r}")
    out = CoefficientEval(
        beta=model.beta(t, x, r),
        beta_r=model.beta_r(t, x, r),
        beta_x=np.broadcast_to(model.beta_x(t, x, r), (d,) + shape),
        beta_t=np.broadcast_to(model.beta_t(t, x, r), shape),
        b=model.b(t, x, r) if model.has_drift else zero_vec,
        b_star=model.b_star(t, x, r) if model.has_drift else zero_vec,
        b_star_r=model.b_star_r(t, x, r) if model.has_drift else zero_vec,
        a=a,
        sigma=np.sqrt(2.0 * a),
    )
    for name in ("beta", "beta_r", "beta_x", "beta_t", "b", "b_star", "b_star_r", "a", "sigma"):
        if not np.all(np.isfinite(getattr(out, name))):
            raise NonFiniteCoefficient(f"{name} non-finite at t={t}, model {model.name!r}")
    return out


# ---------------------------------------------------------------------------
# hypothesis verification on a compact box


@dataclass(frozen=True)
class HypothesisBox:
    """Compact sampling box [0,T] x [-L,L]^d x [r_min, r_max]."""

    t_max: float
    x_half_width: float
    r_min: float
    r_max: float
    d: int = 1

    def __post_init__(self):
        if self.t_max < 0 or self.x_half_width <= 0 or not self.r_min < self.r_max:
            raise DegenerateBox(f"empty range in {self}")
        if self.d not in (1, 2):
            raise DegenerateBox(f"d must be 1 or 2, got {self.d}")


@dataclass
class Violation:
    hypothesis: str
    t: float
    x: tuple
    r: float
    residual: float

    def to_dict(self) -> dict:
        return {"hypothesis": self.hypothesis, "t": self.t, "x": list(self.x),
                "r": self.r, "residual": self.residual}


@dataclass
class HypothesisReport:
    nu_hat: float
    sup_beta: float
    sup_beta_r: float
    sup_b: float
    sup_rb_r: float
    sup_b_star_r: float
    lambda_zero: float
    capital_lambda: float
    violations: list
    box: HypothesisBox
    samples: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        def enc(v):
            return "inf" if math.isinf(v) else v
        return {
            "nu_hat": self.nu_hat,
            "sup_beta": self.sup_beta,
            "sup_beta_r": self.sup_beta_r,
            "sup_b": self.sup_b,
            "sup_rb_r": self.sup_rb_r,
            "sup_b_star_r": self.sup_b_star_r,
            "lambda_zero": enc(self.lambda_zero),
            "capital_lambda": enc(self.capital_lambda),
            "violations": [v.to_dict() for v in self.violations],
            "box": {"t_max": self.box.t_max, "x_half_width": self.box.x_half_width,
                    "r_min": self.box.r_min, "r_max": self.box.r_max, "d": self.box.d},
            "samples": self.samples,
        }


def _sample_axes(box: HypothesisBox, samples: int):
    if samples < 2:
        raise ValueError(f"need at least 2 samples per axis, got {samples}")
    ts = np.linspace(0.0, box.t_max, samples) if box.t_max > 0 else np.array([0.0])
    xs = np.linspace(-box.x_half_width, box.x_half_width, samples)
    rs = np.linspace(box.r_min, box.r_max, samples)
    if box.d == 1:
        X = xs[None, :]
    else:
        X0, X1 = np.meshgrid(xs, xs, indexing="ij")
        X = np.stack([X0.ravel(), X1.ravel()])
    return ts, X, rs


def check_hypotheses(model: CoefficientModel, box: HypothesisBox,
                     samples: int = 17) -> HypothesisReport:
    """Sample the box and report empirical constants plus inequality violations.

    nu_hat is the min over all sampled pairs (r, rbar) at each (t, x) of
    (beta(r) - beta(rbar))(r - rbar)/|r - rbar|^2. A violated hypothesis is
    recorded, never raised.
    """
    ts, X, rs = _sample_axes(box, samples)
    M = X.shape[1]
    Xb = X[:, :, None]  # (d, M, 1) broadcasting against r (1, s)
    rb = np.broadcast_to(rs[None, :], (M, rs.size))
    dr = rs[:, None] - rs[None, :]
    off = dr != 0.0
    dr2 = np.where(off, dr * dr, 1.0)

    nu_hat = math.inf
    nu_at = (0.0, tuple(X[:, 0]), rs[0])
    sups = {"beta": 0.0, "beta_r": 0.0, "b": 0.0, "rb_r": 0.0, "b_star_r": 0.0}
    worst: dict[str, Violation] = {}

    def track(hyp, residuals, t, r_vals):
        i = int(np.argmax(residuals))
        val = float(residuals.flat[i])
        if val <= 1e-10 * max(1.0, abs(val)) or val <= 1e-10:
            return
        m, k = np.unravel_index(i, residuals.shape)
        v = Violation(hyp, float(t), tuple(float(c) for c in X[:, m]), float(r_vals[m, k]), val)
        if hyp not in worst or val > worst[hyp].residual:
            worst[hyp] = v

    hx = np.asarray(model.h_bound(X), dtype=np.float64)[:, None]  # (M, 1)

    for t in ts:
        beta = model.beta(float(t), Xb, rb)  # (M, s)
        beta_r = model.beta_r(float(t), Xb, rb)
        beta_t = np.broadcast_to(model.beta_t(float(t), Xb, rb), beta.shape)
        beta_x = np.broadcast_to(model.beta_x(float(t), Xb, rb), (X.shape[0],) + beta.shape)
        sups["beta"] = max(sups["beta"], float(np.max(np.abs(beta))))
        sups["beta_r"] = max(sups["beta_r"], float(np.max(np.abs(beta_r))))

        # monotonicity quotient over all r-pairs at each sampled (t, x)
        dbeta = beta[:, :, None] - beta[:, None, :]
        Q = np.where(off[None], dbeta * dr[None] / dr2[None], math.inf)
        qmin = float(np.min(Q))
        if qmin < nu_hat:
            nu_hat = qmin
            m, i, j = np.unravel_index(int(np.argmin(Q)), Q.shape)
            nu_at = (float(t), tuple(float(c) for c in X[:, m]), float(rs[i]))

        beta_x_norm = np.sqrt(np.sum(beta_x * beta_x, axis=0))
        track("H1: |beta_t| + |beta_x| <= h(x)|r|",
              np.abs(beta_t) + beta_x_norm - hx * np.abs(rb), t, rb)

        if model.has_drift:
            bv = model.b(float(t), Xb, rb)
            bs = model.b_star(float(t), Xb, rb)
            bsr = model.b_star_r(float(t), Xb, rb)
            bnorm = np.sqrt(np.sum(bv * bv, axis=0))
            bsnorm = np.sqrt(np.sum(bs * bs, axis=0))
            bsrnorm = np.sqrt(np.sum(bsr * bsr, axis=0))
            rbr = bsr - bv  # r * b_r = bstar_r - b
            sups["b"] = max(sups["b"], float(np.max(bnorm)))
            sups["rb_r"] = max(sups["rb_r"], float(np.max(np.sqrt(np.sum(rbr * rbr, axis=0)))))
            sups["b_star_r"] = max(sups["b_star_r"], float(np.max(bsrnorm)))
            track("H2: |b*(t,x,r)| <= h(x)|r|", bsnorm - hx * np.abs(rb), t, rb)
            track("H2': |b*_r(t,x,r)| <= h(x)", bsrnorm - hx, t, rb)

    if nu_hat <= 0:
        worst["H1: monotonicity nu > 0"] = Violation(
            "H1: monotonicity nu > 0", nu_at[0], nu_at[1], nu_at[2], -nu_hat)

    lambda_zero = math.inf if sups["b_star_r"] == 0.0 else 2.0 * nu_hat / sups["b_star_r"] ** 2
    lam_cap = capital_lambda(model, box, samples)
    return HypothesisReport(
        nu_hat=nu_hat, sup_beta=sups["beta"], sup_beta_r=sups["beta_r"],
        sup_b=sups["b"], sup_rb_r=sups["rb_r"], sup_b_star_r=sups["b_star_r"],
        lambda_zero=lambda_zero, capital_lambda=lam_cap,
        violations=sorted(worst.values(), key=lambda v: v.hypothesis),
        box=box, samples=samples)


def capital_lambda(model: CoefficientModel, box: HypothesisBox, samples: int = 17) -> float:
    """Empirical sup of |r * div_x b| + |Lap_x beta| over the sampled box."""
    ts, X, rs = _sample_axes(box, samples)
    Xb = X[:, :, None]
    rb = np.broadcast_to(rs[None, :], (X.shape[1], rs.size))
    worst = 0.0
    for t in ts:
        lap = np.broadcast_to(model.beta_lap_x(float(t), Xb, rb), rb.shape)
        total = np.abs(lap).astype(np.float64)
        if model.has_drift:
            div = np.broadcast_to(model.b_div_x(float(t), Xb, rb), rb.shape)
            total = total + np.abs(rb * div)
        if not np.all(np.isfinite(total)):
            raise NonFiniteCoefficient(f"capital_lambda non-finite for model {model.name!r}")
        worst = max(worst, float(np.max(total)))
    return worst


# ---------------------------------------------------------------------------
# builtin models


def _drift_closures(scale: float, width: float):
    """Saturating drift b_j(x) = scale * tanh(x_j / width), r-independent."""

    def b(t, x, r):
        return np.broadcast_to(scale * np.tanh(x / width), x.shape[:1] + np.broadcast(x[0], r).shape)

    def b_star(t, x, r):
        return scale * np.tanh(x / width) * r[None]

    def b_star_r(t, x, r):
        return b(t, x, r)

    def b_div_x(t, x, r):
        return (scale / width) * np.sum(1.0 / np.cosh(x / width) ** 2, axis=0)

    def h_drift(x):
        return np.sqrt(np.sum((scale * np.tanh(x / width)) ** 2, axis=0))

    return b, b_star, b_star_r, b_div_x, h_drift


def linear_model(a0: float = 1.0, b0=0.0) -> CoefficientModel:
    """beta = a0 * r with a constant drift vector b0 (scalar means every component)."""
    b0 = np.atleast_1d(np.asarray(b0, dtype=np.float64))
    has_drift = bool(np.any(b0 != 0.0))

    def beta(t, x, r):
        return a0 * np.asarray(r, dtype=np.float64)

    def _bvec(x, r):
        d = x.shape[0]
        comps = b0 if b0.size == d else np.full(d, b0[0])
        shape = np.broadcast(x[0], r).shape
        return np.broadcast_to(comps.reshape((d,) + (1,) * len(shape)), (d,) + shape)

    kw = {}
    if has_drift:
        kw = dict(
            b=lambda t, x, r: _bvec(x, r),
            b_star=lambda t, x, r: _bvec(x, r) * np.asarray(r)[None],
            b_star_r=lambda t, x, r: _bvec(x, r),
            b_div_x=lambda t, x, r: np.zeros(np.broadcast(x[0], r).shape),
            h_bound=lambda x: np.full(x.shape[1:], float(np.sqrt(np.sum(
                (b0 if b0.size == x.shape[0] else np.full(x.shape[0], b0[0])) ** 2)))),
        )
    return CoefficientModel(
        name="linear",
        params={"a0": a0, "b0": b0.tolist()},
        beta=beta,
        beta_r=lambda t, x, r: np.full(np.shape(r), float(a0)),
        beta_x=lambda t, x, r: np.zeros(x.shape[:1] + np.broadcast(x[0], r).shape),
        beta_t=lambda t, x, r: np.zeros(np.broadcast(x[0], r).shape),
        beta_lap_x=lambda t, x, r: np.zeros(np.broadcast(x[0], r).shape),
        **kw,
    )


def bosonic_model(gamma0: float = 1.0, drift_scale: float = 0.0,
                  drift_width: float = 1.0) -> CoefficientModel:
    """beta = gamma0 * ln(1+|r|) * sign(r), odd in r, optional saturating drift."""
    if gamma0 <= 0:
        raise ValueError("gamma0 must be positive")

    def beta(t, x, r):
        return gamma0 * np.log1p(np.abs(r)) * np.sign(r)

    kw = {}
    if drift_scale != 0.0:
        b, bs, bsr, bdiv, h_drift = _drift_closures(drift_scale, drift_width)
        kw = dict(b=b, b_star=bs, b_star_r=bsr, b_div_x=bdiv, h_bound=lambda x: h_drift(x))
    return CoefficientModel(
        name="bosonic",
        params={"gamma0": gamma0, "drift_scale": drift_scale, "drift_width": drift_width},
        beta=beta,
        beta_r=lambda t, x, r: gamma0 / (1.0 + np.abs(r)) * np.ones(np.broadcast(x[0], r).shape),
        beta_x=lambda t, x, r: np.zeros(x.shape[:1] + np.broadcast(x[0], r).shape),
        beta_t=lambda t, x, r: np.zeros(np.broadcast(x[0], r).shape),
        beta_lap_x=lambda t, x, r: np.zeros(np.broadcast(x[0], r).shape),
        **kw,
    )


def tanh_drift_model(a0: float = 1.0, drift_scale: float = 1.0,
                     drift_width: float = 1.0) -> CoefficientModel:
    """Linear diffusion beta = a0*r with the saturating drift b = c*tanh(x/w)."""
    lin = linear_model(a0=a0)
    b, bs, bsr, bdiv, h_drift = _drift_closures(drift_scale, drift_width)
    return CoefficientModel(
        name="tanh_drift",
        params={"a0": a0, "drift_scale": drift_scale, "drift_width": drift_width},
        beta=lin.beta, beta_r=lin.beta_r, beta_x=lin.beta_x, beta_t=lin.beta_t,
        beta_lap_x=lin.beta_lap_x,
        b=b, b_star=bs, b_star_r=bsr, b_div_x=bdiv,
        h_bound=lambda x: h_drift(x),
    )


def time_varying_model(gamma0: float = 1.0, kappa: float = 0.5, t_max: float = 1.0,
                       drift_scale: float = 0.0, drift_width: float = 1.0) -> CoefficientModel:
    """Bosonic-type beta with gamma(t,x) = gamma0 * (1 + kappa * t * exp(-|x|^2))."""
    if gamma0 <= 0 or kappa < 0:
        raise ValueError("need gamma0 > 0 and kappa >= 0")

    def _x2(x):
        return np.sum(x * x, axis=0)

    def gamma(t, x):
        return gamma0 * (1.0 + kappa * t * np.exp(-_x2(x)))

    def beta(t, x, r):
        return gamma(t, x) * np.log1p(np.abs(r)) * np.sign(r)

    def beta_r(t, x, r):
        return gamma(t, x) / (1.0 + np.abs(r))

    def beta_t(t, x, r):
        return gamma0 * kappa * np.exp(-_x2(x)) * np.log1p(np.abs(r)) * np.sign(r)

    def beta_x(t, x, r):
        core = -2.0 * gamma0 * kappa * t * np.exp(-_x2(x)) * np.log1p(np.abs(r)) * np.sign(r)
        return x * core[None]

    def beta_lap_x(t, x, r):
        d = x.shape[0]
        lap_gamma = gamma0 * kappa * t * np.exp(-_x2(x)) * (4.0 * _x2(x) - 2.0 * d)
        return lap_gamma * np.log1p(np.abs(r)) * np.sign(r)

    kw = {}
    h_drift = None
    if drift_scale != 0.0:
        b, bs, bsr, bdiv, h_drift = _drift_closures(drift_scale, drift_width)
        kw = dict(b=b, b_star=bs, b_star_r=bsr, b_div_x=bdiv)

    def h_bound(x):
        # |beta_t| <= g0*k*exp(-|x|^2)|r|, |beta_x| <= 2|x| g0*k*t_max*exp(-|x|^2)|r|
        base = gamma0 * kappa * np.exp(-_x2(x)) * (1.0 + 2.0 * np.sqrt(_x2(x)) * t_max)
        if h_drift is not None:
            base = base + h_drift(x)
        return base

    return CoefficientModel(
        name="time_varying",
        params={"gamma0": gamma0, "kappa": kappa, "t_max": t_max,
                "drift_scale": drift_scale, "drift_width": drift_width},
        beta=beta, beta_r=beta_r, beta_x=beta_x, beta_t=beta_t,
        beta_lap_x=beta_lap_x, h_bound=h_bound, **kw,
    )


def nonmonotone_model(wiggle: float = 0.6, freq: float = 3.0) -> CoefficientModel:
    """Deliberately violates monotonicity (beta_r dips negative); for testing
    the hypothesis checker and CLI error paths only."""
    return CoefficientModel(
        name="nonmonotone",
        params={"wiggle": wiggle, "freq": freq},
        beta=lambda t, x, r: r + wiggle * np.sin(freq * r) * np.ones(np.broadcast(x[0], r).shape),
        beta_r=lambda t, x, r: 1.0 + wiggle * freq * np.cos(freq * r) * np.ones(np.broadcast(x[0], r).shape),
        beta_x=lambda t, x, r: np.zeros(x.shape[:1] + np.broadcast(x[0], r).shape),
        beta_t=lambda t, x, r: np.zeros(np.broadcast(x[0], r).shape),
        beta_lap_x=lambda t, x, r: np.zeros(np.broadcast(x[0], r).shape),
    )


MODEL_FACTORIES = {
    "linear": linear_model,
    "bosonic": bosonic_model,
    "tanh_drift": tanh_drift_model,
    "time_varying": time_varying_model,
    "nonmonotone": nonmonotone_model,
}

# models expected to satisfy the hypotheses (nonmonotone is a negative control)
WELL_POSED_MODELS = ("linear", "bosonic", "tanh_drift", "time_varying")


def make_model(name: str, **params) -> CoefficientModel:
    try:
        factory = MODEL_FACTORIES[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choices: {sorted(MODEL_FACTORIES)}") from None
    return factory(**params)
