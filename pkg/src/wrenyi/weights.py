"""Weight-function algebra.

Catalog families (constant, exp-linear e^{g x}, power |x|^c, polynomials
in |x|, polynomials in a density f, density powers f^k |f'|^m) plus the
derived weights needed by the inequality checks: the deviation-rescaled
weight phi*(x) = phi(r x), the conjugate-exponent powers

    rho_1 = phi^{alpha/(1-p)},     rho_2 = phi^{p beta/(p-1)},

the transport-reduced weight phi~(x) = phi(s(x)) and

    rho_s(x) = (phi~(x) / phi(x)^p)^{1/(1-p)},
    rho_s'(x) = rho_s(x) [ (s'(x) phi'(s(x)) / phi(s(x))) / (1-p)
                           + (p/(p-1)) (phi'(x) / phi(x)) ].

Each weight carries an evaluator, an analytic derivative and its kink
points; antiderivatives psi(x) = int_0^x phi and psi_bar(x) = int_0^x
phi' are analytic for the elementary families and quadrature-backed
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError
from .numerics import QuadratureConfig, integrate

__all__ = [
    "WeightFunction",
    "Antiderivatives",
    "make_constant",
    "make_exp_linear",
    "make_power",
    "make_abs_polynomial",
    "make_density_polynomial",
    "make_density_power",
    "power_of",
    "product",
    "compose_with_map",
    "derive_phi_star",
    "derive_rho12",
    "derive_rho_s",
    "antiderivatives",
    "nonnegativity_violation",
    "parse_weight",
]


@dataclass(frozen=True)
class WeightFunction:
    """Nonnegative weight with evaluator, derivative and kink points."""

    family: str
    params: dict
    fn: callable
    dfn: callable
    kinks: tuple[float, ...] = ()

    def __call__(self, x):
        return self.fn(x)

    def derivative(self, x):
        return self.dfn(x)

    @property
    def is_constant(self) -> bool:
        return self.family == "constant"


@dataclass(frozen=True)
class Antiderivatives:
    """psi(x) = int_0^x phi(t) dt and psi_bar(x) = int_0^x phi'(t) dt."""

    psi: callable
    psi_bar: callable


def _vec(impl):
    def fn(x):
        arr = np.asarray(x, dtype=float)
        out = impl(np.atleast_1d(arr).astype(float))
        return float(out[0]) if arr.ndim == 0 else out

    return fn


# ---------------------------------------------------------------------------
# Elementary families
# ---------------------------------------------------------------------------


def make_constant(v: float = 1.0) -> WeightFunction:
    if v < 0:
        raise InputError(f"constant weight must be nonnegative, got {v}")
    v = float(v)
    return WeightFunction(
        "constant",
        {"v": v},
        _vec(lambda x: np.full_like(x, v)),
        _vec(lambda x: np.zeros_like(x)),
    )


def make_exp_linear(gamma: float) -> WeightFunction:
    gamma = float(gamma)
    if gamma == 0.0:
        return make_constant(1.0)

    def _f(x):
        with np.errstate(over="ignore"):
            return np.exp(gamma * x)

    def _df(x):
        with np.errstate(over="ignore"):
            return gamma * np.exp(gamma * x)

    return WeightFunction("exp-linear", {"gamma": gamma}, _vec(_f), _vec(_df))


def make_power(c: float) -> WeightFunction:
    """|x|^c; for c < 0 the weight is singular at 0."""
    c = float(c)
    if c == 0.0:
        return make_constant(1.0)

    def _f(x):
        ax = np.abs(x)
        with np.errstate(divide="ignore"):
            return ax**c

    def _df(x):
        ax = np.abs(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = c * ax ** (c - 1.0) * np.sign(x)
        return np.where(ax > 0, out, 0.0 if c > 1 else np.nan)

    return WeightFunction("power", {"c": c}, _vec(_f), _vec(_df), kinks=(0.0,))


def make_abs_polynomial(coeffs) -> WeightFunction:
    """sum_i a_i |x|^i; may take negative values for sign-mixed a_i."""
    a = tuple(float(c) for c in coeffs)
    if not a:
        raise InputError("abs-polynomial needs at least one coefficient")
    powers = np.arange(len(a))
    arr = np.asarray(a)

    def _f(x):
        ax = np.abs(x)[:, None]
        return (arr * ax**powers).sum(axis=1)

    def _df(x):
        ax = np.abs(x)[:, None]
        terms = arr[1:] * powers[1:] * ax ** (powers[1:] - 1)
        return terms.sum(axis=1) * np.sign(x)

    return WeightFunction(
        "abs-polynomial", {"coeffs": a}, _vec(_f), _vec(_df), kinks=(0.0,)
    )


def make_density_polynomial(coeffs, density) -> WeightFunction:
    """sum_i b_i f(x)^i for a fixed density f."""
    b = tuple(float(c) for c in coeffs)
    if not b:
        raise InputError("density-polynomial needs at least one coefficient")
    powers = np.arange(len(b))
    arr = np.asarray(b)

    def _f(x):
        fx = np.asarray(density.pdf(x))[:, None]
        return (arr * fx**powers).sum(axis=1)

    def _df(x):
        fx = np.asarray(density.pdf(x))[:, None]
        dfx = np.asarray(density.dpdf(x))
        terms = arr[1:] * powers[1:] * fx ** (powers[1:] - 1)
        return terms.sum(axis=1) * dfx

    return WeightFunction(
        "density-polynomial",
        {"coeffs": b, "density": density},
        _vec(_f),
        _vec(_df),
        kinks=tuple(density.singularities),
    )


def make_density_power(k: float, m: float, density) -> WeightFunction:
    """f(x)^k |f'(x)|^m for a fixed density f (evaluated where f > 0)."""
    k, m = float(k), float(m)

    def _f(x):
        fx = np.asarray(density.pdf(x), dtype=float)
        dfx = np.abs(np.asarray(density.dpdf(x), dtype=float))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = fx**k * dfx**m
        return np.where((fx > 0) & ((dfx > 0) | (m == 0)), out, 0.0)

    def _df(x):
        # d/dx [f^k |f'|^m] = f^k |f'|^m (k f'/f + m f''/f') with f'' numeric.
        from .numerics import differentiate

        x = np.atleast_1d(x)
        out = np.empty_like(x)
        for i, xi in enumerate(x):
            fx = float(density.pdf(xi))
            dfx = float(density.dpdf(xi))
            if fx <= 0 or (dfx == 0 and m != 0):
                out[i] = 0.0
                continue
            d2 = differentiate(density.dpdf, float(xi))
            out[i] = (fx**k * abs(dfx) ** m) * (k * dfx / fx + m * d2 / dfx)
        return out

    return WeightFunction(
        "density-power",
        {"k": k, "m": m, "density": density},
        _vec(_f),
        _vec(_df),
        kinks=tuple(density.singularities),
    )


# ---------------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------------


def power_of(w: WeightFunction, r: float) -> WeightFunction:
    """phi^r with derivative r phi^{r-1} phi'; requires phi > 0 where used."""
    r = float(r)
    if not math.isfinite(r):
        raise InputError(f"power-of exponent must be finite, got {r}")
    if r == 1.0:
        return w
    if w.is_constant:
        v = w.params["v"]
        if v <= 0 and r < 0:
            raise DomainError("cannot take a negative power of the zero weight")
        return make_constant(v**r)

    def _f(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.asarray(w.fn(x), dtype=float) ** r

    def _df(x):
        base = np.asarray(w.fn(x), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return r * base ** (r - 1.0) * np.asarray(w.dfn(x), dtype=float)

    return WeightFunction(
        "power-of", {"base": w, "r": r}, _vec(_f), _vec(_df), kinks=w.kinks
    )


def product(w1: WeightFunction, w2: WeightFunction) -> WeightFunction:
    def _f(x):
        return np.asarray(w1.fn(x)) * np.asarray(w2.fn(x))

    def _df(x):
        return np.asarray(w1.dfn(x)) * np.asarray(w2.fn(x)) + np.asarray(
            w1.fn(x)
        ) * np.asarray(w2.dfn(x))

    kinks = tuple(sorted(set(w1.kinks) | set(w2.kinks)))
    return WeightFunction(
        "product", {"left": w1, "right": w2}, _vec(_f), _vec(_df), kinks=kinks
    )


def compose_with_map(w: WeightFunction, s) -> WeightFunction:
    """phi~(x) = phi(s(x)) with chain-rule derivative s'(x) phi'(s(x)).

    ``s`` must expose callables ``s(x)`` and ``s.derivative(x)``.
    """
    if w.is_constant:
        return w

    def _f(x):
        return np.asarray(w.fn(s(x)), dtype=float)

    def _df(x):
        return np.asarray(s.derivative(x), dtype=float) * np.asarray(
            w.dfn(s(x)), dtype=float
        )

    return WeightFunction("composed", {"base": w, "map": s}, _vec(_f), _vec(_df))


def derive_phi_star(w: WeightFunction, sigma_f: float, sigma_g: float) -> WeightFunction:
    """phi*(x) = phi((sigma_f / sigma_g) x)."""
    if not (sigma_f > 0 and math.isfinite(sigma_f)):
        raise InputError(f"sigma_f must be finite positive, got {sigma_f}")
    if not (sigma_g > 0 and math.isfinite(sigma_g)):
        raise InputError(f"sigma_g must be finite positive, got {sigma_g}")
    r = sigma_f / sigma_g
    if w.is_constant or r == 1.0:
        return w

    def _f(x):
        return np.asarray(w.fn(r * np.asarray(x, dtype=float)), dtype=float)

    def _df(x):
        return r * np.asarray(w.dfn(r * np.asarray(x, dtype=float)), dtype=float)

    kinks = tuple(k / r for k in w.kinks)
    return WeightFunction(
        "phi-star", {"base": w, "ratio": r}, _vec(_f), _vec(_df), kinks=kinks
    )


def derive_rho12(w: WeightFunction, alpha: float, p: float):
    """(rho_1, rho_2) = (phi^{alpha/(1-p)}, phi^{p beta/(p-1)})."""
    if p == 1.0:
        raise InputError("rho_1/rho_2 are undefined at p = 1; use the reduced weight")
    beta = holder_conjugate(alpha)
    if math.isinf(alpha):
        raise InputError("rho_1 exponent is infinite at alpha = inf")
    if math.isinf(beta):
        raise InputError("rho_2 exponent is infinite at alpha = 1")
    rho1 = power_of(w, alpha / (1.0 - p))
    rho2 = power_of(w, p * beta / (p - 1.0))
    return rho1, rho2


def derive_rho_s(w: WeightFunction, s, p: float) -> WeightFunction:
    """rho_s = (phi(s(x)) / phi(x)^p)^{1/(1-p)} with the product-rule derivative."""
    if p == 1.0:
        raise InputError("rho_s is undefined at p = 1")
    if w.is_constant:
        v = w.params["v"]
        if v <= 0:
            raise DomainError("rho_s undefined for a vanishing weight")
        return make_constant(v)
    e = 1.0 / (1.0 - p)

    def _f(x):
        num = np.asarray(w.fn(s(x)), dtype=float)
        den = np.asarray(w.fn(x), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (num / den**p) ** e
        if np.any(~np.isfinite(out) & (den > 0) & (num > 0)):
            raise DomainError("rho_s evaluator overflowed")
        return out

    def _df(x):
        x = np.asarray(x, dtype=float)
        sx = np.asarray(s(x), dtype=float)
        dsx = np.asarray(s.derivative(x), dtype=float)
        phi_s = np.asarray(w.fn(sx), dtype=float)
        dphi_s = np.asarray(w.dfn(sx), dtype=float)
        phi_x = np.asarray(w.fn(x), dtype=float)
        dphi_x = np.asarray(w.dfn(x), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = (phi_s / phi_x**p) ** e
            bracket = e * (dsx * dphi_s / phi_s) + (p / (p - 1.0)) * (
                dphi_x / phi_x
            )
        return rho * bracket

    return WeightFunction(
        "rho-s", {"base": w, "map": s, "p": p}, _vec(_f), _vec(_df)
    )


def holder_conjugate(alpha: float) -> float:
    """beta with 1/alpha + 1/beta = 1; conventions 1 <-> inf."""
    if alpha == 1.0:
        return math.inf
    if math.isinf(alpha):
        return 1.0
    if not alpha > 1.0:
        raise InputError(f"Holder conjugate needs alpha in [1, inf], got {alpha}")
    return alpha / (alpha - 1.0)


# ---------------------------------------------------------------------------
# Antiderivatives
# ---------------------------------------------------------------------------


def _psi_quadrature(fn, kinks):
    def psi(x):
        x = float(x)
        if x == 0.0:
            return 0.0
        lo, hi = (0.0, x) if x > 0 else (x, 0.0)
        cfg = QuadratureConfig(singularities=tuple(kinks))
        res = integrate(_vec(lambda t: np.asarray(fn(t), dtype=float)), (lo, hi), cfg)
        if res.status == "divergent" or not math.isfinite(res.value):
            raise DomainError("antiderivative quadrature diverged")
        return res.value if x > 0 else -res.value

    return psi


def antiderivatives(w: WeightFunction) -> Antiderivatives:
    """psi and psi_bar, analytic for the elementary families."""
    fam = w.family
    if fam == "constant":
        v = w.params["v"]
        return Antiderivatives(lambda x: v * float(x), lambda x: 0.0)
    if fam == "exp-linear":
        g = w.params["gamma"]
        if g == 0.0:
            return Antiderivatives(lambda x: float(x), lambda x: 0.0)
        return Antiderivatives(
            lambda x: (math.exp(g * float(x)) - 1.0) / g,
            lambda x: math.exp(g * float(x)) - 1.0,
        )
    if fam == "power":
        c = w.params["c"]
        if c <= -1.0:
            raise DomainError(f"|x|^{c} is not integrable near 0")

        def psi(x):
            x = float(x)
            return math.copysign(abs(x) ** (c + 1.0) / (c + 1.0), x)

        if c > 0:

            def psi_bar(x):
                return abs(float(x)) ** c

        elif c == 0:

            def psi_bar(x):
                return 0.0

        else:
            raise DomainError(f"derivative of |x|^{c} is not integrable near 0")

        return Antiderivatives(psi, psi_bar)
    if fam == "abs-polynomial":
        a = w.params["coeffs"]

        def psi(x):
            x = float(x)
            return math.copysign(
                sum(ai * abs(x) ** (i + 1) / (i + 1) for i, ai in enumerate(a)), x
            )

        def psi_bar(x):
            return sum(ai * abs(float(x)) ** i for i, ai in enumerate(a)) - a[0]

        return Antiderivatives(psi, psi_bar)
    # Generic: quadrature of phi and phi'.
    return Antiderivatives(
        _psi_quadrature(w.fn, w.kinks), _psi_quadrature(w.dfn, w.kinks)
    )


# ---------------------------------------------------------------------------
# Guards and descriptors
# ---------------------------------------------------------------------------


def nonnegativity_violation(
    w: WeightFunction, support, n: int = 1001
) -> float | None:
    """Most negative sampled value of the weight, or None if none found."""
    lo, hi = support
    lo = lo if math.isfinite(lo) else -20.0
    hi = hi if math.isfinite(hi) else 20.0
    x = np.linspace(lo, hi, n)
    vals = np.asarray(w.fn(x), dtype=float)
    vals = vals[np.isfinite(vals)]
    if vals.size and float(vals.min()) < -1e-12:
        return float(vals.min())
    return None


def parse_weight(text: str, base=None) -> WeightFunction:
    """Build a weight from its text descriptor.

    ``const:v``, ``expw:g``, ``pow:c``, ``abspoly:a0,a1,...``,
    ``fpoly:b0,b1,...`` and ``fpow:k,m`` (the last two need the base
    density they are a function of).
    """
    text = text.strip()
    if ":" not in text:
        raise InputError(f"unknown weight descriptor {text!r}")
    name, args = text.split(":", 1)
    try:
        vals = [float(v) for v in args.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise InputError(f"cannot parse weight arguments {args!r}") from exc
    if name == "const":
        if len(vals) != 1:
            raise InputError("const descriptor takes one value")
        return make_constant(vals[0])
    if name == "expw":
        if len(vals) != 1:
            raise InputError("expw descriptor takes one rate")
        return make_exp_linear(vals[0])
    if name == "pow":
        if len(vals) != 1:
            raise InputError("pow descriptor takes one exponent")
        return make_power(vals[0])
    if name == "abspoly":
        return make_abs_polynomial(vals)
    if name == "fpoly":
        if base is None:
            raise InputError("fpoly weight needs a base density")
        return make_density_polynomial(vals, base)
    if name == "fpow":
        if len(vals) != 2:
            raise InputError("fpow descriptor takes k,m")
        if base is None:
            raise InputError("fpow weight needs a base density")
        return make_density_power(vals[0], vals[1], base)
    raise InputError(f"unknown weight family {name!r}")
