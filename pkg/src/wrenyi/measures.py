"""Weighted information measures.

For a density f, weight phi >= 0 and orders p (entropy order) and alpha
(moment order, Holder conjugate beta):

    weighted entropy          h_phi(f)   = -int phi f log f
    relative weighted entropy D_phi(f|g) =  int phi f log(f/g)
    weighted Renyi entropy    h_{phi,p}  = log(int phi f^p) / (1-p),  p != 1
    weighted Renyi power      N_{phi,p}  = exp(h_{phi,p});
                              N_{phi,1}  = exp(h_phi(f) / E_f[phi])
    relative Renyi entropy    D_{phi,p}(f|g) = log(int phi g^{p-1} f)/(1-p)
                              + log(int phi g^p)/p - log(int phi f^p)/(p(1-p))
                              (p = 1: D_phi(f|g)/E_f[phi])
    generalized moment        mu_{phi,alpha} = int phi |x|^alpha f
    generalized deviation     sigma_{phi,alpha}:
                                exp(int phi f log|x| / E_f[phi])   alpha = 0
                                mu_{phi,alpha}^(1/alpha)           0<alpha<inf
                                esssup{phi(x)|x| : f(x) > 0}       alpha = inf
    Fisher information        J_{alpha,p}^(beta p) = int |f^{p-2} f'|^beta f
    weighted Fisher info      J^{w,phi}_{alpha,p}:
                                int phi |f^{p-2} f'|^beta f        1<alpha<inf
                                esssup phi |f^{p-2} f'|            alpha = 1
                                V(phi f^p/p) - int phi' f^p/p      alpha = inf

Exponential densities with constant or exp-linear weights use exact
closed forms (the integral family int e^{gx} (l e^{-lx})^q dx =
l^q/(ql - g), valid for ql > g); everything else is quadrature.
Every operation returns a MeasureValue carrying the branch that fired,
assumption margins and accumulated warnings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .densities import Density
from .errors import DomainError, InputError
from .numerics import (
    QuadratureConfig,
    essential_supremum,
    gamma_fn,
    integrate,
    total_variation,
)
from .weights import WeightFunction, holder_conjugate, nonnegativity_violation

__all__ = [
    "OrderParams",
    "MeasureValue",
    "expectation",
    "weighted_entropy",
    "relative_weighted_entropy",
    "weighted_renyi_entropy",
    "weighted_renyi_power",
    "relative_renyi_entropy",
    "relative_renyi_power",
    "generalized_moment",
    "generalized_deviation",
    "fisher_information",
    "weighted_fisher_information",
]


@dataclass(frozen=True)
class OrderParams:
    """The (p, alpha, beta) triple with beta the Holder conjugate of alpha."""

    p: float
    alpha: float
    beta: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.p > 0:
            raise InputError(f"entropy order p must be positive, got {self.p}")
        if self.alpha < 0:
            raise InputError(f"moment order alpha must be >= 0, got {self.alpha}")
        beta = holder_conjugate(self.alpha) if self.alpha >= 1 else math.nan
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class MeasureValue:
    value: float
    error: float = 0.0
    branch: str = ""
    flags: dict = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# Quadrature plumbing
# ---------------------------------------------------------------------------


def _config(f: Density, w: WeightFunction | None = None, extra=()) -> QuadratureConfig:
    hints = set(f.singularities) | set(extra)
    if w is not None:
        hints |= set(w.kinks)
    return QuadratureConfig(singularities=tuple(sorted(hints)))


def _quad(integrand, f: Density, w=None, extra=(), what="integral"):
    res = integrate(integrand, f.support, _config(f, w, extra))
    if res.status == "divergent" or not math.isfinite(res.value):
        raise DomainError(f"{what} diverges for {f.family} density")
    warns = ()
    if not res.converged:
        warns = (f"{what}: quadrature tolerance not met (err={res.error:.2e})",)
    return res.value, res.error, warns


def _masked(f: Density, core):
    """Integrand equal to core(x, f(x)) where f > 0 and 0 elsewhere.

    Evaluating weights only on {f > 0} keeps inf * 0 = nan artifacts from
    tails where the density underflows.
    """

    def integrand(x):
        x = np.asarray(x, dtype=float)
        fx = np.asarray(f.pdf(x), dtype=float)
        out = np.zeros_like(fx)
        m = fx > 0
        if np.any(m):
            out[m] = core(x[m], fx[m])
        return out

    return integrand


def _warn_negativity(w: WeightFunction, f: Density):
    v = nonnegativity_violation(w, f.support)
    if v is not None:
        return (f"weight takes negative values on the support (min {v:.3g})",)
    return ()


def _is_exponential(f: Density) -> bool:
    return f.family == "exponential"


def _exp_rate(f: Density) -> float:
    return f.params["lam"]


def _explinear_gamma(w: WeightFunction) -> float | None:
    """gamma if the weight is exp-linear (constant counts as gamma = 0)."""
    if w.family == "exp-linear":
        return w.params["gamma"]
    if w.family == "constant":
        return 0.0
    return None


def _const_factor(w: WeightFunction) -> float:
    return w.params["v"] if w.family == "constant" else 1.0


def _exp_phi_fp(lam: float, gamma: float, p: float) -> tuple[float, float]:
    """(int e^{gx} (l e^{-lx})^p dx, margin p*l - gamma); needs margin > 0."""
    margin = p * lam - gamma
    if margin <= 0:
        raise DomainError(
            f"int phi f^p diverges: validity p*lam - gamma = {margin:.6g} <= 0"
        )
    return lam**p / margin, margin


# ---------------------------------------------------------------------------
# Expectations and entropies
# ---------------------------------------------------------------------------


def expectation(f: Density, w: WeightFunction, method: str = "auto") -> MeasureValue:
    """E_f[phi].  ``method="quadrature"`` bypasses the closed forms."""
    g = _explinear_gamma(w)
    if method == "auto" and _is_exponential(f) and g is not None:
        lam = _exp_rate(f)
        val, margin = _exp_phi_fp(lam, g, 1.0)
        val *= _const_factor(w)
        return MeasureValue(val, 0.0, "closed-form", {"lam-gamma": margin})
    val, err, warns = _quad(
        _masked(f, lambda x, fx: np.asarray(w(x), dtype=float) * fx),
        f,
        w,
        what="E_f[phi]",
    )
    return MeasureValue(val, err, "quadrature", {}, warns)


def weighted_entropy(
    f: Density, w: WeightFunction, method: str = "auto"
) -> MeasureValue:
    """h_phi(f) = -int phi f log f, with the 0 log 0 = 0 convention."""
    warns = _warn_negativity(w, f)
    g = _explinear_gamma(w)
    if method == "auto" and _is_exponential(f) and g is not None:
        lam = _exp_rate(f)
        if lam - g <= 0:
            raise DomainError(f"entropy integral diverges: lam - gamma <= 0")
        m0 = lam / (lam - g)
        m1 = lam / (lam - g) ** 2
        val = _const_factor(w) * (-math.log(lam) * m0 + lam * m1)
        return MeasureValue(val, 0.0, "closed-form", {"lam-gamma": lam - g}, warns)

    integrand = _masked(
        f, lambda x, fx: -np.asarray(w(x), dtype=float) * fx * np.log(fx)
    )
    val, err, qwarns = _quad(integrand, f, w, what="weighted entropy")
    return MeasureValue(val, err, "quadrature", {}, warns + qwarns)


def relative_weighted_entropy(
    f: Density, g: Density, w: WeightFunction, method: str = "auto"
) -> MeasureValue:
    """D_phi(f||g) = int phi f log(f/g); +inf when f charges {g = 0}."""
    warns = _warn_negativity(w, f)
    gam = _explinear_gamma(w)
    if method == "auto" and _is_exponential(f) and _is_exponential(g) and gam is not None:
        l1, l2 = _exp_rate(f), _exp_rate(g)
        if l1 - gam <= 0:
            raise DomainError("relative entropy integral diverges: lam1 - gamma <= 0")
        m0 = l1 / (l1 - gam)
        m1 = l1 / (l1 - gam) ** 2
        val = _const_factor(w) * (math.log(l1 / l2) * m0 + (l2 - l1) * m1)
        return MeasureValue(
            val, 0.0, "closed-form", {"lam1-gamma": l1 - gam}, warns
        )

    # Divergence when f > 0 on a region where g = 0.
    lo_f, hi_f = f.support
    lo_g, hi_g = g.support
    if lo_f < lo_g or hi_f > hi_g:
        return MeasureValue(
            math.inf, math.inf, "divergent", {}, warns + ("supports not nested",)
        )

    def core(x, fx):
        gx = np.asarray(g.pdf(x), dtype=float)
        wx = np.asarray(w(x), dtype=float)
        # Points where g underflows inside {f > 0} contribute
        # phi f log(f/g) ~ phi f |log g|, which is far below resolvable
        # mass for nested supports; structural support mismatches were
        # already reported as divergent above.
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(gx > 0, np.log(fx) - np.log(gx), 0.0)
        return wx * fx * t

    integrand = _masked(f, core)
    val, err, qwarns = _quad(
        integrand, f, w, extra=g.singularities, what="relative weighted entropy"
    )
    return MeasureValue(val, err, "quadrature", {}, warns + qwarns)


def _phi_fp_integral(f: Density, w: WeightFunction, p: float, method: str = "auto"):
    """(int phi f^p, error, flags, warnings, branch)."""
    g = _explinear_gamma(w)
    if method == "auto" and _is_exponential(f) and g is not None:
        lam = _exp_rate(f)
        val, margin = _exp_phi_fp(lam, g, p)
        return (
            _const_factor(w) * val,
            0.0,
            {"p*lam-gamma": margin},
            (),
            "closed-form",
        )

    integrand = _masked(f, lambda x, fx: np.asarray(w(x), dtype=float) * fx**p)
    val, err, warns = _quad(integrand, f, w, what="int phi f^p")
    return val, err, {}, warns, "quadrature"


def weighted_renyi_entropy(
    f: Density, w: WeightFunction, p: float, method: str = "auto"
) -> MeasureValue:
    """h_{phi,p}(f) = log(int phi f^p)/(1-p) for p > 0, p != 1."""
    if not p > 0:
        raise InputError(f"Renyi order p must be positive, got {p}")
    if p == 1.0:
        raise InputError(
            "p = 1 has no Renyi-entropy branch; use weighted_renyi_power"
        )
    warns = _warn_negativity(w, f)
    ival, ierr, flags, qwarns, branch = _phi_fp_integral(f, w, p, method)
    if not ival > 0:
        raise DomainError(f"int phi f^p = {ival!r}, log undefined")
    val = math.log(ival) / (1.0 - p)
    err = ierr / (abs(1.0 - p) * ival)
    return MeasureValue(val, err, branch, flags, warns + qwarns)


def weighted_renyi_power(
    f: Density, w: WeightFunction, p: float, method: str = "auto"
) -> MeasureValue:
    """N_{phi,p}(f) = exp(h_{phi,p}(f)); at p = 1, exp(h_phi(f)/E_f[phi])."""
    if not p > 0:
        raise InputError(f"Renyi order p must be positive, got {p}")
    if p == 1.0:
        h = weighted_entropy(f, w, method)
        e = expectation(f, w, method)
        if not e.value > 0:
            raise DomainError(f"E_f[phi] = {e.value!r} must be positive at p = 1")
        val = math.exp(h.value / e.value)
        err = val * (h.error / e.value + abs(h.value) * e.error / e.value**2)
        return MeasureValue(
            val,
            err,
            "p=1-entropy-power",
            {**h.flags, "E_f[phi]": e.value},
            h.warnings + e.warnings,
        )
    h = weighted_renyi_entropy(f, w, p, method)
    val = math.exp(h.value)
    return MeasureValue(val, val * h.error, h.branch, h.flags, h.warnings)


def _relative_integrals(
    f: Density, g: Density, w: WeightFunction, p: float, method: str = "auto"
):
    """The three integrals of the relative Renyi power, with flags."""
    gam = _explinear_gamma(w)
    if method == "auto" and _is_exponential(f) and _is_exponential(g) and gam is not None:
        l1, l2 = _exp_rate(f), _exp_rate(g)
        c = _const_factor(w)
        m_cross = l2 * (p - 1.0) + l1 - gam
        m1 = l1 * p - gam
        m2 = l2 * p - gam
        flags = {
            "lam2*(p-1)+lam1-gamma": m_cross,
            "lam1*p-gamma": m1,
            "lam2*p-gamma": m2,
        }
        if min(m_cross, m1, m2) <= 0:
            raise DomainError(
                "relative Renyi integrals diverge; violated margins: "
                + ", ".join(k for k, v in flags.items() if v <= 0)
            )
        i_cross = c * l1 * l2 ** (p - 1.0) / m_cross
        i_g = c * l2**p / m2
        i_f = c * l1**p / m1
        return (i_cross, i_g, i_f), (0.0, 0.0, 0.0), flags, (), "closed-form"

    def core(x, fx):
        gx = np.asarray(g.pdf(x), dtype=float)
        wx = np.asarray(w(x), dtype=float)
        # Where g underflows to 0 inside {f > 0} the true product
        # phi g^{p-1} f is itself far below resolvable mass for the
        # nested-support families handled here, so it is dropped; a
        # genuine divergence already blows up inside the representable
        # band and is caught by the quadrature status.
        with np.errstate(divide="ignore"):
            t = np.where(gx > 0, gx ** (p - 1.0), 0.0)
        return wx * t * fx

    cross = _masked(f, core)
    iv1, ie1, w1 = _quad(cross, f, w, extra=g.singularities, what="int phi g^(p-1) f")
    iv2, ie2, flg2, w2, _ = _phi_fp_integral(g, w, p, method)
    iv3, ie3, flg3, w3, _ = _phi_fp_integral(f, w, p, method)
    return (
        (iv1, iv2, iv3),
        (ie1, ie2, ie3),
        {**flg2, **flg3},
        w1 + w2 + w3,
        "quadrature",
    )


def relative_renyi_entropy(
    f: Density, g: Density, w: WeightFunction, p: float, method: str = "auto"
) -> MeasureValue:
    """D_{phi,p}(f||g); at p = 1 this is D_phi(f||g) / E_f[phi]."""
    if not p > 0:
        raise InputError(f"order p must be positive, got {p}")
    warns = _warn_negativity(w, f)
    if p == 1.0:
        d = relative_weighted_entropy(f, g, w, method)
        e = expectation(f, w, method)
        if not e.value > 0:
            raise DomainError(f"E_f[phi] = {e.value!r} must be positive at p = 1")
        eg = expectation(g, w, method)
        val = d.value / e.value
        err = d.error / e.value + abs(d.value) * e.error / e.value**2
        flags = {**d.flags, "E_f[phi]-E_g[phi]": e.value - eg.value}
        return MeasureValue(
            val, err, "p=1-" + d.branch, flags, warns + d.warnings + e.warnings
        )
    (i1, i2, i3), (e1, e2, e3), flags, qwarns, branch = _relative_integrals(
        f, g, w, p, method
    )
    if min(i1, i2, i3) <= 0:
        raise DomainError("relative Renyi integrals must be positive")
    val = (
        math.log(i1) / (1.0 - p)
        + math.log(i2) / p
        - math.log(i3) / (p * (1.0 - p))
    )
    err = (
        e1 / (abs(1.0 - p) * i1)
        + e2 / (p * i2)
        + e3 / (p * abs(1.0 - p) * i3)
    )
    return MeasureValue(val, err, branch, flags, warns + qwarns)


def relative_renyi_power(
    f: Density, g: Density, w: WeightFunction, p: float, method: str = "auto"
) -> MeasureValue:
    """N_{phi,p}(f, g) = exp(D_{phi,p}(f||g))."""
    d = relative_renyi_entropy(f, g, w, p, method)
    val = math.exp(d.value)
    return MeasureValue(val, val * d.error, d.branch, d.flags, d.warnings)


# ---------------------------------------------------------------------------
# Moments and deviations
# ---------------------------------------------------------------------------


def generalized_moment(
    f: Density, w: WeightFunction, alpha: float, method: str = "auto"
) -> MeasureValue:
    """mu_{phi,alpha}(f) = int phi |x|^alpha f for alpha in (0, inf)."""
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InputError(f"moment order must be in (0, inf), got {alpha}")
    warns = _warn_negativity(w, f)
    if method == "auto" and _is_exponential(f):
        lam = _exp_rate(f)
        if w.family in ("constant", "power", "abs-polynomial"):
            if w.family == "constant":
                coeffs = {0.0: w.params["v"]}
            elif w.family == "power":
                coeffs = {w.params["c"]: 1.0}
            else:
                coeffs = {float(i): c for i, c in enumerate(w.params["coeffs"])}
            val = 0.0
            for e, c in coeffs.items():
                if c == 0.0:
                    continue
                if alpha + e <= -1.0:
                    raise DomainError(f"moment of order {alpha + e} diverges at 0")
                val += c * gamma_fn(alpha + e + 1.0) / lam ** (alpha + e)
            return MeasureValue(val, 0.0, "closed-form", {}, warns)
        gam = _explinear_gamma(w)
        if gam is not None:
            if lam - gam <= 0:
                raise DomainError("moment integral diverges: lam - gamma <= 0")
            val = (
                _const_factor(w)
                * lam
                * gamma_fn(alpha + 1.0)
                / (lam - gam) ** (alpha + 1.0)
            )
            return MeasureValue(
                val, 0.0, "closed-form", {"lam-gamma": lam - gam}, warns
            )

    integrand = _masked(
        f,
        lambda x, fx: np.asarray(w(x), dtype=float) * np.abs(x) ** alpha * fx,
    )
    val, err, qwarns = _quad(integrand, f, w, extra=(0.0,), what="generalized moment")
    return MeasureValue(val, err, "quadrature", {}, warns + qwarns)


def generalized_deviation(
    f: Density, w: WeightFunction, alpha: float, method: str = "auto"
) -> MeasureValue:
    """sigma_{phi,alpha}(f) over all three branches of the moment order."""
    warns = _warn_negativity(w, f)
    if alpha == 0.0:
        e = expectation(f, w, method)
        if not e.value > 0:
            raise DomainError(f"E_f[phi] = {e.value!r} must be positive at alpha = 0")

        def core(x, fx):
            wx = np.asarray(w(x), dtype=float)
            ax = np.abs(x)
            with np.errstate(divide="ignore"):
                t = np.where(ax > 0, np.log(ax), 0.0)
            return wx * fx * t

        integrand = _masked(f, core)
        lval, lerr, qwarns = _quad(
            integrand, f, w, extra=(0.0, -1.0, 1.0), what="log-moment"
        )
        val = math.exp(lval / e.value)
        err = val * (lerr / e.value + abs(lval) * e.error / e.value**2)
        return MeasureValue(
            val, err, "alpha=0-log", {"E_f[phi]": e.value}, warns + e.warnings + qwarns
        )
    if math.isinf(alpha):

        def fn(x):
            x = np.asarray(x, dtype=float)
            fx = np.asarray(f.pdf(x), dtype=float)
            out = np.full_like(fx, -np.inf)
            m = fx > 0
            if np.any(m):
                out[m] = np.asarray(w(x[m]), dtype=float) * np.abs(x[m])
            return out

        val = essential_supremum(fn, f.support)
        if not math.isfinite(val):
            raise DomainError("esssup of phi(x)|x| is not finite on the support")
        return MeasureValue(val, 1e-10 * max(1.0, abs(val)), "alpha=inf-esssup", {}, warns)
    mu = generalized_moment(f, w, alpha, method)
    if not mu.value > 0:
        raise DomainError(f"generalized moment {mu.value!r} must be positive")
    val = mu.value ** (1.0 / alpha)
    err = val * mu.error / (alpha * mu.value)
    return MeasureValue(val, err, "alpha-moment", mu.flags, mu.warnings)


# ---------------------------------------------------------------------------
# Fisher informations
# ---------------------------------------------------------------------------


def _score_integrand(f: Density, w, p: float, beta: float):
    """phi * |f^{p-2} f'|^beta * f, computed in log space."""

    def integrand(x):
        x = np.asarray(x, dtype=float)
        fx = np.asarray(f.pdf(x), dtype=float)
        dfx = np.asarray(f.dpdf(x), dtype=float)
        out = np.zeros_like(fx)
        m = (fx > 0) & (dfx != 0) & np.isfinite(dfx)
        if np.any(m):
            log_core = (p - 2.0) * np.log(fx[m]) + np.log(np.abs(dfx[m]))
            wx = np.asarray(w(x[m]), dtype=float) if w is not None else 1.0
            out[m] = wx * np.exp(beta * log_core + np.log(fx[m]))
        return out

    return integrand


def fisher_information(f: Density, alpha: float, p: float) -> MeasureValue:
    """J_{alpha,p}(f) = (int |f^{p-2} f'|^beta f)^(1/(beta p)), plus the raw
    integral in the flags."""
    if not (1.0 < alpha < math.inf):
        raise InputError(f"Fisher information needs alpha in (1, inf), got {alpha}")
    beta = holder_conjugate(alpha)
    raw, err, warns = _quad(
        _score_integrand(f, None, p, beta), f, None, what="Fisher integral"
    )
    if raw < 0:
        raise DomainError("Fisher integral must be nonnegative")
    root = raw ** (1.0 / (beta * p)) if raw > 0 else 0.0
    return MeasureValue(
        root, err, "root", {"raw": raw, "beta*p": beta * p}, warns
    )


def weighted_fisher_information(
    f: Density, w: WeightFunction, alpha: float, p: float
) -> MeasureValue:
    """J^{w,phi}_{alpha,p}(f) in its three moment-order branches.

    alpha in (1, inf): the integral int phi |f^{p-2} f'|^beta f.
    alpha = 1: the essential supremum of phi |f^{p-2} f'| (the beta = inf
    convention; callers wanting (J)^{1/beta} use this value directly).
    alpha = inf: V(phi f^p / p) - int phi' f^p / p.
    """
    warns = _warn_negativity(w, f)
    if math.isinf(alpha):
        lo, hi = f.support

        fn = _masked(f, lambda x, fx: np.asarray(w(x), dtype=float) * fx**p / p)

        hints = tuple(f.singularities) + tuple(w.kinks)
        tv = total_variation(fn, f.support, jump_hints=hints)

        corr = _masked(
            f, lambda x, fx: np.asarray(w.derivative(x), dtype=float) * fx**p / p
        )

        cval, cerr, qwarns = (0.0, 0.0, ()) if w.is_constant else _quad(
            corr, f, w, what="int phi' f^p / p"
        )
        val = tv - cval
        return MeasureValue(
            val,
            cerr + 1e-9 * max(1.0, abs(tv)),
            "alpha=inf-variation",
            {"variation": tv, "correction": cval},
            warns + qwarns,
        )
    if alpha == 1.0:

        def fn(x):
            x = np.asarray(x, dtype=float)
            fx = np.asarray(f.pdf(x), dtype=float)
            dfx = np.asarray(f.dpdf(x), dtype=float)
            out = np.full_like(fx, -np.inf)
            m = (fx > 0) & (dfx != 0) & np.isfinite(dfx)
            if np.any(m):
                wx = np.asarray(w(x[m]), dtype=float)
                out[m] = wx * np.exp(
                    (p - 2.0) * np.log(fx[m]) + np.log(np.abs(dfx[m]))
                )
            return out

        val = essential_supremum(fn, f.support)
        if not math.isfinite(val):
            raise DomainError("esssup of phi |f^{p-2} f'| is not finite")
        return MeasureValue(
            val, 1e-9 * max(1.0, abs(val)), "alpha=1-esssup", {}, warns
        )
    if not alpha > 1.0:
        raise InputError(f"weighted Fisher information needs alpha >= 1, got {alpha}")
    beta = holder_conjugate(alpha)
    raw, err, qwarns = _quad(
        _score_integrand(f, w, p, beta), f, w, what="weighted Fisher integral"
    )
    return MeasureValue(raw, err, "integral", {"beta": beta}, warns + qwarns)
