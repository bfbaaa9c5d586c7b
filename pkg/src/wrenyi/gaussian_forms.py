"""Semi-closed forms for the measures of the generalized p-Gaussian G.

All three measures of G (Renyi power N, generalized deviation sigma,
weighted Fisher information J) reduce to one-dimensional expectations
against Beta or Gamma laws.  With a = the normalization constant of G
and beta the Holder conjugate of alpha:

  LambdaT(Z) = E[ phi(-((1-Z)/(p-1))^(1/alpha)) + phi(+...) ]
  LambdaB(Z) = E[ phi(-((1-Z)/(Z(1-p)))^(1/alpha)) + phi(+...) ]
  Theta_a(Z) = E[ phi(-Z^(1/alpha)) + phi(Z^(1/alpha)) ]
  Upsilon(Z) = E[ phi(-e^(-Z)) + phi(e^(-Z)) ]

* alpha in (0,inf), p > 1, with Z ~ Beta((2p-1)/(p-1), 1/alpha) and
  Y ~ Beta(p/(p-1), (alpha+1)/alpha):

      N     = a^-1 2^(1/(p-1)) (p a / (p a + p - 1))^(1/(1-p))
              * LambdaT(Z)^(1/(1-p))                      [a := alpha here]
      sigma = ((2 (p alpha + p - 1))^-1 LambdaT(Y))^(1/alpha)
      J     = (2 (alpha p + p - 1))^-1 a^(beta (p-1)) alpha^beta LambdaT(Y)

  (Substituting the direct-quadrature route fixes the Beta shape order
  of Z; the first shape is (2p-1)/(p-1), pairing the (1-Z) argument of
  LambdaT with a Beta(1/alpha, .) variate as in the Y case.)

* alpha in (0,inf), p in (1/(1+alpha), 1): the same three displays with
  LambdaB and ZB, YB ~ Beta((p(alpha+1)-1)/(alpha(1-p)), 1/alpha resp.
  (alpha+1)/alpha).

* alpha in (0,inf), p = 1, W ~ Gamma((alpha+1)/alpha), WB ~ Gamma(1/alpha):

      N     = a^-1 exp(Theta(W) / (alpha Theta(WB)))
      sigma = ((2 alpha)^-1 Theta(W))^(1/alpha)
      J     = 2^-1 alpha^(beta-1) Theta(W)

* alpha = 0, p > 1, X ~ Gamma((2p-1)/(p-1)), XT ~ Gamma(p/(p-1)):

      N     = a^-1 (p/(2(p-1)))^(1/(1-p)) Upsilon(X)^(1/(1-p))
      sigma = exp(-(p/(p-1)) Upsilon(X) / Upsilon(XT))

  (The exponent p/(p-1) and the law X are forced by direct computation:
  int phi G log|x| = -a Gamma((2p-1)/(p-1)) Upsilon(X) while
  E_G[phi] = a Gamma(p/(p-1)) Upsilon(XT).)

* alpha = inf, p > 0, psi(x) = int_0^x phi, psib(x) = int_0^x phi':

      N     = 2^(p/(p-1)) (psi(1) - psi(-1))^(1/(1-p))    (p != 1; N = 2 at p = 1)
      sigma = esssup{ phi(x) |x| : |x| <= 1 }
      J     = (p 2^p)^-1 (psi(1)-psi(-1)) - 2^(-1-p) (psib(1)-psib(-1))

Consistency identities checked by :func:`verify_identity`:

      [N]^(1-p) = p sigma J^(1/beta) LambdaT(Z)/LambdaT(Y)      (p > 1)
      [N]^(1-p) = p sigma J^(1/beta) LambdaB(ZB)/LambdaB(YB)    (p < 1)
      2 sigma J^(1/beta) = Theta(W)                             (p = 1)
      [N]^(1-p) = p J + p 2^(-1-p) (psib(1)-psib(-1))           (alpha = inf)

(the sign of the psib term in the last identity is fixed so that it is
an algebraic identity given the J display above; both sides then equal
2^-p (psi(1)-psi(-1)) exactly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaincinv, gammaincinv

from .densities import gg_norm_const, make_generalized_gaussian
from .errors import DomainError, InputError
from .numerics import (
    QuadratureConfig,
    beta_fn,
    essential_supremum,
    gamma_fn,
    integrate,
)
from .weights import WeightFunction, antiderivatives, holder_conjugate

__all__ = [
    "AuxiliaryLaw",
    "GaussianMeasureSet",
    "beta_law",
    "gamma_law",
    "case_laws",
    "lambda_tilde",
    "lambda_bar",
    "theta",
    "upsilon",
    "gaussian_measures",
    "verify_identity",
    "select_case",
]


@dataclass(frozen=True)
class AuxiliaryLaw:
    """Beta(shape1, shape2) on (0,1) or Gamma(shape, rate 1) on (0,inf)."""

    family: str
    shape1: float
    shape2: float = 0.0

    def __post_init__(self) -> None:
        if self.family not in ("beta", "gamma"):
            raise InputError(f"unknown auxiliary law {self.family!r}")
        if not self.shape1 > 0 or (self.family == "beta" and not self.shape2 > 0):
            raise InputError(
                f"auxiliary law shapes must be positive, got "
                f"({self.shape1}, {self.shape2})"
            )

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, 1.0) if self.family == "beta" else (0.0, math.inf)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.family == "beta":
                out = (
                    x ** (self.shape1 - 1.0)
                    * (1.0 - x) ** (self.shape2 - 1.0)
                    / beta_fn(self.shape1, self.shape2)
                )
                return np.where((x > 0) & (x < 1), out, 0.0)
            out = x ** (self.shape1 - 1.0) * np.exp(-x) / gamma_fn(self.shape1)
            return np.where(x > 0, out, 0.0)

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        if self.family == "beta":
            return betaincinv(self.shape1, self.shape2, q)
        return gammaincinv(self.shape1, q)

    def expectation(self, fn) -> float:
        """E[fn(Z)] by quadrature against the law's pdf.

        Beta expectations are split at 1/2 and the right half integrated
        in the reflected variable v = 1 - z, so that a (1-z)^(shape2-1)
        endpoint singularity is evaluated from an exactly representable
        offset (tanh-sinh nodes at 1 - v with v < 2^-53 would otherwise
        collapse onto the endpoint).
        """
        if self.family == "gamma":
            cfg = QuadratureConfig(
                abs_tol=1e-11,
                rel_tol=1e-10,
                singularities=(0.0,) if self.shape1 < 1 else (),
            )

            def integrand(x):
                x = np.asarray(x, dtype=float)
                pdfv = self.pdf(x)
                out = np.zeros_like(pdfv)
                m = pdfv > 0
                if np.any(m):
                    out[m] = np.asarray(fn(x[m]), dtype=float) * pdfv[m]
                return out

            res = integrate(integrand, (0.0, math.inf), cfg)
            if res.status == "divergent" or not math.isfinite(res.value):
                raise DomainError("auxiliary expectation diverges")
            return res.value

        s1, s2 = self.shape1, self.shape2
        norm = beta_fn(s1, s2)

        def left(z):
            z = np.asarray(z, dtype=float)
            return (
                np.asarray(fn(z), dtype=float)
                * z ** (s1 - 1.0)
                * (1.0 - z) ** (s2 - 1.0)
                / norm
            )

        def right(v):
            v = np.asarray(v, dtype=float)
            return (
                np.asarray(fn(1.0 - v), dtype=float)
                * (1.0 - v) ** (s1 - 1.0)
                * v ** (s2 - 1.0)
                / norm
            )

        total = 0.0
        for g, shape in ((left, s1), (right, s2)):
            cfg = QuadratureConfig(
                abs_tol=5e-12,
                rel_tol=1e-10,
                singularities=(0.0,) if shape < 1 else (),
            )
            res = integrate(g, (0.0, 0.5), cfg)
            if res.status == "divergent" or not math.isfinite(res.value):
                raise DomainError("auxiliary expectation diverges")
            total += res.value
        return total


def beta_law(shape1: float, shape2: float) -> AuxiliaryLaw:
    return AuxiliaryLaw("beta", shape1, shape2)


def gamma_law(shape: float) -> AuxiliaryLaw:
    return AuxiliaryLaw("gamma", shape)


def select_case(alpha: float, p: float) -> str:
    """Which parameter regime (alpha, p) falls into."""
    if math.isinf(alpha):
        if not p > 0:
            raise InputError("alpha = inf requires p > 0")
        return "alpha=inf"
    if alpha == 0.0:
        if not p > 1:
            raise InputError("alpha = 0 requires p > 1")
        return "alpha=0"
    if not alpha > 0:
        raise InputError(f"alpha must be in [0, inf], got {alpha}")
    if p > 1:
        return "p>1"
    if p == 1.0:
        return "p=1"
    if p > 1.0 / (1.0 + alpha):
        return "p<1"
    raise InputError(f"(alpha, p) = ({alpha}, {p}) lies outside every regime")


def case_laws(alpha: float, p: float) -> dict[str, AuxiliaryLaw]:
    """The auxiliary laws attached to the regime of (alpha, p)."""
    case = select_case(alpha, p)
    if case == "p>1":
        return {
            "Z": beta_law((2.0 * p - 1.0) / (p - 1.0), 1.0 / alpha),
            "Y": beta_law(p / (p - 1.0), (alpha + 1.0) / alpha),
        }
    if case == "p<1":
        s1 = (p * (alpha + 1.0) - 1.0) / (alpha * (1.0 - p))
        return {
            "Z": beta_law(s1, 1.0 / alpha),
            "Y": beta_law(s1, (alpha + 1.0) / alpha),
        }
    if case == "p=1":
        return {
            "W": gamma_law((alpha + 1.0) / alpha),
            "Wbar": gamma_law(1.0 / alpha),
        }
    if case == "alpha=0":
        return {
            "X": gamma_law((2.0 * p - 1.0) / (p - 1.0)),
            "Xbar": gamma_law(1.0 / (p - 1.0)),
            "Xtilde": gamma_law(p / (p - 1.0)),
        }
    return {}


# ---------------------------------------------------------------------------
# Auxiliary expectations
# ---------------------------------------------------------------------------


def _phi_sum(w: WeightFunction, arg):
    def fn(z):
        a = np.asarray(arg(np.asarray(z, dtype=float)), dtype=float)
        return np.asarray(w(-a), dtype=float) + np.asarray(w(a), dtype=float)

    return fn


def lambda_tilde(w: WeightFunction, p: float, alpha: float, law: AuxiliaryLaw) -> float:
    """E[phi(-u) + phi(u)] with u = ((1-Z)/(p-1))^(1/alpha); needs p > 1."""
    if not p > 1:
        raise InputError(f"LambdaT is the p > 1 transform, got p = {p}")
    return law.expectation(
        _phi_sum(w, lambda z: ((1.0 - z) / (p - 1.0)) ** (1.0 / alpha))
    )


def lambda_bar(w: WeightFunction, p: float, alpha: float, law: AuxiliaryLaw) -> float:
    """E[phi(-u) + phi(u)] with u = ((1-Z)/(Z(1-p)))^(1/alpha); needs p < 1."""
    if not p < 1:
        raise InputError(f"LambdaB is the p < 1 transform, got p = {p}")

    def arg(z):
        with np.errstate(divide="ignore"):
            return ((1.0 - z) / (z * (1.0 - p))) ** (1.0 / alpha)

    return law.expectation(_phi_sum(w, arg))


def theta(w: WeightFunction, alpha: float, law: AuxiliaryLaw) -> float:
    """E[phi(-Z^(1/alpha)) + phi(Z^(1/alpha))]."""
    return law.expectation(_phi_sum(w, lambda z: z ** (1.0 / alpha)))


def upsilon(w: WeightFunction, law: AuxiliaryLaw) -> float:
    """E[phi(-e^(-Z)) + phi(e^(-Z))]."""
    return law.expectation(_phi_sum(w, lambda z: np.exp(-z)))


# ---------------------------------------------------------------------------
# Measures of G
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianMeasureSet:
    n_power: float
    deviation: float
    fisher: float | None
    fisher_branch: str
    case: str
    aux: dict = field(default_factory=dict)


def _esssup_weighted(w: WeightFunction, fn, support) -> float:
    val = essential_supremum(
        lambda x: np.asarray(w(x), dtype=float) * fn(np.asarray(x, dtype=float)),
        support,
    )
    if not math.isfinite(val):
        raise DomainError("weighted essential supremum is not finite")
    return val


def gaussian_measures(w: WeightFunction, alpha: float, p: float) -> GaussianMeasureSet:
    """N, sigma and J of the unit-scale generalized p-Gaussian."""
    case = select_case(alpha, p)
    laws = case_laws(alpha, p)

    if case in ("p>1", "p<1"):
        a = gg_norm_const(alpha, p)
        lam = lambda_tilde if case == "p>1" else lambda_bar
        lam_z = lam(w, p, alpha, laws["Z"])
        lam_y = lam(w, p, alpha, laws["Y"])
        scale = p * alpha / (p * alpha + p - 1.0)
        n_power = (
            (1.0 / a)
            * 2.0 ** (1.0 / (p - 1.0))
            * scale ** (1.0 / (1.0 - p))
            * lam_z ** (1.0 / (1.0 - p))
        )
        sigma = (lam_y / (2.0 * (p * alpha + p - 1.0))) ** (1.0 / alpha)
        fisher = None
        branch = "not-defined"
        if alpha > 1.0:
            beta = holder_conjugate(alpha)
            fisher = (
                a ** (beta * (p - 1.0))
                * alpha**beta
                * lam_y
                / (2.0 * (alpha * p + p - 1.0))
            )
            branch = "integral"
        elif alpha == 1.0:
            # beta = inf: J^(1/beta) is the esssup of phi |G^{p-2} G'|,
            # which is a^(p-1) * sup phi over the support of G.
            g = make_generalized_gaussian(alpha, p)
            fisher = _esssup_weighted(
                w, lambda x: a ** (p - 1.0) * np.ones_like(x), g.support
            )
            branch = "alpha=1-esssup"
        return GaussianMeasureSet(
            n_power,
            sigma,
            fisher,
            branch,
            case,
            {"lambda_z": lam_z, "lambda_y": lam_y, "a": a},
        )

    if case == "p=1":
        a = gg_norm_const(alpha, p)
        th_w = theta(w, alpha, laws["W"])
        th_wb = theta(w, alpha, laws["Wbar"])
        if not th_wb > 0:
            raise DomainError("Theta(Wbar) must be positive")
        n_power = (1.0 / a) * math.exp(th_w / (alpha * th_wb))
        sigma = (th_w / (2.0 * alpha)) ** (1.0 / alpha)
        fisher = None
        branch = "not-defined"
        if alpha > 1.0:
            beta = holder_conjugate(alpha)
            fisher = 0.5 * alpha ** (beta - 1.0) * th_w
            branch = "integral"
        elif alpha == 1.0:
            # |G^{-1} G'| = 1, so the esssup object is sup phi over R.
            fisher = _esssup_weighted(
                w, lambda x: np.ones_like(x), (-math.inf, math.inf)
            )
            branch = "alpha=1-esssup"
        return GaussianMeasureSet(
            n_power,
            sigma,
            fisher,
            branch,
            case,
            {"theta_w": th_w, "theta_wbar": th_wb, "a": a},
        )

    if case == "alpha=0":
        a = gg_norm_const(alpha, p)
        up_x = upsilon(w, laws["X"])
        up_xt = upsilon(w, laws["Xtilde"])
        if not up_xt > 0:
            raise DomainError("Upsilon(Xtilde) must be positive")
        n_power = (
            (1.0 / a)
            * (p / (2.0 * (p - 1.0))) ** (1.0 / (1.0 - p))
            * up_x ** (1.0 / (1.0 - p))
        )
        sigma = math.exp(-(p / (p - 1.0)) * up_x / up_xt)
        return GaussianMeasureSet(
            n_power,
            sigma,
            None,
            "not-defined",
            case,
            {"upsilon_x": up_x, "upsilon_xtilde": up_xt, "a": a},
        )

    # alpha = inf
    ad = antiderivatives(w)
    psi_diff = ad.psi(1.0) - ad.psi(-1.0)
    psib_diff = ad.psi_bar(1.0) - ad.psi_bar(-1.0)
    if not psi_diff > 0:
        raise DomainError("int_{-1}^{1} phi must be positive")
    if p == 1.0:
        n_power = 2.0  # exp(h/E) with log G constant on the support
    else:
        n_power = 2.0 ** (p / (p - 1.0)) * psi_diff ** (1.0 / (1.0 - p))
    sigma = _esssup_weighted(w, lambda x: np.abs(x), (-1.0, 1.0))
    # The plain essential supremum of phi is also recorded: it differs
    # from the deviation (esssup of phi(x)|x|) whenever the weighted
    # maximum is attained away from the support edge.
    sigma_sup_phi = _esssup_weighted(w, lambda x: np.ones_like(x), (-1.0, 1.0))
    fisher = psi_diff / (p * 2.0**p) - 2.0 ** (-1.0 - p) * psib_diff
    return GaussianMeasureSet(
        n_power,
        sigma,
        fisher,
        "alpha=inf-display",
        "alpha=inf",
        {
            "psi_diff": psi_diff,
            "psib_diff": psib_diff,
            "esssup_phi": sigma_sup_phi,
        },
    )


def verify_identity(case: str, w: WeightFunction, alpha: float, p: float) -> float:
    """Relative residual |LHS - RHS| / (1 + |LHS|) of the regime identity."""
    actual = select_case(alpha, p)
    if case != actual:
        raise InputError(f"(alpha, p) = ({alpha}, {p}) is in case {actual!r}, not {case!r}")
    ms = gaussian_measures(w, alpha, p)

    if case in ("p>1", "p<1"):
        if ms.fisher is None:
            raise InputError("identity needs alpha >= 1 so J is defined")
        beta = holder_conjugate(alpha)
        j_root = ms.fisher if ms.fisher_branch == "alpha=1-esssup" else ms.fisher ** (
            1.0 / beta
        )
        lhs = ms.n_power ** (1.0 - p)
        rhs = p * ms.deviation * j_root * ms.aux["lambda_z"] / ms.aux["lambda_y"]
        return abs(lhs - rhs) / (1.0 + abs(lhs))

    if case == "p=1":
        if ms.fisher is None:
            raise InputError("identity needs alpha >= 1 so J is defined")
        beta = holder_conjugate(alpha)
        j_root = ms.fisher if ms.fisher_branch == "alpha=1-esssup" else ms.fisher ** (
            1.0 / beta
        )
        lhs = 2.0 * ms.deviation * j_root
        rhs = ms.aux["theta_w"]
        return abs(lhs - rhs) / (1.0 + abs(lhs))

    if case == "alpha=inf":
        if p == 1.0:
            raise InputError("the alpha = inf identity needs p != 1")
        lhs = ms.n_power ** (1.0 - p)
        rhs = p * ms.fisher + p * 2.0 ** (-1.0 - p) * ms.aux["psib_diff"]
        return abs(lhs - rhs) / (1.0 + abs(lhs))

    raise InputError(f"no consistency identity for case {case!r}")
