"""The six benchmark distributions, their tail-class parameters, the sample
maximum density and the approximating GEV family.

Tail classes follow the usual second-order expansions:

* ``hall``:    1 - F(x) = A x^(-alpha) (1 + B x^(-beta) + o(x^(-beta)))
* ``weibull``: 1 - F(x) = exp(-C x^kappa) (1 + o(1)) with stretched tails
* ``bounded``: 1 - F(x) = (x* - x)^(-mu) (D + E (x* - x)^(mu sigma) + o(.))

with extreme value index gamma = 1/alpha, 0 and 1/mu respectively.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
from scipy import special

#: below this |gamma| all GEV formulas switch to the Gumbel branch, which
#: avoids catastrophic cancellation in (1 + gamma z)^(-1/gamma)
GAMMA_SWITCH = 1e-8

_EULER = 0.5772156649015329


# ---------------------------------------------------------------------------
# tail classes and GEV parameters


@dataclass(frozen=True)
class TailClass:
    """Tag plus the parameters of one of the three tail expansions."""

    tag: str  # "hall" | "weibull" | "bounded"
    alpha: float | None = None
    beta: float | None = None
    A: float | None = None
    B: float | None = None
    kappa: float | None = None
    C: float | None = None
    mu: float | None = None
    sigma: float | None = None
    D: float | None = None
    E: float | None = None
    xstar: float | None = None

    def __post_init__(self):
        if self.tag == "hall":
            if not (self.alpha > 0 and self.beta > 0 and self.A > 0):
                raise ValueError("hall tail requires alpha>0, beta>0, A>0")
        elif self.tag == "weibull":
            if not (self.kappa > 0 and self.C > 0):
                raise ValueError("weibull tail requires kappa>0, C>0")
        elif self.tag == "bounded":
            if not (self.mu < 0 and self.sigma < 0):
                raise ValueError("bounded tail requires mu<0, sigma<0")
        else:
            raise ValueError(f"unknown tail class {self.tag!r}")

    @staticmethod
    def hall(alpha: float, beta: float, A: float = 1.0, B: float = 0.0) -> "TailClass":
        return TailClass(tag="hall", alpha=alpha, beta=beta, A=A, B=B)

    @staticmethod
    def weibull(kappa: float, C: float = 1.0) -> "TailClass":
        return TailClass(tag="weibull", kappa=kappa, C=C)

    @staticmethod
    def bounded(mu: float, sigma: float, D: float = 1.0, E: float = 0.0,
                xstar: float = 1.0) -> "TailClass":
        return TailClass(tag="bounded", mu=mu, sigma=sigma, D=D, E=E, xstar=xstar)

    @property
    def gamma(self) -> float:
        if self.tag == "hall":
            return 1.0 / self.alpha
        if self.tag == "weibull":
            return 0.0
        return 1.0 / self.mu

    @property
    def theta(self) -> float:
        """Weibull-class exponent theta = 1 - 1/kappa."""
        if self.tag != "weibull":
            raise ValueError("theta is defined for the weibull class only")
        return 1.0 - 1.0 / self.kappa


@dataclass(frozen=True)
class GevParams:
    """Shape, scale and location of the approximating GEV density."""

    gamma: float
    a: float
    b: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("GEV scale must be positive")


def gev_pdf(p: GevParams, x) -> np.ndarray | float:
    """Density (1/a) g_gamma((x - b)/a); zero outside the support."""
    x = np.asarray(x, dtype=float)
    z = (x - p.b) / p.a
    if abs(p.gamma) < GAMMA_SWITCH:
        out = np.exp(-z - np.exp(-z)) / p.a
    else:
        t = 1.0 + p.gamma * z
        # log-space form stays finite through the support edges
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            ln_w = -np.log(np.where(t > 0.0, t, 1.0)) / p.gamma
            out = np.where(t > 0.0,
                           np.exp((1.0 + p.gamma) * ln_w - np.exp(ln_w)) / p.a, 0.0)
    return out if out.ndim else float(out)


def gev_cdf(p: GevParams, x) -> np.ndarray | float:
    """Distribution function G_gamma((x - b)/a)."""
    x = np.asarray(x, dtype=float)
    z = (x - p.b) / p.a
    if abs(p.gamma) < GAMMA_SWITCH:
        out = np.exp(-np.exp(-z))
    else:
        t = 1.0 + p.gamma * z
        with np.errstate(over="ignore", divide="ignore"):
            w = np.where(t > 0.0, t, 1.0) ** (-1.0 / p.gamma)
        out = np.where(t > 0.0, np.exp(-w), 0.0 if p.gamma > 0 else 1.0)
    return out if out.ndim else float(out)


def norming_constants(tail: TailClass, m: float) -> GevParams:
    """Scale/location (a_m, b_m) making F^m(a_m x + b_m) -> G_gamma(x)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    g = tail.gamma
    if tail.tag == "hall":
        return GevParams(g, g * (tail.A * m) ** g, (tail.A * m) ** g)
    if tail.tag == "weibull":
        th = tail.theta
        a = (math.log(m) ** -th if m > 1 else 1.0) / (tail.kappa * tail.C ** (1.0 / tail.kappa))
        b = (math.log(m) / tail.C) ** (1.0 / tail.kappa)
        return GevParams(0.0, a, b)
    dm = (tail.D * m) ** g
    return GevParams(g, -g * dm, tail.xstar - dm)


# ---------------------------------------------------------------------------
# distribution families


class TailModel:
    """A distribution with known closed forms and derived tail parameters.

    Subclasses implement ``pdf``, ``cdf`` and ``quantile`` (all vectorized)
    and set ``tail`` and ``support``.
    """

    name: str
    tail: TailClass
    support: tuple[float, float]

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, q):
        raise NotImplementedError

    def sample(self, n: int, seed) -> np.ndarray:
        """n i.i.d. draws via inverse CDF from a PCG64 stream keyed by seed."""
        if n < 1:
            raise ValueError("sample size must be >= 1")
        rng = np.random.Generator(np.random.PCG64(seed))
        u = rng.random(n)
        # the stream has 53-bit resolution; push exact zeros to the smallest cell
        u = np.maximum(u, 2.0**-53)
        return np.asarray(self.quantile(u), dtype=float)

    def spec_string(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec_string()}>"

    @staticmethod
    def _check_q(q):
        q = np.asarray(q, dtype=float)
        if np.any((q <= 0.0) | (q >= 1.0)):
            raise ValueError("quantile level must lie strictly in (0, 1)")
        return q


class Pareto(TailModel):
    """F(x) = 1 - x^(-l) on [1, inf)."""

    name = "pareto"

    def __init__(self, l: float):
        if l <= 0:
            raise ValueError("pareto needs l > 0")
        self.l = float(l)
        # exact power tail: no second-order term; B = 0 recorded with the
        # conventional beta = 1 used in the rate tables
        self.tail = TailClass.hall(alpha=self.l, beta=1.0, A=1.0, B=0.0)
        self.support = (1.0, math.inf)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(x >= 1.0, self.l * np.abs(x) ** (-self.l - 1.0), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 1.0, 1.0 - np.abs(x) ** (-self.l), 0.0)
        return out if out.ndim else float(out)

    def quantile(self, q):
        q = self._check_q(q)
        out = (1.0 - q) ** (-1.0 / self.l)
        return out if out.ndim else float(out)

    def spec_string(self):
        return f"pareto(l={_fmt(self.l)})"


class StudentT(TailModel):
    """Student t with l degrees of freedom (l may be fractional)."""

    name = "t"

    def __init__(self, l: float):
        if l <= 0:
            raise ValueError("t needs l > 0")
        self.l = float(l)
        c = math.exp(math.lgamma((self.l + 1.0) / 2.0)
                     - math.lgamma(self.l / 2.0)) / math.sqrt(self.l * math.pi)
        self._c = c
        A = c * self.l ** ((self.l - 1.0) / 2.0)
        B = -self.l**2 * (self.l + 1.0) / (2.0 * (self.l + 2.0))
        self.tail = TailClass.hall(alpha=self.l, beta=2.0, A=A, B=B)
        self.support = (-math.inf, math.inf)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = self._c * (1.0 + x * x / self.l) ** (-(self.l + 1.0) / 2.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = special.stdtr(self.l, x)
        return out if np.ndim(out) else float(out)

    def quantile(self, q):
        q = self._check_q(q)
        out = special.stdtrit(self.l, q)
        return out if np.ndim(out) else float(out)

    def spec_string(self):
        return f"t(l={_fmt(self.l)})"


class Burr(TailModel):
    """F(x) = 1 - (1 + x^c)^(-l) on (0, inf); alpha = c*l, beta = c."""

    name = "burr"

    def __init__(self, c: float, l: float):
        if c <= 0 or l <= 0:
            raise ValueError("burr needs c > 0 and l > 0")
        self.c, self.l = float(c), float(l)
        self.tail = TailClass.hall(alpha=self.c * self.l, beta=self.c, A=1.0, B=-self.l)
        self.support = (0.0, math.inf)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        out = np.where(
            x > 0.0,
            self.c * self.l * xp ** (self.c - 1.0) * (1.0 + xp**self.c) ** (-self.l - 1.0),
            0.0,
        )
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        out = np.where(x > 0.0, 1.0 - (1.0 + xp**self.c) ** (-self.l), 0.0)
        return out if out.ndim else float(out)

    def quantile(self, q):
        q = self._check_q(q)
        out = ((1.0 - q) ** (-1.0 / self.l) - 1.0) ** (1.0 / self.c)
        return out if out.ndim else float(out)

    def spec_string(self):
        return f"burr(c={_fmt(self.c)},l={_fmt(self.l)})"


class Frechet(TailModel):
    """F(x) = exp(-x^(-1/g)) on (0, inf); alpha = 1/g.

    The exact expansion has beta = alpha (and B = -1/2); the published rate
    tables print beta = 1 for g in {1/2, 1/4}, which the rates module embeds
    and flags.
    """

    name = "frechet"

    def __init__(self, g: float):
        if g <= 0:
            raise ValueError("frechet needs g > 0")
        self.g = float(g)
        self.tail = TailClass.hall(alpha=1.0 / self.g, beta=1.0 / self.g, A=1.0, B=-0.5)
        self.support = (0.0, math.inf)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        w = xp ** (-1.0 / self.g)
        out = np.where(x > 0.0, (w / self.g) / xp * np.exp(-w), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        out = np.where(x > 0.0, np.exp(-(xp ** (-1.0 / self.g))), 0.0)
        return out if out.ndim else float(out)

    def quantile(self, q):
        q = self._check_q(q)
        out = (-np.log(q)) ** (-self.g)
        return out if out.ndim else float(out)

    def spec_string(self):
        return f"frechet(g={_fmt(self.g)})"


class Weibull(TailModel):
    """F(x) = 1 - exp(-x^k) on [0, inf); the stretched-exponential class."""

    name = "weibull"

    def __init__(self, k: float):
        if k <= 0:
            raise ValueError("weibull needs k > 0")
        self.k = float(k)
        self.tail = TailClass.weibull(kappa=self.k, C=1.0)
        self.support = (0.0, math.inf)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        out = np.where(x > 0.0, self.k * xp ** (self.k - 1.0) * np.exp(-(xp**self.k)), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 0.0)
        out = np.where(x > 0.0, 1.0 - np.exp(-(xp**self.k)), 0.0)
        return out if out.ndim else float(out)

    def quantile(self, q):
        q = self._check_q(q)
        out = (-np.log1p(-q)) ** (1.0 / self.k)
        return out if out.ndim else float(out)

    def spec_string(self):
        return f"weibull(k={_fmt(self.k)})"


class ReversedBurr(TailModel):
    """Bounded-support family with endpoint x* = 1.

    F(x) = 1 - ((x*-x)^(-mu sigma) + 1)^(1/sigma) for x < x*, parametrized by
    c < 0, l < 0 through mu = -1/(c l) and sigma = 1/c, so that
    1 - F(x) = (x*-x)^(-mu) (1 + (1/sigma) (x*-x)^(mu sigma) + ...).
    """

    name = "revburr"
    XSTAR = 1.0

    def __init__(self, c: float, l: float):
        if c >= 0 or l >= 0:
            raise ValueError("revburr needs c < 0 and l < 0")
        self.c, self.l = float(c), float(l)
        mu = -1.0 / (self.c * self.l)
        sigma = 1.0 / self.c
        self.tail = TailClass.bounded(mu=mu, sigma=sigma, D=1.0, E=1.0 / sigma,
                                      xstar=self.XSTAR)
        self.support = (-math.inf, self.XSTAR)
        self._a = -mu * sigma  # exponent of (x*-x) inside the root; negative

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        s = np.where(x < self.XSTAR, self.XSTAR - x, 1.0)
        mu, sig, a = self.tail.mu, self.tail.sigma, self._a
        out = np.where(
            x < self.XSTAR,
            -mu * s ** (a - 1.0) * (s**a + 1.0) ** (1.0 / sig - 1.0),
            0.0,
        )
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        s = np.where(x < self.XSTAR, self.XSTAR - x, 1.0)
        out = np.where(x < self.XSTAR,
                       1.0 - (s**self._a + 1.0) ** (1.0 / self.tail.sigma), 0.0)
        out = np.where(x >= self.XSTAR, 1.0, out)
        return out if out.ndim else float(out)

    def quantile(self, q):
        q = self._check_q(q)
        s = ((1.0 - q) ** self.tail.sigma - 1.0) ** (1.0 / self._a)
        out = self.XSTAR - s
        return out if out.ndim else float(out)

    def spec_string(self):
        return f"revburr(c={_fmt(self.c)},l={_fmt(self.l)})"


# ---------------------------------------------------------------------------
# sample maximum density


def smd_pdf(model: TailModel, m: int, x) -> np.ndarray | float:
    """Density of the maximum of m i.i.d. draws: m f(x) F(x)^(m-1)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    x = np.asarray(x, dtype=float)
    out = m * np.asarray(model.pdf(x)) * np.asarray(model.cdf(x)) ** (m - 1)
    return out if out.ndim else float(out)


def smd_quantile(model: TailModel, m: int, q) -> np.ndarray | float:
    """q-th quantile of the sample maximum: F^m(Q) = q, so Q = F^{-1}(q^{1/m})."""
    if m < 1:
        raise ValueError("m must be >= 1")
    q = np.asarray(q, dtype=float)
    if np.any((q <= 0.0) | (q >= 1.0)):
        raise ValueError("quantile level must lie strictly in (0, 1)")
    out = np.asarray(model.quantile(q ** (1.0 / m)))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# family specification grammar, e.g. "pareto(l=1)" or "burr(c=1,l=3)"

_FAMILIES = {
    "pareto": (Pareto, ("l",)),
    "t": (StudentT, ("l",)),
    "burr": (Burr, ("c", "l")),
    "frechet": (Frechet, ("g",)),
    "weibull": (Weibull, ("k",)),
    "revburr": (ReversedBurr, ("c", "l")),
}

_SPEC_RE = re.compile(r"^\s*([a-zA-Z]+)\s*\(\s*([^()]*)\s*\)\s*$")


def _fmt(v: float) -> str:
    return f"{v:g}"


def parse_family(spec: str) -> TailModel:
    """Build a model from a spec string like ``pareto(l=1)``."""
    match = _SPEC_RE.match(spec)
    if not match:
        raise ValueError(f"cannot parse family spec {spec!r}")
    name = match.group(1).lower()
    if name not in _FAMILIES:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(_FAMILIES)}")
    cls, argnames = _FAMILIES[name]
    kwargs = {}
    for part in match.group(2).split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"malformed parameter {part!r} in {spec!r}")
        key, _, val = part.partition("=")
        key = key.strip().lower()
        if key not in argnames:
            raise ValueError(f"family {name!r} takes {argnames}, got {key!r}")
        try:
            kwargs[key] = float(_parse_number(val.strip()))
        except ValueError:
            raise ValueError(f"bad numeric value {val!r} in {spec!r}") from None
    missing = [a for a in argnames if a not in kwargs]
    if missing:
        raise ValueError(f"family {name!r} is missing parameters {missing}")
    return cls(**kwargs)


def _parse_number(text: str) -> float:
    if "/" in text:
        num, _, den = text.partition("/")
        return float(num) / float(den)
    return float(text)
