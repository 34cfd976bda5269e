"""Symmetric sequence norms on finite real vectors.

Four families are provided: ``Lp``, ``Orlicz`` (Luxemburg norm), ``Lorentz``
and ``Marcinkiewicz``.  Every gauge evaluates along the last axis, so a 2-D
array is treated as a stack of vectors.

Each gauge also knows its Köthe dual norm and a canonical subgradient, the
unit-dual-norm vector ``w`` with ``<w, x> = ||x||``.  The subgradient is what
the support functionals in :mod:`skewlab.support` are built from.

Text forms (used by the CLI)::

    lp:2  lp:inf  orlicz:pow:3  orlicz:exppow:2
    lorentz:pow:0.5  lorentz:log  marcinkiewicz:pow:0.5  marcinkiewicz:log
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, NonConvergence

__all__ = [
    "PowerOrlicz", "ExpPowerOrlicz", "PowerPsi", "LogPsi",
    "SymmetricGauge", "Lp", "Orlicz", "Lorentz", "Marcinkiewicz",
    "as_vec", "rearrange", "hlp_majorizes", "gauge_norm", "kothe_dual_norm",
    "subgradient", "dual_norm_grid", "parse_gauge",
]

LUXEMBURG_RTOL = 1e-15
LUXEMBURG_MAX_ITER = 200
_SHAPE_GRID = 64


def as_vec(x) -> np.ndarray:
    """Return ``x`` as a float array with at least one axis; reject NaN/inf."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape[-1] == 0:
        raise ValueError("vector must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def rearrange(x) -> np.ndarray:
    """Non-increasing rearrangement of ``|x|`` along the last axis."""
    return -np.sort(-np.abs(as_vec(x)), axis=-1)


def hlp_majorizes(x, y, tol: float = 0.0) -> bool:
    """True iff ``x`` is submajorized by ``y`` (``x ≺≺ y``).

    Shorter input is padded with zeros.  ``tol`` is an absolute slack on the
    partial-sum comparison.
    """
    xs, ys = rearrange(x), rearrange(y)
    if xs.ndim != 1 or ys.ndim != 1:
        raise ValueError("hlp_majorizes compares two 1-D vectors")
    n = max(xs.size, ys.size)
    xs = np.pad(xs, (0, n - xs.size))
    ys = np.pad(ys, (0, n - ys.size))
    return bool(np.all(np.cumsum(xs) <= np.cumsum(ys) + tol))


def _sign(x):
    return np.sign(x).astype(float)


# --- Orlicz and concave weight functions -------------------------------------

@dataclass(frozen=True)
class PowerOrlicz:
    """``Φ(u) = u**p`` with ``p >= 1``; its Luxemburg norm is ℓ_p."""

    p: float
    tag: ClassVar[str] = "pow"

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p >= 1):
            raise ConfigError(f"Orlicz power needs p >= 1, got {self.p}")

    def __call__(self, u):
        return np.power(u, self.p)

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        if self.p == 1:
            return np.ones_like(u)
        return self.p * np.power(u, self.p - 1)

    def inverse_one(self) -> float:
        return 1.0


@dataclass(frozen=True)
class ExpPowerOrlicz:
    """``Φ(u) = exp(u**p) - 1`` with ``p >= 1``."""

    p: float
    tag: ClassVar[str] = "exppow"

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p >= 1):
            raise ConfigError(f"Orlicz exp-power needs p >= 1, got {self.p}")

    def __call__(self, u):
        with np.errstate(over="ignore"):
            return np.expm1(np.power(u, self.p))

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(over="ignore"):
            if self.p == 1:
                return np.exp(u)
            return self.p * np.power(u, self.p - 1) * np.exp(np.power(u, self.p))

    def inverse_one(self) -> float:
        return math.log(2.0) ** (1.0 / self.p)

    def inverse_derivative(self, s: float) -> float:
        """Solve ``Φ'(u) = s`` for ``u >= 0``; zero when ``s <= Φ'(0+)``."""
        p = self.p
        if p == 1:
            return math.log(s) if s > 1 else 0.0
        if s <= 0:
            return 0.0
        level = math.log(s / p)

        # in v = log u the equation (p-1) v + exp(p v) = level is monotone
        def h(v):
            return (p - 1) * v + math.exp(p * v) - level

        lo = min((level - 1) / (p - 1), 0.0)
        hi = max(level / (p - 1), 0.0) + 1.0
        return math.exp(brentq(h, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))


@dataclass(frozen=True)
class PowerPsi:
    """``ψ(t) = t**alpha`` with ``0 < alpha <= 1``."""

    alpha: float
    tag: ClassVar[str] = "pow"

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise ConfigError(f"ψ power needs 0 < alpha <= 1, got {self.alpha}")

    def __call__(self, t):
        return np.power(np.asarray(t, dtype=float), self.alpha)


@dataclass(frozen=True)
class LogPsi:
    """``ψ(t) = log(1 + t)``."""

    tag: ClassVar[str] = "log"

    def __call__(self, t):
        return np.log1p(np.asarray(t, dtype=float))


def _check_orlicz_shape(phi) -> None:
    u = np.linspace(0.0, 2.0 * phi.inverse_one(), 257)
    v = phi(u)
    if v[0] != 0 or np.any(v < 0) or np.any(np.diff(v) < 0):
        raise ConfigError(f"{phi!r} is not a nonnegative increasing function with Φ(0)=0")
    if np.any(np.diff(v, 2) < -1e-12 * max(1.0, v[-1])):
        raise ConfigError(f"{phi!r} fails convexity on the sample grid")
    if np.any(v[1:] <= 0):
        raise ConfigError(f"{phi!r} must be positive away from 0")


def _check_psi_shape(psi) -> None:
    v = psi(np.arange(_SHAPE_GRID + 1))
    if v[0] != 0 or np.any(v[1:] <= 0) or np.any(np.diff(v) <= 0):
        raise ConfigError(f"{psi!r} must vanish at 0 and increase")
    if np.any(np.diff(v, 2) > 1e-12):
        raise ConfigError(f"{psi!r} fails concavity on the integer grid")


# --- gauges ------------------------------------------------------------------

class SymmetricGauge(abc.ABC):
    """A symmetric norm on R^n, evaluated along the last axis."""

    @abc.abstractmethod
    def norm(self, x):
        """Return ``||x||_E``."""

    @abc.abstractmethod
    def dual_norm(self, x):
        """Köthe dual norm ``sup{ Σ|x_n η_n| : ||η||_E <= 1 }``."""

    @abc.abstractmethod
    def subgradient(self, x):
        """Vector ``w`` with dual norm 1 and ``<w, x> = ||x||_E`` (zero rows map to 0)."""

    @abc.abstractmethod
    def __str__(self) -> str:
        ...

    def _out(self, value, x):
        return float(value) if np.ndim(x) <= 1 else value


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf"
    return repr(float(v)) if float(v) != int(v) else str(int(v))


@dataclass(frozen=True)
class Lp(SymmetricGauge):
    p: float

    def __post_init__(self):
        if not (self.p >= 1):
            raise ConfigError(f"lp gauge needs p >= 1 or inf, got {self.p}")

    def __str__(self):
        return f"lp:{_fmt(self.p)}"

    @property
    def conjugate(self) -> float:
        if self.p == 1:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1)

    def norm(self, x):
        x = as_vec(x)
        return self._out(_lp_norm(x, self.p), x)

    def dual_norm(self, x):
        x = as_vec(x)
        return self._out(_lp_norm(x, self.conjugate), x)

    def subgradient(self, x):
        x = as_vec(x)
        ax = np.abs(x)
        if self.p == 1:
            return _sign(x)
        if math.isinf(self.p):
            w = np.zeros_like(x)
            idx = np.argmax(ax, axis=-1)[..., None]
            np.put_along_axis(w, idx, np.take_along_axis(_sign(x), idx, -1), -1)
            return w
        nrm = np.asarray(_lp_norm(x, self.p))[..., None]
        with np.errstate(invalid="ignore", divide="ignore"):
            w = _sign(x) * np.power(ax / nrm, self.p - 1)
        return np.where(nrm > 0, w, 0.0)


def _lp_norm(x, p):
    ax = np.abs(x)
    m = ax.max(axis=-1)
    if math.isinf(p):
        return m
    if p == 1:
        return ax.sum(axis=-1)
    safe = np.where(m > 0, m, 1.0)
    return np.where(m > 0, safe * np.power(np.sum((ax / safe[..., None]) ** p, axis=-1), 1 / p), 0.0)


def _psi_weights(psi, n: int) -> np.ndarray:
    t = np.arange(n + 1)
    return np.diff(psi(t))


@dataclass(frozen=True)
class Lorentz(SymmetricGauge):
    """``Σ x*_n (ψ(n) - ψ(n-1))``."""

    psi: PowerPsi | LogPsi

    def __post_init__(self):
        _check_psi_shape(self.psi)

    def __str__(self):
        return "lorentz:" + _psi_text(self.psi)

    def norm(self, x):
        xs = rearrange(x)
        return self._out(xs @ _psi_weights(self.psi, xs.shape[-1]), xs)

    def dual_norm(self, x):
        xs = rearrange(x)
        n = xs.shape[-1]
        return self._out(np.max(np.cumsum(xs, -1) / self.psi(np.arange(1, n + 1)), -1), xs)

    def subgradient(self, x):
        x = as_vec(x)
        order = np.argsort(-np.abs(x), axis=-1, kind="stable")
        w = np.empty_like(x)
        weights = np.broadcast_to(_psi_weights(self.psi, x.shape[-1]), x.shape)
        np.put_along_axis(w, order, weights, -1)
        return _sign(x) * w


@dataclass(frozen=True)
class Marcinkiewicz(SymmetricGauge):
    """``sup_n (1/ψ(n)) Σ_{k<=n} x*_k``."""

    psi: PowerPsi | LogPsi

    def __post_init__(self):
        _check_psi_shape(self.psi)

    def __str__(self):
        return "marcinkiewicz:" + _psi_text(self.psi)

    def norm(self, x):
        xs = rearrange(x)
        n = xs.shape[-1]
        return self._out(np.max(np.cumsum(xs, -1) / self.psi(np.arange(1, n + 1)), -1), xs)

    def dual_norm(self, x):
        xs = rearrange(x)
        return self._out(xs @ _psi_weights(self.psi, xs.shape[-1]), xs)

    def subgradient(self, x):
        x = as_vec(x)
        n = x.shape[-1]
        order = np.argsort(-np.abs(x), axis=-1, kind="stable")
        xs = np.take_along_axis(np.abs(x), order, -1)
        psi = self.psi(np.arange(1, n + 1))
        k = np.argmax(np.cumsum(xs, -1) / psi, axis=-1)[..., None]
        sorted_w = np.where(np.arange(n) <= k, 1.0 / psi[k], 0.0)
        w = np.empty_like(x)
        np.put_along_axis(w, order, sorted_w, -1)
        return _sign(x) * w


@dataclass(frozen=True)
class Orlicz(SymmetricGauge):
    """Luxemburg norm ``inf{ a > 0 : Σ Φ(|x_n|/a) <= 1 }``."""

    phi: PowerOrlicz | ExpPowerOrlicz

    def __post_init__(self):
        _check_orlicz_shape(self.phi)

    def __str__(self):
        return f"orlicz:{self.phi.tag}:{_fmt(self.phi.p)}"

    def norm(self, x):
        x = as_vec(x)
        return self._out(_luxemburg(self.phi, x), x)

    def dual_norm(self, x):
        x = as_vec(x)
        if isinstance(self.phi, PowerOrlicz):
            return Lp(self.phi.p).dual_norm(x)
        if x.ndim == 1:
            return _orlicz_dual_kkt(self.phi, x)
        flat = x.reshape(-1, x.shape[-1])
        return np.array([_orlicz_dual_kkt(self.phi, r) for r in flat]).reshape(x.shape[:-1])

    def subgradient(self, x):
        x = as_vec(x)
        a = np.asarray(_luxemburg(self.phi, x))[..., None]
        safe = np.where(a > 0, a, 1.0)
        u = np.abs(x) / safe
        d = self.phi.derivative(u) * (np.abs(x) > 0)
        scale = np.sum(u * d, axis=-1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            w = _sign(x) * d / scale
        return np.where(a > 0, w, 0.0)


def _luxemburg(phi, x, rtol: float = LUXEMBURG_RTOL, max_iter: int = LUXEMBURG_MAX_ITER):
    """Vectorized bisection for the Luxemburg norm along the last axis.

    The bracket ``[max|x| / Φ⁻¹(1), Σ|x| / Φ⁻¹(1)]`` always contains the root
    by convexity of Φ and Φ(0) = 0.  Rows are scaled by ``max|x|`` first so
    subnormal and huge inputs bracket alike.
    """
    ax = np.abs(x)
    c = phi.inverse_one()
    top = ax.max(axis=-1)
    zero = top == 0
    scale = np.where(zero, 1.0, top)
    ax = ax / scale[..., None]
    lo = np.full(top.shape, 1.0 / c)
    hi = np.where(zero, 1.0, ax.sum(axis=-1) / c)

    def feasible(a):
        with np.errstate(over="ignore"):
            return phi(ax / a[..., None]).sum(axis=-1) <= 1.0

    if not np.all(feasible(hi) | zero):
        raise NonConvergence("Luxemburg bisection failed to bracket the upper end")
    lo_excess = phi(ax / lo[..., None]).sum(axis=-1)
    if not np.all((lo_excess >= 1.0 - 1e-12) | zero):
        raise NonConvergence("Luxemburg bisection failed to bracket the lower end")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        done = (hi - lo <= rtol * hi) | (mid <= lo) | (mid >= hi)
        if np.all(done):
            break
        ok = feasible(mid)
        hi = np.where(ok & ~done, mid, hi)
        lo = np.where(~ok & ~done, mid, lo)
    else:
        raise NonConvergence(f"Luxemburg bisection exceeded {max_iter} iterations")
    return np.where(zero, 0.0, hi * scale)


def _orlicz_dual_kkt(phi: ExpPowerOrlicz, x: np.ndarray) -> float:
    """Maximize ``Σ x*_j d_j`` over ``Σ Φ(d_j) <= 1`` from the stationarity condition.

    At the optimum ``x*_j = μ Φ'(d_j)`` on the support, so ``d`` is a monotone
    function of ``t = 1/μ``; ``t`` is fixed by ``Σ Φ(d_j(t)) = 1``.
    """
    xs = rearrange(x)
    if xs[0] == 0:
        return 0.0
    inv = np.vectorize(phi.inverse_derivative, otypes=[float])

    def d_of(t):
        return inv(t * xs)

    def excess(t):
        return float(np.sum(phi(d_of(t)))) - 1.0

    t_lo = float(phi.derivative(0.0)) / xs[0]
    t_hi = max(2.0 * t_lo, 1.0 / xs[0])
    for _ in range(200):
        if excess(t_hi) > 0:
            break
        t_lo, t_hi = t_hi, 2.0 * t_hi
    else:
        raise NonConvergence("Orlicz dual maximizer failed to bracket the multiplier")
    t = brentq(excess, t_lo, t_hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    return float(xs @ d_of(t))


def _psi_text(psi) -> str:
    if isinstance(psi, LogPsi):
        return "log"
    return f"pow:{_fmt(psi.alpha)}"


# --- functional surface -------------------------------------------------------

def gauge_norm(g: SymmetricGauge, x):
    """``||x||_E`` for the gauge ``g``."""
    return g.norm(x)


def kothe_dual_norm(g: SymmetricGauge, x, dim: int | None = None):
    """Köthe dual norm of ``x`` under ``g``; ``dim`` must match ``len(x)`` if given."""
    x = as_vec(x)
    if dim is not None and x.shape[-1] != dim:
        raise ValueError(f"dim={dim} does not match vector length {x.shape[-1]}")
    return g.dual_norm(x)


def subgradient(g: SymmetricGauge, x):
    return g.subgradient(x)


def dual_norm_grid(g: SymmetricGauge, x, resolution: int | None = None, zoom: int = 4) -> float:
    """Brute-force Köthe dual norm by enumerating the simplex (n <= 3).

    Only ``g.norm`` is consulted, so this is independent of every closed form
    in ``dual_norm``.  The coarse grid ``{k/N : Σk = N}`` contains every prefix
    indicator direction when ``N`` is divisible by 6; ``zoom`` rounds of local
    refinement around the incumbent then shrink the spacing by 10x each.
    """
    x = np.abs(as_vec(x))
    if x.ndim != 1 or x.size > 3:
        raise ValueError("grid oracle supports a single vector of length <= 3")
    n = x.size
    if n == 1:
        return float(x[0] / g.norm(np.ones(1)))
    if resolution is None:
        resolution = 600 if n == 2 else 120
    if n == 2:
        head = np.arange(resolution + 1)[:, None] / resolution
    else:
        i, j = np.triu_indices(resolution + 1)
        head = np.stack([i, j - i], axis=1) / resolution

    def score(h):
        pts = np.concatenate([h, 1.0 - h.sum(axis=1, keepdims=True)], axis=1)
        pts = pts[np.all(pts >= 0, axis=1) & np.any(pts > 0, axis=1)]
        vals = pts @ x / g.norm(pts)
        k = int(np.argmax(vals))
        return vals[k], pts[k, :-1]

    best, centre = score(head)
    step = 1.0 / resolution
    offsets = np.linspace(-2.0, 2.0, 41)
    for _ in range(zoom):
        grid = np.stack(np.meshgrid(*[offsets] * (n - 1), indexing="ij"), -1).reshape(-1, n - 1)
        val, cand = score(centre + step * grid)
        if val > best:
            best, centre = val, cand
        step /= 10.0
    return float(best)


def parse_gauge(text: str) -> SymmetricGauge:
    """Parse a gauge text form such as ``lp:2`` or ``lorentz:pow:0.5``."""
    parts = [p.strip().lower() for p in str(text).split(":")]
    try:
        family = parts[0]
        if family == "lp" and len(parts) == 2:
            return Lp(_parse_number(parts[1]))
        if family == "orlicz" and len(parts) == 3:
            kind = {"pow": PowerOrlicz, "exppow": ExpPowerOrlicz}[parts[1]]
            return Orlicz(kind(_parse_number(parts[2])))
        if family in ("lorentz", "marcinkiewicz") and len(parts) in (2, 3):
            if parts[1] == "log" and len(parts) == 2:
                psi = LogPsi()
            elif parts[1] == "pow" and len(parts) == 3:
                psi = PowerPsi(_parse_number(parts[2]))
            else:
                raise KeyError(parts[1])
            return (Lorentz if family == "lorentz" else Marcinkiewicz)(psi)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed gauge {text!r}: {exc}") from None
    raise ConfigError(f"malformed gauge {text!r}")


def _parse_number(s: str) -> float:
    if s in ("inf", "infinity", "∞"):
        return math.inf
    v = float(s)
    if math.isnan(v):
        raise ValueError("nan parameter")
    return v
