"""Scalar special-function layer: complex log-gamma, overflow-safe Gamma
products, and the Macdonald function (modified Bessel function of the second
kind, standard normalization).

Everything downstream — quadrature integrands, Whittaker evaluators, Baxter
eigenvalues, L-factors — reduces to these primitives, so they are written to be
dependable over large complex ranges rather than fast in any exotic sense.
Vectorized variants (numpy arrays in, arrays out) are provided for the
integrand hot paths; the scalar entry points add the full argument validation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, PoleError

__all__ = [
    "AccuracyBudget",
    "log_gamma",
    "gamma_product",
    "macdonald_k",
]

# ---------------------------------------------------------------------------
# Accuracy budget


@dataclass(frozen=True)
class AccuracyBudget:
    """Accuracy request for scalar special-function evaluation.

    Parameters
    ----------
    rel_tol : float
        Target relative accuracy, strictly between 0 and 1.
    abs_floor : float
        Magnitudes below this are considered indistinguishable from zero
        (used to size integral truncations and underflow handling).
    """

    rel_tol: float = 1e-12
    abs_floor: float = 1e-280

    def __post_init__(self) -> None:
        if not (0.0 < float(self.rel_tol) < 1.0):
            raise ValueError(f"rel_tol must lie strictly in (0, 1), got {self.rel_tol}")
        if float(self.abs_floor) < 0.0:
            raise ValueError(f"abs_floor must be >= 0, got {self.abs_floor}")


_DEFAULT_BUDGET = AccuracyBudget()

# ---------------------------------------------------------------------------
# log-gamma: Lanczos approximation (g = 7, 9 coefficients) plus reflection.

_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
_LOG_TWO = math.log(2.0)
_POLE_TOL = 1e-12


def _lanczos_log_gamma(z: complex) -> complex:
    # Valid (and accurate) for Re z >= 0.5.
    w = z - 1.0
    acc = _LANCZOS_COEFFS[0]
    for k in range(1, 9):
        acc += _LANCZOS_COEFFS[k] / (w + k)
    t = w + 7.5
    return _HALF_LOG_TWO_PI + (w + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_sin_pi_upper(z: complex) -> complex:
    # Branch-continuous log sin(pi z) for Im z >= 0: real on (0, 1) and
    # analytic across every vertical strip, so the reflection formula below
    # reproduces the principal branch of log-gamma (not just its exponential).
    # |e^{2 pi i z}| <= 1 on the closed upper half-plane, so nothing overflows.
    w = cmath.exp(2j * math.pi * z)
    return -1j * math.pi * z + 0.5j * math.pi - _LOG_TWO + cmath.log(1.0 - w)


def log_gamma(z: complex, budget: AccuracyBudget = _DEFAULT_BUDGET) -> complex:
    """Principal branch of the log-Gamma function.

    Raises
    ------
    PoleError
        If ``z`` lies within 1e-12 of a non-positive integer.
    """
    z = complex(z)
    n = round(z.real)
    if n <= 0 and abs(z - n) <= _POLE_TOL:
        raise PoleError(f"log_gamma pole at z={z!r} (non-positive integer {n})")
    if z.imag < 0.0:
        return log_gamma(z.conjugate(), budget).conjugate()
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    return _LOG_PI - _log_sin_pi_upper(z) - _lanczos_log_gamma(1.0 - z)


def log_gamma_array(z: np.ndarray) -> np.ndarray:
    """Vectorized principal-branch log-Gamma for integrand hot paths.

    No pole checking: points at poles produce ``inf``/``nan`` entries, which
    well-posed contours never hit. Input is any array-like of complex numbers.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    lower = z.imag < 0.0
    zu = np.where(lower, np.conj(z), z)

    right = zu.real >= 0.5
    # Right half-plane: Lanczos directly.
    zr = np.where(right, zu, 1.0 - zu)  # both branches need a Re >= 0.5 input
    w = zr - 1.0
    acc = np.full(zr.shape, _LANCZOS_COEFFS[0], dtype=complex)
    for k in range(1, 9):
        acc += _LANCZOS_COEFFS[k] / (w + k)
    t = w + 7.5
    lg_right = _HALF_LOG_TWO_PI + (w + 0.5) * np.log(t) - t + np.log(acc)

    # Left half-plane via reflection with the branch-continuous log-sin.
    ex = np.exp(2j * math.pi * zu)
    log_sin = -1j * math.pi * zu + 0.5j * math.pi - _LOG_TWO + np.log(1.0 - ex)
    lg_left = _LOG_PI - log_sin - lg_right

    out = np.where(right, lg_right, lg_left)
    return np.where(lower, np.conj(out), out)


def gamma_product(zs: Sequence[complex], budget: AccuracyBudget = _DEFAULT_BUDGET) -> complex:
    """Product of Gamma values, accumulated in log space.

    The log terms are summed in a sorted (value-ordered) sequence, so the
    result is bit-for-bit invariant under permutations of the input.

    Raises
    ------
    PoleError
        If any factor sits at a pole; ``index`` identifies which.
    """
    logs = []
    for idx, z in enumerate(zs):
        try:
            logs.append(log_gamma(z, budget))
        except PoleError as exc:
            raise PoleError(
                f"gamma_product factor {idx} at z={complex(z)!r} is a pole", index=idx
            ) from exc
    logs.sort(key=lambda v: (v.real, v.imag))
    total = 0j
    for v in logs:
        total += v
    return cmath.exp(total)


# ---------------------------------------------------------------------------
# Macdonald function K_nu(y), standard normalization:
#   K_nu(y) = integral_0^inf e^{-y cosh u} cosh(nu u) du,   y > 0.

_MAX_RE_ORDER = 50.0
_MAX_NODES = 1 << 16
_EPS = float(np.finfo(float).eps)


@lru_cache(maxsize=4)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _composite_nodes(t_max: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite 64-point Gauss rule on [0, t_max] with `panels` equal panels.

    Memory stays linear in the node count, unlike a single high-order rule.
    """
    nodes, weights = _gauss_legendre(64)
    width = t_max / panels
    starts = width * np.arange(panels)
    t = (starts[:, None] + 0.5 * width * (nodes + 1.0)[None, :]).reshape(-1)
    w = np.broadcast_to(0.5 * width * weights, (panels, nodes.size)).reshape(-1).copy()
    return t, w


def _cosh_cutoff(y_min: float, re_order: float, budget: AccuracyBudget) -> float:
    # Choose T with y*cosh(T) - |Re nu|*T larger than the underflow budget, so
    # the neglected tail of the cosh integral is below abs_floor.
    target = -math.log(max(budget.abs_floor, 1e-300)) + 40.0
    t = 2.0
    for _ in range(6):
        t = math.acosh(max((target + abs(re_order) * t) / y_min, 2.0))
    return t + 1.0


def _macdonald_grid(nu: complex, y: np.ndarray, budget: AccuracyBudget) -> np.ndarray:
    """K_nu(y_i) for one order and an array of positive arguments."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0):
        raise ValueError("macdonald_k requires y > 0")
    t_max = _cosh_cutoff(float(np.min(y)), nu.real, budget)
    prev = None
    panels = 4
    while panels * 64 <= _MAX_NODES:
        t, w = _composite_nodes(t_max, panels)
        # 2 cosh(nu t) e^{-y cosh t} = e^{nu t - y cosh t} + e^{-nu t - y cosh t},
        # assembled in log space so large |Re nu| cannot overflow prematurely.
        ch = np.cosh(t)
        est, absint = _chunked_cosh_quad(nu, y, t, ch, w)
        if prev is not None:
            err = np.abs(est - prev)
            scale = np.maximum(np.abs(est), budget.abs_floor)
            floor = 50.0 * _EPS * absint + budget.abs_floor
            if np.all(err <= budget.rel_tol * scale + floor):
                return est
        prev = est
        panels *= 2
    raise ConvergenceError(
        f"macdonald_k did not converge (order {nu!r}, {y.size} argument(s), "
        f"max nodes {_MAX_NODES})"
    )


def _chunked_cosh_quad(
    nu: complex, y: np.ndarray, t: np.ndarray, ch: np.ndarray, w: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    out = np.empty(y.shape, dtype=complex)
    absint = np.empty(y.shape, dtype=float)
    chunk = max(1, int(4_000_000 // max(t.size, 1)))
    nut = nu * t
    for lo in range(0, y.size, chunk):
        hi = min(lo + chunk, y.size)
        expo = -np.multiply.outer(y[lo:hi], ch)
        a = expo + nut
        b = expo - nut
        np.clip(a.real, -745.0, 709.0, out=a.real)
        np.clip(b.real, -745.0, 709.0, out=b.real)
        vals = 0.5 * (np.exp(a) + np.exp(b))
        out[lo:hi] = vals @ w
        absint[lo:hi] = np.abs(vals) @ w
    return out, absint


def _macdonald_pairs(nu: np.ndarray, y: np.ndarray, budget: AccuracyBudget) -> np.ndarray:
    """K_{nu_i}(y_i) for paired arrays of orders and positive arguments."""
    nu = np.asarray(nu, dtype=complex)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0):
        raise ValueError("macdonald_k requires y > 0")
    re_max = float(np.max(np.abs(nu.real))) if nu.size else 0.0
    t_max = _cosh_cutoff(float(np.min(y)), re_max, budget)
    prev = None
    panels = 4
    while panels * 64 <= _MAX_NODES:
        t, w = _composite_nodes(t_max, panels)
        ch = np.cosh(t)
        out = np.empty(y.shape, dtype=complex)
        absint = np.empty(y.shape, dtype=float)
        chunk = max(1, int(4_000_000 // max(t.size, 1)))
        for lo in range(0, y.size, chunk):
            hi = min(lo + chunk, y.size)
            expo = -np.multiply.outer(y[lo:hi], ch)
            nut = np.multiply.outer(nu[lo:hi], t)
            a = expo + nut
            b = expo - nut
            np.clip(a.real, -745.0, 709.0, out=a.real)
            np.clip(b.real, -745.0, 709.0, out=b.real)
            vals = 0.5 * (np.exp(a) + np.exp(b))
            out[lo:hi] = vals @ w
            absint[lo:hi] = np.abs(vals) @ w
        if prev is not None:
            err = np.abs(out - prev)
            scale = np.maximum(np.abs(out), budget.abs_floor)
            floor = 50.0 * _EPS * absint + budget.abs_floor
            if np.all(err <= budget.rel_tol * scale + floor):
                return out
        prev = out
        panels *= 2
    raise ConvergenceError(
        f"macdonald_k pair evaluation did not converge ({y.size} points)"
    )


def macdonald_k(nu: complex, y: float, budget: AccuracyBudget = _DEFAULT_BUDGET) -> complex:
    """Macdonald function K_nu(y), standard normalization, complex order.

    Parameters
    ----------
    nu : complex
        Order; ``|Re nu|`` must not exceed 50.
    y : float
        Argument, strictly positive.
    budget : AccuracyBudget
        Requested accuracy.

    Raises
    ------
    ConvergenceError
        If ``|Re nu| > 50`` or the quadrature fails to stabilize.
    """
    nu = complex(nu)
    y = float(y)
    if y <= 0.0:
        raise ValueError(f"macdonald_k requires y > 0, got {y}")
    if abs(nu.real) > _MAX_RE_ORDER:
        raise ConvergenceError(
            f"macdonald_k supports |Re nu| <= {_MAX_RE_ORDER}, got Re nu = {nu.real}"
        )
    return complex(_macdonald_grid(nu, np.array([y]), budget)[0])
