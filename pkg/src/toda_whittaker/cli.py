"""Command-line front end.

Verbs: ``eval`` (evaluate chain eigenfunctions), ``baxter-apply`` (apply an
integral operator and compare with its predicted eigenvalue action),
``verify`` (run an identity-verification suite and emit per-case records),
``lfactor`` (local factors, exact or numeric), and ``kernel`` (print kernel
values, optionally swept along one coordinate for plotting).

Output is text, JSON records (one per line, fixed key order, floats with 17
significant digits), or CSV.  A ``key=value`` config file supplies defaults
that explicit flags override.  Identical configuration yields byte-identical
reports.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    ContourError,
    PoleError,
    RankError,
    ShiftError,
    TodaWhittakerError,
)
from .gl_whittaker import (
    closed_form_gl2,
    closed_form_gl2_batch,
    givental_eval,
    givental_recursive_eval,
    givental_step_kernel,
    mellin_barnes_eval,
    toda_apply,
)
from .gl_baxter import (
    baxter_apply,
    baxter_eigenfunction,
    baxter_eigenfunction_batch,
    baxter_eigenvalue,
    baxter_kernel,
    commutation_residual,
    dual_baxter_apply,
    mb_closed_form_batch,
    spherical_transform_check_rank2,
)
from .so_toda import (
    closed_form_so3,
    so_baxter_apply,
    so_baxter_eigenvalue,
    so_givental_eval,
    so_recursive_eval,
    so_toda_apply_h2,
)
from .local_lfactors import (
    SatakeClass,
    archimedean_lfactor,
    local_lfactor_p,
    local_lfactor_p_exact,
    verify_tq_identity,
)
from .rankin_selberg import (
    barnes_gustafson_check,
    bump_friedberg_integral,
    bump_friedberg_prediction,
    bump_inner_correlation,
    bump_inner_correlation_prediction,
    double_step_kernel,
    stade_kernel,
)

__all__ = ["main", "entry"]

_FLOAT_FMT = "%.17g"
_FORMATS = ("json", "csv", "text")
_DEFAULT_BUDGET = 4_000_000


class _UsageError(Exception):
    """Invalid command-line arguments; reported with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse hook
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# Value parsing and formatting


def _parse_complex(text: str) -> complex:
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError:
        raise _UsageError(f"not a number: {text!r}")


def _parse_clist(text: str) -> tuple[complex, ...]:
    toks = [t for t in str(text).split(",") if t.strip() != ""]
    return tuple(_parse_complex(t) for t in toks)


def _parse_rlist(text: str) -> tuple[float, ...]:
    vals = _parse_clist(text)
    for v in vals:
        if v.imag != 0.0:
            raise _UsageError(f"expected real coordinates, got {text!r}")
    return tuple(v.real for v in vals)


def _parse_fraction_list(text: str) -> tuple[Fraction, ...]:
    toks = [t.strip() for t in str(text).split(",") if t.strip() != ""]
    try:
        return tuple(Fraction(t) for t in toks)
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"not a rational list: {text!r}")


def _f(x) -> str:
    return _FLOAT_FMT % float(x)


def _json_scalar(v) -> str:
    if isinstance(v, Fraction) or (isinstance(v, int) and not isinstance(v, bool)):
        fr = Fraction(v)
        return '{"num": "%d", "den": "%d"}' % (fr.numerator, fr.denominator)
    c = complex(v)
    return '{"re": %s, "im": %s}' % (_f(c.real), _f(c.imag))


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _complex_str(v) -> str:
    c = complex(v)
    sign = "-" if c.imag < 0 or (c.imag == 0.0 and math.copysign(1.0, c.imag) < 0) else "+"
    return "%s %s %sj" % (_f(c.real), sign, _f(abs(c.imag)))


@dataclass(frozen=True)
class CaseResult:
    case: str
    lhs: object
    rhs: object
    residual: float
    tol: float
    ok: bool


def _record_lines(results: Sequence[CaseResult], fmt: str) -> list[str]:
    lines = []
    if fmt == "csv":
        lines.append("case,lhs_re,lhs_im,rhs_re,rhs_im,residual,tol,pass")
        for r in results:
            lc, rc = complex(r.lhs), complex(r.rhs)
            lines.append(
                ",".join(
                    [
                        r.case,
                        _f(lc.real),
                        _f(lc.imag),
                        _f(rc.real),
                        _f(rc.imag),
                        _f(r.residual),
                        _f(r.tol),
                        _bool(r.ok),
                    ]
                )
            )
        return lines
    if fmt == "json":
        for r in results:
            lines.append(
                '{"case": %s, "lhs": %s, "rhs": %s, "residual": %s, '
                '"tol": %s, "pass": %s}'
                % (
                    json.dumps(r.case),
                    _json_scalar(r.lhs),
                    _json_scalar(r.rhs),
                    _f(r.residual),
                    _f(r.tol),
                    _bool(r.ok),
                )
            )
        return lines
    for r in results:
        lines.append(
            "%-32s %s  residual=%.3e  tol=%.3e"
            % (r.case, "PASS" if r.ok else "FAIL", r.residual, r.tol)
        )
    return lines


# ---------------------------------------------------------------------------
# Configuration


def _load_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise _UsageError(f"config line without '=': {line!r}")
            key, val = line.split("=", 1)
            cfg[key.strip().lower().replace("-", "_")] = val.strip().strip('"')
    return cfg


def _resolve(args, attr: str, conv, default, cfg_key: str | None = None):
    """Flag value if given, else config-file value, else the default."""
    val = getattr(args, attr, None)
    if val is None:
        cfg = getattr(args, "_config_dict", {})
        val = cfg.get(cfg_key or attr)
    if val is None:
        return default
    try:
        return conv(val)
    except _UsageError:
        raise
    except (TypeError, ValueError):
        flag = (cfg_key or attr).replace("_", "-")
        raise _UsageError(f"invalid value for --{flag}: {val!r}")


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("TODA_WHITTAKER_WORKERS", "1")))
    except ValueError:
        return 1


def _common_options(args) -> tuple[float | None, int, str, int]:
    tol = _resolve(args, "tol", float, None)
    if tol is not None and tol <= 0.0:
        raise _UsageError("--tol must be positive")
    budget = _resolve(args, "budget", int, _DEFAULT_BUDGET)
    if budget < 1:
        raise _UsageError("--budget must be at least 1")
    fmt = _resolve(args, "format", str, "text")
    if fmt not in _FORMATS:
        raise _UsageError(f"--format must be one of {', '.join(_FORMATS)}")
    workers = _resolve(args, "workers", int, _default_workers())
    if workers < 1:
        raise _UsageError("--workers must be at least 1")
    return tol, budget, fmt, workers


# ---------------------------------------------------------------------------
# eval


_EVAL_RANK = {"gl1": 1, "gl2": 2, "gl3": 3, "so3": 1, "so5": 2}
_EVAL_METHODS = {
    "gl1": ("closed", "givental", "recursive"),
    "gl2": ("closed", "givental", "recursive", "mb"),
    "gl3": ("givental", "recursive", "mb"),
    "so3": ("closed", "givental", "recursive"),
    "so5": ("givental", "recursive"),
}
_EVAL_AUTO = {
    "gl1": "closed",
    "gl2": "closed",
    "gl3": "recursive",
    "so3": "closed",
    "so5": "givental",
}


def _emit_value(fmt: str, value: complex, abs_error: float, evaluations: int, converged: bool) -> None:
    if fmt == "json":
        print(
            '{"value": %s, "abs_error": %s, "evaluations": %d, "converged": %s}'
            % (_json_scalar(value), _f(abs_error), evaluations, _bool(converged))
        )
        return
    if fmt == "csv":
        print("re,im,abs_error,evaluations,converged")
        print(
            ",".join(
                [_f(value.real), _f(value.imag), _f(abs_error), str(evaluations), _bool(converged)]
            )
        )
        return
    print("value = %s" % _complex_str(value))
    print("abs_error = %s" % _f(abs_error))
    print("evaluations = %d" % evaluations)
    print("converged = %s" % _bool(converged))


def cmd_eval(args) -> int:
    tol, budget, fmt, _ = _common_options(args)
    tol = tol if tol is not None else 1e-8
    algebra = _resolve(args, "algebra", str, None)
    if algebra is None:
        raise _UsageError("--algebra is required")
    if algebra not in _EVAL_RANK:
        raise RankError(
            f"unsupported algebra tag {algebra!r}: expected one of "
            + ", ".join(sorted(_EVAL_RANK))
        )
    lam = _resolve(args, "lam", _parse_clist, None, cfg_key="lambda")
    x = _resolve(args, "x", _parse_rlist, None)
    if lam is None:
        raise _UsageError("--lambda is required")
    if x is None:
        raise _UsageError("--x is required")
    rank = _EVAL_RANK[algebra]
    if len(lam) != rank:
        raise _UsageError(f"--lambda must have {rank} entries for {algebra}")
    if len(x) != rank:
        raise _UsageError(f"--x must have {rank} entries for {algebra}")
    method = _resolve(args, "method", str, "auto")
    if method == "auto":
        method = _EVAL_AUTO[algebra]
    if method not in _EVAL_METHODS[algebra]:
        raise _UsageError(
            f"--method {method!r} not available for {algebra} "
            f"(choose from {', '.join(_EVAL_METHODS[algebra])})"
        )

    exit_code = 0
    if method == "closed":
        if algebra == "gl1":
            value = cmath.exp(1j * lam[0] * x[0])
            err = 2e-16 * abs(value)
        elif algebra == "gl2":
            value = closed_form_gl2(lam, x)
            err = 1e-11 * abs(value)
        else:  # so3
            value = closed_form_so3(lam[0], x[0])
            err = 1e-11 * abs(value)
        evals, converged = 0, True
    else:
        so_chain = algebra in ("so3", "so5")
        try:
            if method == "givental":
                res = (
                    so_givental_eval(lam, x, tol, budget)
                    if so_chain
                    else givental_eval(lam, x, tol)
                )
            elif method == "recursive":
                res = (
                    so_recursive_eval(lam, x, tol, budget)
                    if so_chain
                    else givental_recursive_eval(lam, x, tol)
                )
            else:
                res = mellin_barnes_eval(lam, x, tol)
        except BudgetExceeded as exc:
            res = exc.result
            if res is None:
                raise
        value, err, evals, converged = res.value, res.abs_error, res.evaluations, res.converged
        if not converged:
            exit_code = 2
    _emit_value(fmt, complex(value), err, evals, converged)
    return exit_code


# ---------------------------------------------------------------------------
# baxter-apply


def cmd_baxter_apply(args) -> int:
    tol, budget, fmt, _ = _common_options(args)
    tol = tol if tol is not None else 1e-6
    algebra = _resolve(args, "algebra", str, "gl")
    if algebra not in ("gl", "so3"):
        raise RankError(f"unsupported algebra tag {algebra!r}: expected gl or so3")
    gamma_t = _resolve(args, "gamma", _parse_clist, None)
    lam = _resolve(args, "lam", _parse_clist, None, cfg_key="lambda")
    y = _resolve(args, "y", _parse_rlist, None)
    if gamma_t is None or len(gamma_t) != 1:
        raise _UsageError("--gamma must give exactly one operator parameter")
    if lam is None:
        raise _UsageError("--lambda is required")
    if y is None:
        raise _UsageError("--y is required")
    gamma = gamma_t[0]

    exit_code = 0
    try:
        if algebra == "so3":
            if len(lam) != 1 or len(y) != 1:
                raise _UsageError("so3 operator application takes scalar --lambda and --y")
            res = so_baxter_apply(gamma, lam, y, tol, budget)
            base = closed_form_so3(lam[0], y[0])
            prediction = so_baxter_eigenvalue(gamma, lam) * base
        else:
            conv = _resolve(args, "convention", str, "lie")
            if conv not in ("lie", "iwasawa", "iwasawa_pi"):
                raise _UsageError("--convention must be lie, iwasawa, or iwasawa_pi")
            if len(y) != len(lam):
                raise _UsageError("--y and --lambda must have the same length")

            def psi(xs: np.ndarray) -> np.ndarray:
                return baxter_eigenfunction_batch(lam, xs, conv)

            res = baxter_apply(psi, y, gamma, conv, tol, psi_spectral=lam, max_evals=budget)
            prediction = baxter_eigenvalue(gamma, lam, conv) * baxter_eigenfunction(lam, y, conv)
    except BudgetExceeded as exc:
        if exc.result is None:
            raise
        res = exc.result
        prediction = None
        exit_code = 2
    if not res.converged:
        exit_code = 2

    residual = abs(res.value - prediction) if prediction is not None else float("inf")
    if fmt == "json":
        print(
            '{"value": %s, "abs_error": %s, "prediction": %s, "residual": %s, '
            '"evaluations": %d, "converged": %s}'
            % (
                _json_scalar(res.value),
                _f(res.abs_error),
                _json_scalar(prediction if prediction is not None else 0.0),
                _f(residual),
                res.evaluations,
                _bool(res.converged),
            )
        )
    elif fmt == "csv":
        print("re,im,abs_error,prediction_re,prediction_im,residual,evaluations,converged")
        pc = complex(prediction) if prediction is not None else 0j
        print(
            ",".join(
                [
                    _f(res.value.real),
                    _f(res.value.imag),
                    _f(res.abs_error),
                    _f(pc.real),
                    _f(pc.imag),
                    _f(residual),
                    str(res.evaluations),
                    _bool(res.converged),
                ]
            )
        )
    else:
        print("value = %s" % _complex_str(res.value))
        print("abs_error = %s" % _f(res.abs_error))
        if prediction is not None:
            print("prediction = %s" % _complex_str(prediction))
            print("residual = %s" % _f(residual))
        print("evaluations = %d" % res.evaluations)
        print("converged = %s" % _bool(res.converged))
    return exit_code


# ---------------------------------------------------------------------------
# verify suites


@dataclass(frozen=True)
class _SuiteOptions:
    tol: float | None
    budget: int
    rank: int | None
    n: int
    trials: int

    def tol_or(self, default: float) -> float:
        return self.tol if self.tol is not None else default


def _suite_baxter_eigen(o: _SuiteOptions):
    specs = [
        ("rank1-lie", -1.2j, (0.4,), (0.2,), "lie", o.tol_or(1e-8), 10.0),
        ("rank1-iwasawa", -2.4j, (0.8,), (0.4,), "iwasawa", o.tol_or(1e-8), 10.0),
        ("rank1-iwasawa-pi", -2.4j, (0.8,), (0.4,), "iwasawa_pi", o.tol_or(1e-8), 10.0),
        ("rank2-lie", -1.5j, (0.5, -0.5), (0.1, -0.3), "lie", o.tol_or(1e-5), 10.0),
        ("rank2-iwasawa-pi", -3.0j, (0.5, -0.5), (-0.6, 0.9), "iwasawa_pi", 2e-5, 10.0),
    ]
    thunks = []
    for name, gamma, lam, y, conv, tol, factor in specs:
        if o.rank is not None and len(lam) != o.rank:
            continue

        def run(name=name, gamma=gamma, lam=lam, y=y, conv=conv, tol=tol, factor=factor):
            def psi(xs: np.ndarray) -> np.ndarray:
                return baxter_eigenfunction_batch(lam, xs, conv)

            res = baxter_apply(psi, y, gamma, conv, tol, psi_spectral=lam, max_evals=o.budget)
            base = baxter_eigenfunction(lam, y, conv)
            lhs = res.value / base
            rhs = baxter_eigenvalue(gamma, lam, conv)
            limit = factor * tol * max(1.0, 1.0 / abs(base))
            resid = abs(lhs - rhs)
            return CaseResult(name, lhs, rhs, resid, limit, resid <= limit)

        thunks.append((name, run))
    return thunks


def _suite_mb_vs_givental(o: _SuiteOptions):
    specs = [
        ("gl2", (0.4, -0.3), (0.25, -0.45), o.tol_or(1e-8)),
        ("gl3", (0.6, 0.1, -0.45), (0.3, 0.0, -0.3), o.tol_or(1e-6)),
    ]
    thunks = []
    for name, lam, x, tol in specs:

        def run(name=name, lam=lam, x=x, tol=tol):
            mb = mellin_barnes_eval(lam, x, tol)
            if name == "gl2":
                ref = closed_form_gl2(lam, x)
            else:
                ref = givental_recursive_eval(lam, x, tol).value
            resid = abs(mb.value - ref)
            limit = 10.0 * tol
            return CaseResult(name, mb.value, ref, resid, limit, resid <= limit)

        thunks.append((name, run))
    return thunks


def _suite_stade(o: _SuiteOptions):
    specs = [
        ("ell1", (0.3, -0.2), (), (0.5, -0.5), o.tol_or(1e-8)),
        ("ell2", (0.3, 0.0, -0.3), (0.1,), (0.5, -0.5), o.tol_or(1e-7)),
    ]
    thunks = []
    for name, xt, xb, lam, tol in specs:

        def run(name=name, xt=xt, xb=xb, lam=lam, tol=tol):
            closed = stade_kernel(xt, xb, lam)
            quad = double_step_kernel(xt, xb, lam, tol, o.budget)
            resid = abs(quad.value - closed)
            limit = 10.0 * tol
            return CaseResult(name, quad.value, closed, resid, limit, resid <= limit)

        thunks.append((name, run))
    return thunks


def _suite_bump_friedberg(o: _SuiteOptions):
    thunks = []

    def run_l0a():
        tol = o.tol_or(1e-8)
        res = bump_friedberg_integral(0, (0.0,), (0.0,), -0.7j, tol, o.budget)
        rhs = bump_friedberg_prediction((0.0,), (0.0,), -0.7j)
        resid = abs(res.value - rhs)
        return CaseResult("ell0-gamma07", res.value, rhs, resid, 10 * tol, resid <= 10 * tol)

    def run_l0b():
        tol = o.tol_or(1e-8)
        res = bump_friedberg_integral(0, (0.3,), (0.1,), -1.0j, tol, o.budget)
        rhs = bump_friedberg_prediction((0.3,), (0.1,), -1.0j)
        resid = abs(res.value - rhs)
        return CaseResult("ell0-shifted", res.value, rhs, resid, 10 * tol, resid <= 10 * tol)

    def run_l1():
        tol = max(o.tol_or(1e-4), 1e-5)
        res = bump_friedberg_integral(1, (0.4, -0.4), (0.2, -0.2), -0.8j, tol, o.budget)
        rhs = bump_friedberg_prediction((0.4, -0.4), (0.2, -0.2), -0.8j)
        resid = abs(res.value - rhs)
        return CaseResult("ell1-pair", res.value, rhs, resid, 20 * tol, resid <= 20 * tol)

    def run_corr():
        tol = o.tol_or(1e-6)
        gam, lam, t, x_last = (0.3,), (0.2, -0.2), -0.8j, 0.6
        res = bump_inner_correlation(1, gam, lam, t, x_last, tol, o.budget)
        rhs = bump_inner_correlation_prediction(gam, lam, t, x_last)
        resid = abs(res.value - rhs)
        return CaseResult("inner-correlation", res.value, rhs, resid, 20 * tol, resid <= 20 * tol)

    thunks.append(("ell0-gamma07", run_l0a))
    thunks.append(("ell0-shifted", run_l0b))
    thunks.append(("ell1-pair", run_l1))
    thunks.append(("inner-correlation", run_corr))
    return thunks


def _suite_barnes(o: _SuiteOptions):
    specs = [
        ("imaginary-pairs", (-0.5j, -0.7j), (0.5j, 0.6j)),
        ("generic-complex", (0.3 - 0.6j, -0.2 - 0.5j), (0.1 + 0.4j, -0.3 + 0.55j)),
        ("wide-separation", (-0.9j, -1.1j), (0.8j, 1.2j)),
    ]
    thunks = []
    for name, lam2, gam2 in specs:

        def run(name=name, lam2=lam2, gam2=gam2):
            tol = o.tol_or(1e-8)
            chk = barnes_gustafson_check(lam2, gam2, tol, o.budget)
            limit = 10.0 * tol
            return CaseResult(name, chk.lhs, chk.rhs, chk.residual, limit, chk.residual <= limit)

        thunks.append((name, run))
    return thunks


def _suite_tq_padic(o: _SuiteOptions):
    rng = np.random.default_rng(20260822)
    primes = (2, 3, 5, 7, 11)
    thunks = []
    for trial in range(o.trials):
        n = int(rng.integers(1, min(max(o.n, 1), 5) + 1))
        params = []
        for _ in range(n):
            num = 0
            while num == 0:
                num = int(rng.integers(-9, 10))
            den = int(rng.integers(1, 10))
            params.append(Fraction(num, den))
        p = int(primes[int(rng.integers(0, len(primes)))])
        name = "trial%02d-n%d-p%d" % (trial, n, p)

        def run(name=name, params=tuple(params), p=p, n=n):
            sigma = SatakeClass(params, p)
            ok = verify_tq_identity(sigma, 2 * n + 4)
            resid = 0.0 if ok else 1.0
            return CaseResult(name, Fraction(1), Fraction(1), resid, 0.0, ok)

        thunks.append((name, run))
    return thunks


def _suite_toda(o: _SuiteOptions):
    step = 1e-3
    limit = 1e-7

    def richardson(apply_fn) -> complex:
        coarse = apply_fn(step)
        fine = apply_fn(step / 2.0)
        return (4.0 * fine - coarse) / 3.0

    def gl1_psi(xs: np.ndarray) -> np.ndarray:
        return np.exp(1j * 0.7 * xs[:, 0])

    lam2 = (0.5, -0.3)

    def gl2_psi(xs: np.ndarray) -> np.ndarray:
        return closed_form_gl2_batch(lam2, xs)

    def so3_psi(xs: np.ndarray) -> np.ndarray:
        return np.array([closed_form_so3(0.6, float(r[0])) for r in xs])

    specs = [
        ("gl1-h1", lambda s: toda_apply("H1", gl1_psi, (0.3,), s), gl1_psi, (0.3,), 0.7 + 0j),
        (
            "gl1-h2",
            lambda s: toda_apply("H2tilde", gl1_psi, (0.3,), s),
            gl1_psi,
            (0.3,),
            0.5 * 0.7**2 + 0j,
        ),
        (
            "gl2-h1",
            lambda s: toda_apply("H1", gl2_psi, (0.2, -0.1), s),
            gl2_psi,
            (0.2, -0.1),
            lam2[0] + lam2[1] + 0j,
        ),
        (
            "gl2-h2",
            lambda s: toda_apply("H2tilde", gl2_psi, (0.2, -0.1), s),
            gl2_psi,
            (0.2, -0.1),
            0.5 * (lam2[0] ** 2 + lam2[1] ** 2) + 0j,
        ),
        (
            "so3-h2",
            lambda s: so_toda_apply_h2(so3_psi, (0.25,), s),
            so3_psi,
            (0.25,),
            0.5 * 0.6**2 + 0j,
        ),
    ]
    thunks = []
    for name, apply_fn, psi, x, rhs in specs:

        def run(name=name, apply_fn=apply_fn, psi=psi, x=x, rhs=rhs):
            base = complex(psi(np.asarray([list(x)], dtype=float))[0])
            lhs = richardson(apply_fn) / base
            resid = abs(lhs - rhs)
            return CaseResult(name, lhs, rhs, resid, limit, resid <= limit)

        thunks.append((name, run))
    return thunks


def _suite_dual_baxter(o: _SuiteOptions):
    specs = [
        ("rank1", (0.4,), (0.1,), 0.7, o.tol_or(1e-8)),
        ("rank2", (0.5, -0.3), (0.2, -0.4), 0.9, o.tol_or(1e-5)),
    ]
    thunks = []
    for name, gamma, x, z, tol in specs:

        def run(name=name, gamma=gamma, x=x, z=z, tol=tol):
            def F(betas: np.ndarray) -> np.ndarray:
                return mb_closed_form_batch(betas, x)

            res = dual_baxter_apply(F, gamma, z, tol, max_evals=o.budget)
            base = complex(mb_closed_form_batch(np.asarray([gamma], dtype=complex), x)[0])
            lhs = res.value / base
            rhs = math.exp(-math.exp(x[-1] - z))
            limit = 10.0 * tol * max(1.0, 1.0 / abs(base))
            resid = abs(lhs - rhs)
            return CaseResult(name, lhs, rhs, resid, limit, resid <= limit)

        thunks.append((name, run))
    return thunks


def _suite_spherical_rank2(o: _SuiteOptions):
    specs = [
        ("acceptance-point", (0.8, -0.8), -1.5j),
        ("generic-point", (0.3, -0.6), -1.8j),
        ("constant-zonal", (0.0, 0.0), -1.5j),
    ]
    thunks = []
    for name, gamma, lam in specs:

        def run(name=name, gamma=gamma, lam=lam):
            tol = o.tol_or(1e-5)
            chk = spherical_transform_check_rank2(gamma, lam, tol, o.budget)
            limit = 10.0 * tol
            return CaseResult(name, chk.lhs, chk.rhs, chk.residual, limit, chk.residual <= limit)

        thunks.append((name, run))
    return thunks


def _suite_commute(o: _SuiteOptions):
    specs = [
        ("rank1", (-0.9j, -1.4j), (0.3,), (0.2,)),
        ("rank2", (-0.9j, -1.4j), (0.4, -0.4), (0.2, -0.1)),
    ]
    thunks = []
    for name, gammas, lam, y in specs:

        def run(name=name, gammas=gammas, lam=lam, y=y):
            tol = o.tol_or(1e-7)
            chk = commutation_residual(gammas, lam, y, tol, o.budget)
            limit = 10.0 * tol
            return CaseResult(
                name,
                chk.first_then_second,
                chk.second_then_first,
                chk.residual,
                limit,
                chk.residual <= limit,
            )

        thunks.append((name, run))
    return thunks


_SUITES = {
    "baxter-eigen": _suite_baxter_eigen,
    "mb-vs-givental": _suite_mb_vs_givental,
    "stade": _suite_stade,
    "bump-friedberg": _suite_bump_friedberg,
    "barnes": _suite_barnes,
    "tq-padic": _suite_tq_padic,
    "toda": _suite_toda,
    "dual-baxter": _suite_dual_baxter,
    "spherical-rank2": _suite_spherical_rank2,
    "commute": _suite_commute,
}


def cmd_verify(args) -> int:
    tol, budget, fmt, workers = _common_options(args)
    suite = _resolve(args, "suite", str, None)
    if suite is None:
        raise _UsageError("--suite is required")
    if suite not in _SUITES:
        raise _UsageError(
            f"unknown suite {suite!r}: expected one of " + ", ".join(sorted(_SUITES))
        )
    rank = _resolve(args, "rank", int, None)
    n = _resolve(args, "n", int, 3)
    trials = _resolve(args, "trials", int, 20)
    if trials < 1:
        raise _UsageError("--trials must be at least 1")
    opts = _SuiteOptions(tol=tol, budget=budget, rank=rank, n=n, trials=trials)
    thunks = _SUITES[suite](opts)
    if not thunks:
        raise _UsageError("no cases selected (check --rank)")

    budget_hit = [False]

    def call(pair) -> CaseResult:
        name, fn = pair
        try:
            return fn()
        except BudgetExceeded:
            budget_hit[0] = True
            return CaseResult(name, 0.0, 0.0, 1e300, 0.0, False)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(call, thunks))
    else:
        results = [call(t) for t in thunks]

    for line in _record_lines(results, fmt):
        print(line)
    passed = sum(1 for r in results if r.ok)
    print("passed %d/%d cases" % (passed, len(results)), file=sys.stderr)
    if budget_hit[0]:
        return 2
    return 0 if passed == len(results) else 3


# ---------------------------------------------------------------------------
# lfactor


def cmd_lfactor(args) -> int:
    _, _, fmt, _ = _common_options(args)
    place = _resolve(args, "place", str, None)
    if place is None:
        raise _UsageError("--place is required (inf or a prime number)")
    s_raw = _resolve(args, "s", str, None)
    if s_raw is None:
        raise _UsageError("--s is required")

    if place == "inf":
        alpha = _resolve(args, "alpha", _parse_clist, None)
        if alpha is None:
            raise _UsageError("--alpha is required at the archimedean place")
        value = archimedean_lfactor(alpha, _parse_complex(s_raw))
        if fmt == "json":
            print('{"value": %s}' % _json_scalar(value))
        elif fmt == "csv":
            print("re,im")
            print("%s,%s" % (_f(value.real), _f(value.imag)))
        else:
            print(_complex_str(value))
        return 0

    try:
        p = int(place)
    except ValueError:
        raise _UsageError(f"--place must be 'inf' or a prime integer, got {place!r}")
    satake = _resolve(args, "satake", _parse_fraction_list, None)
    if satake is None:
        raise _UsageError("--satake is required at a finite place")
    sigma = SatakeClass(satake, p)

    s_frac: Fraction | None
    try:
        s_frac = Fraction(s_raw)
    except (ValueError, ZeroDivisionError):
        s_frac = None
    if s_frac is not None and s_frac.denominator == 1:
        value = local_lfactor_p_exact(sigma, int(s_frac))
        if fmt == "json":
            print('{"value": %s}' % _json_scalar(value))
        elif fmt == "csv":
            print("re,im")
            print("%s,%s" % (_f(float(value)), _f(0.0)))
        else:
            print(str(value))
        return 0
    s_val = _parse_complex(s_raw) if s_frac is None else complex(float(s_frac))
    value = local_lfactor_p(sigma, s_val)
    if fmt == "json":
        print('{"value": %s}' % _json_scalar(value))
    elif fmt == "csv":
        print("re,im")
        print("%s,%s" % (_f(value.real), _f(value.imag)))
    else:
        print(_complex_str(value))
    return 0


# ---------------------------------------------------------------------------
# kernel


def _parse_sweep(text: str) -> tuple[int, float, float, int]:
    parts = str(text).split(":")
    if len(parts) != 4:
        raise _UsageError("--sweep must be index:start:stop:count")
    try:
        idx, start, stop, count = int(parts[0]), float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise _UsageError("--sweep must be index:start:stop:count")
    if count < 2:
        raise _UsageError("--sweep count must be at least 2")
    return idx, start, stop, count


def cmd_kernel(args) -> int:
    _, _, fmt, _ = _common_options(args)
    kind = _resolve(args, "kind", str, None)
    if kind is None:
        raise _UsageError("--kind is required (step, baxter, or stade)")
    if kind not in ("step", "baxter", "stade"):
        raise _UsageError(f"--kind must be step, baxter, or stade, got {kind!r}")
    sweep = _resolve(args, "sweep", _parse_sweep, None)

    if kind == "baxter":
        gamma_t = _resolve(args, "gamma", _parse_clist, None)
        y = _resolve(args, "y", _parse_rlist, None)
        x = _resolve(args, "x", _parse_rlist, None)
        conv = _resolve(args, "convention", str, "lie")
        if gamma_t is None or len(gamma_t) != 1:
            raise _UsageError("--gamma must give exactly one operator parameter")
        if y is None or x is None:
            raise _UsageError("--y and --x are required for the baxter kernel")

        def evaluate(pt: Sequence[float]) -> complex:
            return baxter_kernel(y, pt, gamma_t[0], conv)

        base = list(x)
    else:
        lam = _resolve(args, "lam", _parse_clist, None, cfg_key="lambda")
        xt = _resolve(args, "x_top", _parse_rlist, None, cfg_key="x_top")
        xb = _resolve(args, "x_bot", _parse_rlist, (), cfg_key="x_bot")
        if lam is None or xt is None:
            raise _UsageError("--lambda and --x-top are required for this kernel")
        if kind == "step":
            if len(lam) != 1:
                raise _UsageError("--lambda must be a single parameter for the step kernel")

            def evaluate(pt: Sequence[float]) -> complex:
                return givental_step_kernel(pt, xb, lam[0])

        else:
            if len(lam) != 2:
                raise _UsageError("--lambda must give two parameters for the stade kernel")

            def evaluate(pt: Sequence[float]) -> complex:
                return stade_kernel(pt, xb, lam)

        base = list(xt)

    if sweep is None:
        value = evaluate(base)
        if fmt == "json":
            print('{"value": %s}' % _json_scalar(value))
        elif fmt == "csv":
            print("re,im")
            print("%s,%s" % (_f(value.real), _f(value.imag)))
        else:
            print(_complex_str(value))
        return 0

    idx, start, stop, count = sweep
    if not (0 <= idx < len(base)):
        raise _UsageError(f"--sweep index {idx} out of range for a {len(base)}-coordinate kernel")
    rows = []
    for t in np.linspace(start, stop, count):
        pt = list(base)
        pt[idx] = float(t)
        rows.append((float(t), evaluate(pt)))
    if fmt == "json":
        for t, v in rows:
            print('{"t": %s, "value": %s}' % (_f(t), _json_scalar(v)))
    else:
        print("t,re,im")
        for t, v in rows:
            print("%s,%s,%s" % (_f(t), _f(v.real), _f(v.imag)))
    return 0


# ---------------------------------------------------------------------------
# Parser assembly and entry points


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", help="absolute accuracy target")
    p.add_argument("--budget", help="maximum quadrature evaluations")
    p.add_argument("--format", help="output format: json, csv, or text")
    p.add_argument("--workers", help="parallel case workers (default $TODA_WHITTAKER_WORKERS or 1)")
    p.add_argument("--config", help="key=value config file; flags override it")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="toda-whittaker",
        description="Evaluate chain eigenfunctions, apply their integral operators, "
        "verify Gamma-product identities, and compute local factors.",
    )
    sub = parser.add_subparsers(dest="cmd")

    pe = sub.add_parser("eval", help="evaluate an eigenfunction")
    pe.add_argument("--algebra", help="gl1, gl2, gl3, so3, or so5")
    pe.add_argument("--lambda", dest="lam", help="comma-separated spectral parameters")
    pe.add_argument("--x", help="comma-separated evaluation point")
    pe.add_argument("--method", help="auto, closed, givental, recursive, or mb")
    _add_common(pe)
    pe.set_defaults(func=cmd_eval)

    pb = sub.add_parser("baxter-apply", help="apply an integral operator")
    pb.add_argument("--algebra", help="gl (default) or so3")
    pb.add_argument("--gamma", help="operator spectral parameter")
    pb.add_argument("--lambda", dest="lam", help="eigenfunction spectral parameters")
    pb.add_argument("--y", help="evaluation point")
    pb.add_argument("--convention", help="lie (default), iwasawa, or iwasawa_pi")
    _add_common(pb)
    pb.set_defaults(func=cmd_baxter_apply)

    pv = sub.add_parser("verify", help="run an identity-verification suite")
    pv.add_argument("--suite", help="suite name; one of " + ", ".join(sorted(_SUITES)))
    pv.add_argument("--rank", help="restrict suite cases to this rank")
    pv.add_argument("--n", help="maximum parameter-multiset size (tq-padic)")
    pv.add_argument("--trials", help="number of random trials (tq-padic)")
    _add_common(pv)
    pv.set_defaults(func=cmd_verify)

    pl = sub.add_parser("lfactor", help="compute a local factor")
    pl.add_argument("--place", help="'inf' or a prime integer")
    pl.add_argument("--alpha", help="archimedean parameters (comma-separated)")
    pl.add_argument("--satake", help="finite-place rational parameters (comma-separated)")
    pl.add_argument("--s", help="the point of evaluation")
    _add_common(pl)
    pl.set_defaults(func=cmd_lfactor)

    pk = sub.add_parser("kernel", help="print kernel values (optionally swept)")
    pk.add_argument("--kind", help="step, baxter, or stade")
    pk.add_argument("--gamma", help="operator parameter (baxter kernel)")
    pk.add_argument("--y", help="output point (baxter kernel)")
    pk.add_argument("--x", help="input point (baxter kernel)")
    pk.add_argument("--convention", help="kernel convention (baxter kernel)")
    pk.add_argument("--lambda", dest="lam", help="spectral parameters (step/stade)")
    pk.add_argument("--x-top", dest="x_top", help="top coordinates (step/stade)")
    pk.add_argument("--x-bot", dest="x_bot", help="bottom coordinates (step/stade)")
    pk.add_argument("--sweep", help="index:start:stop:count sweep of one coordinate")
    _add_common(pk)
    pk.set_defaults(func=cmd_kernel)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        print(
            "error: a command is required (eval, baxter-apply, verify, lfactor, kernel)",
            file=sys.stderr,
        )
        return 1
    config_path = getattr(args, "config", None)
    try:
        args._config_dict = _load_config(config_path) if config_path else {}
    except OSError as exc:
        print(f"error: cannot read config file: {exc}", file=sys.stderr)
        return 1
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"BudgetExceeded: {exc}", file=sys.stderr)
        return 2
    except (PoleError, RankError, ShiftError, ContourError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TodaWhittakerError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
