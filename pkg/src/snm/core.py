"""Schwarzian-Newton root finding: step formulas, osculating curves, driver.

The Schwarzian-Newton method (SNM) is the fixed-point iteration

    x_{n+1} = x_n - arctan(Omega(x_n), h(x_n))

where Omega is half the Schwarzian derivative of the target function f,
h = f / ((B/2) f + f') with B = -f''/f', and arctan(lam, u) is the inverse
of the generalized tangent ``gtan`` (circular for lam > 0, identity for
lam = 0, hyperbolic for lam < 0).  One step is exact for any function with
constant Schwarzian derivative; in general the method has convergence
order four.  Halley's method is the lam -> 0 member of the same family,
and Newton's method is kept as a baseline.

Geometrically each SNM step fits the curve

    y(x) = (gtan(lam, x - x_n) + A) / (B gtan(lam, x - x_n) + C)

matching f and its first three derivatives at x_n, then solves y = 0.
``osculating_fit`` / ``osculating_root`` expose this construction; it is
algebraically equivalent to the arctan step formula.

Problems supply f, f', B and Omega in closed form through the
:class:`Problem` contract; ``solve`` runs the iteration with step/residual
stopping tests, an automatic Halley fallback where the hyperbolic branch
is undefined, and a domain safeguard.
"""

from __future__ import annotations

import math
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

MACHINE_EPSILON = sys.float_info.epsilon

# |lam * u^2| below this uses the odd power series in gtan/gatan; keeps
# relative truncation error under 1e-18, below double rounding.
SERIES_THRESHOLD = 1e-6

# Residual stop used by the application solvers (and the CLI) in place of
# the disabled library default: tens of ulps of a CDF value, under which
# the kernels cannot distinguish the residual from rounding noise (long
# continued-fraction chains carry a few 1e-15 of it), while staying an
# order of magnitude below the 1e-13 round-trip contracts.
RESIDUAL_NOISE_FLOOR = 1e-14

HALF_PI = math.pi / 2


class SnmError(Exception):
    """Base class for solver errors."""


class DerivativeVanishedError(SnmError):
    """f' is zero (or not finite) at an evaluation point."""


class StepUndefinedError(SnmError):
    """The hyperbolic-branch inverse needs |u|*sqrt(-lam) < 1.

    Raised by ``gatan`` (and so by ``snm_step``) when the argument leaves
    the arctanh range; callers fall back to a Halley step.
    """


class DegenerateStepError(SnmError):
    """The Halley/SNM denominator (B/2) f + f' vanished, or D = 0."""


class PoleError(SnmError):
    """An osculating curve was evaluated at one of its poles."""


class Method(str, Enum):
    SNM = "snm"
    HALLEY = "halley"
    NEWTON = "newton"


class StopReason(str, Enum):
    STEP_TOL = "StepTol"
    RESIDUAL_TOL = "ResidualTol"
    MAX_ITER = "MaxIter"
    DERIVATIVE_VANISHED = "DerivativeVanished"
    DOMAIN_EXIT = "DomainExit"


class Safeguard(str, Enum):
    CLAMP_TO_DOMAIN = "clamp"
    FAIL = "fail"


@dataclass(frozen=True)
class Interval:
    """Solver domain with open/closed endpoint semantics.

    Endpoints may be infinite; ``lo < hi`` is required.
    """

    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"empty interval: lo={self.lo} >= hi={self.hi}")

    def contains(self, x: float) -> bool:
        if math.isnan(x):
            return False
        if self.lo_open:
            if x <= self.lo:
                return False
        elif x < self.lo:
            return False
        if self.hi_open:
            if x >= self.hi:
                return False
        elif x > self.hi:
            return False
        return True


@dataclass(frozen=True)
class ProblemEvaluation:
    """Everything one SNM/Halley/Newton step needs at a point.

    Attributes:
        x: abscissa.
        f: residual value f(x).
        fp: first derivative f'(x); nonzero and finite.
        big_b: B = -f''/f'.
        omega: half the Schwarzian derivative of f at x.
        h: the Halley correction f / ((B/2) f + f').  Set to a signed
            infinity when the denominator vanishes; the step formulas
            raise :class:`DegenerateStepError` in that case.
    """

    x: float
    f: float
    fp: float
    big_b: float
    omega: float
    h: float

    @classmethod
    def build(cls, x: float, f: float, fp: float, big_b: float,
              omega: float) -> "ProblemEvaluation":
        """Construct an evaluation, deriving h from f, fp and big_b."""
        if fp == 0.0 or not math.isfinite(fp):
            raise DerivativeVanishedError(f"f'({x}) = {fp}")
        if not math.isfinite(omega):
            raise ValueError(f"omega not finite at x={x}: {omega}")
        denom = 0.5 * big_b * f + fp
        if denom == 0.0:
            h = math.copysign(math.inf, f) if f != 0.0 else 0.0
        else:
            h = f / denom
        return cls(x=x, f=f, fp=fp, big_b=big_b, omega=omega, h=h)

    @classmethod
    def from_derivatives(cls, x: float, f: float, fp: float, fpp: float,
                         fppp: float) -> "ProblemEvaluation":
        """Construct an evaluation from raw derivatives f', f'', f'''."""
        if fp == 0.0 or not math.isfinite(fp):
            raise DerivativeVanishedError(f"f'({x}) = {fp}")
        return cls.build(x, f, fp, -fpp / fp, schwarzian_omega(fp, fpp, fppp))


class Problem(ABC):
    """Behavioral contract for an invertible scalar problem.

    Implementations must be deterministic and read-only after
    construction (safe for concurrent use).  ``evaluate`` is only
    required for points strictly inside ``domain()`` unless the concrete
    problem supports endpoint evaluation.
    """

    #: Diagnostic hint about Omega's monotonicity near the root; one of
    #: "decreasing-left-of-root", "increasing-right-of-root", "unknown".
    omega_monotone_hint: str = "unknown"

    @abstractmethod
    def evaluate(self, x: float) -> ProblemEvaluation:
        ...

    @abstractmethod
    def domain(self) -> Interval:
        ...


class FunctionProblem(Problem):
    """Problem built from callables for f and its first three derivatives."""

    def __init__(self, f: Callable[[float], float],
                 fp: Callable[[float], float],
                 fpp: Callable[[float], float],
                 fppp: Callable[[float], float],
                 domain: Interval) -> None:
        self._f = f
        self._fp = fp
        self._fpp = fpp
        self._fppp = fppp
        self._domain = domain

    def evaluate(self, x: float) -> ProblemEvaluation:
        return ProblemEvaluation.from_derivatives(
            x, self._f(x), self._fp(x), self._fpp(x), self._fppp(x))

    def domain(self) -> Interval:
        return self._domain


def tan_problem() -> FunctionProblem:
    """f(x) = tan x on (-pi/2, pi/2): the canonical constant-Schwarzian demo.

    Omega is identically 1, so a single SNM step from any interior point
    lands on the root at 0, while Halley steps x - tan x can leave the
    interval near the endpoints.
    """
    sec2 = lambda x: 1.0 + math.tan(x) ** 2
    return FunctionProblem(
        f=math.tan,
        fp=sec2,
        fpp=lambda x: 2.0 * math.tan(x) * sec2(x),
        fppp=lambda x: 2.0 * sec2(x) * (1.0 + 3.0 * math.tan(x) ** 2),
        domain=Interval(-HALF_PI, HALF_PI, lo_open=True, hi_open=True),
    )


@dataclass
class SolveOptions:
    """Driver configuration.

    The stopping rule is |step| <= abs_tol + rel_tol * |x|, or
    |f| <= residual_tol (disabled at the default 0, where only an exact
    zero triggers it), or max_iter.
    """

    abs_tol: float = 1e-15
    rel_tol: float = 4 * MACHINE_EPSILON
    residual_tol: float = 0.0
    max_iter: int = 30
    method: Method = Method.SNM
    series_threshold: float = SERIES_THRESHOLD
    safeguard: Safeguard = Safeguard.CLAMP_TO_DOMAIN

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.residual_tol < 0:
            raise ValueError("residual_tol must be >= 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0 < self.series_threshold < 1:
            raise ValueError("series_threshold must be in (0, 1)")


@dataclass(frozen=True)
class IterationRecord:
    """One applied step of the driver.

    ``x`` is the iterate the step was taken from and ``step`` the applied
    increment, so ``x + step`` is the next iterate bit-for-bit.
    ``fallback_used`` is set when the raw formula was replaced (Halley
    fallback on an undefined hyperbolic branch, or domain safeguard).
    """

    n: int
    x: float
    f: float
    h: float
    omega: float
    step: float
    fallback_used: bool


@dataclass(frozen=True)
class SolveReport:
    """Result of a solve call; converged iff reason is a tolerance stop."""

    root: float
    iterations: int
    trace: tuple[IterationRecord, ...]
    converged: bool
    reason: StopReason
    notes: tuple[str, ...] = ()

    def with_root(self, root: float, *extra_notes: str) -> "SolveReport":
        return replace(self, root=root, notes=self.notes + extra_notes)


def gtan(lam: float, x: float, series_threshold: float = SERIES_THRESHOLD) -> float:
    """Generalized tangent: tan for lam > 0, identity at 0, tanh for lam < 0.

    Returns tan(sqrt(lam) x)/sqrt(lam), x, or tanh(sqrt(-lam) x)/sqrt(-lam).
    Continuous in lam at 0; for |lam x^2| below ``series_threshold`` the
    odd series x (1 + w/3 + 2 w^2/15), w = lam x^2, is used.

    Raises:
        ValueError: lam > 0 and |x| sqrt(lam) >= pi/2 (outside the
            principal branch).
    """
    w = lam * x * x
    if abs(w) < series_threshold:
        return x * (1.0 + w / 3.0 + 2.0 / 15.0 * w * w)
    if lam > 0.0:
        s = math.sqrt(lam)
        if abs(x) * s >= HALF_PI:
            raise ValueError(
                f"gtan outside principal branch: |x|*sqrt(lam) = {abs(x) * s}")
        return math.tan(s * x) / s
    s = math.sqrt(-lam)
    return math.tanh(s * x) / s


def gatan(lam: float, u: float, series_threshold: float = SERIES_THRESHOLD) -> float:
    """Inverse of ``gtan``: arctan / identity / arctanh by the sign of lam.

    For |lam u^2| below ``series_threshold`` the odd series
    u (1 - w/3 + w^2/5), w = lam u^2, avoids cancellation.

    Raises:
        StepUndefinedError: lam < 0 and |u| sqrt(-lam) >= 1.  This is the
            signal that an SNM step is undefined at the point; the caller
            applies a Halley fallback.
    """
    w = lam * u * u
    if abs(w) < series_threshold:
        return u * (1.0 - w / 3.0 + 0.2 * w * w)
    if lam > 0.0:
        s = math.sqrt(lam)
        return math.atan(s * u) / s
    s = math.sqrt(-lam)
    t = s * u
    if abs(t) >= 1.0:
        raise StepUndefinedError(f"|u|*sqrt(-lam) = {abs(t)} >= 1")
    return math.atanh(t) / s


def schwarzian_omega(fp: float, fpp: float, fppp: float) -> float:
    """Half the Schwarzian derivative from raw derivatives.

    Returns (1/2) (f'''/f' - (3/2) (f''/f')^2).
    """
    if fp == 0.0:
        raise ValueError("Schwarzian derivative undefined where f' = 0")
    r = fpp / fp
    return 0.5 * (fppp / fp - 1.5 * r * r)


def newton_step(e: ProblemEvaluation) -> float:
    """Newton's method: x - f/f'."""
    return e.x - e.f / e.fp


def halley_step(e: ProblemEvaluation) -> float:
    """Halley's method: x - f/(f' - f'' f/(2 f')), i.e. x - h."""
    if not math.isfinite(e.h):
        raise DegenerateStepError(f"(B/2) f + f' = 0 at x={e.x}")
    return e.x - e.h


def snm_step(e: ProblemEvaluation,
             series_threshold: float = SERIES_THRESHOLD) -> float:
    """One Schwarzian-Newton step: x - arctan(Omega, h).

    Reduces to ``halley_step`` bit-for-bit when Omega = 0, and is exact
    (lands on the root) for functions with constant Schwarzian derivative.

    Raises:
        StepUndefinedError: Omega < 0 and |h| sqrt(-Omega) >= 1.
        DegenerateStepError: the h denominator vanished.
    """
    if not math.isfinite(e.h):
        raise DegenerateStepError(f"(B/2) f + f' = 0 at x={e.x}")
    return e.x - gatan(e.omega, e.h, series_threshold)


@dataclass(frozen=True)
class OsculatingModel:
    """Constants of the tangent curve (gtan(lam,u) + a)/(b gtan(lam,u) + c).

    Anchored at ``x_anchor`` (u = x - x_anchor); matches the source
    function's value and first three derivatives there.  ``d`` is the
    normalizer 2 f'^2 - f f''.
    """

    x_anchor: float
    lam: float
    a: float
    b: float
    c: float
    d: float


def osculating_fit(e: ProblemEvaluation) -> OsculatingModel:
    """Fit the four-constant tangent curve to an evaluation.

    lam = Omega(x), a = 2 f f'/D, b = -f''/D, c = 2 f'/D with
    D = 2 f'^2 - f f''; f'' is recovered as -B f'.
    """
    fpp = -e.big_b * e.fp
    d = 2.0 * e.fp * e.fp - e.f * fpp
    if d == 0.0:
        raise DegenerateStepError(f"D = 2 f'^2 - f f'' = 0 at x={e.x}")
    return OsculatingModel(
        x_anchor=e.x,
        lam=e.omega,
        a=2.0 * e.f * e.fp / d,
        b=-fpp / d,
        c=2.0 * e.fp / d,
        d=d,
    )


def osculating_root(m: OsculatingModel,
                    series_threshold: float = SERIES_THRESHOLD) -> float:
    """Root of the osculating curve: x_anchor - gatan(lam, a).

    Agrees with ``snm_step`` on the generating evaluation (the two
    constructions are algebraically identical).
    """
    return m.x_anchor - gatan(m.lam, m.a, series_threshold)


def osculating_eval(m: OsculatingModel, x: float,
                    series_threshold: float = SERIES_THRESHOLD) -> float:
    """Value of the osculating curve at x.

    Raises:
        PoleError: at a zero of the denominator.
        ValueError: gtan outside its principal branch (lam > 0).
    """
    u = gtan(m.lam, x - m.x_anchor, series_threshold)
    den = m.b * u + m.c
    if den == 0.0:
        raise PoleError(f"osculating curve pole at x={x}")
    return (u + m.a) / den


def _step_for(method: Method, e: ProblemEvaluation,
              series_threshold: float) -> float:
    if method is Method.NEWTON:
        return newton_step(e)
    if method is Method.HALLEY:
        return halley_step(e)
    return snm_step(e, series_threshold)


def solve(problem: Problem, x0: float,
          opts: Optional[SolveOptions] = None) -> SolveReport:
    """Iterate the selected method from x0 until a stopping test fires.

    Counting rule: ``iterations`` (= len(trace)) is the number of applied
    steps larger than the step tolerance.  When a proposed step falls
    within tolerance it is applied to refine the root but not counted, so
    an exact method shows 1 iteration, not 2.

    An undefined SNM step (hyperbolic branch out of range) is replaced by
    one Halley step and flagged in the trace.  A step leaving the domain
    is clamped to the midpoint between the current iterate and the
    violated endpoint (or fails, per ``opts.safeguard``).
    """
    if opts is None:
        opts = SolveOptions()
    dom = problem.domain()
    if not dom.contains(x0):
        raise ValueError(f"x0 = {x0} outside problem domain")

    x = x0
    trace: list[IterationRecord] = []

    def report(root: float, converged: bool, reason: StopReason) -> SolveReport:
        return SolveReport(root=root, iterations=len(trace),
                           trace=tuple(trace), converged=converged,
                           reason=reason)

    while True:
        try:
            e = problem.evaluate(x)
        except DerivativeVanishedError:
            return report(x, False, StopReason.DERIVATIVE_VANISHED)

        if abs(e.f) <= opts.residual_tol:
            return report(x, True, StopReason.RESIDUAL_TOL)

        fallback = False
        try:
            try:
                raw = _step_for(opts.method, e, opts.series_threshold)
            except StepUndefinedError:
                raw = halley_step(e)
                fallback = True
        except DegenerateStepError:
            return report(x, False, StopReason.DERIVATIVE_VANISHED)

        step = raw - x
        x_next = x + step

        if not (math.isfinite(x_next) and dom.contains(x_next)):
            if opts.safeguard is Safeguard.FAIL or math.isnan(x_next):
                return report(x, False, StopReason.DOMAIN_EXIT)
            endpoint = dom.hi if x_next > x else dom.lo
            if not math.isfinite(endpoint):
                return report(x, False, StopReason.DOMAIN_EXIT)
            x_next = 0.5 * (x + endpoint)
            step = x_next - x
            x_next = x + step
            fallback = True

        if abs(step) <= opts.abs_tol + opts.rel_tol * abs(x):
            return report(x_next, True, StopReason.STEP_TOL)

        trace.append(IterationRecord(n=len(trace) + 1, x=x, f=e.f, h=e.h,
                                     omega=e.omega, step=step,
                                     fallback_used=fallback))
        x = x_next
        if len(trace) >= opts.max_iter:
            return report(x, False, StopReason.MAX_ITER)
