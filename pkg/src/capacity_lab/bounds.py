"""Closed-form capacity and risk bounds with exact constants.

Every evaluator returns a BoundReport carrying a per-term breakdown.  The
combinatorial right-hand sides blow up double precision even at toy scale, so
those are computed in the natural-log domain throughout; a report whose
direct value would overflow keeps the log value and sets the log_domain flag.
Each evaluator transcribes its source expression symbol for symbol, mixing
log2 and ln exactly as written, with no basis normalization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .capacity import Caps, DEFAULT_CAPS, CapacityQuery, covering_number, DimOracle, dim_oracle_eval
from .errors import InputValidationError, PreconditionError
from .fclass import LabeledSample, TabulatedClass, VectorClass, union_rows
from .metric import P2, PNorm, pairwise_distances
from .rademacher import rademacher_exact, rademacher_mc

_LN_MAX_DOUBLE = 709.782712893384  # ln of the largest finite double


@dataclass(frozen=True)
class BoundReport:
    """An evaluated bound: value, inputs echo, named sub-terms, validity flags.

    When log_domain is set the value field holds the natural log of the bound
    because the direct value overflows double precision.  ln_value() is the
    uniform accessor for comparisons.
    """

    name: str
    inputs: dict
    value: float
    terms: dict = field(default_factory=dict)
    log_domain: bool = False
    flags: dict = field(default_factory=dict)

    def ln_value(self) -> float:
        if self.log_domain:
            return self.value
        if "ln_value" in self.terms:
            return self.terms["ln_value"]
        if self.value <= 0:
            return -math.inf
        return math.log(self.value)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "value": self.value,
            "terms": self.terms,
            "log_domain": self.log_domain,
            "flags": self.flags,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1, sort_keys=True)


def _from_log(name: str, inputs: dict, ln_value: float, terms: dict,
              flags: dict | None = None) -> BoundReport:
    terms = dict(terms)
    terms["ln_value"] = ln_value
    if ln_value > _LN_MAX_DOUBLE:
        return BoundReport(name=name, inputs=inputs, value=ln_value, terms=terms,
                           log_domain=True, flags=flags or {})
    return BoundReport(name=name, inputs=inputs, value=math.exp(ln_value), terms=terms,
                       log_domain=False, flags=flags or {})


# ---------------------------------------------------------------------------
# error function


def erf(x: float) -> float:
    """Error function to 1e-12 absolute on [-6, 6] and beyond.

    |x| <= 2 uses the alternating Maclaurin series (at most 64 terms; 35
    suffice at x = 2, where the first omitted term is below 1e-16).  |x| > 2
    uses the classical continued fraction for the complement, evaluated by
    the modified Lentz scheme (at most 200 iterations; roughly 60 are needed
    near x = 2 and far fewer for large x).
    """
    if x != x:
        return x
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    if ax <= 2.0:
        # sum_{k>=0} (-1)^k x^(2k+1) / (k! (2k+1)), scaled by 2/sqrt(pi)
        term = ax
        total = ax
        k = 0
        xx = ax * ax
        while k < 64:
            k += 1
            term *= -xx / k
            inc = term / (2 * k + 1)
            total += inc
            if abs(inc) < 1e-18:
                break
        val = 2.0 / math.sqrt(math.pi) * total
    else:
        # erfc(x) * sqrt(pi) * exp(x^2) = 1 / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        tiny = 1e-300
        f = ax
        c = f
        d = 0.0
        k = 0
        while k < 200:
            k += 1
            a = k / 2.0
            d = ax + a * d
            if d == 0.0:
                d = tiny
            c = ax + a / c
            if c == 0.0:
                c = tiny
            d = 1.0 / d
            delta = c * d
            f *= delta
            if abs(delta - 1.0) < 1e-17:
                break
        erfc = math.exp(-ax * ax) / (math.sqrt(math.pi) * f)
        val = 1.0 - erfc
    return val if x > 0 else -val


# ---------------------------------------------------------------------------
# chaining schedules


@dataclass(frozen=True)
class ChainSchedule:
    """A strictly decreasing positive radius sequence h(0..N)."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise InputValidationError("a schedule needs N >= 1, i.e. at least h(0), h(1)")
        for v in vals:
            if not (v > 0 and math.isfinite(v)):
                raise InputValidationError("schedule values must be positive and finite")
        for a, b in zip(vals, vals[1:]):
            if b >= a:
                raise InputValidationError("schedule values must be strictly decreasing")
        object.__setattr__(self, "values", vals)

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def h(self, j: int) -> float:
        return self.values[j]

    @classmethod
    def geometric_diam(cls, diam: float, N: int) -> "ChainSchedule":
        """h(j) = 2^-j * diam."""
        return cls("GEOMETRIC_DIAM", tuple(diam * 2.0 ** (-j) for j in range(N + 1)))

    @classmethod
    def geometric_cgamma(cls, C: int, gamma: float, N: int) -> "ChainSchedule":
        """h(j) = 2^-j * sqrt(C) * gamma."""
        s = math.sqrt(C) * gamma
        return cls("GEOMETRIC_CGAMMA_ROOT", tuple(s * 2.0 ** (-j) for j in range(N + 1)))

    @classmethod
    def quartic(cls, gamma: float, N: int) -> "ChainSchedule":
        """h(j) = gamma * 2^(-2j); the schedule behind the d = 1 closed form."""
        return cls("T7_D1", tuple(gamma * 2.0 ** (-2 * j) for j in range(N + 1)))

    @classmethod
    def sqrt_m_over_c(cls, gamma: float, C: int, m: int) -> "ChainSchedule":
        """h(j) = gamma C^(3/4) m^(-1/2) 2^(N-j) with N = ceil(log2(m/C)/2)."""
        if m <= C:
            raise PreconditionError("requires m > C")
        N = math.ceil(0.5 * math.log2(m / C))
        base = gamma * C**0.75 / math.sqrt(m)
        return cls("T7_D2", tuple(base * 2.0 ** (N - j) for j in range(N + 1)))

    @classmethod
    def power_law(cls, gamma: float, C: int, m: int, d: int) -> "ChainSchedule":
        """h(j) = gamma C^(1/2 + 1/d) m^(-1/d) 2^((N-j) 2/(d-2)), d > 2."""
        if m <= C:
            raise PreconditionError("requires m > C")
        if d <= 2:
            raise InputValidationError("this schedule needs d > 2")
        N = math.ceil(((d - 2) / (2 * d)) * math.log2(m / C))
        base = gamma * C ** (0.5 + 1.0 / d) * m ** (-1.0 / d)
        r = 2.0 / (d - 2)
        return cls("T7_D3", tuple(base * 2.0 ** (r * (N - j)) for j in range(N + 1)))


# ---------------------------------------------------------------------------
# capacity bounds (log domain)


def sauer_shelah_lp(eps: float, p: int, M_F: float, d: float) -> BoundReport:
    """Dimension-free packing bound for finite p.

    ln RHS = 2 (K+1) ln 2 + 2 K d ln((6272 e K / 3) (2 M / eps)^(2p+1)) with
    K = ceil((p+2) log2(ceil(112 M / eps))); d is the dimension at eps/45.
    """
    if not (isinstance(p, int) and p >= 1):
        raise InputValidationError(f"p must be a finite integer >= 1, got {p!r}")
    if not 0 < eps <= 2 * M_F:
        raise InputValidationError(f"eps must lie in (0, {2 * M_F}], got {eps!r}")
    if d < 0:
        raise InputValidationError("d must be >= 0")
    K = math.ceil((p + 2) * math.log2(math.ceil(112.0 * M_F / eps)))
    ln_base = math.log(6272.0 * math.e * K / 3.0) + (2 * p + 1) * math.log(2.0 * M_F / eps)
    ln_value = 2.0 * (K + 1) * math.log(2.0) + 2.0 * K * d * ln_base
    return _from_log(
        "sauer_shelah_lp",
        {"eps": eps, "p": p, "M_F": M_F, "d": d},
        ln_value,
        {"K": K, "ln_factor": ln_base, "prefactor_ln": 2.0 * (K + 1) * math.log(2.0)},
    )


def sauer_shelah_linf(eps: float, M_F: float, n: int, d: float) -> BoundReport:
    """Sup-norm packing bound 2 (16 M^2 n / eps^2)^(d log2(4 M e n / (d eps)))."""
    if not 0 < eps <= 2 * M_F:
        raise InputValidationError(f"eps must lie in (0, {2 * M_F}], got {eps!r}")
    if n < 1:
        raise InputValidationError("n must be >= 1")
    if d < 1:
        raise InputValidationError(
            "d must be >= 1 (at d = 0 the exponent is undefined; the packing number "
            "is at most 1 in that case and needs no bound)"
        )
    exponent = d * math.log2(4.0 * M_F * math.e * n / (d * eps))
    ln_value = math.log(2.0) + exponent * math.log(16.0 * M_F**2 * n / eps**2)
    return _from_log(
        "sauer_shelah_linf",
        {"eps": eps, "M_F": M_F, "n": n, "d": d},
        ln_value,
        {"exponent": exponent},
    )


def packing_bound_l2(eps: float, M_F: float, d: float) -> BoundReport:
    """L2 packing bound (3584 e (2M/eps)^5)^(4 d); d is the dimension at eps/96."""
    if not 0 < eps <= 2 * M_F:
        raise InputValidationError(f"eps must lie in (0, {2 * M_F}], got {eps!r}")
    if d < 0:
        raise InputValidationError("d must be >= 0")
    ln_value = 4.0 * d * (math.log(3584.0 * math.e) + 5.0 * math.log(2.0 * M_F / eps))
    return _from_log(
        "packing_bound_l2",
        {"eps": eps, "M_F": M_F, "d": d},
        ln_value,
        {},
    )


def sauer_shelah_grid(eps: float, p: int, M_F: float, N: int, n: int, d: float) -> BoundReport:
    """Strict packing bound for grid-valued classes on n points.

    RHS = 2^((p+2) log2(N) + 1) (e (N-1) n / d)^((p+2) log2(N) d); the bound
    is strict (packing < RHS).  d is the dimension at eps/2 - 3M/N, witnessed
    on the codomain grid.
    """
    if not (isinstance(p, int) and p >= 1):
        raise InputValidationError(f"p must be a finite integer >= 1, got {p!r}")
    if not (isinstance(N, int) and N >= 4):
        raise InputValidationError(f"N must be an integer >= 4, got {N!r}")
    if n < 1:
        raise InputValidationError("n must be >= 1")
    if d < 1:
        raise PreconditionError("d must be >= 1")
    if not 6.0 * M_F / N < eps <= 2.0 * M_F:
        raise PreconditionError(f"eps must lie in ({6.0 * M_F / N}, {2.0 * M_F}], got {eps!r}")
    c = (p + 2) * math.log2(N)
    ln_value = (c + 1.0) * math.log(2.0) + c * d * math.log(math.e * (N - 1) * n / d)
    return _from_log(
        "sauer_shelah_grid",
        {"eps": eps, "p": p, "M_F": M_F, "N": N, "n": n, "d": d},
        ln_value,
        {"exponent_scale": c},
        flags={"strict": True},
    )


def decomposition_rhs(G: VectorClass, sample: LabeledSample, eps: float, p: PNorm, *,
                      caps: Caps = DEFAULT_CAPS) -> BoundReport:
    """Product over components of proper covering numbers at radius eps / C^(1/p).

    Covering numbers are exact, taken over the sample's point multiset; for
    the sup norm the radius shrink factor C^(1/p) is 1.
    """
    if eps <= 0:
        raise InputValidationError("eps must be positive")
    shrink = 1.0 if p.is_inf else float(G.C) ** (1.0 / float(p.p))
    radius = eps / shrink
    pts = sample.points
    factors = {}
    product = 1
    for k, comp in enumerate(G.components):
        q = CapacityQuery(eps=radius, p=p, mode="exact", measure="covering")
        res = covering_number(comp, pts, q, caps=caps)
        factors[f"factor_{k + 1}"] = res.value
        product *= res.value
    return BoundReport(
        name="decomposition_rhs",
        inputs={"C": G.C, "eps": eps, "p": str(p), "m": sample.m, "radius": radius},
        value=float(product),
        terms={**factors, "ln_value": math.log(product)},
    )


# ---------------------------------------------------------------------------
# risk bounds


def linf_risk_bound_covering(L_emp: float, cov: int, m: int, delta: float) -> BoundReport:
    """Sup-norm risk bound from a uniform covering number at radius gamma/2.

    value = L_emp + sqrt((2/m)(ln cov + ln(2/delta))) + 1/m.
    """
    if cov < 1:
        raise InputValidationError("covering number must be >= 1")
    if not 0 < delta < 1:
        raise InputValidationError("delta must lie in (0, 1)")
    if m < 1:
        raise InputValidationError("m must be >= 1")
    complexity = math.sqrt((2.0 / m) * (math.log(cov) + math.log(2.0 / delta)))
    residual = 1.0 / m
    return BoundReport(
        name="linf_risk_bound_covering",
        inputs={"L_emp": L_emp, "cov": cov, "m": m, "delta": delta},
        value=L_emp + complexity + residual,
        terms={"empirical": L_emp, "complexity": complexity, "residual": residual},
    )


def linf_risk_bound_fatdim(L_emp: float, C: int, m: int, gamma: float, M_G: float,
                           delta: float, d: float) -> BoundReport:
    """Sup-norm risk bound driven by the dimension at gamma/8.

    value = L_emp + sqrt((2/m)(3 C d ln^2(128 M_G^2 m / gamma^2) + ln(2/delta))) + 1/m.
    The complexity term with the delta part removed is reported separately
    (it scales exactly as sqrt(C)).
    """
    if m <= C:
        raise PreconditionError(f"requires m > C, got m={m}, C={C}")
    if not 0 < gamma <= 1:
        raise InputValidationError("gamma must lie in (0, 1]")
    if not 0 < delta < 1:
        raise InputValidationError("delta must lie in (0, 1)")
    if M_G < 1:
        raise InputValidationError("M_G must be >= 1")
    if d < 0:
        raise InputValidationError("d must be >= 0")
    log_sq = math.log(128.0 * M_G**2 * m / gamma**2) ** 2
    inner = 3.0 * C * d * log_sq
    complexity = math.sqrt((2.0 / m) * (inner + math.log(2.0 / delta)))
    complexity_sans_delta = math.sqrt((2.0 / m) * inner)
    residual = 1.0 / m
    return BoundReport(
        name="linf_risk_bound_fatdim",
        inputs={"L_emp": L_emp, "C": C, "m": m, "gamma": gamma, "M_G": M_G,
                "delta": delta, "d": d},
        value=L_emp + complexity + residual,
        terms={
            "empirical": L_emp,
            "complexity": complexity,
            "complexity_sans_delta": complexity_sans_delta,
            "log_squared": log_sq,
            "residual": residual,
        },
    )


def l2_risk_bound(L_emp: float, R_m: float, gamma: float, m: int, delta: float) -> BoundReport:
    """L2-route risk bound: L_emp + (2/gamma) R_m + sqrt(ln(1/delta)/(2m))."""
    if not 0 < gamma <= 1:
        raise InputValidationError("gamma must lie in (0, 1]")
    if not 0 < delta < 1:
        raise InputValidationError("delta must lie in (0, 1)")
    if m < 1:
        raise InputValidationError("m must be >= 1")
    if R_m < 0:
        raise InputValidationError("R_m must be >= 0")
    rad_term = 2.0 * R_m / gamma
    conf = math.sqrt(math.log(1.0 / delta) / (2.0 * m))
    return BoundReport(
        name="l2_risk_bound",
        inputs={"L_emp": L_emp, "R_m": R_m, "gamma": gamma, "m": m, "delta": delta},
        value=L_emp + rad_term + conf,
        terms={"empirical": L_emp, "rademacher_term": rad_term, "confidence": conf},
    )


def rademacher_union_rhs(components: Sequence[TabulatedClass], pts: Sequence[int],
                         method: str = "exact", *, trials: int = 0, seed=0,
                         caps: Caps = DEFAULT_CAPS) -> BoundReport:
    """C times the Rademacher complexity of the row union of the components."""
    comps = list(components)
    union = union_rows(comps)
    if method == "exact":
        est = rademacher_exact(union, pts, caps=caps)
    elif method == "mc":
        est = rademacher_mc(union, pts, trials, seed)
    else:
        raise InputValidationError(f"method must be 'exact' or 'mc', got {method!r}")
    C = len(comps)
    return BoundReport(
        name="rademacher_union_rhs",
        inputs={"C": C, "m": len(tuple(pts)), "method": est.method},
        value=C * est.value,
        terms={"union_rademacher": est.value, "union_size": union.size},
        flags={"exact": est.method == "exact"},
    )


def chained_rademacher_bound(schedule: ChainSchedule, C: int, m: int, M_G: float,
                             gamma: float, d: DimOracle | Callable[[float], float]) -> BoundReport:
    """Multi-scale bound on the Rademacher complexity of the squashed margin class.

    value = h(N) + 4 sqrt(5C/m) sum_j (h(j) + h(j-1))
                    sqrt(d(h(j)/(96 sqrt(C))) ln(14 M_G sqrt(C) / h(j))).
    The schedule must satisfy h(0) >= gamma and h(1) <= 2 M_G sqrt(C).
    """
    if not 0 < gamma <= 1:
        raise InputValidationError("gamma must lie in (0, 1]")
    if M_G < 1:
        raise InputValidationError("M_G must be >= 1")
    if m < 1 or C < 1:
        raise InputValidationError("C and m must be >= 1")
    h = schedule.h
    if h(0) < gamma:
        raise PreconditionError(f"schedule needs h(0) >= gamma, got h(0)={h(0)} < {gamma}")
    if h(1) > 2.0 * M_G * math.sqrt(C):
        raise PreconditionError(
            f"schedule needs h(1) <= 2 M_G sqrt(C), got h(1)={h(1)} > {2.0 * M_G * math.sqrt(C)}"
        )
    oracle = d if callable(d) else (lambda e: dim_oracle_eval(d, e))
    rootC = math.sqrt(C)
    prefactor = 4.0 * math.sqrt(5.0 * C / m)
    terms = {}
    total = 0.0
    for j in range(1, schedule.N + 1):
        arg = h(j) / (96.0 * rootC)
        dim = float(oracle(arg))
        if dim < 0:
            raise InputValidationError(f"dimension oracle returned {dim} < 0 at {arg}")
        ln_part = math.log(14.0 * M_G * rootC / h(j))
        term = (h(j) + h(j - 1)) * math.sqrt(dim * ln_part)
        terms[f"j{j}"] = term
        terms[f"j{j}_dim"] = dim
        total += term
    value = h(schedule.N) + prefactor * total
    return BoundReport(
        name="chained_rademacher_bound",
        inputs={"schedule": schedule.name, "N": schedule.N, "C": C, "m": m,
                "M_G": M_G, "gamma": gamma},
        value=value,
        terms={"tail": h(schedule.N), "prefactor": prefactor, "sum": total, **terms},
    )


def parametric_rademacher_bound(d_G: int, K_G: float, C: int, m: int, gamma: float,
                                M_G: float) -> BoundReport:
    """Closed-form Rademacher bounds under a power-law dimension d(eps) <= K eps^-d.

    Dispatches on d_G: an entropy-integral form at d_G = 1 (with the factor
    F(C) = 2 sqrt(14 M_G / gamma) C^(1/4) and the error function), a
    log-scheduled form at d_G = 2, and a geometric-sum form for d_G > 2.
    """
    if m <= C:
        raise PreconditionError(f"requires m > C, got m={m}, C={C}")
    if not 0 < gamma <= 1:
        raise InputValidationError("gamma must lie in (0, 1]")
    if not (isinstance(d_G, int) and d_G >= 1):
        raise InputValidationError("d_G must be an integer >= 1")
    if K_G <= 0:
        raise InputValidationError("K_G must be > 0")
    if M_G < 1:
        raise InputValidationError("M_G must be >= 1")
    inputs = {"d_G": d_G, "K_G": K_G, "C": C, "m": m, "gamma": gamma, "M_G": M_G}
    if d_G == 1:
        F = 2.0 * math.sqrt(14.0 * M_G / gamma) * C**0.25
        lnF = math.log(F)
        integral = math.sqrt(lnF / 2.0) + math.sqrt(math.pi / 8.0) * F * (1.0 - erf(math.sqrt(lnF)))
        prefactor = 160.0 * math.sqrt(30.0 * K_G * gamma / m) * C**0.75
        return BoundReport(
            name="parametric_rademacher_bound",
            inputs=inputs,
            value=prefactor * integral,
            terms={"regime": 1, "F_C": F, "integral": integral, "prefactor": prefactor},
        )
    if d_G == 2:
        N = math.ceil(0.5 * math.log2(m / C))
        head = gamma * C**0.75 / math.sqrt(m)
        ln_part = math.log(14.0 * M_G * math.sqrt(m) / (gamma * C**0.25))
        chain = 1152.0 * math.sqrt(5.0 * K_G / m) * C * N * math.sqrt(ln_part)
        return BoundReport(
            name="parametric_rademacher_bound",
            inputs=inputs,
            value=head + chain,
            terms={"regime": 2, "head": head, "chain": chain, "N": N},
        )
    d = d_G
    ratio = (C / m) ** (1.0 / d)
    head = gamma * ratio
    ln_part = math.log((14.0 * M_G / gamma) * (m / C) ** (1.0 / d))
    chain = (8.0 * 96.0 ** (d / 2.0) * (2.0 ** (2.0 / (d - 2)) + 1.0)
             * gamma ** (1.0 - d / 2.0) * math.sqrt(5.0 * K_G) * ratio * math.sqrt(ln_part))
    return BoundReport(
        name="parametric_rademacher_bound",
        inputs=inputs,
        value=math.sqrt(C) * (head + chain),
        terms={"regime": d, "head": head, "chain": chain},
    )


# ---------------------------------------------------------------------------
# chaining bounds from exact covering numbers


def dudley_bound(F: TabulatedClass, pts: Sequence[int], schedule: ChainSchedule, *,
                 caps: Caps = DEFAULT_CAPS) -> BoundReport:
    """Chained entropy bound from exact proper covering numbers in the L2 metric.

    value = h(N) + 2 sum_j (h(j) + h(j-1)) sqrt(ln N(h(j)) / n) where n is the
    number of listed points.  The schedule must start at or above the class
    diameter; a zero-diameter class gives 0 outright.
    """
    pts = tuple(int(p) for p in pts)
    D = pairwise_distances(F, pts, P2)
    diam = float(D.max())
    n = len(pts)
    if diam == 0.0:
        return BoundReport(
            name="dudley_bound",
            inputs={"n": n, "N": schedule.N, "schedule": schedule.name, "diam": 0.0},
            value=0.0,
            terms={"degenerate": 1.0},
        )
    if schedule.h(0) < diam:
        raise PreconditionError(f"schedule needs h(0) >= diameter {diam}, got {schedule.h(0)}")
    total = 0.0
    terms = {"tail": schedule.h(schedule.N), "diam": diam}
    for j in range(1, schedule.N + 1):
        q = CapacityQuery(eps=schedule.h(j), p=P2, mode="exact", measure="covering")
        cov = covering_number(F, pts, q, caps=caps).value
        term = 2.0 * (schedule.h(j) + schedule.h(j - 1)) * math.sqrt(math.log(cov) / n)
        terms[f"j{j}"] = term
        terms[f"j{j}_cov"] = cov
        total += term
    return BoundReport(
        name="dudley_bound",
        inputs={"n": n, "N": schedule.N, "schedule": schedule.name, "diam": diam},
        value=schedule.h(schedule.N) + total,
        terms=terms,
    )


def dudley_integral(F: TabulatedClass, pts: Sequence[int], *, check_steps: int = 0,
                    caps: Caps = DEFAULT_CAPS) -> BoundReport:
    """Entropy integral 12 * int_0^(diam/2) sqrt(ln N(eps) / n) d eps, exactly.

    The integrand is a step function of eps whose breakpoints are pairwise
    distances, so the integral is a finite sum of piece lengths times piece
    values; no quadrature error remains.  check_steps > 0 additionally samples
    the integrand at that many interior points per piece and verifies
    constancy.
    """
    pts = tuple(int(p) for p in pts)
    D = pairwise_distances(F, pts, P2)
    n = len(pts)
    diam = float(D.max())
    upper = diam / 2.0
    if upper == 0.0:
        return BoundReport(name="dudley_integral", inputs={"n": n, "diam": 0.0},
                           value=0.0, terms={"degenerate": 1.0})

    def integrand(eps: float) -> float:
        q = CapacityQuery(eps=eps, p=P2, mode="exact", measure="covering")
        return math.sqrt(math.log(covering_number(F, pts, q, caps=caps).value) / n)

    dists = sorted({float(x) for x in D[np.triu_indices(D.shape[0], k=1)] if x > 0})
    breaks = [0.0] + [d for d in dists if d < upper] + [upper]
    total = 0.0
    pieces = 0
    for a, b in zip(breaks, breaks[1:]):
        if b <= a:
            continue
        val = integrand(b)  # the piece is (a, b]; N(eps) is constant there
        if check_steps > 0:
            for t in range(1, check_steps + 1):
                x = a + (b - a) * t / (check_steps + 1)
                if integrand(x) != val:
                    raise PreconditionError("integrand not constant inside a piece")
        total += (b - a) * val
        pieces += 1
    return BoundReport(
        name="dudley_integral",
        inputs={"n": n, "diam": diam},
        value=12.0 * total,
        terms={"integral": total, "pieces": pieces},
    )
