"""Free-subalgebra certification for power-monomial systems.

With entropy H = 1 + eps, two elements supported in degrees <= d can only
generate a free subalgebra if d >= 1/log2(1+eps). The power-monomial builder
achieves degree 2^t with t = ceil(-log2 log2(1+eps)) + 1, within a factor
of four of that bound. This module computes t by exact rational power
comparisons, brackets the bound without floating point, and certifies
freeness on a finite range: the two generators are equal-length words on
distinct letters, so distinct products substitute to distinct strings, and
the absence of monomial relations up to a product length is exactly the
presence of every substituted string in the factor sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .construction import FreeParams, LevelSystem
from .exactmath import log2_bracket
from . import analyzer


def compute_t(eps: Fraction | str | int) -> int:
    """Smallest m with (1+eps)^(2^m) >= 2, plus one.

    Equals ceil(-log2 log2(1+eps)) + 1 and guarantees (1+eps)^(2^t) > 2,
    i.e. 2^t > 1/log2(1+eps). Pure rational comparisons, no logarithms.
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must be in (0, 1]")
    base = 1 + eps
    m = 0
    power = base
    while power < 2:
        power *= power
        m += 1
    return m + 1


def generator_degree_invariants(eps: Fraction) -> bool:
    """Exact form of the defining inequalities for t = compute_t(eps).

    (1+eps)^(2^(t-1)) >= 2 always, and (1+eps)^(2^(t-2)) < 2 when t >= 2;
    equivalently 2^t > 1/log2(1+eps) >= 2^(t-2).
    """
    eps = Fraction(eps)
    t = compute_t(eps)
    base = 1 + eps
    ok = base ** (1 << (t - 1)) >= 2
    if t >= 2:
        ok = ok and base ** (1 << (t - 2)) < 2
    return ok


def degree_lower_bound(eps: Fraction | str | int, tol: Fraction = Fraction(1, 10 ** 6)) -> Fraction:
    """1/log2(1+eps) as a rational within tol of the true value.

    Bracketed by exact dyadic bounds on log2; precision grows until the
    reciprocal bracket is narrower than tol.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    bits = 24
    while True:
        lo, hi = log2_bracket(1 + eps, bits)
        if lo == hi:
            return 1 / lo
        if lo > 0:
            r_lo, r_hi = 1 / hi, 1 / lo
            if r_hi - r_lo <= tol:
                return (r_lo + r_hi) / 2
        bits *= 2


@dataclass
class OptimalityReport:
    """Achieved generator degree versus the entropy lower bound."""

    epsilon: Fraction
    t: int
    degree: int
    bound_lo: Fraction
    bound_hi: Fraction
    ratio_lo: Fraction      # degree * log2(1+eps), bracketed
    ratio_hi: Fraction
    in_band: bool           # ratio in (1, 4], decided by exact power comparisons

    def to_dict(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "t": self.t,
            "degree": self.degree,
            "lower_bound": [str(self.bound_lo), str(self.bound_hi)],
            "optimality_ratio": [str(self.ratio_lo), str(self.ratio_hi)],
            "ratio_in_band": self.in_band,
        }


def optimality_report(eps: Fraction | str | int) -> OptimalityReport:
    """Ratio 2^t log2(1+eps) between achieved degree and the lower bound.

    The band membership (1, 4] is decided exactly: ratio > 1 iff
    (1+eps)^(2^t) > 2 and ratio <= 4 iff (1+eps)^(2^t) <= 16.
    """
    eps = Fraction(eps)
    t = compute_t(eps)
    degree = 1 << t
    base = 1 + eps
    in_band = base ** degree > 2 and base ** degree <= 16
    lo, hi = log2_bracket(base, 40)
    blo, bhi = (1 / hi, 1 / lo) if lo > 0 else (Fraction(0), Fraction(0))
    return OptimalityReport(
        epsilon=eps, t=t, degree=degree,
        bound_lo=blo, bound_hi=bhi,
        ratio_lo=degree * lo, ratio_hi=degree * hi,
        in_band=in_band,
    )


@dataclass
class FreenessReport:
    """Finite-range freeness certificate for the two power generators."""

    params: FreeParams
    max_products_len: int
    products_checked: int
    missing: list[str]                      # substituted strings absent from factor sets
    capacity_checks: list[tuple[int, int, int]]  # (level, required 2^(2^r), actual |C|)
    depth: int

    @property
    def capacity_ok(self) -> bool:
        return all(actual >= req for _, req, actual in self.capacity_checks)

    @property
    def passed(self) -> bool:
        return not self.missing and self.capacity_ok

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "max_products_len": self.max_products_len,
            "products_checked": self.products_checked,
            "missing": list(self.missing),
            "capacity_checks": [list(c) for c in self.capacity_checks],
            "depth": self.depth,
            "passed": self.passed,
        }


def verify_free_generators(
    system: LevelSystem,
    params: FreeParams,
    max_products_len: int,
) -> FreenessReport:
    """Check that every product of the generators up to a length is a factor.

    Substitutes each word over {X, Y} of length 1..max_products_len into a
    letter string and tests membership in the exact factor set of that
    length. Distinct products give distinct strings (equal-length code), so
    full presence certifies no monomial relation up to the bound.
    """
    if max_products_len < 1:
        raise ValueError("max_products_len must be >= 1")
    degree = params.degree
    if max_products_len * degree > 1 << (system.depth - 1):
        raise ValueError(
            f"products of length {max_products_len} need factor length "
            f"{max_products_len * degree} > certified maximum {1 << (system.depth - 1)}")
    blocks = {0: params.x_word, 1: params.y_word}
    missing: list[str] = []
    checked = 0
    for length in range(1, max_products_len + 1):
        factors = analyzer.factor_set_structural(system, length * degree).members
        for bits in iter_product((0, 1), repeat=length):
            word = "".join(blocks[b] for b in bits)
            checked += 1
            if word not in factors:
                missing.append(word)
    capacity = []
    for r in range(1, system.depth - params.t):
        level = params.t + r
        capacity.append((level, 1 << (1 << r), len(system.csets[level])))
    return FreenessReport(
        params=params,
        max_products_len=max_products_len,
        products_checked=checked,
        missing=missing,
        capacity_checks=capacity,
        depth=system.depth,
    )


def proposition_consistency(degree: int, h_value: Fraction) -> dict:
    """Compare an achieved degree against 1/log2(h) - 1 for a measured h(n).

    Finite-size entropy estimates sit below the limit, so one unit of slack
    is allowed; anything beyond that is reported, not asserted.
    """
    if h_value <= 1:
        return {"h": str(h_value), "bound": None, "consistent": True}
    lo, hi = log2_bracket(h_value, 40)
    bound = (1 / hi if hi > 0 else Fraction(0)) - 1
    return {
        "h": str(h_value),
        "bound": str(bound),
        "degree": degree,
        "consistent": Fraction(degree) >= bound,
    }
