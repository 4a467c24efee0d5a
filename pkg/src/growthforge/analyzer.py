"""Exact factor-language analytics over a built level system.

The factor set F(n) is the set of distinct length-n windows of all words in
the union of the W(2^j), j <= depth. Two independent routes compute it:

  * brute force: expand every element of every level and slide windows
    (bounded by a character budget, the oracle for everything else);
  * structural: never materialize W. Every window either sits inside the
    leading choice-set block of some level or straddles the boundary between
    that block and the W-tail behind it, so

        F(n) = union over j >= ceil(log2 n) - 1 of
               { suffix_a(C_j) ++ prefix_(n-a)(W(2^j)) : 1 <= a <= min(n-1, 2^j) }

    with prefix sets computed by the same halving recursion. Windows are
    deduplicated as base-d integer codes; when d^n fits in 64 bits the
    combination runs vectorized on uint64 arrays, otherwise on Python ints.
    Both encodings are injective, so counts are exact, never hashed guesses.

Dimensions dim_n = |F(n)| feed the growth report (cumulative sums, entropy
partials g(n)^(1/n) via exact integer roots), the dyadic growth sandwich,
the Morse-Hedlund aperiodicity test, minimal forbidden words, and the
recurrence-gap verification of captured targets. All results carry the build
depth: they are exact for the truncation and lower approximations of the
limit object.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .construction import LevelSystem
from .errors import BudgetExceeded, DepthTooShallow
from .exactmath import ceil_log2, nth_root_floor_scaled, sqrt_bracket, decimal_string

DEFAULT_BUDGET = 5_000_000
ENTROPY_DIGITS = 6


def _budget() -> int:
    raw = os.environ.get("GROWTHFORGE_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class FactorSet:
    """Distinct length-n factors at a build depth."""

    n: int
    members: frozenset[str]
    depth: int
    method: str

    def __len__(self) -> int:
        return len(self.members)


class FactorEngine:
    """Structural factor computation with per-system caches.

    Caches prefix sets and choice-set suffix sets as integer codes; safe to
    reuse across many n because the system is immutable once built.
    """

    def __init__(self, system: LevelSystem, force_python: bool = False):
        self.system = system
        self.d = system.alphabet.size
        self.depth = system.depth
        self._digit = {ch: i for i, ch in enumerate(system.alphabet.letters)}
        self._pi: dict[tuple[int, int], list[int]] = {}
        self._sfx: dict[tuple[int, int], list[int]] = {}
        self._pi_np: dict[tuple[int, int], np.ndarray] = {}
        self._sfx_np: dict[tuple[int, int], np.ndarray] = {}
        self._force_python = force_python
        self._cset_codes = [
            [self.encode(s) for s in cs.strings] for cs in system.csets
        ]

    def encode(self, word: str) -> int:
        code = 0
        d = self.d
        digit = self._digit
        for ch in word:
            code = code * d + digit[ch]
        return code

    def decode(self, code: int, n: int) -> str:
        letters = self.system.alphabet.letters
        out = []
        for _ in range(n):
            code, rem = divmod(code, self.d)
            out.append(letters[rem])
        return "".join(reversed(out))

    # -- prefix and suffix code sets ---------------------------------------

    def prefixes(self, j: int, m: int) -> list[int]:
        """Codes of the distinct length-m prefixes of W(2^j) elements."""
        key = (j, m)
        hit = self._pi.get(key)
        if hit is not None:
            return hit
        if not 1 <= m <= (1 << j):
            raise ValueError(f"prefix length {m} invalid at level {j}")
        if j == 0:
            out = list(range(self.d))
        else:
            half = 1 << (j - 1)
            if m <= half:
                out = sorted({self.encode(s[:m]) for s in self.system.csets[j - 1].strings})
            else:
                sub = self.prefixes(j - 1, m - half)
                mult = self.d ** (m - half)
                out = sorted({c * mult + p for c in self._cset_codes[j - 1] for p in sub})
        self._pi[key] = out
        return out

    def suffixes(self, j: int, a: int) -> list[int]:
        """Codes of the distinct length-a suffixes of C(2^j) members."""
        key = (j, a)
        hit = self._sfx.get(key)
        if hit is not None:
            return hit
        out = sorted({self.encode(s[-a:]) for s in self.system.csets[j].strings})
        self._sfx[key] = out
        return out

    def _np_prefixes(self, j: int, m: int) -> np.ndarray:
        key = (j, m)
        if key not in self._pi_np:
            self._pi_np[key] = np.array(self.prefixes(j, m), dtype=np.uint64)
        return self._pi_np[key]

    def _np_suffixes(self, j: int, a: int) -> np.ndarray:
        key = (j, a)
        if key not in self._sfx_np:
            self._sfx_np[key] = np.array(self.suffixes(j, a), dtype=np.uint64)
        return self._sfx_np[key]

    # -- factor sets --------------------------------------------------------

    def _straddle_ranges(self, n: int):
        """(j, a) pairs whose boundary windows together exhaust F(n)."""
        j0 = ceil_log2(n)
        for j in range(max(j0 - 1, 0), self.depth):
            a_min = max(1, n - (1 << j))
            a_max = min(n - 1, 1 << j)
            if a_min <= a_max:
                yield j, a_min, a_max

    def codes(self, n: int) -> set[int]:
        """All factor codes of length n (Python-set route)."""
        if n == 1:
            return set(range(self.d))
        out: set[int] = set()
        for j, a_min, a_max in self._straddle_ranges(n):
            for a in range(a_min, a_max + 1):
                mult = self.d ** (n - a)
                pref = self.prefixes(j, n - a)
                for s in self.suffixes(j, a):
                    base = s * mult
                    out.update(base + p for p in pref)
        return out

    def count(self, n: int) -> int:
        """|F(n)|, vectorized on uint64 when the codes fit in 64 bits."""
        if n > 1 << (self.depth - 1):
            raise DepthTooShallow(n, 1 << (self.depth - 1))
        if n == 1:
            return self.d
        if self._force_python or self.d ** n > 1 << 64:
            return len(self.codes(n))
        chunks: list[np.ndarray] = []
        for j, a_min, a_max in self._straddle_ranges(n):
            for a in range(a_min, a_max + 1):
                mult = np.uint64(self.d ** (n - a))
                sfx = self._np_suffixes(j, a)
                pref = self._np_prefixes(j, n - a)
                if len(sfx) == 0 or len(pref) == 0:
                    continue
                combo = sfx[:, None] * mult + pref[None, :]
                chunks.append(combo.ravel())
        if not chunks:
            return 0
        return int(np.unique(np.concatenate(chunks)).size)

    def factors(self, n: int) -> frozenset[str]:
        """F(n) as strings; intended for desk-scale n."""
        if n > 1 << (self.depth - 1):
            raise DepthTooShallow(n, 1 << (self.depth - 1))
        return frozenset(self.decode(c, n) for c in self.codes(n))


def factor_set_structural(system: LevelSystem, n: int) -> FactorSet:
    """F(n) without materializing W; exact equal to the brute-force route."""
    engine = _engine_for(system)
    return FactorSet(n, engine.factors(n), system.depth, "structural")


def factor_set_bruteforce(system: LevelSystem, n: int, budget: int | None = None) -> FactorSet:
    """F(n) by full expansion of every level; the independent oracle."""
    budget = budget if budget is not None else _budget()
    total = sum(system.level_word_count(j) << j for j in range(system.depth + 1))
    if total > budget:
        raise BudgetExceeded(total, budget)
    seen: set[str] = set()
    for j in range(system.depth + 1):
        if (1 << j) < n:
            continue
        for ref in system.iter_refs(j):
            word = system.expand(ref)
            for i in range(len(word) - n + 1):
                seen.add(word[i:i + n])
    return FactorSet(n, frozenset(seen), system.depth, "bruteforce")


def _engine_for(system: LevelSystem) -> FactorEngine:
    # Cached on the system object; rebuilt if the depth changed (builders
    # only ever append levels before analysis starts).
    eng = getattr(system, "_factor_engine", None)
    if eng is None or eng.depth != system.depth:
        eng = FactorEngine(system)
        system._factor_engine = eng
    return eng


# -- dimension series ---------------------------------------------------------


@dataclass
class DimensionRow:
    n: int
    dim: int
    cumulative: int
    entropy_partial: Fraction       # lower bracket of g(n)^(1/n), resolution 10^-digits
    entropy_str: str


@dataclass
class DimensionReport:
    """dim_n = |F(n)| = p(n), cumulative growth and entropy partials."""

    rows: list[DimensionRow]
    depth: int
    digits: int

    def dim(self, n: int) -> int:
        return self.rows[n - 1].dim

    def cumulative(self, n: int) -> int:
        return self.rows[n - 1].cumulative

    def entropy(self, n: int) -> Fraction:
        return self.rows[n - 1].entropy_partial

    def submultiplicative_violations(self, n_max: int | None = None) -> list[tuple[int, int]]:
        """Pairs (n, m) with dim_(n+m) > dim_n * dim_m; empty on factorial languages."""
        top = n_max if n_max is not None else len(self.rows)
        dims = {row.n: row.dim for row in self.rows}
        bad = []
        for n in range(1, top + 1):
            for m in range(1, top - n + 1):
                if dims[n + m] > dims[n] * dims[m]:
                    bad.append((n, m))
        return bad

    def to_csv(self) -> str:
        lines = ["n,dim,cumulative,entropy_partial,depth"]
        for row in self.rows:
            lines.append(f"{row.n},{row.dim},{row.cumulative},{row.entropy_str},{self.depth}")
        return "\n".join(lines) + "\n"


def dim_series(system: LevelSystem, n_max: int, digits: int = ENTROPY_DIGITS) -> DimensionReport:
    """Exact dims for n = 1..n_max with cumulative sums and entropy partials."""
    if n_max > 1 << (system.depth - 1):
        raise DepthTooShallow(n_max, 1 << (system.depth - 1))
    engine = _engine_for(system)
    rows: list[DimensionRow] = []
    g = 0
    for n in range(1, n_max + 1):
        dim = engine.count(n)
        g += dim
        h = nth_root_floor_scaled(g, n, digits)
        rows.append(DimensionRow(n, dim, g, h, decimal_string(h, digits)))
    return DimensionReport(rows, system.depth, digits)


# -- growth sandwich -----------------------------------------------------------


@dataclass
class SandwichReport:
    """Exact dyadic bounds on dim at 2^n."""

    n: int
    dim: int
    hard_lower: int         # prod of choice-set ratios below n
    hard_upper: int         # 2^(2n+3) f(2^(n+1))
    soft_lower: int         # f(2^n); truncation may transiently miss it
    depth: int

    @property
    def hard_ok(self) -> bool:
        return self.hard_lower <= self.dim <= self.hard_upper

    @property
    def soft_ok(self) -> bool:
        return self.dim >= self.soft_lower

    def to_dict(self) -> dict:
        return {
            "n": self.n, "dim": self.dim,
            "hard_lower": self.hard_lower, "hard_upper": self.hard_upper,
            "soft_lower": self.soft_lower,
            "hard_ok": self.hard_ok, "soft_ok": self.soft_ok,
            "depth": self.depth,
        }


def check_growth_sandwich(system: LevelSystem, n: int) -> SandwichReport:
    """Hard: prod r_i <= dim_(2^n) <= 2^(2n+3) f(2^(n+1)). Soft: f(2^n) <= dim."""
    if (1 << n) > (1 << (system.depth - 1)):
        raise DepthTooShallow(1 << n, 1 << (system.depth - 1))
    engine = _engine_for(system)
    dim = engine.count(1 << n)
    hard_lower = 1
    for i in range(n):
        hard_lower *= system.spec.ratio(i)
    hard_upper = (1 << (2 * n + 3)) * system.spec.value(1 << (n + 1))
    return SandwichReport(
        n=n, dim=dim,
        hard_lower=hard_lower, hard_upper=hard_upper,
        soft_lower=system.spec.value(1 << n),
        depth=system.depth,
    )


# -- recurrence ------------------------------------------------------------------


@dataclass
class RecurrenceEntry:
    target_word: str
    capture_level: int
    gap_bound: int
    max_gap: int
    max_first_occurrence: int
    elements_scanned: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "target_word": self.target_word,
            "capture_level": self.capture_level,
            "gap_bound": self.gap_bound,
            "max_gap": self.max_gap,
            "max_first_occurrence": self.max_first_occurrence,
            "elements_scanned": self.elements_scanned,
            "violations": self.violations,
            "passed": self.passed,
        }


@dataclass
class RecurrenceReport:
    entries: list[RecurrenceEntry]
    scan_cap: int
    seed: int
    depth: int

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    # Finite truncations certify recurrence only for the targets actually
    # captured; this label is part of the report contract.
    certification = "uniformly recurrent up to captured set"

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "scan_cap": self.scan_cap, "seed": self.seed,
            "depth": self.depth, "passed": self.passed,
            "certification": self.certification,
        }


def scan_occurrences(text: str, word: str) -> list[int]:
    """All (overlapping) start positions of word in text."""
    out = []
    i = text.find(word)
    while i != -1:
        out.append(i)
        i = text.find(word, i + 1)
    return out


def verify_recurrence_gaps(system: LevelSystem, scan_cap: int = 10_000, seed: int = 0) -> RecurrenceReport:
    """Check every captured target reoccurs within its gap bound.

    For each capture-log entry with bound c = 2^(t'+1), scans elements of
    W(2^m) for t' < m <= depth (all of a level when it fits under scan_cap,
    else a seeded sample): the first occurrence must start within c and
    consecutive occurrence starts must be at most c apart. Violations mean a
    builder bug, not a mathematical surprise.
    """
    entries: list[RecurrenceEntry] = []
    for log in system.capture_log:
        word = log.target_word
        bound = log.gap_bound
        max_gap = 0
        max_first = 0
        scanned = 0
        violations = 0
        for m in range(log.capture_level + 1, system.depth + 1):
            total = system.level_word_count(m)
            if total <= scan_cap:
                refs = (system.ref_from_rank(m, k) for k in range(total))
            else:
                refs = iter(system.sample_elements(m, scan_cap, seed))
            for ref in refs:
                u = system.expand(ref)
                scanned += 1
                occ = scan_occurrences(u, word)
                if not occ:
                    violations += 1
                    max_first = max(max_first, len(u))
                    continue
                max_first = max(max_first, occ[0])
                if occ[0] > bound:
                    violations += 1
                for prev, cur in zip(occ, occ[1:]):
                    gap = cur - prev
                    max_gap = max(max_gap, gap)
                    if gap > bound:
                        violations += 1
        entries.append(RecurrenceEntry(
            target_word=word,
            capture_level=log.capture_level,
            gap_bound=bound,
            max_gap=max_gap,
            max_first_occurrence=max_first,
            elements_scanned=scanned,
            violations=violations,
        ))
    return RecurrenceReport(entries, scan_cap, seed, system.depth)


# -- aperiodicity -----------------------------------------------------------------


@dataclass
class AperiodicityReport:
    n_max: int
    dims: list[int]
    first_stall: int | None     # least n with p(n) < n + 1
    depth: int

    @property
    def passed(self) -> bool:
        return self.first_stall is None

    def growth_increments(self) -> list[int]:
        return [b - a for a, b in zip(self.dims, self.dims[1:])]

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max, "dims": self.dims,
            "first_stall": self.first_stall,
            "passed": self.passed, "depth": self.depth,
        }


def check_nonperiodicity(system: LevelSystem, n_max: int) -> AperiodicityReport:
    """Morse-Hedlund test: complexity p(n) >= n+1 for n <= n_max.

    A stall p(n) <= n forces the limit language to be eventually periodic,
    so passing certifies aperiodicity at the verified scale.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    engine = _engine_for(system)
    dims = [engine.count(n) for n in range(1, n_max + 1)]
    first_stall = None
    for n, p in enumerate(dims, start=1):
        if p < n + 1:
            first_stall = n
            break
    return AperiodicityReport(n_max, dims, first_stall, system.depth)


# -- minimal forbidden words --------------------------------------------------------


def minimal_forbidden_words(system: LevelSystem, max_len: int) -> tuple[list[str], int]:
    """Words absent from the language whose proper factors are all present.

    A word w qualifies when w is not a factor but both one-letter truncations
    are; enumeration extends known factors one letter to the right. Labeled
    with the build depth: a deeper build can revive a word, so "forbidden at
    depth D" is part of the contract.
    """
    if max_len > 1 << (system.depth - 1):
        raise DepthTooShallow(max_len, 1 << (system.depth - 1))
    engine = _engine_for(system)
    letters = system.alphabet.letters
    out: list[str] = []
    prev: frozenset[str] = frozenset([""])
    for length in range(1, max_len + 1):
        cur = engine.factors(length)
        for w in prev:
            for z in letters:
                cand = w + z
                if cand in cur:
                    continue
                if length == 1 or (w[1:] + z) in prev:
                    out.append(cand)
        prev = cur
    return sorted(out, key=lambda w: (len(w), w)), system.depth


# -- entropy -----------------------------------------------------------------------


@dataclass
class EntropyReport:
    partials: list[tuple[int, Fraction, str]]    # (n, h(n) lower bracket, decimal)
    power_band: tuple[Fraction, Fraction] | None     # [sqrt(1+eps), (1+eps)^2]
    linear_band: tuple[Fraction, Fraction] | None    # [1 + eps/3, 1 + 3 eps]
    digits: int
    depth: int

    def to_dict(self) -> dict:
        return {
            "partials": [[n, str(h), s] for n, h, s in self.partials],
            "power_band": [str(self.power_band[0]), str(self.power_band[1])]
            if self.power_band else None,
            "linear_band": [str(self.linear_band[0]), str(self.linear_band[1])]
            if self.linear_band else None,
            "digits": self.digits,
            "depth": self.depth,
        }


def entropy_partial(system: LevelSystem, n_max: int, digits: int = ENTROPY_DIGITS) -> EntropyReport:
    """h(n) = g(n)^(1/n) with exact g and stated decimal resolution.

    For the (1+eps)-driven families the report also carries the two
    reference bands the limit entropy is known to respect: the power band
    [sqrt(1+eps), (1+eps)^2] and, for eps < 1, its linear relaxation
    [1 + eps/3, 1 + 3 eps]. Band proximity at finite depth is informational.
    """
    report = dim_series(system, n_max, digits=digits)
    partials = [(row.n, row.entropy_partial, row.entropy_str) for row in report.rows]
    power_band = linear_band = None
    eps = system.spec.epsilon
    if eps is not None:
        lo, _ = sqrt_bracket(1 + eps)
        power_band = (lo, (1 + eps) ** 2)
        linear_band = (1 + eps / 3, 1 + 3 * eps)
    return EntropyReport(partials, power_band, linear_band, digits, system.depth)


# -- right extensions (limit-property probe, report only) ----------------------------


def right_extension_report(system: LevelSystem, n_max: int) -> dict[int, list[str]]:
    """Factors with no one-letter right extension at this depth.

    Finite truncations legitimately contain such words (a word occurring only
    as a terminal suffix never extends); full right-extendability is a limit
    property of captured systems. Report only, never asserted.
    """
    engine = _engine_for(system)
    letters = system.alphabet.letters
    dead: dict[int, list[str]] = {}
    for n in range(1, n_max + 1):
        cur = engine.factors(n)
        nxt = engine.factors(n + 1)
        stuck = sorted(w for w in cur if not any(w + z in nxt for z in letters))
        if stuck:
            dead[n] = stuck
    return dead
