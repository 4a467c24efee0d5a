"""Builders for finite truncations of dyadic level systems.

A level system over an alphabet of d = f(1) letters consists of word sets
W(1) = alphabet and W(2^(i+1)) = C(2^i) W(2^i), where each choice set
C(2^i) is a subset of W(2^i) of exactly r_i = ceil(f(2^(i+1))/f(2^i))
elements. W(2^i) is never materialized: an element is a reference
(c_(i-1), ..., c_0, letter) that picks one choice-set member per level plus
a final letter, and expands to the concatenation of those cached strings.

Three builders are provided:

  * plain: every choice set filled by the chooser with no constraints;
  * uniformly recurrent: a deterministic scheduler walks target words
    (whole W(2^t)-elements, t ascending, tuple-lex ascending) and captures
    each one by fixing it as the common suffix of a fresh choice set at
    level t' = max(mu(t), m+1), so the target reoccurs in every long word
    with gaps at most 2^(t'+1);
  * free power system: with f(n) = ceil((1+eps)^n) and letters x, y, the
    choice sets are forced to contain x^(2^i), y^(2^i) up to level t and all
    2^(2^r) products of the two power words at level t+r, which certifies a
    free subalgebra on the two power monomials.

Builds are strictly sequential and deterministic; a finished LevelSystem is
treated as immutable by all analysis code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .errors import CapacityExceeded, HorizonTooSmall, InsufficientWords, OutOfRange
from .growth import GrowthSpec, compute_mu, check_basic, geometric

LETTER_POOL = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"


@dataclass(frozen=True)
class Alphabet:
    """d = f(1) letters with fixed single-character names, index order = lex order."""

    letters: str

    @property
    def size(self) -> int:
        return len(self.letters)

    def index(self, ch: str) -> int:
        return self.letters.index(ch)


@dataclass(frozen=True)
class WordRef:
    """A W(2^level) element: one choice per level above 0 plus a letter.

    choices = (c_(level-1), ..., c_0, letter_index); the expansion is
    C_(level-1)[c_(level-1)] ++ ... ++ C_0[c_0] ++ letter and has length
    2^level. Distinct tuples expand to distinct words because all blocks at
    one level have equal length and choice-set members are pairwise distinct.
    """

    level: int
    choices: tuple[int, ...]

    def __post_init__(self):
        if len(self.choices) != self.level + 1:
            raise ValueError("ref needs one choice per level plus a letter")


@dataclass
class CSet:
    """Materialized choice set at one level: member refs plus cached strings."""

    level: int
    members: list[WordRef]
    strings: list[str]
    # Populated lazily: string -> index, for suffix decomposition.
    _index: dict[str, int] | None = field(default=None, repr=False)

    def index_of(self, word: str) -> int | None:
        if self._index is None:
            self._index = {s: k for k, s in enumerate(self.strings)}
        return self._index.get(word)

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class CaptureEntry:
    """One suffix-capture event in the build log."""

    target_level: int
    target_choices: tuple[int, ...]
    target_word: str
    capture_level: int           # n_w: the level whose choice set was suffix-fixed
    gap_bound: int               # c_w = 2^(n_w + 1)
    m_before: int                # highest defined level before this capture (-1 if none)
    filled_levels: list[int]     # levels defined unconstrained to reach the capture level
    retries: list[int]           # capture levels that lacked capacity and were skipped

    def to_dict(self) -> dict:
        return {
            "target_level": self.target_level,
            "target_choices": list(self.target_choices),
            "target_word": self.target_word,
            "capture_level": self.capture_level,
            "gap_bound": self.gap_bound,
            "m_before": self.m_before,
            "filled_levels": list(self.filled_levels),
            "retries": list(self.retries),
        }

    @staticmethod
    def from_dict(d: dict) -> "CaptureEntry":
        return CaptureEntry(
            target_level=d["target_level"],
            target_choices=tuple(d["target_choices"]),
            target_word=d["target_word"],
            capture_level=d["capture_level"],
            gap_bound=d["gap_bound"],
            m_before=d["m_before"],
            filled_levels=list(d["filled_levels"]),
            retries=list(d["retries"]),
        )


class LevelSystem:
    """Alphabet plus choice sets for levels 0..depth-1.

    With depth D choice sets defined, W(2^D) exists implicitly; analysis
    treats the finished system as read-only.
    """

    def __init__(
        self,
        spec: GrowthSpec,
        chooser: str = "lex",
        seed: int = 0,
        letters: str | None = None,
        mode: str = "plain",
    ):
        if chooser not in ("lex", "seeded"):
            raise ValueError(f"unknown chooser {chooser!r}")
        d = spec.value(1)
        if letters is None:
            if d > len(LETTER_POOL):
                raise ValueError(f"alphabet size {d} exceeds the {len(LETTER_POOL)}-symbol pool")
            letters = LETTER_POOL[:d]
        if len(letters) != d or len(set(letters)) != d:
            raise ValueError(f"need {d} distinct letters, got {letters!r}")
        self.spec = spec
        self.alphabet = Alphabet(letters)
        self.chooser = chooser
        self.seed = seed
        self.mode = mode
        self.csets: list[CSet] = []
        self.capture_log: list[CaptureEntry] = []
        self.free_params: "FreeParams | None" = None
        self.mu_offset = 0
        self.horizon = 0
        self._rng = Random(f"growthforge:{seed}")

    # -- structure queries ---------------------------------------------------

    @property
    def depth(self) -> int:
        """D: W(2^D) is the deepest implicitly defined word set."""
        return len(self.csets)

    @property
    def highest_defined_level(self) -> int:
        """m: levels 0..m have choice sets; -1 before any are built."""
        return len(self.csets) - 1

    def level_word_count(self, level: int) -> int:
        """|W(2^level)| = d * prod of lower choice-set sizes."""
        if level > self.depth:
            raise ValueError(f"level {level} beyond depth {self.depth}")
        n = self.alphabet.size
        for j in range(level):
            n *= len(self.csets[j])
        return n

    def ref_from_rank(self, level: int, rank: int) -> WordRef:
        """The rank-th element of W(2^level) in tuple-lex order (mixed radix)."""
        radices = [len(self.csets[j]) for j in range(level - 1, -1, -1)]
        radices.append(self.alphabet.size)
        digits = []
        for r in reversed(radices):
            rank, d = divmod(rank, r)
            digits.append(d)
        if rank:
            raise ValueError("rank out of range")
        return WordRef(level, tuple(reversed(digits)))

    def iter_refs(self, level: int):
        """All of W(2^level) in tuple-lex order."""
        for rank in range(self.level_word_count(level)):
            yield self.ref_from_rank(level, rank)

    # -- expansion -------------------------------------------------------------

    def expand(self, ref: WordRef) -> str:
        """The 2^level-letter word a reference denotes."""
        parts = []
        for k, c in enumerate(ref.choices[:-1]):
            parts.append(self.csets[ref.level - 1 - k].strings[c])
        parts.append(self.alphabet.letters[ref.choices[-1]])
        return "".join(parts)

    def expand_window(self, ref: WordRef, start: int, length: int) -> str:
        """A window of the expansion without materializing the whole word."""
        total = 1 << ref.level
        if start < 0 or length < 0 or start + length > total:
            raise OutOfRange(f"window [{start}, {start + length}) outside word of length {total}")
        out = []
        pos = 0
        need_from, need_to = start, start + length
        for k, c in enumerate(ref.choices[:-1]):
            j = ref.level - 1 - k
            block_len = 1 << j
            if pos + block_len > need_from and pos < need_to:
                s = self.csets[j].strings[c]
                out.append(s[max(0, need_from - pos):need_to - pos])
            pos += block_len
            if pos >= need_to:
                break
        if pos < need_to:
            out.append(self.alphabet.letters[ref.choices[-1]])
        return "".join(out)

    # -- admissible-word combinatorics ----------------------------------------

    def _suffix_tail_ref(self, level: int, suffix: str) -> WordRef | None:
        """Unique ref of W(2^level) expanding exactly to suffix (len = 2^level)."""
        if level == 0:
            if suffix in self.alphabet.letters:
                return WordRef(0, (self.alphabet.index(suffix),))
            return None
        half = 1 << (level - 1)
        c = self.csets[level - 1].index_of(suffix[:half])
        if c is None:
            return None
        tail = self._suffix_tail_ref(level - 1, suffix[half:])
        if tail is None:
            return None
        return WordRef(level, (c,) + tail.choices)

    def admissible_count(self, level: int, suffix: str) -> int:
        """How many W(2^level) elements end with the given suffix."""
        if len(suffix) > (1 << level):
            return 0
        if not suffix:
            return self.level_word_count(level)
        if level == 0:
            return 1 if suffix in self.alphabet.letters else 0
        half = 1 << (level - 1)
        if len(suffix) <= half:
            return len(self.csets[level - 1]) * self.admissible_count(level - 1, suffix)
        head, tail = suffix[:-half], suffix[-half:]
        if self._suffix_tail_ref(level - 1, tail) is None:
            return 0
        holders = sum(1 for s in self.csets[level - 1].strings if s.endswith(head))
        return holders

    def iter_admissible(self, level: int, suffix: str):
        """Admissible refs in tuple-lex order."""
        if len(suffix) > (1 << level):
            return
        if level == 0:
            if not suffix:
                for i in range(self.alphabet.size):
                    yield WordRef(0, (i,))
            elif suffix in self.alphabet.letters:
                yield WordRef(0, (self.alphabet.index(suffix),))
            return
        half = 1 << (level - 1)
        if len(suffix) <= half:
            for c in range(len(self.csets[level - 1])):
                for tail in self.iter_admissible(level - 1, suffix):
                    yield WordRef(level, (c,) + tail.choices)
            return
        head, tail_word = suffix[:-half], suffix[-half:]
        tail = self._suffix_tail_ref(level - 1, tail_word)
        if tail is None:
            return
        for c, s in enumerate(self.csets[level - 1].strings):
            if s.endswith(head):
                yield WordRef(level, (c,) + tail.choices)

    def _admissible_at(self, level: int, suffix: str, rank: int) -> WordRef:
        """rank-th admissible ref in tuple-lex order (mixed-radix unranking)."""
        if level == 0:
            if not suffix:
                return WordRef(0, (rank,))
            return WordRef(0, (self.alphabet.index(suffix),))
        half = 1 << (level - 1)
        if len(suffix) <= half:
            sub = self.admissible_count(level - 1, suffix)
            c, rest = divmod(rank, sub)
            tail = self._admissible_at(level - 1, suffix, rest)
            return WordRef(level, (c,) + tail.choices)
        head, tail_word = suffix[:-half], suffix[-half:]
        tail = self._suffix_tail_ref(level - 1, tail_word)
        holders = [c for c, s in enumerate(self.csets[level - 1].strings) if s.endswith(head)]
        return WordRef(level, (holders[rank],) + tail.choices)

    # -- choice-set construction ----------------------------------------------

    def choose_cset(
        self,
        level: int,
        suffix: str = "",
        must_include: list[WordRef] | None = None,
    ) -> CSet:
        """Define C(2^level) deterministically and append it to the system.

        The set gets exactly r_level members: must_include refs first (in the
        given order), then admissible elements of W(2^level) whose expansion
        ends with `suffix`; the lex chooser takes the smallest choice tuples,
        the seeded chooser draws without replacement from the build RNG.
        """
        if level != self.depth:
            raise ValueError(f"levels must be defined in order; next is {self.depth}")
        required = self.spec.ratio(level)
        include = list(must_include or [])
        if len(include) > required:
            raise CapacityExceeded(level, len(include), required)
        available = self.admissible_count(level, suffix)

        chosen: list[WordRef] = []
        seen: set[tuple[int, ...]] = set()
        for ref in include:
            if ref.level != level:
                raise ValueError("must_include ref at wrong level")
            if ref.choices not in seen:
                seen.add(ref.choices)
                chosen.append(ref)
        overlap = sum(
            1 for ref in chosen if not suffix or self.expand(ref).endswith(suffix))
        if available - overlap < required - len(chosen):
            raise InsufficientWords(level, required - len(chosen), available - overlap)
        fill = required - len(chosen)
        if fill > 0:
            if self.chooser == "lex":
                for ref in self.iter_admissible(level, suffix):
                    if ref.choices in seen:
                        continue
                    seen.add(ref.choices)
                    chosen.append(ref)
                    fill -= 1
                    if fill == 0:
                        break
                if fill > 0:
                    raise InsufficientWords(level, required, len(chosen))
            else:
                taken_ranks: set[int] = set()
                guard = 0
                while fill > 0:
                    rank = self._rng.randrange(available)
                    if rank in taken_ranks:
                        guard += 1
                        if guard > 64 * required + 1024:
                            raise InsufficientWords(level, required, len(chosen))
                        continue
                    taken_ranks.add(rank)
                    ref = self._admissible_at(level, suffix, rank)
                    if ref.choices in seen:
                        continue
                    seen.add(ref.choices)
                    chosen.append(ref)
                    fill -= 1

        strings = [self.expand(ref) for ref in chosen]
        if len(set(strings)) != len(strings):
            raise AssertionError(f"level {level}: duplicate member words")
        cs = CSet(level, chosen, strings)
        self.csets.append(cs)
        return cs

    def capture_prefixes(self, entry: CaptureEntry) -> list[str]:
        """The arbitrary prefix v of each member v.w' of a captured choice set."""
        cut = len(entry.target_word)
        return [s[:-cut] for s in self.csets[entry.capture_level].strings]

    # -- sampling ---------------------------------------------------------------

    def sample_elements(self, level: int, count: int, seed: int) -> list[WordRef]:
        """Seeded sample of W(2^level) without replacement; all of it when count covers it."""
        if count < 1:
            raise ValueError("count must be >= 1")
        total = self.level_word_count(level)
        if count >= total:
            return [self.ref_from_rank(level, k) for k in range(total)]
        rng = Random(f"growthforge-sample:{seed}:{level}")
        picked: set[int] = set()
        out = []
        while len(out) < count:
            rank = rng.randrange(total)
            if rank in picked:
                continue
            picked.add(rank)
            out.append(self.ref_from_rank(level, rank))
        return out


# -- whole-system builders -----------------------------------------------------


def init_system(
    spec: GrowthSpec,
    chooser: str = "lex",
    seed: int = 0,
    letters: str | None = None,
    mode: str = "plain",
) -> LevelSystem:
    """Depth-0 system: alphabet of f(1) letters, no choice sets yet."""
    return LevelSystem(spec, chooser=chooser, seed=seed, letters=letters, mode=mode)


def build_plain(
    spec: GrowthSpec,
    chooser: str = "lex",
    depth: int = 1,
    seed: int = 0,
    letters: str | None = None,
) -> LevelSystem:
    """Choice sets 0..depth-1 with no constraints."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    system = init_system(spec, chooser=chooser, seed=seed, letters=letters, mode="plain")
    for level in range(depth):
        system.choose_cset(level)
    return system


def capture_target(
    system: LevelSystem,
    target: WordRef,
    mu_offset: int,
    horizon: int,
    max_level: int | None = None,
) -> CaptureEntry:
    """Fix the target word as the common suffix of a fresh choice set.

    Levels below the capture level that are still undefined are filled
    unconstrained first. The capture level is t' = max(mu(t), m+1) with m the
    highest level already defined, which the dominance inequality makes large
    enough for the suffix-fixed set; if a ceiling edge still leaves it short,
    the builder retries one level higher (each retry is logged).
    """
    t = target.level
    if t > system.depth:
        raise ValueError(f"target level {t} not yet constructible (depth {system.depth})")
    mu = compute_mu(system.spec, t, mu_offset, horizon)
    m = system.highest_defined_level
    t_prime = max(mu, m + 1)
    word = system.expand(target)
    filled: list[int] = []
    retries: list[int] = []
    while True:
        if max_level is not None and t_prime > max_level:
            raise HorizonTooSmall(
                f"capture of {word!r} needs level {t_prime} beyond cap {max_level}",
                t, horizon)
        while system.depth < t_prime:
            filled.append(system.depth)
            system.choose_cset(system.depth)
        required = system.spec.ratio(t_prime)
        if system.admissible_count(t_prime, word) >= required:
            break
        retries.append(t_prime)
        t_prime += 1
    system.choose_cset(t_prime, suffix=word)
    entry = CaptureEntry(
        target_level=t,
        target_choices=target.choices,
        target_word=word,
        capture_level=t_prime,
        gap_bound=1 << (t_prime + 1),
        m_before=m,
        filled_levels=filled,
        retries=retries,
    )
    system.capture_log.append(entry)
    return entry


def build_uniformly_recurrent(
    spec: GrowthSpec,
    depth: int,
    capture_budget: int,
    mu_offset: int = 0,
    chooser: str = "lex",
    seed: int = 0,
    horizon: int | None = None,
    letters: str | None = None,
) -> LevelSystem:
    """Capture targets fairly until the budget or the depth runs out.

    The scheduler enumerates targets as whole W(2^t)-elements, t ascending
    and choice tuples lex ascending, and captures each in turn. Captures stop
    as soon as the next capture level would not fit below `depth`; remaining
    levels are filled unconstrained. Uniform recurrence is certified only for
    the captured targets.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    if horizon is None:
        horizon = max(depth + 4, 12)
    basic = check_basic(spec, 16)
    if not basic.submultiplicative_ok:
        raise ValueError(f"growth fails submultiplicativity: {basic.submultiplicative_violation}")
    system = init_system(spec, chooser=chooser, seed=seed, letters=letters, mode="recurrent")
    system.mu_offset = mu_offset
    system.horizon = horizon
    done = 0
    t = 0
    rank = 0
    while done < capture_budget:
        if t > system.highest_defined_level + 1 or t >= depth:
            break
        if rank >= system.level_word_count(t):
            t += 1
            rank = 0
            continue
        target = system.ref_from_rank(t, rank)
        rank += 1
        mu = compute_mu(spec, t, mu_offset, horizon)
        t_prime = max(mu, system.highest_defined_level + 1)
        if t_prime > depth - 1:
            break
        capture_target(system, target, mu_offset, horizon, max_level=depth - 1)
        done += 1
    while system.depth < depth:
        system.choose_cset(system.depth)
    return system


@dataclass
class FreeParams:
    """Parameters of a free power-monomial system."""

    epsilon: Fraction
    t: int
    degree: int            # 2^t
    x_word: str
    y_word: str
    r_max: int             # deepest product-exponent level built (levels t+1..t+r_max)

    def to_dict(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "t": self.t,
            "degree": self.degree,
            "x_word": self.x_word,
            "y_word": self.y_word,
            "r_max": self.r_max,
        }


def build_free_power_system(
    eps,
    depth: int,
    chooser: str = "lex",
    seed: int = 0,
) -> tuple[LevelSystem, FreeParams]:
    """Force power monomials and their products into the choice sets.

    Uses f(n) = ceil((1+eps)^n) with d = 2 letters x, y. C(2^i) contains
    x^(2^i) and y^(2^i) for i <= t (t from compute_t), and C(2^(t+r))
    contains all 2^(2^r) length-2^r products over the two power words for
    r >= 1. Capacity at every level is checked exactly and CapacityExceeded
    reports the deficit. eps = 1 is accepted (degenerate boundary where the
    system is the full binary language).
    """
    from .freesub import compute_t

    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must be in (0, 1]")
    spec = geometric(eps)
    if spec.value(1) != 2:
        raise AssertionError("geometric(eps<=1) must have two letters")
    t = compute_t(eps)
    if depth < t + 1:
        raise ValueError(f"depth must be >= t+1 = {t + 1}")
    # Exact capacity precheck before any work.
    for i in range(depth):
        required = 2 if i <= t else 1 << (1 << (i - t))
        if spec.ratio(i) < required:
            raise CapacityExceeded(i, required, spec.ratio(i))

    system = init_system(spec, chooser=chooser, seed=seed, letters="xy", mode="free")
    x_ref = WordRef(0, (0,))
    y_ref = WordRef(0, (1,))
    # product_refs maps a tuple of bits (0 = x-power, 1 = y-power) to the ref
    # of the corresponding product at the current level; inclusion order is
    # bit-tuple lex, so member k of the forced prefix is the product with
    # binary expansion k.
    product_refs: dict[tuple[int, ...], WordRef] = {(0,): x_ref, (1,): y_ref}
    for level in range(depth):
        if level == 0:
            system.choose_cset(0, must_include=[x_ref, y_ref])
            continue
        if level <= t:
            prev_x = product_refs[(0,)]
            prev_y = product_refs[(1,)]
            new_x = WordRef(level, (0,) + prev_x.choices)
            new_y = WordRef(level, (1,) + prev_y.choices)
            system.choose_cset(level, must_include=[new_x, new_y])
            product_refs = {(0,): new_x, (1,): new_y}
            continue
        # level = t + r with r >= 1: the previous level's forced members are
        # the products of length 2^(r-1); their position in that choice set is
        # the numeric value of their bit tuple because they were included in
        # bit-lex order.
        prev = product_refs
        n_bits = 1 << (level - t)
        rank_of = {bits: k for k, bits in enumerate(sorted(prev.keys()))}
        new_products: dict[tuple[int, ...], WordRef] = {}
        include: list[WordRef] = []
        for rank in range(1 << n_bits):
            bits = tuple((rank >> (n_bits - 1 - i)) & 1 for i in range(n_bits))
            left, right = bits[:n_bits // 2], bits[n_bits // 2:]
            ref = WordRef(level, (rank_of[left],) + prev[right].choices)
            new_products[bits] = ref
            include.append(ref)
        system.choose_cset(level, must_include=include)
        product_refs = new_products
    params = FreeParams(
        epsilon=eps,
        t=t,
        degree=1 << t,
        x_word="x" * (1 << t),
        y_word="y" * (1 << t),
        r_max=depth - 1 - t,
    )
    system.free_params = params
    return system, params
