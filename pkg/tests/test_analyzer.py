from fractions import Fraction

import pytest

from growthforge.errors import BudgetExceeded, DepthTooShallow
from growthforge import analyzer
from growthforge.analyzer import (
    FactorEngine,
    check_growth_sandwich,
    check_nonperiodicity,
    dim_series,
    entropy_partial,
    factor_set_bruteforce,
    factor_set_structural,
    minimal_forbidden_words,
    scan_occurrences,
    verify_recurrence_gaps,
    right_extension_report,
)
from growthforge.construction import CaptureEntry, build_plain
from growthforge.growth import table_spec


class TestFactorSets:
    def test_toy_small_n(self, toy_system):
        assert factor_set_bruteforce(toy_system, 1).members == frozenset("ab")
        assert factor_set_structural(toy_system, 1).members == frozenset("ab")
        f2 = factor_set_bruteforce(toy_system, 2)
        assert f2.members == frozenset({"aa", "ab", "ba", "bb"})
        f3 = factor_set_bruteforce(toy_system, 3)
        assert len(f3.members) == 8

    def test_structural_equals_bruteforce_toy(self, toy_system):
        for n in range(1, 5):
            assert (factor_set_structural(toy_system, n).members
                    == factor_set_bruteforce(toy_system, n).members)

    def test_structural_equals_bruteforce_captured(self, captured4):
        for n in range(1, 9):
            assert (factor_set_structural(captured4, n).members
                    == factor_set_bruteforce(captured4, n).members)

    def test_structural_equals_bruteforce_seeded_and_exp_power(self):
        from growthforge.construction import build_uniformly_recurrent
        from growthforge.growth import exp_power, poly_geometric
        seeded = build_uniformly_recurrent(poly_geometric("1/10"), depth=4,
                                           capture_budget=2, chooser="seeded",
                                           seed=11, horizon=12)
        rooted = build_uniformly_recurrent(exp_power("1/2"), depth=5,
                                           capture_budget=2, horizon=12)
        for system, top in ((seeded, 8), (rooted, 16)):
            for n in range(1, top + 1):
                assert (factor_set_structural(system, n).members
                        == factor_set_bruteforce(system, n).members)
            assert verify_recurrence_gaps(system, scan_cap=2000, seed=0).passed

    def test_python_and_numpy_paths_agree(self, captured4):
        fast = FactorEngine(captured4)
        slow = FactorEngine(captured4, force_python=True)
        for n in range(1, 9):
            assert fast.count(n) == slow.count(n) == len(slow.codes(n))

    def test_depth_cap(self, toy_system):
        with pytest.raises(DepthTooShallow):
            factor_set_structural(toy_system, 5)  # > 2^(D-1) = 4

    def test_budget(self, captured7):
        with pytest.raises(BudgetExceeded):
            factor_set_bruteforce(captured7, 4, budget=1000)

    def test_budget_env_var(self, toy_system, monkeypatch):
        monkeypatch.setenv("GROWTHFORGE_BUDGET", "10")
        with pytest.raises(BudgetExceeded):
            factor_set_bruteforce(toy_system, 2)
        monkeypatch.setenv("GROWTHFORGE_BUDGET", "100000")
        assert len(factor_set_bruteforce(toy_system, 2).members) == 4

    def test_encode_decode_roundtrip(self, captured4):
        eng = FactorEngine(captured4)
        for word in ("a", "ab", "abba", "babbab"):
            assert eng.decode(eng.encode(word), len(word)) == word


class TestDimSeries:
    def test_toy_dims(self, toy_system):
        rep = dim_series(toy_system, 3)
        assert [r.dim for r in rep.rows] == [2, 4, 8]
        assert [r.cumulative for r in rep.rows] == [2, 6, 14]
        assert rep.rows[0].entropy_str == "2.000000"  # g(1)^(1/1) = dim_1

    def test_submultiplicative(self, captured4):
        rep = dim_series(captured4, 8)
        assert rep.submultiplicative_violations() == []

    def test_factorial_closedness(self, captured4):
        prev = factor_set_structural(captured4, 1).members
        for n in range(2, 9):
            cur = factor_set_structural(captured4, n).members
            for w in cur:
                assert w[:-1] in prev and w[1:] in prev
            prev = cur

    def test_csv_shape(self, toy_system):
        csv = dim_series(toy_system, 3).to_csv()
        lines = csv.strip().splitlines()
        assert lines[0] == "n,dim,cumulative,entropy_partial,depth"
        assert lines[1] == "1,2,2,2.000000,3"
        assert lines[2].startswith("2,4,6,")
        assert lines[3].startswith("3,8,14,")


class TestSandwich:
    def test_toy_level1(self, toy_system):
        rep = check_growth_sandwich(toy_system, 1)
        assert rep.dim == 4 and rep.hard_lower == 2
        assert rep.hard_upper == (1 << 5) * 8
        assert rep.hard_ok and rep.soft_ok

    def test_out_of_range(self, toy_system):
        with pytest.raises(DepthTooShallow):
            check_growth_sandwich(toy_system, 3)

    def test_captured_depth7(self, captured7):
        for n in range(1, 6):
            rep = check_growth_sandwich(captured7, n)
            assert rep.hard_ok, rep.to_dict()
        rep5 = check_growth_sandwich(captured7, 5)
        assert rep5.hard_lower == 600
        assert rep5.hard_upper == (1 << 13) * 28531


class TestRecurrence:
    def test_scan_occurrences(self):
        assert scan_occurrences("abab", "ab") == [0, 2]
        assert scan_occurrences("aaaa", "aa") == [0, 1, 2]
        assert scan_occurrences("abbb", "a") == [0]
        assert scan_occurrences("bbbb", "a") == []

    def test_toy_synthetic_capture(self, toy_system):
        # Toy C(2) = {aa, ab}: every member contains "a", so gaps of "a" in
        # all longer elements stay within 4.
        toy_system.capture_log = [CaptureEntry(
            target_level=0, target_choices=(0,), target_word="a",
            capture_level=1, gap_bound=4, m_before=-1,
            filled_levels=[], retries=[])]
        try:
            rep = verify_recurrence_gaps(toy_system, scan_cap=100, seed=0)
            entry = rep.entries[0]
            assert entry.passed
            assert entry.max_gap <= 4 and entry.max_first_occurrence <= 4
        finally:
            toy_system.capture_log = []

    def test_empty_log(self, poly_plain5):
        rep = verify_recurrence_gaps(poly_plain5)
        assert rep.entries == [] and rep.passed

    def test_captured7_zero_violations(self, captured7):
        rep = verify_recurrence_gaps(captured7, scan_cap=1000, seed=3)
        assert rep.passed
        for entry in rep.entries:
            assert entry.max_gap <= entry.gap_bound
            assert entry.max_first_occurrence <= entry.gap_bound

    def test_violation_detected_on_fake_bound(self, captured7):
        # Shrinking the recorded bound must produce violations: the scan is
        # not vacuous.
        entry = captured7.capture_log[1]
        original = entry.gap_bound
        entry.gap_bound = 1
        try:
            rep = verify_recurrence_gaps(captured7, scan_cap=50, seed=0)
            assert not rep.entries[1].passed
        finally:
            entry.gap_bound = original


class TestAperiodicity:
    def test_toy_passes(self, toy_system):
        rep = check_nonperiodicity(toy_system, 3)
        assert rep.passed and rep.dims == [2, 4, 8]

    def test_single_letter_fails_immediately(self):
        degenerate = build_plain(table_spec({1: 1, 2: 1, 4: 1}), "lex", 2)
        rep = check_nonperiodicity(degenerate, 2)
        assert not rep.passed and rep.first_stall == 1

    def test_captured7(self, captured7):
        rep = check_nonperiodicity(captured7, 32)
        assert rep.passed
        assert all(inc > 0 for inc in rep.growth_increments())


class TestMinimalForbidden:
    def test_toy_bbbb(self, toy_system):
        words, depth = minimal_forbidden_words(toy_system, 4)
        assert depth == 3
        assert "bbbb" in words
        assert all(len(w) >= 4 for w in words)  # toy has all 1..3-letter factors

    def test_length_one_empty(self, toy_system):
        words, _ = minimal_forbidden_words(toy_system, 1)
        assert words == []

    def test_one_letter_truncations_present(self, captured4):
        words, _ = minimal_forbidden_words(captured4, 6)
        for w in words:
            n = len(w)
            fset = factor_set_structural(captured4, n).members
            prev = factor_set_structural(captured4, n - 1).members if n > 1 else {""}
            assert w not in fset
            assert w[1:] in prev and w[:-1] in prev


class TestEntropy:
    def test_bands_eps1(self):
        from growthforge.growth import geometric
        from growthforge.construction import build_plain
        system = build_plain(geometric(1), "lex", 3)
        rep = entropy_partial(system, 4)
        lo, hi = rep.power_band
        assert abs(float(lo) - 2 ** 0.5) < 1e-6 and hi == 4
        assert rep.linear_band == (Fraction(4, 3), Fraction(4))

    def test_h1_equals_dim1(self, toy_system):
        rep = entropy_partial(toy_system, 2)
        assert rep.partials[0][1] == 2

    def test_full_binary_language_entropy_two(self):
        from growthforge.growth import geometric
        from growthforge.construction import build_plain
        system = build_plain(geometric(1), "lex", 4)
        rep = dim_series(system, 8)
        assert [r.dim for r in rep.rows] == [2 ** n for n in range(1, 9)]


class TestRightExtensions:
    def test_toy_has_dead_suffix_factors(self, toy_system):
        # "bbb" occurs only as a terminal suffix, so it never extends right;
        # this is expected of finite truncations and is report-only.
        dead = right_extension_report(toy_system, 3)
        assert "bbb" in dead.get(3, [])

    def test_captured_targets_extend(self, captured4):
        # Captured targets sit inside choice-set members followed by the next
        # block, so they always extend right.
        for entry in captured4.capture_log:
            n = len(entry.target_word)
            nxt = factor_set_structural(captured4, n + 1).members
            letters = captured4.alphabet.letters
            assert any(entry.target_word + z in nxt for z in letters)
