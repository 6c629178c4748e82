"""
Complexity measure tests.
"""
from fractions import Fraction
from math import sqrt

import pytest

from symcomplex.exceptions import InvalidInputError, PartialResultError, UnsupportedAlphabetError
from symcomplex.services import complexity
from symcomplex.services.generators import mechanical, named_sequence, sequence_extender
from symcomplex.services.words import complexity_profile
from tests.utils import assert_close, random_words, word_of


class TestPeriodicity:
    """Eventual periodicity through p(n) <= n."""

    def test_rational_mechanical_word_is_periodic(self):
        """Slope 3/7 has period 7 and p(7) = 7."""
        verdict = complexity.eventual_periodicity_test(mechanical(Fraction(3, 7), length=100))
        assert verdict.eventually_periodic
        assert verdict.witness == 7

    def test_period_three_word(self):
        """(011)^30 has p(3) = 3."""
        verdict = complexity.eventual_periodicity_test(word_of("011" * 30))
        assert verdict.eventually_periodic
        assert verdict.witness == 3

    def test_constant_word(self):
        """A constant word is caught at n = 1."""
        assert complexity.eventual_periodicity_test(word_of("0" * 20)).witness == 1

    def test_fibonacci_is_aperiodic_so_far(self, fibonacci_word):
        """p(n) = n + 1 through n = 50."""
        verdict = complexity.eventual_periodicity_test(fibonacci_word, n_max=50)
        assert verdict.verdict == complexity.APERIODIC_SO_FAR
        assert verdict.witness is None
        assert verdict.n_checked == 50

    def test_needs_two_symbols(self):
        """A single letter is too short."""
        with pytest.raises(InvalidInputError):
            complexity.eventual_periodicity_test(word_of("0"))


class TestPalindromeMeasures:
    """Palindrome complexity, inequalities and closures."""

    def test_sturmian_palindrome_complexity(self, fibonacci_word):
        """Two palindromes of each odd length, one of each even length."""
        assert complexity.palindrome_complexity(fibonacci_word, 20) == [2 if n % 2 else 1 for n in range(1, 21)]

    def test_inequality_is_tight_on_sturmian(self, fibonacci_word):
        """Rich words meet the bound with equality."""
        check = complexity.palindrome_inequality_check(fibonacci_word, 20)
        assert check.applicable and check.holds
        assert check.lhs == check.rhs

    def test_inequality_holds_on_morse(self, morse_word):
        """Morse is closed under reversal and satisfies the bound."""
        check = complexity.palindrome_inequality_check(morse_word, 20)
        assert check.applicable
        assert check.holds
        assert check.first_violation is None

    def test_inequality_inapplicable_without_reversal_closure(self):
        """001 occurs but 100 does not."""
        check = complexity.palindrome_inequality_check(word_of("0001011"), 3)
        assert not check.applicable
        assert check.holds is None

    def test_upper_bound_on_fibonacci(self, fibonacci_word):
        """Pal(n) < 16/n p(n + n/4) for aperiodic words."""
        assert complexity.palindrome_upper_bound_check(fibonacci_word, 40).holds

    def test_palindromic_closure(self):
        """Shortest palindromes extending 01, 011 and 0110."""
        assert str(complexity.palindromic_closure(word_of("01"))) == "010"
        assert str(complexity.palindromic_closure(word_of("011"))) == "0110"
        assert str(complexity.palindromic_closure(word_of("0110"))) == "0110"

    def test_standard_episturmian_prefix(self, fibonacci_word):
        """The Fibonacci word is standard; 0011 is not."""
        assert complexity.is_standard_episturmian_prefix(fibonacci_word[:200])
        assert not complexity.is_standard_episturmian_prefix(word_of("0011"))

    def test_episturmian_language(self, fibonacci_word, morse_word):
        """Sturmian languages pass; Morse has two right special factors of length 2."""
        assert complexity.episturmian_language_test(fibonacci_word, 15)
        assert not complexity.episturmian_language_test(morse_word, 15)

    @pytest.mark.parametrize("n,expected", [(1, 2), (4, 16), (7, 128), (8, 252)])
    def test_rich_word_counts(self, n, expected):
        """Binary rich words up to length 8."""
        assert complexity.count_rich_words(n, 2) == expected


class TestMorseClosedForm:
    """Closed-form p(n) of the Morse sequence."""

    def test_first_values(self):
        """2, 4, 6, 10, 12, 16, 20, 22, 24."""
        assert [complexity.morse_complexity_closed_form(n) for n in range(1, 10)] == [2, 4, 6, 10, 12, 16, 20, 22, 24]

    def test_agrees_with_enumeration(self, morse_word):
        """Closed form equals the factor count on a long prefix."""
        counted = complexity_profile(morse_word, 64)
        assert [complexity.morse_complexity_closed_form(n) for n in range(1, 65)] == counted


class TestNonrepetitiveComplexity:
    """P^N(n) and the Eulerian estimate."""

    def test_bounded_by_factor_complexity(self, fibonacci_word):
        """First m distinct windows cannot exceed p(n)."""
        p = complexity_profile(fibonacci_word, 20)
        for n in range(1, 21):
            assert complexity.nonrepetitive_complexity(fibonacci_word, n) <= p[n - 1]

    @pytest.mark.parametrize("alphabet,n_max", [("01", 6), ("012", 4)])
    def test_bounded_on_random_words(self, alphabet, n_max):
        """P^N(n) <= p(n) on seeded random words."""
        for w in random_words(40, 400, seed=5, alphabet=alphabet):
            p = complexity_profile(w, n_max)
            for n in range(1, n_max + 1):
                assert complexity.nonrepetitive_complexity(w, n) <= p[n - 1]

    def test_short_prefix_without_generator(self):
        """No repeat inside the word gives a partial result."""
        with pytest.raises(PartialResultError) as info:
            complexity.nonrepetitive_complexity(word_of("0110"), 3)
        assert info.value.partial == 2

    def test_generator_extends_prefix(self):
        """With an extender the search continues past the prefix."""
        extend = sequence_extender("morse")
        short = named_sequence("morse", 8)
        value = complexity.nonrepetitive_complexity(short, 6, extend)
        assert value == complexity.nonrepetitive_complexity(named_sequence("morse", 4096), 6)

    def test_eulerian_estimate(self, fibonacci_word):
        """The estimate is the largest log P^N(n)/n."""
        estimate = complexity.eulerian_entropy_estimate(fibonacci_word, [2, 4, 8])
        assert estimate.estimate == max(estimate.values.values())
        assert set(estimate.values) == {2, 4, 8}


class TestWindowArithmeticAndPatterns:
    """Aligned windows, arithmetic progressions and pattern search."""

    def test_window_bounded_by_arithmetic(self, fibonacci_word):
        """Aligned blocks are factors, factors are progressions with step 1."""
        p = complexity_profile(fibonacci_word, 12)
        for n in range(1, 13):
            window = complexity.window_complexity(fibonacci_word, n)
            assert window <= p[n - 1] <= complexity.arithmetic_complexity(fibonacci_word, n, 3)

    def test_arithmetic_step_one_is_factor_complexity(self, morse_word):
        """k_max = 1 reads contiguous factors."""
        assert complexity.arithmetic_complexity(morse_word, 5, 1) == complexity_profile(morse_word, 5)[4]

    def test_window_validation(self):
        """n must fit in the word."""
        with pytest.raises(InvalidInputError):
            complexity.window_complexity(word_of("01"), 3)

    def test_pattern_search_on_sturmian(self, fibonacci_word):
        """Between p(k) and 2k; four pairs appear at distance two."""
        for k in range(1, 5):
            result = complexity.maximal_pattern_complexity_lb(fibonacci_word, k, 12, positions=1000)
            assert k + 1 <= result.value <= 2 * k
            assert result.pattern[0] == 0
        assert complexity.maximal_pattern_complexity_lb(fibonacci_word, 2, 4).value == 4

    @pytest.mark.parametrize("k", [1, 2, 3, pytest.param(4, marks=pytest.mark.slow)])
    def test_pattern_search_on_morse(self, morse_word, k):
        """Thue-Morse realizes all 2^k patterns inside a window of 64."""
        result = complexity.maximal_pattern_complexity_lb(morse_word, k, 64)
        assert result.value == 2 ** k
        assert len(result.pattern) == k

    def test_pattern_search_on_random_word(self):
        """A random word realizes all 2^k patterns."""
        w = random_words(1, 600, seed=3)[0]
        assert complexity.maximal_pattern_complexity_lb(w, 3, 4).value == 8


class TestInconstancy:
    """Frequency formula and convex-hull ratio."""

    def test_alternating_word(self):
        """Every step changes height: sqrt(2)."""
        assert_close(complexity.inconstancy(word_of("01" * 500)), sqrt(2), 1e-9)

    def test_constant_word(self):
        """No changes: 1."""
        assert complexity.inconstancy(word_of("0" * 50)) == 1.0

    def test_fibonacci_frequency(self, fibonacci_word):
        """Changes occur at twice the frequency of 1."""
        expected = 1 + (sqrt(2) - 1) * 2 * (1 - 2 / (1 + sqrt(5)))
        assert_close(complexity.inconstancy(fibonacci_word), expected, 2e-3)

    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    def test_sparse_periodic_words(self, d):
        """(0^d 1)^m tends to (d - 1 + 2 sqrt(2)) / (d + 1)."""
        w = word_of(("0" * d + "1") * 3000)
        assert_close(complexity.inconstancy(w), (d - 1 + 2 * sqrt(2)) / (d + 1), 1e-3)

    def test_random_reference_constant(self):
        """Half the steps change on average."""
        assert_close(complexity.RANDOM_INCONSTANCY, 1 + (sqrt(2) - 1) / 2, 1e-12)

    def test_geometric_matches_formula(self):
        """Long alternating polyline against its hull."""
        w = word_of("01" * 500)
        assert_close(complexity.inconstancy_geometric(w), complexity.inconstancy(w), 2e-3)

    def test_binary_only(self):
        """Three letters are rejected."""
        with pytest.raises(UnsupportedAlphabetError):
            complexity.inconstancy(word_of("0120"))


class TestComplexityReport:
    """Report assembly and adaptive prefixes."""

    def test_report_from_generator(self):
        """Morse p and Pal for n = 1..4."""
        reports = complexity.complexity_report(None, ["p", "pal"], 4, extend=sequence_extender("morse"))
        by_measure = {r.measure: r for r in reports}
        assert by_measure["p"].values == [2, 4, 6, 10]
        assert by_measure["p"].n_values == [1, 2, 3, 4]
        assert by_measure["p"].metadata["stable"] is True

    def test_report_on_fixed_word(self, fibonacci_word):
        """Without a generator the given prefix is used."""
        reports = complexity.complexity_report(fibonacci_word, ["p", "window", "arith"], 5, k_max=2)
        assert reports[0].values == [2, 3, 4, 5, 6]
        assert reports[2].metadata["k_max"] == 2

    def test_unknown_measure(self, fibonacci_word):
        """Measures outside the catalogue are rejected."""
        with pytest.raises(InvalidInputError):
            complexity.complexity_report(fibonacci_word, ["lz"], 5)
