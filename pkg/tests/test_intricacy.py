"""
Intricacy tests: coefficient systems, finite-n Asc and Int, the series limit.
"""
from math import log

import numpy as np
import pytest

from symcomplex.exceptions import InvalidInputError, InvariantViolationError, PreconditionError, ResourceBudgetError
from symcomplex.services import intricacy
from symcomplex.services.coefficients import CoefficientSystem, normalization_defect, symmetry_defect, validate
from symcomplex.services.subshift import AUTOMATON, CoordinateSet, count_blocks, named, pattern_count
from tests.utils import assert_close


class TestCoefficientSystems:
    """Weights c(n, k)."""

    @pytest.mark.parametrize("cs", [
        CoefficientSystem.uniform(),
        CoefficientSystem.neural(),
        CoefficientSystem.p_symmetric(0.3),
        CoefficientSystem.from_measure([(0.2, 0.25), (0.8, 0.25)], lebesgue_weight=0.5),
    ], ids=["uniform", "neural", "psym", "mixed"])
    def test_normalized_and_symmetric(self, cs):
        """Every named system passes validation for n <= 30."""
        for n in range(1, 31):
            validate(cs, n, tol=1e-9)
            assert normalization_defect(cs, n) < 1e-9
            assert symmetry_defect(cs, n) < 1e-12

    def test_lebesgue_measure_is_neural(self):
        """A pure Lebesgue component gives the neural weights."""
        lebesgue = CoefficientSystem.from_measure(lebesgue_weight=1.0)
        for n in (1, 5, 12):
            np.testing.assert_allclose(lebesgue.coefficients(n), CoefficientSystem.neural().coefficients(n))

    def test_half_symmetric_is_uniform(self):
        """p = 1/2 collapses to 2^-n."""
        cs = CoefficientSystem.p_symmetric(0.5)
        assert cs.is_uniform
        np.testing.assert_allclose(cs.coefficients(7), np.full(8, 2.0 ** -7))

    def test_asymmetric_measure_rejected(self):
        """An atom without its mirror image breaks complement symmetry."""
        with pytest.raises(InvariantViolationError):
            CoefficientSystem.from_measure([(0.2, 1.0)])

    def test_mass_must_be_one(self):
        """Total mass other than 1 is rejected."""
        with pytest.raises(InvariantViolationError):
            CoefficientSystem.from_measure([(0.5, 0.5)])

    @pytest.mark.parametrize("text,label", [("uniform", "uniform"), ("neural", "neural"), ("psym:0.25", "psym:0.25")])
    def test_parse(self, text, label):
        """CLI spellings."""
        assert CoefficientSystem.parse(text).label == label

    @pytest.mark.parametrize("text", ["flat", "psym:x", "psym:1.5"])
    def test_parse_errors(self, text):
        """Unknown names and bad p are invalid input."""
        with pytest.raises(InvalidInputError):
            CoefficientSystem.parse(text)


class TestSubsetPatternCounts:
    """The all-subset table against direct counting."""

    @pytest.mark.parametrize("name", ["golden", "period2", "figI", "figII"])
    def test_table_matches_direct_counts(self, name):
        """Entry for every mask equals N(S)."""
        x = named(name)
        n = 10
        table = intricacy.pattern_counts_all_subsets(x, n)
        assert len(table) == 1 << n
        for mask in range(1, 1 << n, 7):
            assert table[mask] == pattern_count(x, CoordinateSet.from_mask(n, mask), method=AUTOMATON)
        assert table[0] == 1
        assert table[-1] == count_blocks(x, n)

    @pytest.mark.parametrize("name", ["golden", "full2", "full3"])
    def test_closed_form_matches_generic(self, name):
        """Run decomposition and the recursion give the same sums."""
        x = named(name)
        for n in (1, 4, 9):
            np.testing.assert_allclose(
                intricacy.subset_log_sums(x, n, intricacy.CLOSED_FORM),
                intricacy.subset_log_sums(x, n, intricacy.GENERIC),
                atol=1e-9,
            )

    def test_closed_form_needs_square_positive(self, period2):
        """period2 never has a positive power."""
        with pytest.raises(PreconditionError):
            intricacy.subset_log_sums(period2, 4, intricacy.CLOSED_FORM)

    def test_horizon_budget(self, period2):
        """Past the brute-force limit the generic path refuses."""
        with pytest.raises(ResourceBudgetError):
            intricacy.pattern_counts_all_subsets(period2, 40)


class TestFiniteIntricacy:
    """Asc(n) and Int(n) at finite horizons."""

    def test_golden_n3_by_hand(self, golden):
        """N values 1, 2, 3, 4, 5 on the subsets of {0, 1, 2}."""
        expected = log(6 ** 4 * 8 ** 2 / 5 ** 6) / 24
        assert_close(intricacy.int_finite(golden, 3), expected, 1e-12, "Int(3)")
        assert_close(intricacy.int_finite(golden, 3, convention=intricacy.IDENTITY), expected, 1e-12, "identity")

    def test_period2_asc(self, period2):
        """Every nonempty pattern set has two elements."""
        for n in (1, 5, 12):
            assert_close(intricacy.asc_finite(period2, n), (1 - 2.0 ** -n) * log(2) / n, 1e-12)

    @pytest.mark.slow
    def test_period2_asc_vanishes(self, period2):
        """Zero entropy and zero Asc in the limit."""
        assert intricacy.asc_finite(period2, 20) < 0.04

    def test_conventions_agree_for_symmetric_weights(self, golden):
        """complement and identity Int coincide for normalized symmetric weights."""
        for cs in (CoefficientSystem.uniform(), CoefficientSystem.neural(), CoefficientSystem.p_symmetric(0.2)):
            result = intricacy.intricacy_finite(golden, 8, cs)
            assert_close(result.int_, result.metadata["int_identity"], 1e-10, cs.label)

    def test_unknown_convention(self, golden):
        """Only complement and identity exist."""
        with pytest.raises(InvalidInputError):
            intricacy.int_finite(golden, 3, convention="mutual")

    def test_profile(self, golden):
        """One result per n, Asc below the block-count entropy."""
        profile = intricacy.asc_profile(golden, 6)
        assert [r.n for r in profile] == list(range(1, 7))
        for r in profile:
            assert r.asc <= r.metadata["block_count_entropy"] + 1e-12

    def test_figure_graphs_differ(self):
        """Same block counts, different sample complexity at n = 10."""
        fig_i = intricacy.intricacy_finite(named("figI"), 10)
        fig_ii = intricacy.intricacy_finite(named("figII"), 10)
        assert fig_i.metadata["log_block_count"] == fig_ii.metadata["log_block_count"]
        assert_close(fig_i.asc, 0.399, 5e-3, "figI Asc(10)")
        assert_close(fig_ii.asc, 0.377, 5e-3, "figII Asc(10)")
        assert_close(fig_i.int_, 0.254, 5e-3, "figI Int(10)")
        assert_close(fig_ii.int_, 0.208, 5e-3, "figII Int(10)")

    def test_subadditivity(self, golden):
        """n Asc(n) is subadditive and Asc(n) <= log|L_n|/n."""
        report = intricacy.subadditivity_defects(golden, 6)
        assert report["violations"] == []
        assert report["max_defect"] <= 1e-9
        assert report["chain_holds"]


class TestSeriesLimit:
    """Limit Asc through the block-count series."""

    @pytest.mark.parametrize("r", [2, 3, 4, 5])
    def test_full_shift(self, r):
        """Asc = log(r)/2 and Int = 0."""
        result = intricacy.asc_sft_series(named(f"full{r}"))
        assert_close(result.asc, log(r) / 2, 1e-9)
        assert_close(result.int_, 0.0, 1e-9)
        assert result.n == "limit"

    def test_golden(self, golden):
        """Asc near 0.286 and Int near 0.090."""
        result = intricacy.asc_sft_series(golden)
        assert_close(result.asc, 0.2857, 1e-3, "Asc")
        assert_close(result.int_, 0.0901, 1e-3, "Int")
        assert result.metadata["tail_bound"] < 1e-10

    def test_finite_values_approach_series(self, golden):
        """Asc(n) decreases toward the limit from above."""
        limit = intricacy.asc_sft_series(golden).asc
        values = [intricacy.asc_finite(golden, n) for n in (4, 8, 16)]
        assert values[0] >= values[1] >= values[2] >= limit - 1e-9

    def test_period2_precondition(self, period2):
        """No power of the period-2 matrix is positive."""
        with pytest.raises(PreconditionError):
            intricacy.asc_sft_series(period2)

    def test_weighted_series_not_available(self, golden):
        """The series is for uniform weights."""
        with pytest.raises(PreconditionError):
            intricacy.asc_sft_series(golden, CoefficientSystem.neural())

    def test_truncation(self):
        """The tail bound falls below the tolerance."""
        truncation = intricacy.series_truncation(2, 1e-6)
        assert truncation.tail_bound < 1e-6
        assert log(2) * (truncation.terms + 1) / 2.0 ** (truncation.terms - 1) >= 1e-6
