"""Tests for the bundled programs and the bounded case studies."""

import pytest

from app.domain.casestudies import (
    CASE_STUDIES, continuity, faulty_gc, frame_converse, list_extension, list_programs, load_program,
    lossy_reversal, randomize, run_case_study,
)
from app.domain.syntax import While, is_loop_free
from app.models.errors import InputError


class TestCorpus:
    """Test loading of the bundled .hp programs."""

    def test_bundled_programs(self):
        assert list_programs() == ["gc_delete", "list_extension", "lossy_reversal", "randomize"]

    def test_loops(self):
        assert isinstance(load_program("list_extension").second, While)
        assert not is_loop_free(load_program("randomize"))

    def test_parameter_substitution(self):
        assert is_loop_free(load_program("gc_delete", p="1/3"))

    def test_missing_parameter(self):
        with pytest.raises(InputError):
            load_program("gc_delete")

    def test_unknown_program(self):
        with pytest.raises(InputError):
            load_program("quicksort")


class TestStudies:
    """Test the reproductions on small models."""

    def test_randomize(self):
        result = randomize(2)
        assert result.holds
        assert [r["permutation"] for r in result.rows] == ["1,2", "2,1"]
        assert all(r["oracle"] == r["wp"] == "1/2" for r in result.rows)

    def test_randomize_three_elements(self):
        result = randomize(3)
        assert result.holds
        assert len(result.rows) == 6
        assert all(r["oracle"] == r["wp"] == "1/6" for r in result.rows)

    def test_randomize_size_limits(self):
        with pytest.raises(InputError):
            randomize(5)

    def test_lossy_reversal(self):
        result = lossy_reversal(1)
        (row,) = result.rows
        assert row["oracle"] == row["wp"] == row["expected"] == "1/2"
        assert row["invariant_bound"] == "1/2"
        assert result.holds

    @pytest.mark.parametrize("length, half", [(2, "1"), (3, "3/2")])
    def test_lossy_reversal_longer_lists(self, length, half):
        result = lossy_reversal(length)
        (row,) = result.rows
        assert row["oracle"] == row["wp"] == row["expected"] == half
        assert result.holds

    def test_list_extension_default_holds(self):
        result = list_extension()
        (row,) = result.rows
        # 1 − 32/2^31 with thirty addresses
        assert row["oracle"] == row["truncated_series"] == "67108863/67108864"
        assert row["gap"] < 1e-6
        assert result.holds

    def test_list_extension_truncated_series(self):
        result = list_extension(2, invariant_addrs=2)
        (row,) = result.rows
        assert row["oracle"] == row["truncated_series"] == "1/2"
        assert row["lower_bound"]
        assert row["gap"] == 0.5
        # two addresses leave too much of the geometric tail to come within 10^-6 of 1
        assert not result.holds
        assert "holds" in result.notes[1]

    def test_faulty_gc(self):
        result = faulty_gc("1/2")
        assert result.holds
        sizes = {r["size"] for r in result.rows}
        assert sizes == {0, 2, 4}
        assert {r["success"] for r in result.rows if r["size"] == 4} == {"1/4"}

    def test_gc_probability_range(self):
        with pytest.raises(InputError):
            faulty_gc("3/2")

    def test_continuity_counterexample(self):
        result = continuity(3)
        assert [r["wp"] for r in result.rows] == ["0", "0", "1"]
        assert result.holds

    def test_frame_converse(self):
        result = frame_converse()
        assert result.holds
        assert [r["verdict"] for r in result.rows] == ["holds", "counterexample"]
        assert result.as_dict()["casestudy"] == "frame-converse"


class TestRunner:
    """Test dispatch by name."""

    def test_every_study_registered(self):
        assert sorted(CASE_STUDIES) == [
            "continuity", "frame-converse", "gc", "list-extension", "lossy-reversal", "randomize",
        ]

    def test_size_is_forwarded(self):
        assert len(run_case_study("continuity", size=2).rows) == 2

    def test_unknown_study(self):
        with pytest.raises(InputError):
            run_case_study("bubblesort")

    def test_fixed_size_study(self):
        with pytest.raises(InputError):
            run_case_study("frame-converse", size=3)

    def test_probability_only_for_gc(self):
        with pytest.raises(InputError):
            run_case_study("randomize", p="1/2")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
