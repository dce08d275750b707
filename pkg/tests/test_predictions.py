"""Prediction-file validation and the ensemble mean."""

import numpy as np
import pytest

from mcqgeval.errors import (
    DuplicateQuestionId,
    EnsembleSizeMismatch,
    LabelSpaceMismatch,
    MalformedRecord,
    RowNotNormalized,
)
from mcqgeval.predictions import (
    Purpose,
    load_predictions,
    mean_distribution,
    write_predictions,
)

from conftest import one_hot, prediction_rows, write_jsonl


UNIFORM4 = [0.25, 0.25, 0.25, 0.25]


class TestLoadPredictions:
    def test_valid_mcmrc_set(self, tmp_path):
        rows = prediction_rows("mcmrc", 3, {
            "q1": [UNIFORM4] * 3,
            "q2": [one_hot(0)] * 3,
        })
        ps = load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)
        assert len(ps) == 2
        assert ps.ensemble_size == 3
        assert ps["q1"].ensemble_size == 3
        assert ps["q1"].label_space == ("A", "B", "C", "D")

    def test_valid_qc_set(self, tmp_path):
        rows = prediction_rows("qc", 1, {"q1": [[0.2, 0.5, 0.3]]})
        ps = load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.QC)
        assert ps["q1"].label_space == ("easy", "medium", "hard")

    def test_row_not_normalized(self, tmp_path):
        bad = [[0.25, 0.25, 0.25, 0.23]]  # sums to 0.98
        rows = prediction_rows("mcmrc", 1, {"q1": bad})
        with pytest.raises(RowNotNormalized) as err:
            load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)
        assert err.value.question_id == "q1"
        assert err.value.row_index == 0
        assert err.value.row_sum == pytest.approx(0.98)

    def test_renormalizes_within_tolerance(self, tmp_path):
        near = [[0.2500001, 0.25, 0.25, 0.25]]
        rows = prediction_rows("mcmrc", 1, {"q1": near})
        ps = load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)
        assert ps["q1"].member_distributions.sum() == pytest.approx(1.0, abs=1e-12)

    def test_qc_file_with_four_labels(self, tmp_path):
        rows = [{"purpose": "qc", "ensemble_size": 1},
                {"question_id": "q1", "labels": ["A", "B", "C", "D"],
                 "members": [UNIFORM4]}]
        with pytest.raises(LabelSpaceMismatch):
            load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.QC)

    def test_header_purpose_mismatch(self, tmp_path):
        rows = prediction_rows("qc", 1, {"q1": [[0.2, 0.5, 0.3]]})
        with pytest.raises(LabelSpaceMismatch):
            load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)

    def test_duplicate_question_id(self, tmp_path):
        rows = prediction_rows("mcmrc", 1, {"q1": [UNIFORM4]})
        rows.append(dict(rows[1]))
        with pytest.raises(DuplicateQuestionId):
            load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)

    def test_ensemble_size_mismatch(self, tmp_path):
        rows = prediction_rows("mcmrc", 3, {"q1": [UNIFORM4] * 2})
        with pytest.raises(EnsembleSizeMismatch):
            load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)

    def test_entry_out_of_range(self, tmp_path):
        rows = prediction_rows("mcmrc", 1, {"q1": [[1.5, -0.5, 0.0, 0.0]]})
        with pytest.raises(MalformedRecord):
            load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)

    def test_missing_header(self, tmp_path):
        rows = prediction_rows("mcmrc", 1, {"q1": [UNIFORM4]})[1:]
        with pytest.raises(MalformedRecord):
            load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)

    def test_empty_file(self, tmp_path):
        with pytest.raises(MalformedRecord):
            load_predictions(write_jsonl(tmp_path / "p.jsonl", []), Purpose.MCMRC)

    def test_write_then_load_round_trip(self, tmp_path):
        path = tmp_path / "p.jsonl"
        write_predictions(path, Purpose.MCMRC,
                          {"q1": [one_hot(1), UNIFORM4]}, ensemble_size=2)
        ps = load_predictions(path, Purpose.MCMRC)
        np.testing.assert_allclose(ps["q1"].member_distributions,
                                   [one_hot(1), UNIFORM4])

    def test_predictions_are_read_only(self, tmp_path):
        rows = prediction_rows("mcmrc", 1, {"q1": [UNIFORM4]})
        ps = load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)
        with pytest.raises(ValueError):
            ps["q1"].member_distributions[0, 0] = 0.9
        with pytest.raises(TypeError):
            ps.predictions["q2"] = ps["q1"]


class TestMeanDistribution:
    def test_single_member_identity(self, tmp_path):
        rows = prediction_rows("mcmrc", 1, {"q1": [[0.1, 0.2, 0.3, 0.4]]})
        ps = load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)
        np.testing.assert_array_equal(mean_distribution(ps["q1"]),
                                      [0.1, 0.2, 0.3, 0.4])

    def test_two_one_hots(self, tmp_path):
        rows = prediction_rows("mcmrc", 2, {"q1": [one_hot(0), one_hot(1)]})
        ps = load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)
        np.testing.assert_array_equal(mean_distribution(ps["q1"]),
                                      [0.5, 0.5, 0.0, 0.0])

    def test_matches_elementwise_loop_oracle(self, tmp_path):
        rng = np.random.default_rng(7)
        rows_arr = rng.dirichlet(np.ones(4), size=3)
        rows = prediction_rows("mcmrc", 3, {"q1": rows_arr.tolist()})
        ps = load_predictions(write_jsonl(tmp_path / "p.jsonl", rows), Purpose.MCMRC)
        got = mean_distribution(ps["q1"])
        members = ps["q1"].member_distributions
        for col in range(4):
            total = 0.0
            for k in range(3):
                total += members[k][col]
            assert got[col] == pytest.approx(total / 3, abs=1e-15)

    def test_output_satisfies_row_invariants(self, tmp_path):
        rng = np.random.default_rng(11)
        for trial in range(25):
            k = int(rng.integers(1, 6))
            rows_arr = rng.dirichlet(np.ones(4), size=k)
            rows = prediction_rows("mcmrc", k, {"q1": rows_arr.tolist()})
            ps = load_predictions(write_jsonl(tmp_path / f"p{trial}.jsonl", rows),
                                  Purpose.MCMRC)
            mean = mean_distribution(ps["q1"])
            assert abs(mean.sum() - 1.0) < 1e-9
            assert np.all(mean >= 0.0) and np.all(mean <= 1.0)
