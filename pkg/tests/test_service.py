import math

import pytest

from pairfdr.simulation import SimulationConfig, run_experiment


class TestHealth:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json()["status"] == "ok"


class TestDecisionsEndpoint:
    def test_from_summaries(self, client):
        payload = {
            "groups": [
                {"mean": 0.0, "variance": 1.0, "size": 100},
                {"mean": 10.0, "variance": 1.0, "size": 100},
            ],
            "alpha": 0.2,
        }
        body = client.post("/v1/decisions", json=payload).json()
        assert body["q"] == 1
        assert body["k_hat"] == 1
        assert body["threshold_alpha_hat"] == pytest.approx(0.2, rel=1e-15)
        decision = body["decisions"][0]
        assert decision["rejected"] is True
        assert decision["declared_sign"] == "negative"
        assert decision["t"] == pytest.approx(-10.0 / math.sqrt(0.02), rel=1e-12)

    def test_from_samples_student_calibration(self, client):
        payload = {
            "samples": [[1.0, 2.0, 3.0, 2.5], [4.0, 5.0, 6.0, 5.5], [4.1, 5.2, 6.1, 5.6]],
            "alpha": 0.2,
            "calibration": "student_t",
        }
        body = client.post("/v1/decisions", json=payload).json()
        assert body["q"] == 3
        for decision in body["decisions"]:
            assert 0.0 < decision["p_two_sided"] <= 1.0
            assert decision["p_lower"] + decision["p_upper"] == pytest.approx(1.0, abs=1e-12)

    def test_requires_exactly_one_input(self, client):
        assert client.post("/v1/decisions", json={"alpha": 0.2}).status_code == 422
        both = {
            "groups": [{"mean": 0, "variance": 1, "size": 5}] * 2,
            "samples": [[1, 2], [3, 4]],
        }
        assert client.post("/v1/decisions", json=both).status_code == 422

    def test_degenerate_variance_maps_to_400(self, client):
        payload = {
            "groups": [
                {"mean": 0.0, "variance": 0.0, "size": 5},
                {"mean": 1.0, "variance": 0.0, "size": 5},
            ]
        }
        response = client.post("/v1/decisions", json=payload)
        assert response.status_code == 400
        assert "zero variance" in response.json()["detail"]

    def test_alpha_domain_rejected(self, client):
        payload = {"samples": [[1, 2], [3, 4]], "alpha": 1.5}
        assert client.post("/v1/decisions", json=payload).status_code == 422


class TestDiagnosticsEndpoint:
    def test_strong_two_group_design(self, client):
        payload = {"means": [0.0, 10.0], "scales": [1.0, 1.0], "sizes": [100, 100]}
        body = client.post("/v1/diagnostics", json=payload).json()
        assert body["c_lower"] == 1.0
        assert body["c_upper"] == 1.0
        assert body["signal_pair_count"] == 1
        assert body["signal_condition_met"] is True
        assert (body["q0"], body["q_plus"], body["q_minus"]) == (0, 0, 1)

    def test_bad_design_maps_to_400(self, client):
        payload = {"means": [0.0, 1.0], "scales": [1.0, -1.0], "sizes": [10, 10]}
        assert client.post("/v1/diagnostics", json=payload).status_code == 400


class TestExperimentsEndpoint:
    def test_matches_library_exactly(self, client):
        config = dict(m=3, n=20, effect_size=0.1, alpha=0.2, reps=12, seed=9)
        body = client.post("/v1/experiments", json={"configs": [config]}).json()
        (row,) = body["cells"]
        (cell,) = run_experiment([SimulationConfig(**config)])
        assert row["m"] == cell.config.m
        assert row["calibration"] == "normal"
        # floats survive the JSON round trip bit-for-bit
        assert row["p_dfdp_le_bound"] == cell.summary.p_dfdp_le_bound
        assert row["p_se"] == cell.summary.p_se
        assert row["dfdr_hat"] == cell.summary.dfdr_hat
        assert row["dfdr_se"] == cell.summary.dfdr_se
        assert row["mean_rejections"] == cell.mean_rejections
        assert row["mean_alpha_hat"] == cell.mean_alpha_hat
        assert row["threshold_bound_rate"] == cell.threshold_bound_rate

    def test_one_row_per_config(self, client):
        configs = [
            dict(m=2, n=10, effect_size=0.0, reps=3, seed=1),
            dict(m=3, n=10, effect_size=0.5, reps=3, seed=2),
        ]
        body = client.post("/v1/experiments", json={"configs": configs}).json()
        assert [(row["m"], row["seed"]) for row in body["cells"]] == [(2, 1), (3, 2)]

    def test_validation(self, client):
        assert client.post("/v1/experiments", json={"configs": []}).status_code == 422
        bad_workers = {"configs": [dict(m=2, n=10, effect_size=0.1)], "workers": 0}
        assert client.post("/v1/experiments", json=bad_workers).status_code == 422
        heavy_tail = {"configs": [dict(m=2, n=10, effect_size=0.1, error_df=2)]}
        assert client.post("/v1/experiments", json=heavy_tail).status_code == 422
