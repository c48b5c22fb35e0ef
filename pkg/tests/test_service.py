"""Tests for the HTTP service front end."""

import pytest
from fastapi.testclient import TestClient

from bsat_arr import __version__, runops
from bsat_arr.service.app import app

THREE_LINES = {"n": 2, "hyperplanes": [["1", "0"], ["0", "1"], ["1", "1"]]}
NON_GENERIC = {
    "n": 3,
    "hyperplanes": [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"], ["0", "0", "1"]],
}


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


class TestHealth:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok", "version": __version__}


class TestBFunctionEndpoint:
    def test_generic(self, client):
        response = client.post("/bfunction", json={"mode": "generic", "n": 2, "k": 3})
        assert response.status_code == 200
        report = response.json()
        assert (
            report["results"]["candidates"]["r=1"]["factored"]
            == "(s+2/3)(s+1)^2(s+4/3)"
        )
        assert set(report) == {
            "command",
            "input_digest",
            "results",
            "checks",
            "wall_time_ms",
        }

    def test_isolated(self, client):
        response = client.post(
            "/bfunction", json={"mode": "isolated", "arrangement": THREE_LINES}
        )
        assert response.status_code == 200
        assert (
            response.json()["results"]["bfunction"]["factored"]
            == "(s+2/3)(s+1)^2(s+4/3)"
        )

    def test_generic_missing_parameters_is_400(self, client):
        response = client.post("/bfunction", json={"mode": "generic", "n": 2})
        assert response.status_code == 400
        assert "n and k" in response.json()["detail"]

    def test_precondition_is_422(self, client):
        response = client.post("/bfunction", json={"mode": "generic", "n": 1, "k": 2})
        assert response.status_code == 422

    def test_bad_mode_is_422(self, client):
        response = client.post("/bfunction", json={"mode": "exotic"})
        assert response.status_code == 422


class TestMilnorEndpoint:
    def test_profile(self, client):
        response = client.post("/milnor", json={"arrangement": THREE_LINES})
        assert response.status_code == 200
        assert response.json()["results"]["u"] == [1, 2, 1]

    def test_non_generic_is_422_with_witness(self, client):
        response = client.post("/milnor", json={"arrangement": NON_GENERIC})
        assert response.status_code == 422
        assert "{1, 2, 3}" in response.json()["detail"]

    def test_missing_body_is_422(self, client):
        response = client.post("/milnor", json={})
        assert response.status_code == 422


class TestLengthEndpoint:
    def test_three_lines(self, client):
        response = client.post("/length", json={"arrangement": THREE_LINES})
        assert response.status_code == 200
        report = response.json()
        assert report["results"]["length"] == 7
        assert report["results"]["inclusion_exclusion"] == [[1, 12], [2, 6], [3, 1]]


class TestRewriteEndpoint:
    def test_rewrite(self, client):
        response = client.post(
            "/rewrite",
            json={"arrangement": THREE_LINES, "product": "1,2", "degree": 2},
        )
        assert response.status_code == 200
        assert response.json()["results"]["basis_coefficients"] == [
            {"monomial": [0, 1, 1], "coefficient": "-1"}
        ]

    def test_degree_mismatch_is_400(self, client):
        response = client.post(
            "/rewrite",
            json={"arrangement": THREE_LINES, "product": "1,2", "degree": 9},
        )
        assert response.status_code == 400


class TestVerifyEndpoint:
    def test_small_grid(self, client):
        response = client.post("/verify", json={"grid": "n=2,k=3..3"})
        assert response.status_code == 200
        report = response.json()
        assert report["results"]["instances"] == [{"n": 2, "k": 3}]
        assert all(c["status"] != "fail" for c in report["checks"])

    def test_conflicting_inputs_is_400(self, client):
        response = client.post(
            "/verify", json={"grid": "n=2,k=3", "arrangement": THREE_LINES}
        )
        assert response.status_code == 400


class TestSharedHandlers:
    def test_service_and_direct_reports_agree(self, client):
        via_http = client.post("/length", json={"arrangement": THREE_LINES}).json()
        direct = runops.run_length(THREE_LINES)
        via_http.pop("wall_time_ms")
        direct.pop("wall_time_ms")
        assert via_http == direct
