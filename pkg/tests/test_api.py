"""HTTP API: endpoints, error mapping and response shapes."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from src.app import app
from src.config import settings
from src.core.grid import build_grid

API = settings.api_prefix


@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


class TestSpectrum:
    def test_default_phase(self, client):
        response = client.get(f"{API}/spectrum", params={"count": 20})
        assert response.status_code == 200
        rows = response.json()
        assert [row["n"] for row in rows] == list(range(1, 21))
        assert rows[19]["tau_plus"] == pytest.approx(0.0081, abs=5e-4)
        assert all(row["tau_minus"] == -row["tau_plus"] for row in rows)

    def test_pi_half_entries_carry_parity(self, client):
        rows = client.get(f"{API}/spectrum", params={"gamma": "pi/2", "count": 4}).json()
        assert {row["parity"] for row in rows} <= {"even", "odd"}

    def test_invalid_gamma(self, client):
        response = client.get(f"{API}/spectrum", params={"gamma": "4"})
        assert response.status_code == 400
        assert response.json()["detail"]["error_code"] == "INVALID_CONFIG"

    def test_family_needs_special_phase(self, client):
        response = client.get(f"{API}/spectrum", params={"gamma": "0.01", "case": "odd"})
        assert response.status_code == 400
        assert response.json()["detail"]["error_code"] == "DOMAIN_ERROR"

    def test_even_family_at_pi_half(self, client):
        rows = client.get(f"{API}/spectrum", params={"gamma": "pi/2", "case": "even", "count": 3}).json()
        assert [row["parity"] for row in rows] == ["even"] * 3

    def test_count_bounds(self, client):
        assert client.get(f"{API}/spectrum", params={"count": 0}).status_code == 422


class TestEigenfunction:
    def test_samples_normalized(self, client):
        response = client.get(f"{API}/eigenfunction", params={"gamma": "0.01", "n": 2, "grid": 128})
        assert response.status_code == 200
        body = response.json()
        assert body["branch"] == "plus"
        assert body["tau"] > 0
        assert len(body["samples"]) == 128
        abs2 = np.array([s["re"] ** 2 + s["im"] ** 2 for s in body["samples"]])
        assert float(np.sum(build_grid(128, 1.0).weights * abs2)) == pytest.approx(1.0, abs=1e-10)

    def test_minus_branch(self, client):
        body = client.get(f"{API}/eigenfunction", params={"n": 1, "branch": "minus", "grid": 64}).json()
        assert body["tau"] < 0

    def test_grid_too_small(self, client):
        response = client.get(f"{API}/eigenfunction", params={"n": 1, "grid": 4})
        assert response.status_code == 400


class TestVerify:
    def test_unknown_suite(self, client):
        response = client.post(f"{API}/verify", json={"suite": "bogus"})
        assert response.status_code == 404
        assert response.json()["detail"]["error_code"] == "UNKNOWN_SUITE"

    def test_invalid_gamma(self, client):
        response = client.post(f"{API}/verify", json={"suite": "commutator", "gamma": "banana"})
        assert response.status_code == 400

    @pytest.mark.slow
    def test_commutator_suite(self, client):
        response = client.post(f"{API}/verify", json={"suite": "commutator"})
        assert response.status_code == 200
        body = response.json()
        assert {entry["suite"] for entry in body["results"]} == {"commutator"}
