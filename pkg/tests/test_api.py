"""Integration tests for the HTTP surface.

Every route runs a workbench command; module errors map onto HTTP status
codes, verification failures come back as 200 with witnesses.
"""

import pytest
from fastapi.testclient import TestClient

from app.main import app

# ─────────────────────────────────────────────────────────────────────────────
# Fixtures
# ─────────────────────────────────────────────────────────────────────────────

SMALL = {"vars": "x,y", "vmin": 0, "vmax": 2, "addrs": 2}


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


def body(**fields) -> dict:
    return {"domain": SMALL, **fields}


# ─────────────────────────────────────────────────────────────────────────────
# Tests
# ─────────────────────────────────────────────────────────────────────────────


class TestService:
    """Test the informational endpoints."""

    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json()["status"] == "healthy"

    def test_root_lists_commands(self, client):
        data = client.get("/").json()
        assert "check-soundness" in data["commands"]
        assert "frame-converse" in data["casestudies"]


class TestCommands:
    """Test the per-command routes."""

    def test_eval(self, client):
        response = client.post("/api/v1/eval", json=body(expr="size", states=["x=0; heap=1:2"]))
        assert response.status_code == 200
        data = response.json()
        assert data["command"] == "eval"
        assert data["results"] == [{"state": "x=0,y=0; heap=1:2", "value": "1"}]
        assert data["exit_code"] == 0

    def test_wp(self, client):
        response = client.post(
            "/api/v1/wp",
            json=body(program_text="{ x := 1 } [1/3] { x := 2 }", post="[x = 1]", states=["x=0"]),
        )
        assert response.status_code == 200
        assert response.json()["results"][0]["value"] == "1/3"

    def test_oracle(self, client):
        response = client.post(
            "/api/v1/oracle",
            json=body(program_text="x := new(0)", post="[x = 1]", states=["x=0"], direction="min"),
        )
        assert response.status_code == 200
        assert response.json()["results"][0]["value"] == "0"

    def test_generic_command_route(self, client):
        response = client.post(
            "/api/v1/command",
            json=body(command="check-frame", program_text="free(x)", post="[emp]", frame="size"),
        )
        assert response.status_code == 200
        assert response.json()["results"][0]["verdict"] == "holds"

    def test_violation_is_a_result(self, client):
        response = client.post(
            "/api/v1/command",
            json=body(
                command="check-frame", program_text="<x> := 0", post="[emp]", frame="x ~> 0", direction="super",
            ),
        )
        assert response.status_code == 200
        data = response.json()
        assert data["exit_code"] == 1
        assert data["witnesses"][0]["verdict"] == "counterexample"

    def test_casestudy(self, client):
        response = client.post("/api/v1/casestudy/continuity", json={"size": 2})
        assert response.status_code == 200
        assert response.json()["results"][0]["holds"] is True


class TestErrorMapping:
    """Test that module errors become HTTP errors."""

    def test_parse_error_is_422(self, client):
        response = client.post("/api/v1/eval", json=body(expr="size **", states=["x=0"]))
        assert response.status_code == 422
        assert response.json()["detail"]["kind"] == "parse-error"

    def test_unknown_command_is_422(self, client):
        response = client.post("/api/v1/command", json=body(command="prove-everything"))
        assert response.status_code == 422

    def test_model_adequacy_is_409(self, client):
        response = client.post(
            "/api/v1/wp", json=body(program_text="x := x + 1", post="1", states=["x=2"]),
        )
        assert response.status_code == 409
        assert response.json()["detail"]["kind"] == "value-domain-exceeded"

    def test_budget_is_507(self, client):
        response = client.post(
            "/api/v1/wp",
            json={
                "domain": {**SMALL, "loop_max_iters": 2},
                "program_text": "while (x = 0) { { x := 1 } [1/2] { skip } }",
                "post": "1",
                "states": ["x=0"],
            },
        )
        assert response.status_code == 507

    def test_unknown_casestudy_is_422(self, client):
        response = client.post("/api/v1/casestudy/bubblesort", json={})
        assert response.status_code == 422


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
