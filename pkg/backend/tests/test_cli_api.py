"""
Tests for the command-line interface and the HTTP API.

Run with: pytest backend/tests/test_cli_api.py -v
"""

import orjson
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from cli import EXIT_INVALID_INPUT, EXIT_OK, cli
from main import app
from services.branched import serialize_branched_surface
from services.engine import NO_CANDIDATE_CARRIES, certificate_to_json, lamalg1_bounded, save_certificate
from conftest import BALL, DOUBLED_TETRAHEDRON, FREE_BOUNDARY_SURFACE

NO_CANDIDATES = "services.engine.pipeline.candidates"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def closed_table(write_file):
    return str(write_file("s3.tri", DOUBLED_TETRAHEDRON))


class TestCliTriangulations:

    def test_validate_text(self, runner, closed_table):
        result = runner.invoke(cli, ["validate", "--input", closed_table])
        assert result.exit_code == EXIT_OK
        assert "closed: True" in result.output
        assert "euler characteristic: 0" in result.output

    def test_validate_json(self, runner, closed_table):
        result = runner.invoke(cli, ["validate", "--input", closed_table, "--report", "json"])
        report = orjson.loads(result.output)
        assert report["closed"] and report["orientable"]

    def test_bad_table_exits_with_input_error(self, runner, write_file):
        path = write_file("bad.tri", "2\nbdry bdry bdry bdry\n")
        result = runner.invoke(cli, ["validate", "--input", str(path)])
        assert result.exit_code == EXIT_INVALID_INPUT
        assert "invalid input" in result.output

    def test_vertex_surfaces(self, runner, closed_table):
        result = runner.invoke(cli, ["vertex-surfaces", "--input", closed_table])
        assert result.exit_code == EXIT_OK
        assert result.output.count("(vertex link)") == 4


class TestCliBranched:

    def test_check_branched_json(self, runner, write_file, sink_disk_surface):
        path = write_file("sink.bs", serialize_branched_surface(sink_disk_surface))
        result = runner.invoke(cli, ["check-branched", "--input", str(path), "--report", "json"])
        assert result.exit_code == EXIT_OK
        payload = orjson.loads(result.output)
        assert payload["sink_disks"] == [0]
        assert payload["laminar"] is False
        assert len(payload["disks_of_contact"]) == 1

    def test_enumerate_splittings(self, runner, write_file, sink_disk_surface):
        path = write_file("sink.bs", serialize_branched_surface(sink_disk_surface))
        result = runner.invoke(cli, ["enumerate-splittings", "--input", str(path), "--budget", "1", "--report", "json"])
        assert result.exit_code == EXIT_OK
        rows = orjson.loads(result.output)["complexes"]
        assert [row["radius"] for row in rows] == ["Infinite"]

    def test_radius_search_exhausts(self, runner, write_file):
        path = write_file("free.bs", FREE_BOUNDARY_SURFACE)
        result = runner.invoke(cli, ["enumerate-splittings", "--input", str(path), "--budget", "2", "--radius-search"])
        assert result.exit_code == EXIT_OK
        assert "Exhausted at N=1" in result.output


class TestCliDetect:

    def test_open_triangulation_is_refused(self, runner, write_file):
        path = write_file("ball.tri", BALL)
        result = runner.invoke(cli, ["detect", "--input", str(path)])
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_json_verdict(self, runner, closed_table, mocker):
        mocker.patch(NO_CANDIDATES, return_value=[])
        result = runner.invoke(cli, ["detect", "--input", closed_table, "--budget", "1", "--report", "json"])
        assert result.exit_code == EXIT_OK
        assert orjson.loads(result.output)["outcome"] == NO_CANDIDATE_CARRIES

    def test_foreign_certificate_fails_verification(self, runner, closed_table, tmp_path, sink_disk_surface):
        certificate = lamalg1_bounded(sink_disk_surface, budget=1).certificate
        path = tmp_path / "cert.json"
        save_certificate(certificate, path)
        result = runner.invoke(cli, ["verify", "--input", closed_table, "--certificate", str(path)])
        assert result.exit_code == EXIT_INVALID_INPUT
        assert "selection admissible" in result.output


class TestHealthEndpoint:

    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "healthy"
        assert data["encodings"]["splitting_complex"] == "sc1"

    def test_root(self, client):
        assert client.get("/").json()["report_schema_version"] == "1.0"


class TestTriangulationEndpoints:

    def test_validate(self, client):
        response = client.post("/triangulations/validate", json={"gluing_table": DOUBLED_TETRAHEDRON})
        assert response.status_code == 200
        assert response.json()["report"]["closed"] is True
        assert "X-Process-Time" in response.headers

    def test_bad_table_is_400(self, client):
        response = client.post("/triangulations/validate", json={"gluing_table": "1\n3:0:0123 bdry bdry bdry"})
        assert response.status_code == 400
        body = response.json()
        assert body["success"] is False
        assert body["error_code"] == "INVALID_INPUT"

    def test_empty_table_is_422(self, client):
        response = client.post("/triangulations/validate", json={"gluing_table": ""})
        assert response.status_code == 422

    def test_vertex_surfaces(self, client):
        response = client.post("/triangulations/vertex-surfaces", json={"gluing_table": DOUBLED_TETRAHEDRON})
        data = response.json()
        assert response.status_code == 200
        assert data["count"] == len(data["surfaces"])
        assert sum(1 for s in data["surfaces"] if s["vertex_link"]) == 4


class TestDetectEndpoint:

    def test_open_triangulation_is_400(self, client):
        response = client.post("/detect", json={"gluing_table": BALL})
        assert response.status_code == 400

    def test_budget_must_be_positive(self, client):
        response = client.post("/detect", json={"gluing_table": DOUBLED_TETRAHEDRON, "budget": 0})
        assert response.status_code == 422

    def test_verdict_body(self, client, mocker):
        mocker.patch(NO_CANDIDATES, return_value=[])
        response = client.post("/detect", json={"gluing_table": DOUBLED_TETRAHEDRON, "budget": 1})
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("application/json")
        assert response.json()["outcome"] == NO_CANDIDATE_CARRIES


class TestCertificateEndpoint:

    def test_malformed_certificate_is_400(self, client):
        response = client.post("/certificates/verify", json={"gluing_table": DOUBLED_TETRAHEDRON, "certificate": "{}"})
        assert response.status_code == 400

    def test_foreign_certificate_is_rejected(self, client, sink_disk_surface):
        certificate = lamalg1_bounded(sink_disk_surface, budget=1).certificate
        response = client.post(
            "/certificates/verify",
            json={"gluing_table": DOUBLED_TETRAHEDRON, "certificate": certificate_to_json(certificate).decode("utf-8")},
        )
        assert response.status_code == 200
        data = response.json()
        assert data["valid"] is False
        assert data["failed_step"] == "selection admissible"
