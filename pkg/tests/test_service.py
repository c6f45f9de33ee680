from __future__ import annotations

import json
import time

import pytest
from fastapi.testclient import TestClient

from srmforge.dataset import load_dataset
from srmforge.service import create_app

SANITIZED_SERVLET = """package com.acme.web;
public class UserServlet {
    protected void doPost(HttpServletRequest req, HttpServletResponse resp) {
        String usr = req.getParameter("ID");
        usr = ESAPI.encoder().encodeForSQL(new MySQLCodec(), usr);
        String query = "SELECT * FROM users WHERE id='" + usr + "'";
        Statement stmt = conn.createStatement();
        ResultSet rs = stmt.executeQuery(query);
    }
}
"""
MUTANT_SERVLET = SANITIZED_SERVLET.replace(
    '        usr = ESAPI.encoder().encodeForSQL(new MySQLCodec(), usr);\n', ""
)

ENCODE_FOR_SQL = "org.owasp.esapi.Encoder.encodeForSQL(Codec,String)"


def _make_client(tmp_path, source: str) -> TestClient:
    project = tmp_path / "proj"
    project.mkdir()
    (project / "UserServlet.java").write_text(source, encoding="utf-8")
    app = create_app(project_root=project, output_dir=tmp_path / "out")
    return TestClient(app)


@pytest.fixture()
def client(tmp_path) -> TestClient:
    return _make_client(tmp_path, MUTANT_SERVLET)


@pytest.fixture()
def sanitized_client(tmp_path) -> TestClient:
    return _make_client(tmp_path, SANITIZED_SERVLET)


def _wait(client: TestClient, job_id: str, timeout: float = 60.0) -> dict:
    deadline = time.time() + timeout
    while time.time() < deadline:
        job = client.get(f"/api/jobs/{job_id}").json()
        if job["status"] in ("done", "failed"):
            return job
        time.sleep(0.02)
    raise AssertionError("job did not finish in time")


def _run_job(client: TestClient, kind: str, config: dict | None = None) -> dict:
    response = client.post("/api/jobs", json={"kind": kind, "config": config or {}})
    assert response.status_code == 201, response.text
    job = _wait(client, response.json()["id"])
    assert job["status"] == "done", job
    return job


# -- methods ---------------------------------------------------------------


def test_methods_listing_mirrors_the_dataset(client):
    rows = client.get("/api/methods").json()["methods"]
    assert len(rows) == 318
    first = rows[0]
    assert {"signature", "className", "labels", "dataIn", "dataOut", "discovery"} <= set(first)


def test_methods_filters(client):
    sanitizers = client.get("/api/methods", params={"label": "sanitizer"}).json()["methods"]
    assert sanitizers
    assert all("sanitizer" in row["labels"] for row in sanitizers)

    one_class = client.get("/api/methods", params={"class": "java.sql.Statement"}).json()["methods"]
    assert len(one_class) >= 5
    assert all(row["className"] == "java.sql.Statement" for row in one_class)

    manual = client.get("/api/methods", params={"discovery": "manual"}).json()["methods"]
    assert manual == []


def test_get_single_method_and_not_found(client):
    row = client.get(f"/api/methods/{ENCODE_FOR_SQL}").json()
    assert row["signature"] == ENCODE_FOR_SQL
    assert row["labels"] == ["sanitizer", "cwe89"]
    assert row["dataIn"] == [1]

    missing = client.get("/api/methods/p.Nope.never()")
    assert missing.status_code == 404
    body = missing.json()
    assert body["code"] == "not_found"
    assert set(body) == {"code", "message", "path"}


def test_patch_updates_labels_and_marks_manual(client, tmp_path):
    response = client.patch(
        f"/api/methods/{ENCODE_FOR_SQL}", json={"labels": ["sanitizer", "cwe89", "cwe79"]}
    )
    assert response.status_code == 200, response.text
    row = response.json()
    assert row["discovery"] == "manual"
    assert "cwe79" in row["labels"]

    stored = load_dataset((tmp_path / "out" / "dataset.json").read_text())
    assert stored.by_signature(ENCODE_FOR_SQL).discovery == "manual"


def test_patch_validates_labels_data_in_and_data_out(client):
    bad_label = client.patch(f"/api/methods/{ENCODE_FOR_SQL}", json={"labels": ["nonsense"]})
    assert bad_label.status_code == 422
    assert bad_label.json()["path"] == "/labels"

    out_of_range = client.patch(f"/api/methods/{ENCODE_FOR_SQL}", json={"dataIn": [7]})
    assert out_of_range.status_code == 422
    assert out_of_range.json()["path"] == "/dataIn"

    bad_out = client.patch(f"/api/methods/{ENCODE_FOR_SQL}", json={"dataOut": "sideways"})
    assert bad_out.status_code == 422
    assert bad_out.json()["path"] == "/dataOut"

    param_out = client.patch(f"/api/methods/{ENCODE_FOR_SQL}", json={"dataOut": {"parameter": 1}})
    assert param_out.status_code == 200
    assert param_out.json()["dataOut"] == {"parameter": 1}


def test_patch_can_create_a_manual_record_for_a_new_signature(client):
    signature = "com.acme.web.UserServlet.doPost(HttpServletRequest,HttpServletResponse)"
    response = client.patch(f"/api/methods/{signature}", json={"labels": ["sink", "cwe89"]})
    assert response.status_code == 200
    assert response.json()["discovery"] == "manual"
    assert client.get("/api/methods", params={"discovery": "manual"}).json()["methods"]


# -- settings ----------------------------------------------------------------


def test_settings_report_first_run_then_persist(client):
    first = client.get("/api/settings").json()
    assert first["exists"] is False
    assert first["settings"]["depth"] == 2

    saved = client.put("/api/settings", json={"depth": 3, "cweFilter": ["cwe89"]})
    assert saved.status_code == 200
    assert saved.json()["exists"] is True

    second = client.get("/api/settings").json()
    assert second["exists"] is True
    assert second["settings"]["depth"] == 3
    assert second["settings"]["cweFilter"] == ["cwe89"]


def test_settings_validation(client):
    assert client.put("/api/settings", json={"depth": -1}).status_code == 422
    assert client.put("/api/settings", json={"matchMode": "fuzzy"}).status_code == 422
    assert client.put("/api/settings", json={"cweFilter": ["bogus"]}).status_code == 422
    assert client.put("/api/settings", json={"nonsense": 1}).status_code == 422


# -- jobs and findings -------------------------------------------------------


def test_job_kind_is_validated(client):
    response = client.post("/api/jobs", json={"kind": "bogus"})
    assert response.status_code == 422
    assert response.json()["path"] == "/kind"


def test_unknown_job_is_not_found(client):
    assert client.get("/api/jobs/nope").status_code == 404


def test_analyze_job_produces_findings_and_sarif(client):
    assert client.get("/api/export/sarif").status_code == 404

    job = _run_job(client, "analyze")
    assert job["progress"] == 1.0
    assert job["resultRef"].endswith("report.sarif")

    findings = client.get("/api/findings").json()["findings"]
    assert len(findings) == 1
    finding = findings[0]
    assert finding["cwe"] == "cwe89"
    assert finding["source"]["line"] == 4
    assert finding["sink"]["line"] == 7
    assert [step["line"] for step in finding["path"]]
    assert all("snippet" in step for step in finding["path"])

    sarif = client.get("/api/export/sarif")
    assert sarif.status_code == 200
    assert sarif.headers["content-type"].startswith("application/sarif+json")
    assert json.loads(sarif.text)["version"] == "2.1.0"


def test_label_edit_feedback_loop_toggles_the_finding(sanitized_client):
    client = sanitized_client
    _run_job(client, "analyze")
    assert client.get("/api/findings").json()["findings"] == []

    # Un-mark the sanitizer: the flow is no longer cleansed.
    client.patch(f"/api/methods/{ENCODE_FOR_SQL}", json={"labels": []})
    _run_job(client, "analyze")
    assert len(client.get("/api/findings").json()["findings"]) == 1

    # Restore it: the finding disappears again.
    client.patch(f"/api/methods/{ENCODE_FOR_SQL}", json={"labels": ["sanitizer", "cwe89"]})
    _run_job(client, "analyze")
    assert client.get("/api/findings").json()["findings"] == []


def test_pipeline_job_merges_detections_and_blocks_concurrent_jobs(client):
    created = client.post("/api/jobs", json={"kind": "pipeline"})
    assert created.status_code == 201

    conflict = client.post("/api/jobs", json={"kind": "detect"})
    assert conflict.status_code == 409
    assert conflict.json()["code"] == "conflict"

    job = _wait(client, created.json()["id"])
    assert job["status"] == "done"

    detected = client.get("/api/methods", params={"discovery": "detected"}).json()["methods"]
    for row in detected:
        assert row["labels"]
    listing = client.get("/api/jobs").json()["jobs"]
    assert [j["id"] for j in listing] == [created.json()["id"], conflict.json().get("id")][:1]


def test_cancel_queued_job_never_runs(client):
    class FrozenWorker:
        def submit(self, fn, *args):  # keep the job queued forever
            return None

    client.app.state.service.worker = FrozenWorker()
    created = client.post("/api/jobs", json={"kind": "train"}).json()
    cancelled = client.post(f"/api/jobs/{created['id']}/cancel")
    assert cancelled.status_code == 200
    body = cancelled.json()
    assert body["status"] == "failed"
    assert body["error"] == "cancelled"

    # A cancelled job no longer blocks the queue.
    queued_again = client.post("/api/jobs", json={"kind": "train"})
    assert queued_again.status_code == 201
    second = client.post(f"/api/jobs/{queued_again.json()['id']}/cancel")
    assert second.status_code == 200


def test_cancel_finished_job_conflicts(client):
    job = _run_job(client, "analyze")
    response = client.post(f"/api/jobs/{job['id']}/cancel")
    assert response.status_code == 409


def test_stats_reflect_current_dataset(client):
    stats = client.get("/api/stats").json()
    assert stats["record_count"] == 318
    assert stats["label_counts"]["source"] > 0

    client.patch("/api/methods/p.Fresh.added(String)", json={"labels": ["source"]})
    assert client.get("/api/stats").json()["record_count"] == 319
