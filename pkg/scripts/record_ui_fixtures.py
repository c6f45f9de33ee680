"""Record real HTTP API responses as fixtures for the review-UI test suite.

Drives the FastAPI service end-to-end on the sanitized servlet fixture and
captures every response the browser client's tests replay: method listings,
label-edit responses, job lifecycles, findings before/after the sanitizer
label toggle, settings, stats, and error envelopes. Rerun after changing the
service to refresh ``frontend/tests/fixtures/``.
"""

from __future__ import annotations

import json
import sys
import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

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

ENCODE_FOR_SQL = "org.owasp.esapi.Encoder.encodeForSQL(Codec,String)"

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def save(name: str, payload) -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    (FIXTURE_DIR / name).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"  {name}")


def wait_for(client: TestClient, job_id: str, timeout: float = 120.0) -> dict:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        job = client.get(f"/api/jobs/{job_id}").json()
        if job["status"] in ("done", "failed"):
            return job
        time.sleep(0.05)
    raise TimeoutError(f"job {job_id} did not finish")


def run_job(client: TestClient, kind: str) -> dict:
    created = client.post("/api/jobs", json={"kind": kind})
    assert created.status_code == 201, created.text
    job = wait_for(client, created.json()["id"])
    assert job["status"] == "done", job
    return job


def main() -> int:
    workdir = Path(tempfile.mkdtemp(prefix="srmforge-fixtures-"))
    project = workdir / "proj"
    project.mkdir()
    (project / "UserServlet.java").write_text(SANITIZED_SERVLET, encoding="utf-8")
    app = create_app(project_root=project, output_dir=workdir / "out")
    client = TestClient(app)

    print("settings + errors:")
    save("settings_unset.json", client.get("/api/settings").json())

    # a second submission while the pipeline runs yields the conflict envelope
    created = client.post("/api/jobs", json={"kind": "pipeline"})
    assert created.status_code == 201, created.text
    save("job_created.json", created.json())
    conflict = client.post("/api/jobs", json={"kind": "analyze"})
    assert conflict.status_code == 409, conflict.text
    save("error_conflict.json", conflict.json())
    save("job_done.json", wait_for(client, created.json()["id"]))

    print("methods + stats after the pipeline run:")
    save("methods.json", client.get("/api/methods").json())
    save("methods_sanitizer.json", client.get("/api/methods", params={"label": "sanitizer"}).json())
    save(
        "methods_detected.json",
        client.get("/api/methods", params={"discovery": "detected"}).json(),
    )
    save("method_encode.json", client.get(f"/api/methods/{ENCODE_FOR_SQL}").json())
    save("stats.json", client.get("/api/stats").json())
    save("findings_clean.json", client.get("/api/findings").json())

    put = client.put(
        "/api/settings",
        json={"depth": 2, "matchMode": "exact", "cweFilter": None, "seed": 0},
    )
    assert put.status_code == 200, put.text
    save("settings_set.json", client.get("/api/settings").json())

    print("sanitizer label toggle:")
    cleared = client.patch(f"/api/methods/{ENCODE_FOR_SQL}", json={"labels": []})
    assert cleared.status_code == 200, cleared.text
    save("method_encode_cleared.json", cleared.json())
    run_job(client, "analyze")
    sqli = client.get("/api/findings").json()
    assert len(sqli["findings"]) == 1, sqli
    save("findings_sqli.json", sqli)

    restored = client.patch(
        f"/api/methods/{ENCODE_FOR_SQL}",
        json={"labels": ["sanitizer", "cwe89"], "dataIn": [1], "dataOut": "return"},
    )
    assert restored.status_code == 200, restored.text
    save("method_encode_restored.json", restored.json())
    run_job(client, "analyze")
    clean_again = client.get("/api/findings").json()
    assert clean_again["findings"] == [], clean_again
    save("findings_restored.json", clean_again)

    print("error envelopes:")
    bad = client.patch(f"/api/methods/{ENCODE_FOR_SQL}", json={"dataIn": [7]})
    assert bad.status_code == 422, bad.text
    save("error_bad_datain.json", bad.json())
    missing = client.get("/api/methods/no.Such.method()")
    assert missing.status_code == 404, missing.text
    save("error_not_found.json", missing.json())

    sarif = client.get("/api/export/sarif")
    assert sarif.status_code == 200, sarif.text
    print(f"done -> {FIXTURE_DIR}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
