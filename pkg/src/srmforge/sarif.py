"""Serialize findings as SARIF 2.1.0 and structurally validate such files.

Only the required core plus codeFlows is emitted: tool driver, one rule per
CWE used, and one result per finding whose threadFlow retraces the taint
path. Output bytes are a pure function of the findings list.
"""

from __future__ import annotations

import json

from .specgen import cwe_display
from .taint import Finding

SARIF_VERSION = "2.1.0"
SARIF_SCHEMA_URI = (
    "https://docs.oasis-open.org/sarif/sarif/v2.1.0/errata01/os/schemas/"
    "sarif-schema-2.1.0.json"
)

_RULE_DESCRIPTIONS = {
    "CWE-78": "OS command injection",
    "CWE-79": "Cross-site scripting",
    "CWE-89": "SQL injection",
    "CWE-306": "Missing authentication for critical function",
    "CWE-601": "URL redirection to untrusted site",
    "CWE-862": "Missing authorization",
    "CWE-863": "Incorrect authorization",
}


def _location(uri: str, line: int, text: str | None = None) -> dict:
    location = {
        "physicalLocation": {
            "artifactLocation": {"uri": uri},
            "region": {"startLine": line},
        }
    }
    if text is not None:
        location["message"] = {"text": text}
    return location


def emit_sarif(
    findings: list[Finding],
    tool_name: str = "srm-forge",
    tool_version: str = "0.1.0",
) -> str:
    """Render findings as SARIF 2.1.0 text (one run, deterministic bytes)."""
    rule_ids = sorted({cwe_display(f.cwe) for f in findings})
    rule_index = {rule_id: i for i, rule_id in enumerate(rule_ids)}
    rules = [
        {
            "id": rule_id,
            "shortDescription": {
                "text": _RULE_DESCRIPTIONS.get(rule_id, "Tainted data flow")
            },
        }
        for rule_id in rule_ids
    ]
    results = []
    for finding in findings:
        rule_id = cwe_display(finding.cwe)
        results.append(
            {
                "ruleId": rule_id,
                "ruleIndex": rule_index[rule_id],
                "level": "warning",
                "message": {"text": finding.message},
                "locations": [
                    _location(finding.sink_location[0], finding.sink_location[1])
                ],
                "codeFlows": [
                    {
                        "threadFlows": [
                            {
                                "locations": [
                                    {
                                        "location": _location(
                                            step.uri, step.line, step.description
                                        )
                                    }
                                    for step in finding.path
                                ]
                            }
                        ]
                    }
                ],
            }
        )
    document = {
        "$schema": SARIF_SCHEMA_URI,
        "version": SARIF_VERSION,
        "runs": [
            {
                "tool": {
                    "driver": {
                        "name": tool_name,
                        "version": tool_version,
                        "rules": rules,
                    }
                },
                "results": results,
            }
        ],
    }
    return json.dumps(document, indent=2) + "\n"


def validate_sarif(text: str) -> list[str]:
    """Check the required-field subset; empty list means structurally valid."""
    problems: list[str] = []
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        return [f"not valid JSON: {exc}"]
    if document.get("version") != SARIF_VERSION:
        problems.append(f"version must be {SARIF_VERSION!r}")
    runs = document.get("runs")
    if not isinstance(runs, list) or not runs:
        return problems + ["runs must be a non-empty list"]
    for r, run in enumerate(runs):
        driver = run.get("tool", {}).get("driver", {})
        if not driver.get("name"):
            problems.append(f"runs[{r}] missing tool.driver.name")
        known_rules = {
            rule.get("id") for rule in driver.get("rules", []) if isinstance(rule, dict)
        }
        results = run.get("results")
        if not isinstance(results, list):
            problems.append(f"runs[{r}].results must be a list")
            continue
        for i, result in enumerate(results):
            where = f"runs[{r}].results[{i}]"
            rule_id = result.get("ruleId")
            if not rule_id:
                problems.append(f"{where} missing ruleId")
            elif rule_id not in known_rules:
                problems.append(f"{where} ruleId {rule_id!r} not in driver rules")
            if not result.get("message", {}).get("text"):
                problems.append(f"{where} missing message.text")
            locations = result.get("locations")
            if not isinstance(locations, list) or not locations:
                problems.append(f"{where} missing locations")
                continue
            for j, location in enumerate(locations):
                physical = location.get("physicalLocation", {})
                uri = physical.get("artifactLocation", {}).get("uri")
                line = physical.get("region", {}).get("startLine")
                if not uri:
                    problems.append(f"{where}.locations[{j}] missing uri")
                if not isinstance(line, int) or line < 1:
                    problems.append(f"{where}.locations[{j}] startLine must be >= 1")
    return problems
