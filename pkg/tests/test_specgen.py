from __future__ import annotations

import json
import random

import pytest

from srmforge.dataset import FormatError, load_dataset
from srmforge.specgen import (
    CleansePattern,
    MethodPattern,
    SinkPattern,
    SourcePattern,
    TaintSpec,
    cwe_display,
    generate_specs,
    load_specs,
    save_specs,
    specs_to_json,
    validate_spec,
)


def _dataset(methods):
    return load_dataset(json.dumps({"version": "1", "methods": methods}))


def _record(signature, labels, data_in=(), data_out="none", discovery="training"):
    return {
        "signature": signature,
        "labels": list(labels),
        "dataIn": list(data_in),
        "dataOut": data_out,
        "discovery": discovery,
    }


LISTING_METHODS = [
    _record(
        "javax.servlet.http.HttpServletRequest.getParameter(String)",
        ["source", "cwe89"],
        data_out="return",
    ),
    _record(
        "org.owasp.esapi.Encoder.encodeForSQL(Codec,String)",
        ["sanitizer", "cwe89"],
        data_in=[1],
        data_out="return",
    ),
    _record(
        "java.sql.Statement.executeQuery(String)",
        ["sink", "cwe89"],
        data_in=[0],
    ),
]


def test_three_records_give_one_sql_injection_spec():
    specs, diagnostics = generate_specs(_dataset(LISTING_METHODS))
    assert len(specs) == 1
    spec = specs[0]
    assert spec.cwe == "cwe89"
    assert len(spec.sources) == 1
    assert len(spec.sinks) == 1
    assert len(spec.sanitizers) == 1
    assert spec.sources[0].out == "return"
    assert spec.sinks[0].in_indices == (0,)
    assert spec.sanitizers[0].in_indices == (1,)
    assert spec.sanitizers[0].out == "return"
    assert len(diagnostics) == 6  # the other six CWEs have no records


def test_empty_dataset_yields_no_specs_and_seven_diagnostics():
    specs, diagnostics = generate_specs(_dataset([]))
    assert specs == []
    assert len(diagnostics) == 7


def test_general_source_backfills_cwe_without_own_source():
    specs, diagnostics = generate_specs(
        _dataset(
            [
                _record("a.Web.getInput(String)", ["source"], data_out="return"),
                _record("a.Http.redirect(String)", ["sink", "cwe601"], data_in=[0]),
            ]
        )
    )
    assert [s.cwe for s in specs] == ["cwe601"]
    assert specs[0].sources[0].pattern.signature == "a.Web.getInput(String)"
    assert diagnostics  # the other CWEs still lack sinks


def test_cwe_specific_records_beat_the_fallback():
    specs, _ = generate_specs(
        _dataset(
            [
                _record("a.Web.getInput(String)", ["source"], data_out="return"),
                _record("a.Web.getQuery(String)", ["source", "cwe89"], data_out="return"),
                _record("a.Db.run(String)", ["sink", "cwe89"], data_in=[0]),
            ]
        ),
        cwes=["cwe89"],
    )
    assert [s.pattern.signature for s in specs[0].sources] == ["a.Web.getQuery(String)"]


def test_sink_with_no_data_in_guards_all_parameters():
    specs, _ = generate_specs(
        _dataset(
            [
                _record("a.Web.getInput()", ["source", "cwe78"], data_out="return"),
                _record("a.Os.exec(String,String)", ["sink", "cwe78"]),
            ]
        ),
        cwes=["cwe78"],
    )
    assert specs[0].sinks[0].in_indices == (0, 1)


def test_source_with_no_data_out_defaults_to_return():
    specs, _ = generate_specs(
        _dataset(
            [
                _record("a.Web.getInput()", ["source", "cwe79"]),
                _record("a.Out.write(String)", ["sink", "cwe79"], data_in=[0]),
            ]
        ),
        cwes=["cwe79"],
    )
    assert specs[0].sources[0].out == "return"


def test_output_sorted_by_cwe_id_and_order_insensitive():
    methods = [
        _record("a.Web.getInput()", ["source"], data_out="return"),
        _record("a.Os.exec(String)", ["sink", "cwe78"], data_in=[0]),
        _record("a.Db.run(String)", ["sink", "cwe89"], data_in=[0]),
        _record("a.Http.redirect(String)", ["sink", "cwe601"], data_in=[0]),
    ]
    specs, _ = generate_specs(_dataset(methods))
    assert [s.cwe for s in specs] == sorted(s.cwe for s in specs)
    for seed in range(3):
        shuffled = methods[:]
        random.Random(seed).shuffle(shuffled)
        again, _ = generate_specs(_dataset(shuffled))
        assert specs_to_json(again) == specs_to_json(specs)


def test_generated_patterns_all_come_from_the_dataset():
    dataset = _dataset(LISTING_METHODS)
    specs, _ = generate_specs(dataset)
    known = {r.signature for r in dataset.records}
    for spec in specs:
        for group in (spec.sources, spec.sinks, spec.sanitizers, spec.propagators):
            for entry in group:
                assert entry.pattern.signature in known


def test_generated_specs_always_validate():
    specs, _ = generate_specs(_dataset(LISTING_METHODS))
    for spec in specs:
        assert validate_spec(spec) == []


def test_unknown_cwe_filter_rejected():
    with pytest.raises(ValueError):
        generate_specs(_dataset([]), cwes=["cwe999"])


# -- validate_spec ------------------------------------------------------------


def _minimal_spec(**overrides) -> TaintSpec:
    fields = dict(
        id="srm-cwe89",
        cwe="cwe89",
        sources=(SourcePattern(MethodPattern("a.Web.getInput()")),),
        sinks=(SinkPattern(MethodPattern("a.Db.run(String)"), (0,)),),
    )
    fields.update(overrides)
    return TaintSpec(**fields)


def test_validate_requires_sources_and_sinks():
    assert "spec must define at least one sink" in validate_spec(
        _minimal_spec(sinks=())
    )
    assert "spec must define at least one source" in validate_spec(
        _minimal_spec(sources=())
    )


def test_validate_checks_index_arity():
    spec = _minimal_spec(
        sinks=(SinkPattern(MethodPattern("a.Db.run(String,int)"), (5,)),)
    )
    problems = validate_spec(spec)
    assert any("index 5 out of range" in p for p in problems)


def test_validate_flags_source_sink_overlap_as_warning():
    spec = _minimal_spec(
        sinks=(SinkPattern(MethodPattern("a.Web.getInput()"), ()),)
    )
    problems = validate_spec(spec)
    assert any(p.startswith("warning:") and "both source and sink" in p for p in problems)


def test_validate_accepts_wildcard_arity_for_loose_patterns():
    spec = _minimal_spec(
        sinks=(
            SinkPattern(MethodPattern("*.run(?)", match_mode="name_and_arity"), (4,)),
        )
    )
    assert validate_spec(spec) == []  # index checks apply to exact patterns only


def test_listing_fixture_spec_is_valid():
    specs, _ = generate_specs(_dataset(LISTING_METHODS))
    assert validate_spec(specs[0]) == []


# -- patterns -----------------------------------------------------------------


def test_method_pattern_parses_placeholders():
    pattern = MethodPattern("*.executeQuery(?)", match_mode="name_and_arity")
    assert pattern.name == "executeQuery"
    assert pattern.arity == 1


@pytest.mark.parametrize("bad", ["no-parens", "spaces in(name)", "()", "x.y(a,,b)"])
def test_method_pattern_rejects_malformed_signatures(bad):
    with pytest.raises(ValueError):
        MethodPattern(bad)


def test_pattern_rejects_unknown_mode():
    with pytest.raises(ValueError):
        MethodPattern("a.B.c()", match_mode="fuzzy")


def test_cwe_display():
    assert cwe_display("cwe89") == "CWE-89"
    assert cwe_display("cwe306") == "CWE-306"
    with pytest.raises(ValueError):
        cwe_display("source")


# -- spec file IO -------------------------------------------------------------


def test_spec_file_round_trip(tmp_path):
    specs, _ = generate_specs(_dataset(LISTING_METHODS))
    path = tmp_path / "specs.json"
    save_specs(specs, path)
    again = load_specs(path.read_text(encoding="utf-8"), str(path))
    assert specs_to_json(again) == specs_to_json(specs)


def test_load_rejects_spec_without_sinks():
    document = json.dumps(
        {
            "version": "1",
            "specs": [
                {
                    "id": "x",
                    "cwe": "cwe89",
                    "sources": [
                        {"pattern": {"signature": "a.B.c()"}, "out": "return"}
                    ],
                    "sinks": [],
                }
            ],
        }
    )
    with pytest.raises(FormatError) as excinfo:
        load_specs(document)
    assert "at least one sink" in str(excinfo.value)


def test_load_rejects_bad_out_shape():
    document = json.dumps(
        {
            "version": "1",
            "specs": [
                {
                    "id": "x",
                    "cwe": "cwe89",
                    "sources": [{"pattern": {"signature": "a.B.c()"}, "out": "sideways"}],
                    "sinks": [{"pattern": {"signature": "a.B.d(String)"}, "in": [0]}],
                }
            ],
        }
    )
    with pytest.raises(FormatError):
        load_specs(document)


def test_load_rejects_non_json():
    with pytest.raises(FormatError):
        load_specs("not json {")


def test_propagators_survive_round_trip(tmp_path):
    spec = _minimal_spec(
        propagators=(
            CleansePattern(MethodPattern("a.Str.concat(String)"), (0,), "return"),
        )
    )
    path = tmp_path / "specs.json"
    save_specs([spec], path)
    again = load_specs(path.read_text(encoding="utf-8"))
    assert again[0].propagators[0].pattern.signature == "a.Str.concat(String)"
    assert again[0].propagators[0].out == "return"
