from __future__ import annotations

import pytest

from srmforge.arff import emit_arff, read_arff
from srmforge.dataset import TAXONOMY, LabelSet
from srmforge.features import (
    CATEGORICAL_FEATURES,
    NUMERIC_FEATURE_IDS,
    FeatureVector,
    SchemaMismatch,
    build_schema,
    check_vector,
    default_schema,
    default_token_table,
    extract_features,
    features_from_signature,
    split_camel_tokens,
    structural_counts,
    token_match,
)
from srmforge.javamodel import index_program, SourceFile

SERVLET_SRC = """package com.acme.web;
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


@pytest.fixture(scope="module")
def schema():
    return default_schema()


@pytest.fixture(scope="module")
def tokens():
    return default_token_table()


def _program(source: str):
    model, diagnostics = index_program([SourceFile.make(uri="t.java", content=source)])
    assert diagnostics == []
    return model


def _method(source: str, name: str):
    model = _program(source)
    for cls in model.classes:
        for m in cls.methods:
            if m.name == name:
                return m, model
    raise AssertionError(f"no method {name}")


def test_schema_is_119_cells_partitioned_13_99_7(schema):
    kinds = [e.kind for e in schema.entries]
    assert len(schema.entries) == 119
    assert kinds.count("numeric") == 13
    assert kinds.count("binary") == 99
    assert kinds.count("categorical") == 7
    assert kinds == ["numeric"] * 13 + ["binary"] * 99 + ["categorical"] * 7
    assert len({e.id for e in schema.entries}) == 119


def test_token_table_contains_the_seed_tokens(tokens):
    have = {g.token for g in tokens.groups}
    assert {"database", "delete", "replac", "encod", "redirect"} <= have


def test_build_schema_rejects_wrong_group_count(tokens):
    from dataclasses import replace

    with pytest.raises(ValueError):
        build_schema(replace(tokens, groups=tokens.groups[:98]))


@pytest.mark.parametrize(
    "part, token, expected",
    [
        ("encodeForSQL", "encod", True),
        ("executeQuery", "redirect", False),
        ("sendRedirect", "redirect", True),
        ("SENDREDIRECT", "redirect", True),
    ],
)
def test_token_match_is_case_insensitive_substring(part, token, expected):
    assert token_match(part, token) is expected
    assert token_match(part.lower(), token) is expected


def test_split_camel_tokens():
    assert split_camel_tokens("UserServlet") == ["User", "Servlet"]
    assert split_camel_tokens("HTTPResponse") == ["HTTP", "Response"]
    assert split_camel_tokens("do_post2") == ["do", "post2"]


def test_structural_counts_on_query_servlet():
    method, _ = _method(SERVLET_SRC, "doPost")
    counts = dict(zip(NUMERIC_FEATURE_IDS, structural_counts(method)))
    assert counts["parameter_count"] == 2
    assert counts["branch_count"] == 0
    assert counts["loop_count"] == 0
    assert counts["handler_count"] == 0
    assert counts["invocation_count"] == 6
    assert counts["class_method_count"] == 1
    assert counts["class_name_token_count"] == 2


def test_structural_counts_abstract_method_is_all_zero_body():
    src = """package p;
public abstract class Worker {
    public abstract String run(String job, int tries);
}
"""
    method, _ = _method(src, "run")
    counts = dict(zip(NUMERIC_FEATURE_IDS, structural_counts(method)))
    assert counts["parameter_count"] == 2
    for fid in ("method_lines", "invocation_count", "statement_count", "max_nesting_depth"):
        assert counts[fid] == 0


def test_structural_counts_nesting():
    src = """package p;
public class C {
    public void f(int n) {
        if (n > 0) {
            while (n > 0) {
                n = n - 1;
            }
        } else {
            n = 0;
        }
    }
}
"""
    method, _ = _method(src, "f")
    counts = dict(zip(NUMERIC_FEATURE_IDS, structural_counts(method)))
    assert counts["branch_count"] == 1
    assert counts["loop_count"] == 1
    assert counts["max_nesting_depth"] == 3  # if > while > assignment


def test_extracted_vector_is_deterministic(schema, tokens):
    method, model = _method(SERVLET_SRC, "doPost")
    v1 = extract_features(method, model, schema, tokens)
    v2 = extract_features(method, model, schema, tokens)
    assert v1 == v2
    assert len(v1.values) == 119


def test_invoked_names_scope_sees_call_targets(schema, tokens):
    method, model = _method(SERVLET_SRC, "doPost")
    vector = extract_features(method, model, schema, tokens)
    cells = dict(zip((e.id for e in schema.entries), vector.values))
    assert cells["tok_quer"] == 1  # executeQuery
    assert cells["tok_encod"] == 1  # encodeForSQL
    assert cells["tok_redirect"] == 0


def test_categorical_cells_for_public_static_void(schema, tokens):
    src = """package p;
public class Util {
    public static void reset() { }
}
"""
    method, model = _method(src, "reset")
    vector = extract_features(method, model, schema, tokens)
    offset = 13 + 99
    names = []
    for (fid, categories), value in zip(CATEGORICAL_FEATURES, vector.values[offset:]):
        names.append(categories[value])
    assert names[0] == "public"
    assert names[1] == "yes"
    assert names[2] == "void"
    assert names[3] == "0"
    assert names[6] == "no"


def test_alpha_renaming_keeps_vectors_equal(schema, tokens):
    renamed = SERVLET_SRC.replace("usr", "candidate").replace("query", "sqltext")
    m1, p1 = _method(SERVLET_SRC, "doPost")
    m2, p2 = _method(renamed, "doPost")
    v1 = extract_features(m1, p1, schema, tokens)
    v2 = extract_features(m2, p2, schema, tokens)
    assert v1 == v2


def test_features_from_signature_matches_schema(schema, tokens):
    vector = features_from_signature(
        "javax.servlet.http.HttpServletRequest.getParameter(String)", schema, tokens
    )
    cells = dict(zip((e.id for e in schema.entries), vector.values))
    assert cells["parameter_count"] == 1
    assert cells["tok_param"] == 1  # getParameter
    assert cells["tok_servlet"] == 1  # class qualifier
    assert cells["invocation_count"] == 0


def test_check_vector_rejects_wrong_arity(schema):
    with pytest.raises(SchemaMismatch):
        check_vector(FeatureVector(schema_version=schema.version, values=(1.0,) * 118), schema)


def test_check_vector_rejects_bad_binary_cell(schema):
    values = [0.0] * 13 + [2] + [0] * 98 + [0] * 7
    with pytest.raises(SchemaMismatch):
        check_vector(FeatureVector(schema_version=schema.version, values=tuple(values)), schema)


def _records(schema, tokens, n):
    method, model = _method(SERVLET_SRC, "doPost")
    vector = extract_features(method, model, schema, tokens)
    labels = LabelSet.from_names(["source", "cwe89"])
    return [(vector, labels) for _ in range(n)]


def test_arff_header_has_129_attributes_and_label_block_first(schema, tokens):
    text = emit_arff([], schema)
    attribute_lines = [l for l in text.splitlines() if l.startswith("@attribute")]
    assert len(attribute_lines) == 129
    leading = [l.split()[1] for l in attribute_lines[:10]]
    assert leading == list(TAXONOMY)
    assert "-C 10" in text.splitlines()[0]
    data_index = text.splitlines().index("@data")
    assert text.splitlines()[data_index + 1 :] in ([], [""])


def test_arff_rows_have_129_cells(schema, tokens):
    text = emit_arff(_records(schema, tokens, 2), schema)
    lines = text.splitlines()
    rows = lines[lines.index("@data") + 1 :]
    assert len(rows) == 2
    for row in rows:
        assert len(read_arff(text).rows[0]) == 129
        assert row.count(",") == 128


def test_arff_round_trip_is_identity_on_matrix(schema, tokens):
    records = _records(schema, tokens, 3)
    document = read_arff(emit_arff(records, schema))
    assert document.label_count == 10
    expected_labels = [tuple(int(b) for b in labels.bits) for _, labels in records]
    assert document.label_matrix() == expected_labels
    for row, (vector, _) in zip(document.feature_matrix(), records):
        assert row == tuple(vector.values)


def test_arff_rejects_mismatched_vector(schema):
    bad = FeatureVector(schema_version="other", values=(0.0,) * 119)
    with pytest.raises(SchemaMismatch):
        emit_arff([(bad, LabelSet())], schema)
