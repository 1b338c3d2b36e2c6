import json

import pytest

from scoregraph.catalogs import (
    Catalog,
    CatalogError,
    CvssParseError,
    CvssVector,
    builtin_catalog,
    builtin_frequency_table,
    catalog_from_json,
    comparison_hints,
    control_catalog,
    cvss_catalog_from_frequency,
    enumerate_cvss_vectors,
    load_control_catalog,
    load_frequency_ranked,
    parse_control_catalog,
    parse_cvss_vector,
    parse_frequency_csv,
)

V = "AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"


# -- vector parsing ---------------------------------------------------------------


def test_parse_valid_vector():
    v = parse_cvss_vector(V)
    assert v.av == "N" and v.c == "H"
    assert str(v) == V


def test_parse_tolerates_version_prefix():
    assert str(parse_cvss_vector("CVSS:3.1/" + V)) == V


def test_parse_illegal_value():
    with pytest.raises(CvssParseError) as err:
        parse_cvss_vector(V.replace("AV:N", "AV:Q"))
    assert err.value.code == "illegal-value"


def test_parse_unknown_metric():
    with pytest.raises(CvssParseError) as err:
        parse_cvss_vector(V + "/E:H")
    assert err.value.code == "unknown-metric"


def test_parse_missing_metric():
    with pytest.raises(CvssParseError) as err:
        parse_cvss_vector("AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H")
    assert err.value.code == "missing-metric"


def test_parse_duplicate_metric():
    with pytest.raises(CvssParseError) as err:
        parse_cvss_vector(V + "/AV:N")
    assert err.value.code == "duplicate-metric"


def test_parse_is_case_sensitive():
    with pytest.raises(CvssParseError):
        parse_cvss_vector(V.replace("AV:N", "av:N"))


def test_no_impact_vector_rejected():
    with pytest.raises(CvssParseError) as err:
        parse_cvss_vector("AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N")
    assert err.value.code == "no-impact"


def test_parse_accepts_reordered_metrics():
    shuffled = "A:H/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H"
    assert str(parse_cvss_vector(shuffled)) == V


def test_enumeration_counts_2496():
    vectors = enumerate_cvss_vectors()
    assert len(vectors) == 2496
    assert len({str(v) for v in vectors}) == 2496


def test_round_trip_on_full_space():
    for v in enumerate_cvss_vectors():
        assert parse_cvss_vector(str(v)) == v


def test_comparison_hints_mark_shared_values():
    a = parse_cvss_vector(V)
    b = parse_cvss_vector(V.replace("AV:N", "AV:L").replace("C:H", "C:L"))
    hints = {h.key: h for h in comparison_hints(a, b)}
    assert not hints["AV"].shared and hints["AV"].left == "N" and hints["AV"].right == "L"
    assert not hints["C"].shared
    assert hints["AC"].shared and hints["I"].shared


# -- frequency tables -----------------------------------------------------------------


def test_frequency_sorting_and_coverage():
    table = parse_frequency_csv(
        "vector,count\n"
        f"{V},10\n"
        "AV:L/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H,70\n"
        "AV:P/AC:H/PR:H/UI:R/S:C/C:L/I:L/A:L,20\n"
    )
    assert table.top(1) == ["AV:L/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"]
    assert table.coverage(1) == pytest.approx(0.7)
    assert table.top_for_coverage(0.9) == table.top(2)
    assert table.top_for_coverage(1.0) == table.top(3)


def test_frequency_tie_breaks_on_canonical_string():
    other = "AV:A/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"
    table = parse_frequency_csv(f"vector,count\n{V},5\n{other},5\n")
    assert table.top(2) == sorted([V, other])


def test_frequency_single_row_covers_everything():
    table = parse_frequency_csv(f"vector,count\n{V},3\n")
    assert table.coverage(1) == 1.0


def test_frequency_malformed_rows_rejected():
    with pytest.raises(CatalogError):
        parse_frequency_csv(f"vector,count\n{V}\n")
    with pytest.raises(CatalogError):
        parse_frequency_csv(f"vector,count\n{V},many\n")
    with pytest.raises(CvssParseError):
        parse_frequency_csv("vector,count\nAV:N,3\n")


def test_bundled_snapshot_top65_covers_90_percent(tmp_path):
    table = builtin_frequency_table()
    assert len(table) >= 320
    assert table.coverage(65) >= 0.90
    # file loader sees the same data
    import importlib.resources as res

    text = res.files("scoregraph.data").joinpath("cvss_frequency_snapshot.csv").read_text()
    p = tmp_path / "snap.csv"
    p.write_text(text)
    assert load_frequency_ranked(p).top(65) == table.top(65)


# -- control catalogs --------------------------------------------------------------------


def test_builtin_pf_has_100_subcategories():
    cat = builtin_catalog("pf")
    assert cat.kind == "controls"
    assert len(cat.elements) == 100


def test_builtin_csf_has_98_subcategories():
    assert len(builtin_catalog("csf").elements) == 98


def test_duplicate_control_ids_rejected():
    with pytest.raises(CatalogError) as err:
        parse_control_catalog(
            {
                "formatVersion": 1,
                "elements": [
                    {"id": "X-1", "title": "a", "level": "subcategory"},
                    {"id": "X-1", "title": "b", "level": "subcategory"},
                ],
            }
        )
    assert "duplicate" in str(err.value)


def test_empty_control_catalog_rejected():
    with pytest.raises(CatalogError):
        parse_control_catalog({"formatVersion": 1, "elements": []})


def test_expected_count_mismatch_rejected():
    with pytest.raises(CatalogError):
        parse_control_catalog(
            {
                "formatVersion": 1,
                "expectedCounts": {"subcategory": 2},
                "elements": [{"id": "X-1", "level": "subcategory"}],
            }
        )


def test_control_catalog_render_includes_description(tmp_path):
    doc = {
        "formatVersion": 1,
        "elements": [
            {"id": "F", "title": "Fn", "description": "top", "level": "function"},
            {"id": "F.C-1", "title": "Control", "description": "does x", "level": "subcategory"},
        ],
    }
    p = tmp_path / "c.json"
    p.write_text(json.dumps(doc))
    entries = load_control_catalog(p)
    cat = control_catalog("mini", entries)
    assert cat.elements == ("F.C-1",)
    assert cat.render_element("F.C-1")["description"] == "does x"


# -- generic catalogs ---------------------------------------------------------------------


def test_catalog_json_round_trip():
    cat = builtin_catalog("pf")
    again = catalog_from_json(json.loads(json.dumps(cat.to_json_dict())))
    assert again.elements == cat.elements
    assert again.render_element(cat.elements[0]) == cat.render_element(cat.elements[0])


def test_cvss_catalog_from_frequency_head():
    table = builtin_frequency_table()
    cat = cvss_catalog_from_frequency("top5", table, top=5)
    assert len(cat.elements) == 5
    assert cat.kind == "cvss"
    q = cat.render_question(cat.elements[0], cat.elements[1])
    assert q["kind"] == "cvss" and len(q["metrics"]) == 8


def test_catalog_rejects_bad_kind_and_duplicates():
    with pytest.raises(CatalogError):
        Catalog("x", "weird", ("a",))
    with pytest.raises(CatalogError):
        Catalog("x", "custom", ("a", "a"))


def test_cvss_catalog_validates_vectors():
    with pytest.raises(CvssParseError):
        Catalog("x", "cvss", ("not-a-vector",))
