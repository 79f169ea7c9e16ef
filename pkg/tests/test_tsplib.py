import numpy as np
import pytest

from acotsp import (
    MalformedHeaderError,
    ParseError,
    RoundingMode,
    TruncatedSectionError,
    UnsupportedFormatError,
    build_distance_matrix,
    format_tsplib,
    held_karp_optimum,
    load_tsplib,
    parse_tsplib,
)
from acotsp.tsplib import corpus_names, corpus_path, expand_weights

SMALL = """NAME : tri
TYPE : TSP
COMMENT : three cities
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 4
3 0 4
EOF
"""


def explicit(fmt, payload, n=4):
    return (f"NAME : m\nTYPE : TSP\nDIMENSION : {n}\nEDGE_WEIGHT_TYPE : EXPLICIT\n"
            f"EDGE_WEIGHT_FORMAT : {fmt}\nEDGE_WEIGHT_SECTION\n{payload}\nEOF\n")


# the same symmetric 4x4 matrix in every supported layout
FULL = np.array([[0, 1, 2, 3], [1, 0, 4, 5], [2, 4, 0, 6], [3, 5, 6, 0]], dtype=float)
LAYOUTS = {
    "FULL_MATRIX": "0 1 2 3\n1 0 4 5\n2 4 0 6\n3 5 6 0",
    "UPPER_ROW": "1 2 3\n4 5\n6",
    "LOWER_ROW": "1\n2 4\n3 5 6",
    "UPPER_DIAG_ROW": "0 1 2 3\n0 4 5\n0 6\n0",
    "LOWER_DIAG_ROW": "0\n1 0\n2 4 0\n3 5 6 0",
}


def test_parse_small_coordinate_file():
    inst = parse_tsplib(SMALL)
    assert inst.name == "tri" and inst.dimension == 3 and inst.comment == "three cities"
    d = build_distance_matrix(inst.with_rounding("tsplib"))
    np.testing.assert_array_equal(d.values, [[0, 5, 4], [5, 0, 3], [4, 3, 0]])


@pytest.mark.parametrize("fmt", sorted(LAYOUTS))
def test_explicit_layouts_expand_to_the_same_matrix(fmt):
    inst = parse_tsplib(explicit(fmt, LAYOUTS[fmt]))
    np.testing.assert_array_equal(build_distance_matrix(inst).values, FULL)


def test_lower_row_tokens_may_wrap_lines():
    inst = parse_tsplib(explicit("LOWER_ROW", "1 2\n4 3 5\n6"))
    np.testing.assert_array_equal(inst.weights, FULL)


def test_expand_weights_rejects_unknown_layout():
    with pytest.raises(UnsupportedFormatError):
        expand_weights([1, 2, 3], "FUNKY", 3)


def test_missing_dimension():
    text = SMALL.replace("DIMENSION : 3\n", "")
    with pytest.raises(MalformedHeaderError, match="DIMENSION"):
        parse_tsplib(text)


def test_unknown_edge_weight_type():
    with pytest.raises(UnsupportedFormatError, match="XRAY"):
        parse_tsplib(SMALL.replace("EUC_2D", "XRAY"))


def test_unsupported_problem_type():
    with pytest.raises(UnsupportedFormatError):
        parse_tsplib(SMALL.replace("TYPE : TSP", "TYPE : CVRP"))


def test_truncated_coordinates_report_a_line():
    text = SMALL.replace("3 0 4\n", "")
    with pytest.raises(TruncatedSectionError) as err:
        parse_tsplib(text)
    assert err.value.line == 9
    assert "line 9" in str(err.value)


def test_truncated_weights():
    with pytest.raises(TruncatedSectionError):
        parse_tsplib(explicit("UPPER_ROW", "1 2 3\n4 5"))


def test_surplus_weights():
    with pytest.raises(ParseError):
        parse_tsplib(explicit("UPPER_ROW", "1 2 3\n4 5\n6 7"))


def test_bad_numbers_and_rows():
    with pytest.raises(ParseError):
        parse_tsplib(SMALL.replace("2 3 4", "2 3 x"))
    with pytest.raises(ParseError):
        parse_tsplib(SMALL.replace("2 3 4", "2 3 4 5"))
    with pytest.raises(ParseError):
        parse_tsplib(SMALL.replace("COMMENT : three cities", "just words"))
    with pytest.raises(ParseError):
        parse_tsplib(SMALL.replace("tri", "trï"))


def test_dimension_must_be_a_number():
    with pytest.raises(MalformedHeaderError):
        parse_tsplib(SMALL.replace("DIMENSION : 3", "DIMENSION : three"))


def test_parse_errors_share_a_base_class():
    for exc in (MalformedHeaderError, TruncatedSectionError):
        assert issubclass(exc, ParseError)


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_round_trip(name):
    inst = load_tsplib(corpus_path(name))
    again = parse_tsplib(format_tsplib(inst))
    assert again == inst
    np.testing.assert_array_equal(build_distance_matrix(again).values,
                                  build_distance_matrix(inst).values)


def test_corpus_contents():
    names = set(corpus_names())
    assert {"att48", "berlin52", "burma14", "eil51", "eil76", "gr96"} <= names
    assert any(load_tsplib(corpus_path(n)).problem_type == "ATSP" for n in names)


@pytest.mark.parametrize("name, optimum", [
    ("burma14", 3323),   # GEO
    ("ulysses16", 6859),  # GEO
    ("gr17", 2085),      # EXPLICIT LOWER_DIAG_ROW
    ("br17", 39),        # asymmetric FULL_MATRIX
])
def test_known_optima_through_held_karp(name, optimum):
    inst = load_tsplib(corpus_path(name), rounding=RoundingMode.TSPLIB_INTEGER)
    assert held_karp_optimum(build_distance_matrix(inst)).optimal_length == optimum


def test_labels_are_kept():
    inst = parse_tsplib(SMALL.replace("1 0 0", "7 0 0"))
    assert inst.labels == (7, 2, 3)
