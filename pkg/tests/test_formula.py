import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundedgames.formula import (EXISTS, FORALL, CnfMatrix, PairedSatInstance, ParseError,
                                  QbfFormula, check_class, degree_profile, emit_psat,
                                  emit_qdimacs, is_tautology, make_clause, parse_psat,
                                  parse_qdimacs)

from conftest import qbf_formulas


def test_parse_basic():
    f = parse_qdimacs("p cnf 2 1\ne 1 0\na 2 0\n1 2 0")
    assert f.prefix == ((1, EXISTS), (2, FORALL))
    assert f.clauses == ((1, 2),)


def test_free_variables_become_outer_existentials():
    f = parse_qdimacs("p cnf 1 1\n1 -1 0")
    assert f.prefix == ((1, EXISTS),)
    assert f.clauses == ((-1, 1),)
    g = parse_qdimacs("p cnf 3 1\na 2 0\n1 -3 0")
    assert g.prefix == ((1, EXISTS), (3, EXISTS), (2, FORALL))


@pytest.mark.parametrize("text, msg", [
    ("p cnf 1 1\n2 0", "out of range"),
    ("p cnf 2 1\ne 1 0\na 1 0\n1 0", "twice"),
    ("p cnf 1 1\n1", "terminating 0"),
    ("p dnf 1 1\n1 0", "header"),
    ("p cnf x 1\n1 0", "non-integer"),
    ("", "empty"),
    ("p cnf 1 2\n1 0", "declares 2 clauses"),
    ("p cnf 2 1\n1 0\ne 2 0", "after clauses"),
    ("p cnf 2 1\ne 3 0\n1 0", "out of range"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_qdimacs(text)


def test_emit_canonical():
    f = QbfFormula.build([(1, EXISTS)], [[1]])
    assert emit_qdimacs(f) == "p cnf 1 1\ne 1 0\n1 0\n"


def test_emit_keeps_tautologies_and_empty_clauses():
    f = QbfFormula.build([(1, EXISTS)], [[1, -1], []])
    text = emit_qdimacs(f)
    assert "-1 1 0" in text or "1 -1 0" in text
    assert parse_qdimacs(text) == f


def test_clause_literals_sorted_and_deduplicated():
    assert make_clause([3, -1, 3, 1]) == (-1, 1, 3)
    assert is_tautology((-1, 1, 3))
    assert not is_tautology((1, 3))


def test_matrix_rejects_out_of_range():
    with pytest.raises(ValueError):
        CnfMatrix(1, ((2,),))


def test_formula_rejects_unbound_matrix_variable():
    with pytest.raises(ValueError, match="unbound"):
        QbfFormula.build([(1, EXISTS)], [[1, 2]], 2)


def test_degree_profile_examples():
    m = CnfMatrix(2, ((1, 2), (-1, 2), (1,)))
    p = degree_profile(m)
    assert p.degrees == {1: 3, 2: 2}
    assert (p.max_degree, p.rank) == (3, 2)
    empty = degree_profile(CnfMatrix(0, ()))
    assert (empty.max_degree, empty.rank) == (0, 0)


def test_tautology_counts_once():
    assert degree_profile(CnfMatrix(1, ((-1, 1),))).degrees == {1: 1}


def test_check_class_examples():
    f = QbfFormula.build([(v, EXISTS) for v in range(1, 5)], [[1, 2, 3, 4]])
    ok, violations = check_class(f, 3, 3)
    assert not ok and "clause 0" in violations[0]
    assert check_class(QbfFormula.build([], []), 0, 0, True, True)[0]


def test_psat_round_trip_and_errors():
    inst = PairedSatInstance.build([(1, 2), (4, 3)], [[1, -2], [3, 4, -1]])
    assert parse_psat(emit_psat(inst)) == inst
    with pytest.raises(ParseError):
        parse_psat("p psat 2 0 1\nd 1 1 0\n")
    with pytest.raises(ParseError):
        parse_psat("p psat 2 0 2\nd 1 2 0\n")
    with pytest.raises(ValueError):
        PairedSatInstance.build([(1, 2)], [], 3)


@given(qbf_formulas())
def test_emit_parse_round_trip(f):
    assert parse_qdimacs(emit_qdimacs(f)) == f


@given(qbf_formulas(max_size=4))
def test_degree_sum_equals_distinct_variable_occurrences(f):
    prof = degree_profile(f.matrix)
    assert sum(prof.degrees.values()) == sum(len({abs(l) for l in c}) for c in f.clauses)


@given(qbf_formulas(), st.integers(1, 3))
def test_copies_add_degree_linearly(f, k):
    base = degree_profile(f.matrix).degrees
    copied = QbfFormula.build(f.prefix, [c for c in f.clauses for _ in range(k)], f.num_vars)
    assert degree_profile(copied.matrix).degrees == {v: k * d for v, d in base.items()}
