import pytest

from stabsim.errors import DimensionError, InvalidSizeError, ParseError
from stabsim.grouping import (
    GroupedHamiltonian,
    GroupMode,
    WeightedPauli,
    emit_groups,
    group_greedy,
    group_stats,
    parse_hamiltonian,
    random_hamiltonian,
    sort_terms,
    verify_grouping,
)
from stabsim.pauli import parse_pauli

H2_LIKE = """\
# synthetic two-qubit Hamiltonian
-0.81 II
0.17 ZI
0.17 IZ
-0.22 ZZ
0.045 XX
0.045 YY
"""


def terms(*specs: tuple[float, str]) -> list[WeightedPauli]:
    return [WeightedPauli(c, parse_pauli(p)) for c, p in specs]


def test_parse_hamiltonian():
    parsed = parse_hamiltonian(H2_LIKE)
    assert [t.pauli.label for t in parsed] == ["II", "ZI", "IZ", "ZZ", "XX", "YY"]
    assert parsed[0].coeff == -0.81


def test_parse_merges_and_cancels():
    parsed = parse_hamiltonian("0.5 XZ\n0.25 XZ\n1.0 ZZ\n-1.0 ZZ\n0.3 -YY\n")
    assert [(t.coeff, t.pauli.label) for t in parsed] == [(0.75, "XZ"), (-0.3, "YY")]


def test_signed_pauli_folds_into_coefficient():
    t = WeightedPauli(2.0, parse_pauli("-XY"))
    assert t.coeff == -2.0
    assert t.pauli.r == 0
    assert t.weight == 2.0


@pytest.mark.parametrize(
    ("text", "line", "error"),
    [
        ("0.1 XX\nbad\n", 2, ParseError),
        ("0.1 XX\nabc XX\n", 2, ParseError),
        ("0.1 XX\n0.2 XQ\n", 2, ParseError),
        ("0.1 XX\n\n0.2 XXX\n", 3, DimensionError),
        ("nan XX\n", 1, ParseError),
    ],
)
def test_parse_errors_name_the_line(text, line, error):
    with pytest.raises(error) as exc:
        parse_hamiltonian(text)
    assert exc.value.line == line


def test_sort_terms_is_stable_and_descending():
    ordered = sort_terms(terms((0.1, "ZZ"), (-0.5, "XX"), (0.1, "XI"), (0.5, "YY")))
    assert [t.pauli.label for t in ordered] == ["XX", "YY", "XI", "ZZ"]


def test_qwc_versus_gc():
    ham = terms((1.0, "XX"), (0.9, "YY"), (0.8, "ZZ"))
    qwc = group_greedy(ham, GroupMode.QWC)
    gc = group_greedy(ham, "gc")
    assert len(qwc.groups) == 3
    assert len(gc.groups) == 1
    assert verify_grouping(qwc) == []
    assert verify_grouping(gc) == []


def test_greedy_first_fit_order():
    ham = terms((1.0, "ZI"), (0.9, "XI"), (0.8, "IZ"), (0.7, "XZ"))
    g = group_greedy(ham, GroupMode.QWC)
    assert [[t.pauli.label for t in group] for group in g.groups] == [["ZI", "IZ"], ["XI", "XZ"]]


def test_verify_grouping_reports_bad_pairs():
    bad = GroupedHamiltonian(GroupMode.GC, [terms((1.0, "XI"), (1.0, "ZI"), (1.0, "IZ"))])
    violations = verify_grouping(bad)
    assert [(v.group, v.first, v.second) for v in violations] == [(0, 0, 1)]

    qwc = GroupedHamiltonian(GroupMode.QWC, [terms((1.0, "XX"), (1.0, "ZZ"))])
    assert len(verify_grouping(qwc)) == 1


def test_group_stats():
    g = group_greedy(parse_hamiltonian(H2_LIKE), GroupMode.QWC)
    stats = group_stats(g)
    assert stats.terms == 6
    assert stats.groups == 3
    assert stats.largest_group == 4
    assert stats.basis_rotations == 4
    assert stats.to_dict()["mode"] == "qwc"

    gc = group_stats(group_greedy(parse_hamiltonian(H2_LIKE), GroupMode.GC))
    assert gc.groups == 2  # XX and YY anticommute with ZI
    assert gc.basis_rotations is None


def test_emit_groups():
    g = group_greedy(terms((0.5, "XX"), (0.25, "ZZ")), GroupMode.QWC)
    assert emit_groups(g) == "GROUP 0\n0.5 XX\nGROUP 1\n0.25 ZZ\n"


def test_empty_and_mixed_inputs_rejected():
    with pytest.raises(InvalidSizeError):
        group_greedy([], GroupMode.QWC)
    with pytest.raises(DimensionError):
        group_greedy(terms((1.0, "X"), (1.0, "XX")), GroupMode.GC)


@pytest.mark.parametrize("seed", range(5))
def test_random_hamiltonians_gc_never_worse(seed):
    ham = random_hamiltonian(8, 120, seed=seed)
    assert len({t.pauli.label for t in ham}) == 120
    qwc = group_greedy(ham, GroupMode.QWC)
    gc = group_greedy(ham, GroupMode.GC)
    assert verify_grouping(qwc) == []
    assert verify_grouping(gc) == []
    assert gc.term_count == qwc.term_count == 120
    assert len(gc.groups) <= len(qwc.groups)


def test_random_hamiltonian_size_limits():
    with pytest.raises(InvalidSizeError):
        random_hamiltonian(1, 5)
