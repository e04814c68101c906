import pytest

from magic_completion import (InputError, InvariantViolation, ParameterTuple,
                              classify_admissible, eligible_magic,
                              enumerate_acceptable, enumerate_admissible,
                              format_catalogue_row, is_acceptable,
                              magic_distances, select_magic_parameter,
                              triangle_allowed)

II_B_TUPLE = ParameterTuple(5, 3, 3, 16, 13)

# expected delta=3 catalogue: (tuple, case, magic set)
DELTA3_CATALOGUE = [
    ((3, 1, 2, 10, 9), "III", {2}),
    ((3, 1, 2, 10, 11), "III", {2}),
    ((3, 1, 3, 8, 9), "III", {2}),
    ((3, 1, 3, 10, 9), "III", {2}),
    ((3, 1, 3, 10, 11), "III", {2, 3}),
    ((3, 2, 2, 10, 9), "III", {2}),
    ((3, 2, 2, 10, 11), "III", {2}),
    ((3, 2, 3, 10, 9), "III", {2}),
    ((3, 2, 3, 10, 11), "III", {2, 3}),
    ((3, 3, 3, 10, 11), "III", {3}),
]


def test_acceptability_examples():
    assert is_acceptable(ParameterTuple(3, 1, 2, 10, 9))
    assert is_acceptable(ParameterTuple(3, 1, 1, 10, 11))
    assert not is_acceptable(ParameterTuple(2, 1, 1, 8, 7))      # delta too small
    assert not is_acceptable(ParameterTuple(3, 2, 1, 10, 9))     # K order
    assert not is_acceptable(ParameterTuple(3, 1, 3, 9, 9))      # C0 odd
    assert not is_acceptable(ParameterTuple(3, 1, 3, 12, 9))     # C0 too large
    assert not is_acceptable(ParameterTuple(3, 1, 3, 10, 10))    # C1 even
    assert not is_acceptable(ParameterTuple(3, 1, 4, 10, 9))     # K2 above delta


def test_acceptable_count_delta3():
    # 6 K-pairs, C0 in {8,10}, C1 in {9,11}
    assert len(enumerate_acceptable(3)) == 24


def test_parameter_tuple_rejects_bad_values():
    with pytest.raises(InputError):
        ParameterTuple(3, 0, 2, 10, 9)
    with pytest.raises(InputError):
        ParameterTuple(3, 1, 2, 10, -9)
    with pytest.raises(InputError):
        ParameterTuple(3, 1, True, 10, 9)


def test_derived_bounds():
    p = ParameterTuple(3, 1, 2, 10, 9)
    assert p.c == 9
    assert p.c_prime == 10


def test_delta3_catalogue():
    rows = enumerate_admissible(3)
    assert [(r.params.key(), r.case_tag, set(r.magic_set)) for r in rows] == \
        DELTA3_CATALOGUE


def test_case_classification():
    assert classify_admissible(ParameterTuple(5, 3, 3, 14, 13)).case_tag == "II-A"
    assert classify_admissible(II_B_TUPLE).case_tag == "II-B"
    assert classify_admissible(ParameterTuple(3, 1, 2, 10, 9)).case_tag == "III"


def test_inadmissible_tuple_reports_failed_clauses():
    verdict = classify_admissible(ParameterTuple(3, 1, 1, 10, 11))
    assert not verdict.admissible
    assert verdict.case_tag == "none"
    assert "II: K1+K2 >= delta" in verdict.failed_clauses
    assert "III: 3*K2 >= 2*delta" in verdict.failed_clauses


def test_classify_requires_acceptable():
    with pytest.raises(InputError):
        classify_admissible(ParameterTuple(3, 2, 1, 10, 9))


def test_magic_selection_examples():
    choice = select_magic_parameter(ParameterTuple(3, 1, 2, 10, 9))
    assert choice.magic_set == frozenset({2})
    assert choice.selected == 2
    choice = select_magic_parameter(ParameterTuple(3, 1, 3, 10, 11))
    assert choice.magic_set == frozenset({2, 3})
    assert choice.selected == 2
    choice = select_magic_parameter(II_B_TUPLE)
    assert choice.magic_set == frozenset({3})
    assert choice.selected == 3


def test_magic_override():
    p = ParameterTuple(3, 1, 3, 10, 11)
    assert select_magic_parameter(p, 3).selected == 3
    with pytest.raises(InputError):
        select_magic_parameter(p, 1)


def test_magic_interval_matches_two_sided_definition():
    # M is magic exactly when every triangle with two sides M is allowed
    for delta in range(3, 7):
        for row in enumerate_admissible(delta):
            p = row.params
            by_interval = magic_distances(p)
            by_definition = {m for m in range(1, delta + 1)
                             if all(triangle_allowed(p, m, m, d)
                                    for d in range(1, delta + 1))}
            assert by_interval == by_definition, p.key()


def test_eligible_magic_nonempty_small_delta():
    for delta in range(3, 7):
        for row in enumerate_admissible(delta):
            assert eligible_magic(row.params), row.params.key()


def test_eligible_magic_subset_of_interval():
    for delta in range(3, 7):
        for row in enumerate_admissible(delta):
            p = row.params
            assert eligible_magic(p) <= magic_distances(p)


def test_catalogue_row_format():
    row = enumerate_admissible(3)[4]
    assert format_catalogue_row(row) == "3 1 3 10 11 case=III magic={2,3}"


def test_empty_eligible_set_is_invariant_violation():
    # no admissible tuple with delta <= 6 triggers this, so fake the only
    # entry point: an inadmissible but acceptable tuple never reaches it
    for delta in range(3, 7):
        for row in enumerate_admissible(delta):
            try:
                eligible_magic(row.params)
            except InvariantViolation:  # pragma: no cover - would be a bug
                pytest.fail("eligible set unexpectedly empty")
