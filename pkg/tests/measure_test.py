from fractions import Fraction

import pytest

from liftsplit.errors import (
    AmbiguousCompletion,
    NotCoarser,
    NotMeasurable,
    ParseError,
    ValidationError,
)
from liftsplit.measure import (
    FiniteSpace,
    Measure,
    SigmaAlgebra,
    SimpleFunction,
    conditional_expectation,
    format_rational,
    generate_algebra,
    parse_rational,
)


_SPACE = FiniteSpace.of_size(3)

_P = Measure.from_masses(_SPACE, [Fraction(1, 2), Fraction(1, 2), 0])

_RATIONALS = [
    ("1/2", Fraction(1, 2)),
    ("2/4", Fraction(1, 2)),
    ("-3/9", Fraction(-1, 3)),
    ("0/1", Fraction(0)),
    (7, Fraction(7)),
]


@pytest.mark.parametrize("text, value", _RATIONALS)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "half", 0.5, True, None])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(Fraction(3)) == "3/1"
    assert parse_rational(format_rational(Fraction(-5, 7))) == Fraction(-5, 7)


def test_space_validation():
    with pytest.raises(ValidationError):
        FiniteSpace(())
    with pytest.raises(ValidationError):
        FiniteSpace(("a", "a"))


def test_algebra_validation():
    with pytest.raises(ValidationError):
        SigmaAlgebra.from_partition(_SPACE, [[0], [1]])
    with pytest.raises(ValidationError):
        SigmaAlgebra.from_partition(_SPACE, [[0, 1], [1, 2]])


def test_algebra_atoms_are_canonical():
    algebra = SigmaAlgebra.from_partition(_SPACE, [[2], [0, 1]])
    assert [a.to_list() for a in algebra.atoms] == [[0, 1], [2]]
    assert algebra.is_measurable(_SPACE.event([0, 1]))
    assert not algebra.is_measurable(_SPACE.event([0]))
    assert algebra.hull(_SPACE.event([1])) == _SPACE.event([0, 1])
    assert algebra.kernel(_SPACE.event([1, 2])) == _SPACE.event([2])
    assert list(algebra.events()) == [0b000, 0b011, 0b100, 0b111]


def test_refine():
    algebra = SigmaAlgebra.trivial(_SPACE).refine(_SPACE.event([1]))
    assert [a.to_list() for a in algebra.atoms] == [[0, 2], [1]]
    assert SigmaAlgebra.trivial(_SPACE).is_coarser(algebra)
    assert not algebra.is_coarser(SigmaAlgebra.trivial(_SPACE))
    assert generate_algebra(_SPACE, [_SPACE.event([0]), _SPACE.event([1])]).is_power_set


@pytest.mark.parametrize(
    "masses",
    [
        [Fraction(1, 2), Fraction(1, 2)],
        [Fraction(1), Fraction(1), Fraction(0)],
        [Fraction(3, 2), Fraction(-1, 2), Fraction(0)],
    ],
)
def test_measure_validation(masses):
    with pytest.raises(ValidationError):
        Measure.from_masses(_SPACE, masses)


def test_null_sets():
    assert _P.measure_of(_SPACE.event([0, 1])) == 1
    assert _P.is_null(_SPACE.event([2]))
    assert _P.ae_equal(_SPACE.event([0, 1]), _SPACE.full)
    assert not _P.ae_equal(_SPACE.event([0]), _SPACE.event([1]))
    assert _P.null_part == _SPACE.event([2])
    assert _P.support == _SPACE.event([0, 1])


def test_measure_of_non_measurable():
    algebra = SigmaAlgebra.from_partition(_SPACE, [[0, 1], [2]])
    mu = Measure(algebra, (Fraction(1), Fraction(0)))
    with pytest.raises(NotMeasurable):
        mu.measure_of(_SPACE.event([0]))


def test_complete():
    algebra = SigmaAlgebra.from_partition(_SPACE, [[0, 2], [1]])
    mu = Measure(algebra, (Fraction(1, 3), Fraction(2, 3)))
    assert mu.complete().masses == (Fraction(1, 3), Fraction(2, 3), Fraction(0))
    with pytest.raises(AmbiguousCompletion):
        mu.complete(strict=True)
    null = Measure(algebra, (Fraction(0), Fraction(1)))
    assert null.complete(strict=True).masses == (Fraction(0), Fraction(1), Fraction(0))


def test_restrict():
    algebra = SigmaAlgebra.from_partition(_SPACE, [[0, 2], [1]])
    assert _P.restrict(algebra).weights == (Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(NotCoarser):
        _P.restrict(algebra).restrict(SigmaAlgebra.power_set(_SPACE))


def test_integral():
    f = SimpleFunction(_SPACE, (4, 2, 100))
    assert _P.integral(f) == 3
    assert _P.integral(SimpleFunction.indicator(_SPACE, _SPACE.event([0]))) == Fraction(1, 2)


def test_conditional_expectation():
    algebra = SigmaAlgebra.from_partition(_SPACE, [[0, 1], [2]])
    f = SimpleFunction(_SPACE, (4, 2, 100))
    expectation = conditional_expectation(f, algebra, _P)
    assert expectation.values == (3, 3, 0)
    assert expectation.is_measurable(algebra)
    expectation = conditional_expectation(f, algebra, _P, Fraction(7))
    assert expectation.values == (3, 3, 7)


def test_conditional_expectation_tower():
    f = SimpleFunction(_SPACE, (4, 2, 100))
    fine = SigmaAlgebra.from_partition(_SPACE, [[0, 1], [2]])
    coarse = SigmaAlgebra.trivial(_SPACE)
    once = conditional_expectation(f, coarse, _P)
    twice = conditional_expectation(conditional_expectation(f, fine, _P), coarse, _P)
    assert once == twice
    assert once.values == (3, 3, 3)


def test_conditional_expectation_errors():
    algebra = SigmaAlgebra.from_partition(_SPACE, [[0, 1], [2]])
    mu = _P.restrict(algebra)
    with pytest.raises(NotMeasurable):
        conditional_expectation(SimpleFunction(_SPACE, (1, 2, 3)), algebra, mu)
    with pytest.raises(NotCoarser):
        conditional_expectation(
            SimpleFunction(_SPACE, (1, 1, 3)), SigmaAlgebra.power_set(_SPACE), mu
        )


def test_absolute_continuity():
    q = Measure.from_masses(_SPACE, [0, 0, 1])
    assert q.absolutely_continuous_witness(_P) == 2
    assert _P.absolutely_continuous_witness(Measure.uniform(_SPACE)) is None


def test_super_level_set():
    f = SimpleFunction(_SPACE, (Fraction(1, 2), 1, 0))
    assert f.super_level_set(Fraction(0)) == _SPACE.event([0, 1])
    assert f.super_level_set(Fraction(1, 2)) == _SPACE.event([1])
    assert f.distinct_values() == [0, Fraction(1, 2), 1]


_GENERATORS = [
    [],
    [_SPACE.event([0])],
    [_SPACE.event([0, 1])],
    [_SPACE.event([0, 1]), _SPACE.event([1, 2])],
    [_SPACE.event([2]), _SPACE.event([0])],
]


@pytest.mark.parametrize("generators", _GENERATORS)
def test_generate_algebra_idempotent(generators):
    algebra = generate_algebra(_SPACE, generators)
    assert all(algebra.is_measurable(g) for g in generators)
    assert generate_algebra(_SPACE, algebra.atoms) == algebra
    assert generate_algebra(_SPACE, list(generators) + list(algebra.atoms)) == algebra
    assert generate_algebra(_SPACE, list(algebra.events())) == algebra


@pytest.mark.parametrize("smaller", _GENERATORS)
@pytest.mark.parametrize("larger", _GENERATORS)
def test_generate_algebra_monotone(smaller, larger):
    coarse = generate_algebra(_SPACE, smaller)
    fine = generate_algebra(_SPACE, list(smaller) + list(larger))
    assert coarse.is_coarser(fine)
    assert generate_algebra(_SPACE, larger).is_coarser(fine)


_PARTITIONS = [
    [[0, 1, 2]],
    [[0], [1, 2]],
    [[0, 1], [2]],
    [[0, 2], [1]],
    [[0], [1], [2]],
]

_MEASURES = [
    _P,
    Measure.uniform(_SPACE),
    Measure.point_mass(_SPACE, 2),
    Measure.from_masses(_SPACE, [0, Fraction(1, 3), Fraction(2, 3)]),
]


@pytest.mark.parametrize("null_value", [Fraction(0), Fraction(-1, 3)])
@pytest.mark.parametrize("mu", _MEASURES)
@pytest.mark.parametrize("blocks", _PARTITIONS)
def test_conditional_expectation_is_projection(blocks, mu, null_value):
    algebra = SigmaAlgebra.from_partition(_SPACE, blocks)
    f = SimpleFunction(_SPACE, (1, Fraction(5, 2), -3))
    once = conditional_expectation(f, algebra, mu, null_value)
    assert conditional_expectation(once, algebra, mu, null_value) == once
    assert mu.integral(once) == mu.integral(f)


@pytest.mark.parametrize("null_value", [Fraction(0), Fraction(7)])
@pytest.mark.parametrize("mu", _MEASURES)
def test_conditional_expectation_tower_all_chains(mu, null_value):
    f = SimpleFunction(_SPACE, (1, Fraction(5, 2), -3))
    algebras = [SigmaAlgebra.from_partition(_SPACE, blocks) for blocks in _PARTITIONS]
    for coarse in algebras:
        for fine in algebras:
            if not coarse.is_coarser(fine):
                continue
            once = conditional_expectation(f, coarse, mu, null_value)
            inner = conditional_expectation(f, fine, mu, null_value)
            assert conditional_expectation(inner, coarse, mu, null_value) == once
