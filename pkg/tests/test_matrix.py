import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from permprob import (
    MatrixSpec,
    NonFiniteEntry,
    ParseError,
    ShapeError,
    SquareMatrix,
    generate,
    parse_matrix,
    serialize_matrix,
)
from permprob.spin import build_mvn_sampler


def test_parse_csv():
    m = parse_matrix("1,2\n3,4", "csv")
    assert m.n == 2
    np.testing.assert_array_equal(m.entries, [[1, 2], [3, 4]])


def test_parse_single_entry():
    m = parse_matrix("1", "csv")
    assert m.n == 1 and m[0, 0] == 1.0


@pytest.mark.parametrize(
    "text, fmt, exc",
    [
        ("1,2\n3", "csv", ShapeError),
        ("1,2,3\n4,5,6", "csv", ShapeError),
        ("1,x\n3,4", "csv", ParseError),
        ("", "csv", ParseError),
        ("1,nan\n3,4", "csv", NonFiniteEntry),
        ("1,inf\n3,4", "csv", ValueError),
        ("[[1, 2], [3]]", "json", ShapeError),
        ("[[1, true], [3, 4]]", "json", ParseError),
        ("[[1, 2], [3, 4]", "json", ParseError),
        ("{\"a\": 1}", "json", ParseError),
        ("[[NaN]]", "json", NonFiniteEntry),
    ],
)
def test_parse_errors(text, fmt, exc):
    with pytest.raises(exc):
        parse_matrix(text, fmt)


def test_serialize_examples():
    assert serialize_matrix([[1, 2], [3, 4]], "csv") == "1,2\n3,4"
    assert json.loads(serialize_matrix(generate("identity", 1), "json")) == [[1.0]]
    assert serialize_matrix(generate("identity", 1), "json") == "[[1.0]]"


@pytest.mark.parametrize("fmt", ["csv", "json"])
@pytest.mark.parametrize("kind", ["uniform", "spd", "rademacher", "ones", "identity"])
def test_generated_round_trip(kind, fmt):
    m = generate(kind, 5, 11)
    assert parse_matrix(serialize_matrix(m, fmt), fmt) == m


finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=200)
@given(a=st.integers(1, 6).flatmap(lambda n: hnp.arrays(np.float64, (n, n), elements=finite)),
       fmt=st.sampled_from(["csv", "json"]))
def test_round_trip_bit_exact(a, fmt):
    m = SquareMatrix(a)
    back = parse_matrix(serialize_matrix(m, fmt), fmt)
    assert back.entries.tobytes() == m.entries.tobytes()


def test_negative_zero_survives_csv():
    m = SquareMatrix([[-0.0]])
    assert parse_matrix(serialize_matrix(m, "csv"), "csv") == m


def test_generators():
    np.testing.assert_array_equal(generate("ones", 3).entries, np.ones((3, 3)))
    np.testing.assert_array_equal(generate("identity", 2).entries, [[1, 0], [0, 1]])
    r = generate("rademacher", 6, 3).entries
    assert set(np.unique(r)) <= {-1.0, 1.0}
    u = generate("uniform", 6, 3).entries
    assert np.all(u >= -1) and np.all(u <= 1)


@pytest.mark.parametrize("kind", ["rademacher", "uniform", "spd"])
def test_generate_is_pure(kind):
    assert generate(kind, 4, 99) == generate(kind, 4, 99)
    assert generate(kind, 4, 99) != generate(kind, 4, 100)


def test_deterministic_kinds_ignore_seed():
    assert generate("ones", 3, 1) == generate("ones", 3, 2)


def test_spd_generator_factorizes():
    m = generate(MatrixSpec("SymmetricPositiveDefinite", 4, 7))
    assert np.array_equal(m.entries, m.entries.T)
    assert np.linalg.eigvalsh(m.entries).min() >= 0.1 - 1e-12
    sampler = build_mvn_sampler(m)
    np.testing.assert_allclose(sampler.chol @ sampler.chol.T, m.entries, atol=1e-14)


def test_matrix_spec_parse():
    spec = MatrixSpec.parse("ones:5", seed=3)
    assert (spec.kind.value, spec.n, spec.seed) == ("ones", 5, 3)
    assert str(spec) == "ones:5"
    for bad in ["ones", "ones:x", "bogus:3", "ones:0"]:
        with pytest.raises(ParseError):
            MatrixSpec.parse(bad)


def test_square_matrix_is_immutable():
    m = SquareMatrix([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(ValueError):
        m.entries[0, 0] = 5.0
    with pytest.raises(ShapeError):
        SquareMatrix(np.ones((2, 3)))
