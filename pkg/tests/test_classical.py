import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from hypothesis.extra.numpy import arrays

from qecbench.classical import (
    LinearCode,
    decompose,
    distance,
    encode,
    encoding_matrix,
    hamming74,
    linear_code,
    load_code,
    repetition,
    save_code,
    syndrome,
    tanner_graph,
    transpose_code,
)
from qecbench.errors import CapacityExceeded
from qecbench.f2 import F2Matrix


def check_matrices(max_rows=6, max_cols=10):
    shapes = st.tuples(st.integers(0, max_rows), st.integers(1, max_cols))
    return shapes.flatmap(
        lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)).map(
            F2Matrix.from_dense
        )
    )


def test_repetition_structure():
    code = repetition(3)
    assert np.array_equal(code.h.to_dense(), [[1, 1, 0], [0, 1, 1]])
    assert code.k == 1
    assert np.array_equal(code.g.to_dense(), [[1, 1, 1]])
    assert distance(code) == 3

    tiny = repetition(2)
    assert np.array_equal(tiny.h.to_dense(), [[1, 1]])
    assert np.array_equal(tiny.g.to_dense(), [[1, 1]])

    trivial = repetition(1)
    assert trivial.k == 1 and trivial.h.rows == 0


def test_hamming_parameters():
    code = hamming74()
    assert (code.n, code.k) == (7, 4)
    assert distance(code) == 3
    # single-bit error at position i has syndrome = binary expansion of i
    for i in range(7):
        e = np.zeros(7, dtype=np.uint8)
        e[i] = 1
        s = syndrome(code, e)
        assert int(s[0]) + 2 * int(s[1]) + 4 * int(s[2]) == i + 1


@given(check_matrices())
def test_generator_annihilates_checks(h):
    code = linear_code(h)
    assert (code.h @ code.g.T).is_zero()
    assert code.k == code.n - h.rank()


@given(check_matrices())
def test_encoding_matrix_roundtrip(h):
    assume(h.rank() == h.rows)  # right inverse needs independent checks
    code = linear_code(h)
    enc = encoding_matrix(code)
    assert (enc.v @ enc.v_inv) == F2Matrix.identity(code.n)
    rng = np.random.default_rng(code.n + 5 * code.k)
    word = rng.integers(0, 2, size=code.n, dtype=np.uint8)
    logical, synd = decompose(enc, word)
    assert np.array_equal(synd, syndrome(code, word))
    # recombination reproduces the word
    assert np.array_equal(enc.v.rmatvec(np.concatenate([logical, synd])), word)


@given(check_matrices())
def test_encode_decompose(h):
    assume(h.rank() == h.rows)
    code = linear_code(h)
    enc = encoding_matrix(code)
    rng = np.random.default_rng(13 * code.n + code.k)
    bits = rng.integers(0, 2, size=code.k, dtype=np.uint8)
    word = encode(enc, bits)
    assert not syndrome(code, word).any()
    logical, synd = decompose(enc, word)
    assert np.array_equal(logical, bits)
    assert not synd.any()


def test_no_checks_encoding():
    code = linear_code(F2Matrix(0, 4))
    enc = encoding_matrix(code)
    assert enc.v.rows == 4 and enc.v.rank() == 4


def test_distance_guard():
    g = F2Matrix.identity(25)
    code = LinearCode(h=F2Matrix(0, 25), g=g)
    with pytest.raises(CapacityExceeded):
        distance(code)


def test_distance_zero_rate():
    code = linear_code(F2Matrix.identity(3))
    assert code.k == 0
    assert distance(code) == math.inf


def test_transpose_code():
    code = repetition(3)
    t = transpose_code(code)
    assert t.n == 2 and t.k == 0


def test_tanner_graph_tree_and_cycles():
    rep = tanner_graph(repetition(5).h)
    assert rep.girth == math.inf
    assert len(rep.edges) == 8

    ham = tanner_graph(hamming74().h)
    assert ham.girth == 4

    ring = F2Matrix.from_dense(
        [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]]
    )
    assert tanner_graph(ring).girth == 8


def test_code_descriptor_roundtrip(tmp_path):
    code = hamming74()
    path = tmp_path / "hamming.json"
    save_code(code, path, "hamming74", d=3)
    loaded, doc = load_code(path)
    assert loaded.h == code.h
    assert doc["name"] == "hamming74"
    assert doc["d"] == 3
