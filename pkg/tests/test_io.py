import numpy as np
import pytest

from conftest import random_sparse
from symrank1 import io
from symrank1.models import make_rank_one
from symrank1.tensor import SymTensorSparse, densify


def test_round_trip_exact(tmp_path, rng):
    t = random_sparse(5, 4, 12, rng)
    t = t * (1 / 3.0)  # values with long decimal expansions
    path = tmp_path / "t.txt"
    io.write_tensor(t, path)
    back = io.read_tensor(path)
    assert (back.m, back.n) == (t.m, t.n)
    assert back.terms == t.terms


def test_format_is_one_based():
    t = SymTensorSparse.from_terms(3, 2, [((0, 0, 1), 3.0)])
    assert io.dumps_tensor(t) == "symtensor 3 2 1\n1 1 2 3\n"


def test_write_structured_and_dense(rng):
    t = make_rank_one(1.0, [1.0, 0.0, 0.0], 4)
    assert io.dumps_tensor(t) == "symtensor 4 3 1\n1 1 1 1 1\n"
    d = densify(random_sparse(3, 3, 4, rng))
    back = io.loads_tensor(io.dumps_tensor(d))
    assert np.array_equal(densify(back).entries, d.entries)


@pytest.mark.parametrize("text", [
    "",
    "tensor 3 2 1\n1 1 2 3\n",
    "symtensor 3 2 2\n1 1 2 3\n",
    "symtensor 3 2 1\n2 1 1 3\n",
    "symtensor 3 2 1\n1 1 3 3\n",
    "symtensor 3 2 1\n1 1 3\n",
])
def test_malformed_tensor_files(text):
    with pytest.raises(ValueError):
        io.loads_tensor(text)


def test_matrix_round_trip(rng):
    mats = [rng.standard_normal((3, 3)) for _ in range(2)]
    mats = [a + a.T for a in mats]
    back = io.loads_matrices(io.dumps_matrices(mats))
    for a, b in zip(mats, back):
        assert np.array_equal(a, b)


def test_matrix_file_shape_checked():
    with pytest.raises(ValueError):
        io.loads_matrices("matrices 2 2\n1 0\n0 1\n")
