"""Dense tensor type and the contraction primitive."""

import pytest

from tracediagrams.linalg import Matrix
from tracediagrams.tensor import Tensor, tensor_contract, tensor_trace

A = Matrix([[2, 3], [4, 5]])
B = Matrix([[1, -1], [0, 2]])


def test_shapes_and_indexing():
    t = Tensor.from_function(2, 1, 2, lambda outs, ins: outs[0] * 10
                             + ins[0] * 2 + ins[1])
    assert t.get((2,), (1, 2)) == 24
    with pytest.raises(ValueError):
        t.get((1,), (1,))
    with pytest.raises(ValueError):
        t.get((3,), (1, 1))
    with pytest.raises(ValueError):
        Tensor(2, 1, 1, [1, 2, 3])


def test_scalar_boxing():
    s = Tensor.scalar(3, 7)
    assert s.arity == 0 and s.as_scalar() == 7
    with pytest.raises(ValueError):
        Tensor.identity(2, 1).as_scalar()


def test_compose_is_matrix_product():
    ta, tb = Tensor.from_matrix(A), Tensor.from_matrix(B)
    assert ta.compose(tb).to_matrix() == A @ B
    assert tensor_contract(ta, tb, [(1, 0)]).to_matrix() == A @ B


def test_full_self_pairing_is_trace():
    ta = Tensor.from_matrix(A)
    assert tensor_trace(ta, [(0, 1)]).as_scalar() == A.trace()


def test_cup_cap_pairing_gives_dimension():
    for n in (2, 3, 4):
        cup = Tensor.from_function(n, 2, 0,
                                   lambda outs, ins: int(outs[0] == outs[1]))
        cap = Tensor.from_function(n, 0, 2,
                                   lambda outs, ins: int(ins[0] == ins[1]))
        paired = tensor_contract(cap, cup, [(0, 0), (1, 1)])
        assert paired.as_scalar() == n


def test_contract_errors():
    ta, tb = Tensor.from_matrix(A), Tensor.from_matrix(B)
    with pytest.raises(ValueError):
        tensor_contract(ta, tb, [(5, 0)])
    with pytest.raises(ValueError):
        tensor_contract(ta, Tensor.from_matrix(Matrix.identity(3)), [(1, 0)])
    with pytest.raises(ValueError):
        ta.compose(Tensor.scalar(2, 1))


def test_tensor_product_layout():
    ta, tb = Tensor.from_matrix(A), Tensor.from_matrix(B)
    prod = ta.tensor_product(tb)
    assert (prod.out_arity, prod.in_arity) == (2, 2)
    for o1 in (1, 2):
        for o2 in (1, 2):
            for i1 in (1, 2):
                for i2 in (1, 2):
                    assert prod.get((o1, o2), (i1, i2)) == \
                        A.entry(o1, i1) * B.entry(o2, i2)


def test_permuted_axes():
    t = Tensor.from_function(2, 2, 0, lambda outs, ins: 10 * outs[0] + outs[1])
    swapped = t.permuted_axes([1, 0])
    assert swapped.get((1, 2), ()) == 21
    with pytest.raises(ValueError):
        t.permuted_axes([0, 0])


def test_algebra_and_zero():
    t = Tensor.from_matrix(A)
    assert (t - t).is_zero()
    assert (t + (-t)).is_zero()
    assert t.scale(2).to_matrix() == A.scale(2)
    assert t.first_difference(t) is None
    diff = t.first_difference(t.scale(2))
    assert diff == ((1,), (1,), 2, 4)


def test_identity_tensor():
    ident = Tensor.identity(3, 2)
    assert ident.get((2, 3), (2, 3)) == 1
    assert ident.get((2, 3), (3, 2)) == 0
