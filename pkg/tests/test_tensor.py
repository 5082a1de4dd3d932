from math import comb

import pytest

from quantlog.families import modules_upto, quantales_upto
from quantlog.lattice import SizeGuardError, SupLattice, order_isomorphisms
from quantlog.qmodule import RIGHT, boolean_module, quantale_as_module
from quantlog.quantale import two_element_quantale
from quantlog.suites import right_modules_upto
from quantlog.tensor import check_bimorphism, tensor_lazy, tensor_powerset, tensor_product


def test_two_tensor_two_is_two():
    C2 = SupLattice.chain(2)
    T = tensor_powerset(boolean_module(C2, RIGHT), boolean_module(C2))
    assert len(T) == 2


def test_scalars_tensor_module_is_module():
    for Q in quantales_upto(3):
        QR = quantale_as_module(Q, RIGHT)
        for M in modules_upto(Q, 3):
            T = tensor_product(QR, M)
            assert bool(order_isomorphisms(T.lattice, M.lattice))
            # the unit tensor embeds M
            assert len({T.pure(Q.unit, u) for u in range(M.n)}) == M.n


def test_one_element_factor_collapses():
    one = boolean_module(SupLattice.chain(1), RIGHT)
    for M in modules_upto(two_element_quantale(), 4):
        assert len(tensor_product(one, M)) == 1


def test_lazy_agrees_with_powerset():
    for Q in quantales_upto(3):
        for M1 in right_modules_upto(Q, 3):
            for M2 in modules_upto(Q, 3):
                lazy, full = tensor_lazy(M1, M2), tensor_powerset(M1, M2)
                assert sorted(lazy.members) == sorted(full.members)
                assert not check_bimorphism(lazy, M1, M2)


def test_b4_over_q2_squares():
    # over the Boolean quantale the tensor is the sup-lattice tensor: B4 (x) C2 = B4
    from quantlog.lattice import powerset_lattice

    B4, _ = powerset_lattice(["a", "b"])
    T = tensor_product(boolean_module(B4, RIGHT), boolean_module(SupLattice.chain(2)))
    assert bool(order_isomorphisms(T.lattice, B4))


def test_powerset_guard():
    C4 = SupLattice.chain(4)
    with pytest.raises(SizeGuardError):
        tensor_powerset(boolean_module(C4, RIGHT), boolean_module(C4))


def test_chain_tensors_count_monotone_maps():
    # C_m (x) C_n over the Boolean quantale counts monotone maps C_{m-1} -> C_n
    for m in range(1, 6):
        for n in range(1, 6):
            T = tensor_lazy(boolean_module(SupLattice.chain(m), RIGHT), boolean_module(SupLattice.chain(n)))
            assert len(T) == comb(m + n - 2, m - 1)


def test_sides_are_checked():
    C2 = SupLattice.chain(2)
    with pytest.raises(ValueError):
        tensor_product(boolean_module(C2), boolean_module(C2))
