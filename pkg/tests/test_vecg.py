import numpy as np
import pytest

from morita.catalog import (cyclic, dihedral, get_group, klein, quaternion,
                            symmetric, symplectic_cocycle)
from morita.config import Config
from morita.vecg import (Cocycle, CocycleError, FiniteGroup, GroupError,
                         classical_irreps, crosscheck_vecg, gen_vecg,
                         regular_form)


def test_group_orders():
    assert cyclic(5).order == 5
    assert klein().order == 4
    assert symmetric(3).order == 6
    assert symmetric(4).order == 24
    assert dihedral(4).order == 8
    assert quaternion().order == 8


def test_element_orders():
    q8 = quaternion()
    assert sorted(q8.element_order(g) for g in range(8)) == \
        [1, 2, 4, 4, 4, 4, 4, 4]
    d4 = dihedral(4)
    assert sum(1 for g in range(8) if d4.element_order(g) == 2) == 5
    s3 = symmetric(3)
    for g in range(6):
        assert s3.mul(g, s3.inv(g)) == 0


def test_get_group():
    assert get_group('Z7').order == 7
    assert get_group('Q8').name == 'Q8'
    with pytest.raises(ValueError):
        get_group('nope')


def test_bad_tables():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1, 2], [1, 0, 2]])
    with pytest.raises(GroupError):
        FiniteGroup([[1, 0], [0, 1]])
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])
    # a loop of order 5 that is not a group
    loop = [[0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        FiniteGroup(loop)


def test_cocycles():
    phi = symplectic_cocycle()
    assert not phi.is_trivial
    assert Cocycle.trivial(cyclic(3)).is_trivial
    vals = np.ones((3, 3))
    vals[1, 1] = -1
    with pytest.raises(CocycleError):
        Cocycle(cyclic(3), vals)
    with pytest.raises(CocycleError):
        Cocycle(cyclic(2), [[1, 1], [1, 2]])
    with pytest.raises(CocycleError):
        Cocycle(cyclic(2), [[1, 1j], [1, 1]])


def test_gen_vecg():
    mod = gen_vecg(klein(), symplectic_cocycle())
    assert mod.act.shape == (4, 1, 1)
    assert np.abs(mod.m_dims - [2.0]).max() < 1e-12
    assert mod.f1[(1, 2, 0, 0)][0, 0] == -1
    assert mod.f1[(2, 1, 0, 0)][0, 0] == 1
    assert len(mod.base.f0) == 64


def test_regular_form():
    s3 = symmetric(3)
    reg = regular_form(s3)
    for g in range(6):
        for h in range(6):
            assert np.array_equal(reg[g] @ reg[h], reg[s3.mul(g, h)])


def test_classical_irreps():
    s3 = classical_irreps(symmetric(3), seed=4)
    assert s3.dims == [1, 1, 2]
    chars = s3.characters
    assert np.abs(chars @ chars.conj().T / 6 - np.eye(3)).max() < 1e-9
    assert classical_irreps(quaternion(), seed=4).dims == [1, 1, 1, 1, 2]
    assert classical_irreps(cyclic(4), seed=4).dims == [1, 1, 1, 1]


def test_group_order_limit():
    old = Config.max_group_order
    Config.max_group_order = 10
    try:
        with pytest.raises(GroupError):
            classical_irreps(symmetric(4))
    finally:
        Config.max_group_order = old


def test_crosscheck():
    for group in (cyclic(2), cyclic(3), cyclic(4), klein(), symmetric(3)):
        report = crosscheck_vecg(group, seed=1, tolerance=1e-9)
        assert report.passed, (group.name, report.failures[:3])
        for fam in ('characters', 'f2_representation',
                    'character_orthogonality', 'matrix_orthogonality',
                    'clebsch_gordan'):
            assert fam in report.residuals
