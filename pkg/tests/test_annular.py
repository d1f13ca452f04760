import copy

import numpy as np
import pytest

from morita.annular import (AlgebraMismatch, TubeLabel, antipode,
                            build_algebra, counit, grouplike, haar,
                            haar_measure, inner_product_matrix, multiply,
                            star, tube_basis, verify_wha)
from morita.catalog import cyclic, fib, get_example, regular_module, symmetric
from morita.config import Config, resetConfig
from morita.skeletal import ModuleData
from morita.vecg import gen_vecg


def _maps(mod):
    return build_algebra(mod)[1]


def test_dimensions():
    assert _maps(gen_vecg(cyclic(2))).dim == 2
    assert _maps(gen_vecg(symmetric(3))).dim == 6
    assert _maps(regular_module(gen_vecg(cyclic(2)).base)).dim == 8
    assert _maps(fib()).dim == 13


def test_basis_order():
    act = fib().act
    basis = tube_basis(act)
    assert basis == sorted(basis)
    assert basis[0] == TubeLabel(0, 0, 0, 0, 0, 0, 0)
    assert str(basis[0]) == 'tube(0,0->0,0; 0,0,0)'


def test_needs_f1():
    mod = gen_vecg(cyclic(2))
    with pytest.raises(AlgebraMismatch):
        build_algebra(ModuleData(mod.base, mod.act, None, mod.m_dims))


def test_wha_axioms():
    for mod in (gen_vecg(cyclic(2)),
                regular_module(gen_vecg(cyclic(2)).base),
                gen_vecg(symmetric(3)),
                fib()):
        report = verify_wha(_maps(mod), 1e-9)
        assert report.passed, (mod.name, report.failures[:3])
        assert 'antipode_square' in report.informative


def test_twisted_wha():
    report = verify_wha(_maps(get_example('Z2xZ2-twisted')), 1e-9)
    assert report.passed, report.failures[:3]


def test_haar_properties():
    for mod in (fib(), regular_module(gen_vecg(cyclic(2)).base)):
        maps = _maps(mod)
        lam = haar(maps)
        assert abs(counit(lam) - 1) < 1e-10
        assert multiply(lam, lam).allclose(lam, 1e-10)
        assert antipode(lam).allclose(lam, 1e-10)
        assert star(lam).allclose(lam, 1e-10)
        assert abs(haar_measure(lam) - maps.rank_m) < 1e-10


def test_unit_and_idempotents():
    maps = _maps(fib())
    one = maps.unit()
    total = maps.idempotent(0, 0)
    for a, b in [(0, 1), (1, 0), (1, 1)]:
        total = total + maps.idempotent(a, b)
    assert total.allclose(one)
    u = maps.basis_element((1, 1, 0, 1, 1, 0, 0))
    assert multiply(one, u).allclose(u)
    assert multiply(u, one).allclose(u)
    p = maps.idempotent(1, 1)
    assert multiply(p, p).allclose(p)


def test_group_algebra():
    maps = _maps(gen_vecg(cyclic(3)))
    t = [maps.basis_element((0, 0, 0, 0, g, 0, 0)) for g in range(3)]
    assert multiply(t[1], t[1]).allclose(t[2])
    assert multiply(t[1], t[2]).allclose(t[0])
    assert antipode(t[1]).allclose(t[2])
    assert star(t[1]).allclose(t[2])
    assert abs(counit(t[2]) - 1) < 1e-12
    for g in range(3):
        i = maps.index[TubeLabel(0, 0, 0, 0, g, 0, 0)]
        expect = np.zeros((3, 3))
        expect[i, i] = 1
        assert np.abs(maps.coproduct[i] - expect).max() < 1e-12


def test_grouplike_trivial_for_vec():
    maps = _maps(gen_vecg(cyclic(2)))
    assert grouplike(maps).allclose(maps.unit())
    assert grouplike(maps, inverse=True).allclose(maps.unit())


def test_inner_product_positive():
    maps = _maps(fib())
    gram = inner_product_matrix(maps)
    assert np.abs(gram - gram.conj().T).max() < 1e-10
    assert np.linalg.eigvalsh((gram + gram.conj().T) / 2).min() > 1e-6


def test_counital_maps_project():
    maps = _maps(regular_module(gen_vecg(cyclic(2)).base))
    rng = np.random.default_rng(3)
    u = maps.element(rng.normal(size=maps.dim))
    pl = maps.target_counit(u)
    pr = maps.source_counit(u)
    assert maps.target_counit(pl).allclose(pl, 1e-10)
    assert maps.source_counit(pr).allclose(pr, 1e-10)


def test_dump():
    maps = _maps(gen_vecg(cyclic(2)))
    obj = maps.to_jsondata()
    assert obj['dim'] == 2
    assert obj['basis'] == [[0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0]]
    # e_1 e_1 = e_0
    assert [1, 1, 0, 1.0, 0.0] in obj['product']


def _failed(report):
    return set(fam for fam, _, _ in report.failures)


def test_identity_antipode_rejected():
    maps = copy.copy(_maps(gen_vecg(cyclic(3))))
    maps.antipode = np.eye(maps.dim, dtype=complex)
    # t_1 t_1 = t_2, not eps(t_1) 1
    report = verify_wha(maps, 1e-9)
    assert not report.passed
    assert {'antipode_left', 'antipode_right'} <= _failed(report)
    assert report.residuals['antipode_left'] > 0.5
    Config.wha_dense_limit = 0
    try:
        report = verify_wha(maps, 1e-9, seed=5)
    finally:
        resetConfig()
    assert {'antipode_left', 'antipode_right'} <= _failed(report)


def test_sampled_matches_dense():
    for mod in (gen_vecg(symmetric(3)), fib()):
        maps = _maps(mod)
        dense = verify_wha(maps, 1e-9)
        Config.wha_dense_limit = 0
        try:
            sampled = verify_wha(maps, 1e-9, seed=2)
        finally:
            resetConfig()
        assert sampled.passed, (mod.name, sampled.failures[:3])
        assert set(sampled.residuals) == set(dense.residuals)
        assert sampled.residuals['multiplicativity'] < 1e-9


def test_large_algebra_sampled():
    maps = _maps(regular_module(gen_vecg(cyclic(5)).base))
    assert maps.dim == 125
    assert maps.dim > Config.wha_dense_limit
    report = verify_wha(maps, 1e-9, seed=1)
    assert report.passed, report.failures[:3]
    assert report.witness['multiplicativity'][0] == 'sample'
    assert 'antipode_square' in report.informative
