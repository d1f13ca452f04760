import itertools

import numpy as np
import pytest

from morita.catalog import (cyclic, failure_reducible_labels, fib, klein,
                            regular_module, symmetric, symplectic_cocycle)
from morita.dualdata import (DUAL_PENTAGONS, GaugeFactors, IntertwinerTable,
                             assemble_dual, restrict_left)
from morita.skeletal import (GaugeError, apply_gauge, random_gauge,
                             verify_dims, verify_pentagons, verify_unitarity)
from morita.vecg import gen_vecg

PHI = (1 + np.sqrt(5)) / 2


def test_dual_of_s3():
    dual = assemble_dual(gen_vecg(symmetric(3)), seed=1)
    assert dual.right.rank == 3
    assert np.abs(dual.dd - [1, 1, 2]).max() < 1e-9
    assert abs(dual.right.fpdim - 6) < 1e-9
    # 2 x 2 = 0 + 1 + 2
    assert list(dual.right.fusion[2, 2]) == [1, 1, 1]
    assert list(dual.right.fusion[1, 1]) == [1, 0, 0]
    assert list(dual.ract[0, :, 0]) == [1, 1, 2]


def test_dual_is_coherent():
    for mod in (gen_vecg(cyclic(3)), gen_vecg(symmetric(3)),
                gen_vecg(klein(), symplectic_cocycle())):
        dual = assemble_dual(mod, seed=2)
        report = verify_pentagons(dual)
        assert report.passed, report.failures[:3]
        assert set(DUAL_PENTAGONS) <= set(report.residuals)
        assert verify_unitarity(dual).passed
        assert verify_dims(dual)['right'] < 1e-9


def test_dual_of_fib():
    dual = assemble_dual(fib(), seed=1)
    assert dual.right.rank == 2
    d = dual.dd
    assert abs(d[0] - 1) < 1e-9
    assert abs(d[1] ** 2 - d[1] - 1) < 1e-8
    assert list(dual.right.fusion[1, 1]) == [1, 1]
    assert [v.dim for v in dual.irreps] == [2, 3]
    assert verify_pentagons(dual).passed


def test_dual_of_regular_z2():
    dual = assemble_dual(regular_module(gen_vecg(cyclic(2)).base), seed=1)
    assert np.abs(dual.dd - [1, 1]).max() < 1e-9
    assert verify_pentagons(dual).passed


def test_twisted_module_dual():
    dual = assemble_dual(gen_vecg(klein(), symplectic_cocycle()), seed=1)
    assert dual.right.rank == 4
    assert np.abs(dual.dd - 1).max() < 1e-9


def test_f2_holds_representation_matrices():
    dual = assemble_dual(gen_vecg(symmetric(3)), seed=1)
    for c, v in enumerate(dual.irreps):
        idx = [v.index_of[(0, mu, 0)] for mu in range(v.dim)]
        for g in range(6):
            rho = v.tube((0, 0, 0, 0, g, 0, 0))[np.ix_(idx, idx)]
            low = dual.lowered('f2', (g, 0, c, 0))
            assert np.abs(low - rho).max() < 1e-9


def test_unit_blocks_are_identity():
    dual = assemble_dual(gen_vecg(symmetric(3)), seed=1)
    for key in dual.block_keys('f2'):
        if key[0] == 0 or key[2] == 0:
            blk = dual.block('f2', key)
            assert np.abs(blk - np.eye(len(blk))).max() < 1e-9
    for key in dual.block_keys('f4'):
        if 0 in key[:3]:
            blk = dual.block('f4', key)
            assert np.abs(blk - np.eye(len(blk))).max() < 1e-9


def test_intertwiner_table_matches_fusion():
    dual = assemble_dual(gen_vecg(symmetric(3)), seed=1)
    table = IntertwinerTable(dual.irreps)
    assert np.array_equal(table.fusion, dual.right.fusion)
    y = table.get(2, 2, 0, 0)
    assert np.abs(y.conj().T @ y - np.eye(1)).max() < 1e-9


def test_deterministic():
    one = assemble_dual(gen_vecg(symmetric(3)), seed=3)
    two = assemble_dual(gen_vecg(symmetric(3)), seed=3)
    for fam in ('f2', 'f3', 'f4'):
        for key, blk in one.f[fam].items():
            assert np.array_equal(blk, two.f[fam][key])


def test_gauge_invariance():
    mod = gen_vecg(symmetric(3))
    moved = apply_gauge(mod, random_gauge(mod, np.random.default_rng(11)))
    dual = assemble_dual(moved, seed=1)
    assert np.abs(dual.dd - [1, 1, 2]).max() < 1e-9
    assert verify_pentagons(dual).passed


def test_gauge_factors():
    factors = GaugeFactors([1.0, 4.0])
    assert abs(factors(1, 0, 1) - 0.5) < 1e-12
    with pytest.raises(GaugeError):
        GaugeFactors([1.0], tau=[2.0])


def test_restrict_left():
    s3 = symmetric(3)
    dual = assemble_dual(gen_vecg(s3), seed=1)
    with pytest.raises(ValueError):
        restrict_left(dual, [1, 2])
    rotation = [g for g in range(1, 6) if s3.element_order(g) == 3][0]
    with pytest.raises(ValueError):
        restrict_left(dual, [0, rotation])
    small = failure_reducible_labels(seed=1)
    assert small.left.rank == 2
    assert small.right.rank == 3
    assert abs(small.m[0] - np.sqrt(2)) < 1e-12


def _reps(dual, order):
    """rho_c(g) read off F2, one stack of matrices per label."""
    return [np.array([dual.lowered('f2', (g, 0, c, 0))
                      for g in range(order)])
            for c in range(dual.right.rank)]


def _cg_from_f3(dual):
    def cg(b, c, f, mu):
        key = (0, b, c, 0)
        cols = dual.cols('f3', key)
        pick = [cols.index((mu, f, nu)) for nu in range(dual.ract[0, f, 0])]
        return dual.lowered('f3', key)[:, pick]
    return cg


def _averaged_cg(reps, b, c, f, rng):
    """An isometry V_f -> V_b (x) V_c by averaging a random map over G."""
    n = reps[b].shape[1] * reps[c].shape[1]
    k = reps[f].shape[1]
    e = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    m = sum(np.kron(rb, rc) @ e @ rf.conj().T
            for rb, rc, rf in zip(reps[b], reps[c], reps[f]))
    return m / np.sqrt((m.conj().T @ m)[0, 0].real)


def _recouple(dual, key, cg):
    """tr(R^dagger L)/dim V_d between the two embeddings of V_d."""
    a, b, c, d = key
    na = dual.ract[0, a, 0]
    nc = dual.ract[0, c, 0]
    lefts = [np.kron(cg(a, b, e, al), np.eye(nc)) @ cg(e, c, d, be)
             for al, e, be in dual.rows('f4', key)]
    rights = [np.kron(np.eye(na), cg(b, c, f, mu)) @ cg(a, f, d, nu)
              for mu, f, nu in dual.cols('f4', key)]
    return (np.array([[np.vdot(r, l) for r in rights] for l in lefts])
            / dual.ract[0, d, 0])


def test_clebsch_gordan_by_averaging():
    s3 = symmetric(3)
    dual = assemble_dual(gen_vecg(s3), seed=1)
    reps = _reps(dual, s3.order)
    cg = _cg_from_f3(dual)
    rng = np.random.default_rng(4)
    nd = dual.right.rank
    checked = 0
    for b, c, f in itertools.product(range(nd), repeat=3):
        if dual.right.fusion[b, c, f] == 0:
            continue
        assert dual.right.fusion[b, c, f] == 1
        w = _averaged_cg(reps, b, c, f, rng)
        for g in range(s3.order):
            lhs = np.kron(reps[b][g], reps[c][g]) @ w
            assert np.abs(lhs - w @ reps[f][g]).max() < 1e-9
        # multiplicity one: the two isometries differ by a phase
        overlap = cg(b, c, f, 0).conj().T @ w
        phase = overlap[0, 0]
        assert abs(abs(phase) - 1) < 1e-9
        assert np.abs(overlap - phase * np.eye(len(overlap))).max() < 1e-9
        checked += 1
    assert checked == 11


def test_f4_is_racah_recoupling():
    s3 = symmetric(3)
    dual = assemble_dual(gen_vecg(s3), seed=1)
    cg = _cg_from_f3(dual)
    reps = _reps(dual, s3.order)
    rng = np.random.default_rng(9)
    nd = dual.right.rank
    averaged = dict(((b, c, f), _averaged_cg(reps, b, c, f, rng))
                    for b, c, f in itertools.product(range(nd), repeat=3)
                    if dual.right.fusion[b, c, f])
    for key in dual.block_keys('f4'):
        blk = dual.block('f4', key)
        assert np.abs(_recouple(dual, key, cg) - blk).max() < 1e-9
        other = _recouple(dual, key,
                          lambda b, c, f, mu: averaged[(b, c, f)])
        assert np.abs(np.abs(other) - np.abs(blk)).max() < 1e-9
    # the doublet block mixes all three channels of 2 x 2
    big = dual.block('f4', (2, 2, 2, 2))
    assert big.shape == (3, 3)
    assert np.abs(big).min() < 1e-9 < np.abs(big).max()
