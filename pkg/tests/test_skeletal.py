import numpy as np
import pytest

from morita.catalog import cyclic, fib, symmetric
from morita.skeletal import (BimoduleData, FSymbol, GaugeError,
                             InconsistentAction, ModuleData, NonUnitalFusion,
                             Report, SkeletalCategory, apply_gauge,
                             canonical_gauge, compute_fp_dims,
                             compute_module_dims, random_gauge,
                             verify_dims, verify_pentagons, verify_unitarity,
                             verify_units)
from morita.vecg import gen_vecg

PHI = (1 + np.sqrt(5)) / 2


def _with_f0_block(mod, key, blk):
    data = BimoduleData(mod)
    f0 = data.f['f0'].copy()
    f0[key] = blk
    return data.replace(f0=f0)


def test_fp_dims_fib():
    dims = compute_fp_dims(fib().base.fusion)
    assert np.abs(dims - [1, PHI]).max() < 1e-12
    assert abs(fib().base.fpdim - (1 + PHI ** 2)) < 1e-12


def test_fp_dims_group():
    s3 = gen_vecg(symmetric(3))
    assert np.abs(compute_fp_dims(s3.base.fusion) - 1).max() < 1e-12
    assert s3.base.fpdim == 6


def test_module_dims():
    mod = gen_vecg(cyclic(4))
    m = compute_module_dims(mod.act, mod.base.fp_dims)
    assert np.abs(m - [2.0]).max() < 1e-12
    # the regular module has m = d
    f = fib()
    assert np.abs(f.m_dims - f.base.fp_dims).max() < 1e-12


def test_nonunital_fusion():
    fusion = np.zeros((2, 2, 2), dtype=int)
    fusion[0, 0, 1] = fusion[0, 1, 0] = 1
    fusion[1, 0, 0] = fusion[1, 1, 1] = 1
    with pytest.raises(NonUnitalFusion):
        compute_fp_dims(fusion)


def test_unit_must_act_trivially():
    cat = gen_vecg(cyclic(2)).base
    act = np.ones((2, 1, 1), dtype=int)
    act[0, 0, 0] = 2
    with pytest.raises(InconsistentAction):
        ModuleData(cat, act)


def test_block_structure():
    data = BimoduleData(fib())
    assert data.rows('f0', (1, 1, 1, 1)) == [(0, 0, 0), (0, 1, 0)]
    assert data.cols('f0', (1, 1, 1, 1)) == [(0, 0, 0), (0, 1, 0)]
    assert data.rows('f0', (1, 1, 1, 0)) == [(0, 1, 0)]
    assert (1, 1, 0, 1) in data.block_keys('f0')
    assert (0, 0, 0, 1) not in data.block_keys('f0')


def test_lowered_is_inverse_transpose():
    data = BimoduleData(fib())
    blk = data.block('f0', (1, 1, 1, 1))
    low = data.lowered('f0', (1, 1, 1, 1))
    assert np.abs(blk @ low.T - np.eye(2)).max() < 1e-12
    # F[tau,tau,tau,tau] is real orthogonal and symmetric
    assert np.abs(low - blk).max() < 1e-12


def test_pentagons_vecg():
    report = verify_pentagons(gen_vecg(symmetric(3)))
    assert report.passed
    assert set(report.residuals) == set(['CCCC', 'CCCM', 'units'])
    assert report.max_residual < 1e-12


def test_pentagons_fib():
    report = verify_pentagons(fib())
    assert report.passed, report.failures[:3]
    assert verify_unitarity(fib()).passed


def test_pentagon_detects_wrong_fib():
    c, s = 0.5, np.sqrt(0.75)
    bad = _with_f0_block(fib(), (1, 1, 1, 1), [[c, s], [s, -c]])
    assert verify_unitarity(bad).passed
    report = verify_pentagons(bad, ['CCCC'])
    assert not report.passed
    assert report.residuals['CCCC'] > 1e-3
    fam, witness, res = report.failures[0]
    assert fam == 'CCCC'
    assert len(witness) == 5


def test_anomalous_z2_has_no_fiber_functor():
    # F0(1,1,1,1) = -1 is the nontrivial 3-cocycle on Z2: still a fusion
    # category, but Vec with trivial F1 is no longer a module over it
    bad = _with_f0_block(gen_vecg(cyclic(2)), (1, 1, 1, 1), [[-1]])
    report = verify_pentagons(bad, ['CCCC', 'CCCM'])
    assert report.residuals['CCCC'] < 1e-12
    assert abs(report.residuals['CCCM'] - 2) < 1e-12
    assert set(fam for fam, _, _ in report.failures) == {'CCCM'}


def test_unitarity_detects_scaled_block():
    bad = _with_f0_block(fib(), (1, 1, 1, 1),
                         2 * fib().base.f0[(1, 1, 1, 1)])
    report = verify_unitarity(bad)
    assert not report.passed
    assert report.witness['f0'] == (1, 1, 1, 1)
    assert abs(report.residuals['f0'] - 3) < 1e-9


def test_units_and_canonical_gauge():
    mod = gen_vecg(cyclic(2))
    assert canonical_gauge(mod).is_identity()
    f1 = mod.f1.copy()
    f1[(1, 0, 0, 0)] = [[-1]]
    bad = ModuleData(mod.base, mod.act, f1, mod.m_dims)
    report = verify_units(bad)
    assert not report.passed
    assert report.witness['units'] == ('f1', 1, 0, 0, 0)
    with pytest.raises(GaugeError):
        canonical_gauge(bad)


def test_random_gauge_preserves_coherence():
    rng = np.random.default_rng(7)
    data = BimoduleData(fib())
    gauge = random_gauge(data, rng)
    assert not gauge.is_identity()
    moved = apply_gauge(data, gauge)
    assert np.abs(moved.block('f0', (1, 1, 1, 1))
                  - data.block('f0', (1, 1, 1, 1))).max() > 1e-6
    assert verify_pentagons(moved).passed
    assert verify_units(moved).passed
    assert verify_unitarity(moved).passed


def test_unit_space_gauge_rejected():
    data = BimoduleData(fib())
    from morita.skeletal import GaugeTransform
    gauge = GaugeTransform({('CC', 0, 1, 1): [[-1]]})
    with pytest.raises(GaugeError):
        apply_gauge(data, gauge)


def test_dims_equations():
    res = verify_dims(gen_vecg(cyclic(3)))
    assert res['left'] < 1e-12
    assert 'right' not in res


def test_fsymbol_sorted_and_copied():
    fs = FSymbol({(1, 0, 0, 1): [[1]], (0, 0, 0, 0): [[1]]})
    assert fs.keys() == [(0, 0, 0, 0), (1, 0, 0, 1)]
    other = fs.copy()
    other[(0, 0, 0, 0)][0, 0] = 5
    assert fs[(0, 0, 0, 0)][0, 0] == 1


def test_report_keeps_worst():
    report = Report('x', 1e-9)
    report.add('a', 1e-12, (0,))
    report.add('a', 1e-6, (1,))
    report.add('a', 1e-10, (2,))
    assert report.witness['a'] == (1,)
    assert not report.passed
    assert report.to_jsondata()['failures'] == [['a', [1], 1e-6]]


def test_category_names_default():
    cat = SkeletalCategory(np.ones((1, 1, 1), dtype=int))
    assert cat.dual == [0]
    assert cat.fpdim == 1
