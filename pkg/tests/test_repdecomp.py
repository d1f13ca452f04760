import numpy as np

from morita.annular import build_algebra, haar, verify_wha
from morita.catalog import cyclic, fib, regular_module, symmetric
from morita.dualdata import assemble_dual
from morita.repdecomp import (check_grouplike_trace, cluster_eigenvalues,
                              commutant_projection, decompose, fuse, hom_dim,
                              intertwiner_residual, intertwiners,
                              Representation, regular_representation,
                              schur_pair, tensor_module, verify_irrep)
from morita.vecg import gen_vecg

PHI = (1 + np.sqrt(5)) / 2


def _irreps(mod, seed=1):
    _, maps = build_algebra(mod)
    return maps, decompose(maps, seed)


def test_s3_dims():
    maps, irreps = _irreps(gen_vecg(symmetric(3)))
    assert [v.dim for v in irreps] == [1, 1, 2]
    assert [v.id for v in irreps] == [0, 1, 2]
    assert abs(irreps[0].char @ maps.haar_vec - 1) < 1e-9


def test_fib_dims():
    _, irreps = _irreps(fib())
    assert [v.dim for v in irreps] == [2, 3]


def test_regular_z2_dims():
    _, irreps = _irreps(regular_module(gen_vecg(cyclic(2)).base))
    assert [v.dim for v in irreps] == [2, 2]


def test_irreps_are_irreducible():
    for mod in (gen_vecg(symmetric(3)), fib()):
        _, irreps = _irreps(mod)
        for v in irreps:
            res = verify_irrep(v)
            assert res['hom_dim'] == 1
            for key in ('star', 'unit', 'homomorphism', 'grading'):
                assert res[key] < 1e-9, (key, res[key])


def test_schur_orthogonality():
    _, irreps = _irreps(fib())
    for v in irreps:
        for w in irreps:
            expect = 1 if v.id == w.id else 0
            assert abs(schur_pair(v, w) - expect) < 1e-9


def test_trivial_irrep_character():
    maps, irreps = _irreps(fib())
    d = maps.data.d
    triv = irreps[0]
    for n, t in enumerate(maps.basis):
        expect = 0.0
        if t.a == t.b == t.c == t.d and t.alpha == t.beta:
            expect = np.sqrt(d[t.x])
        assert abs(triv.char[n] - expect) < 1e-9


def test_decompose_is_deterministic():
    _, one = _irreps(gen_vecg(symmetric(3)), seed=5)
    _, two = _irreps(gen_vecg(symmetric(3)), seed=5)
    for v, w in zip(one, two):
        assert np.array_equal(v.matrices, w.matrices)


def test_duals():
    _, irreps = _irreps(gen_vecg(cyclic(3)))
    assert [v.dual for v in irreps] == [0, 2, 1]
    _, irreps = _irreps(gen_vecg(symmetric(3)))
    assert [v.dual for v in irreps] == [0, 1, 2]


def test_regular_representation_is_unitary():
    maps, _ = _irreps(gen_vecg(cyclic(2)))
    reg = regular_representation(maps)
    for mat in reg.matrices:
        assert np.abs(mat @ mat.conj().T - np.eye(2)).max() < 1e-10


def test_fusion_of_two_dim_irrep():
    _, irreps = _irreps(gen_vecg(symmetric(3)))
    v = irreps[2]
    space = fuse(v, v)
    assert space.dim == 4
    for c in irreps:
        assert hom_dim(c, space) == 1
        (itw,) = intertwiners(v, v, c, space)
        assert intertwiner_residual(itw, c) < 1e-9


def test_commutant_projection():
    _, irreps = _irreps(gen_vecg(symmetric(3)))
    v1, v2 = irreps[1], irreps[2]
    assert np.abs(commutant_projection(v2, v2, np.eye(2))
                  - np.eye(2)).max() < 1e-9
    m = np.arange(2.0).reshape(2, 1)
    assert np.abs(commutant_projection(v1, v2, m)).max() < 1e-9


def test_grouplike_trace():
    maps, irreps = _irreps(gen_vecg(symmetric(3)))
    for v in irreps:
        assert check_grouplike_trace(maps, v, v.dim) < 1e-9


def test_haar_projects_onto_trivial():
    maps, irreps = _irreps(gen_vecg(cyclic(3)))
    lam = haar(maps)
    assert np.abs(irreps[0].of(lam) - 1).max() < 1e-9
    for v in irreps[1:]:
        assert np.abs(v.of(lam)).max() < 1e-9


def test_cluster_eigenvalues():
    vals = np.array([0.0, 1e-9, 1.0, 1.0 + 1e-10, 3.0])
    assert cluster_eigenvalues(vals, 1e-7) == [[0, 1], [2, 3], [4]]


def test_grouplike_trace_with_dual_dims():
    dual = assemble_dual(fib(), seed=1)
    maps = dual.algebra
    assert np.abs(dual.dd - [1, PHI]).max() < 1e-9
    for c, v in enumerate(dual.irreps):
        assert check_grouplike_trace(maps, v, dual.dd[c]) < 1e-9
    # the trace formula is sensitive to the dimension it is given
    assert check_grouplike_trace(maps, dual.irreps[1], 1.0) > 1e-3
    report = verify_wha(maps, 1e-9)
    assert report.informative['antipode_square'][0] < 1e-9


def test_tensor_with_trivial():
    _, irreps = _irreps(fib())
    triv, tau = irreps
    tm = tensor_module(tau, triv)
    assert tm.dim == tau.dim
    assert hom_dim(tau, tm) == 1
    assert hom_dim(triv, tm) == 0


def test_sign_squares_to_trivial():
    _, irreps = _irreps(gen_vecg(cyclic(2)))
    triv, sign = irreps
    tm = tensor_module(sign, sign)
    assert tm.dim == 1
    assert hom_dim(triv, tm) == 1
    assert hom_dim(sign, tm) == 0


def test_schur_pair_of_direct_sum():
    maps, irreps = _irreps(gen_vecg(cyclic(2)))
    triv, sign = irreps
    mats = np.zeros((maps.dim, 2, 2), dtype=complex)
    mats[:, 0, 0] = triv.matrices[:, 0, 0]
    mats[:, 1, 1] = sign.matrices[:, 0, 0]
    both = Representation(maps, mats)
    assert abs(schur_pair(both, both) - 2) < 1e-9
    assert abs(schur_pair(both, triv) - 1) < 1e-9
    assert hom_dim(both, both) == 2
