"""
The module annular (tube) algebra Ann(C, M) and its weak Hopf structure.

A basis tube(a,b -> c,d; alpha,x,beta) is an annulus with inner boundary
labels (a, b), outer boundary labels (c, d), a C-strand x wrapping it, and
vertices alpha in Hom(x |> a, c), beta in Hom(x |> b, d).  The product
u*v stacks u outside v, so it is nonzero only when u's inner labels match
v's outer labels.

All structure maps are stored densely:

    product[i, j, k]    coefficient of e_k in e_i e_j
    coproduct[i, j, k]  coefficient of e_j (x) e_k in Delta(e_i)
    counit[i]           epsilon(e_i)
    antipode[k, i]      coefficient of e_k in S(e_i)
    star[k, i]          coefficient of e_k in e_i*   (extended antilinearly)

"""

from collections import namedtuple
import itertools

import numpy as np

from morita.config import Config
from morita.logutil import debug, warn
from morita.skeletal import MoritaError, Report, as_bimodule


class AlgebraMismatch(MoritaError):
    pass


class TubeLabel(namedtuple('TubeLabel', 'a b c d x alpha beta')):
    __slots__ = ()

    def __str__(self):
        return 'tube(%d,%d->%d,%d; %d,%d,%d)' % (self.a, self.b, self.c,
                                                 self.d, self.alpha, self.x,
                                                 self.beta)


def tube_basis(act):
    """Tubes in lexicographic (a, b, c, d, x, alpha, beta) order."""
    nx, nm, _ = act.shape
    basis = []
    for a, b, c, d in itertools.product(range(nm), repeat=4):
        for x in range(nx):
            for al in range(act[x, a, c]):
                for be in range(act[x, b, d]):
                    basis.append(TubeLabel(a, b, c, d, x, al, be))
    return basis


class AlgElement(object):
    """A vector of coefficients over the tube basis of one algebra."""

    def __init__(self, maps, coeffs):
        self.maps = maps
        coeffs = np.array(coeffs, dtype=complex)
        coeffs[np.abs(coeffs) < Config.prune_tolerance] = 0
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, AlgElement) or other.maps is not self.maps:
            raise AlgebraMismatch("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgElement(self.maps, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return AlgElement(self.maps, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgElement(self.maps, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return multiply(self, other)
        return AlgElement(self.maps, self.coeffs * other)

    def __rmul__(self, scalar):
        return AlgElement(self.maps, self.coeffs * scalar)

    def terms(self):
        for i in np.flatnonzero(self.coeffs):
            yield self.maps.basis[i], self.coeffs[i]

    def allclose(self, other, tol=None):
        self._check(other)
        tol = Config.tolerance if tol is None else tol
        return np.abs(self.coeffs - other.coeffs).max() < tol

    def __repr__(self):
        parts = ['%s*%s' % (np.round(c, 6), t) for t, c in self.terms()]
        return '<AlgElement %s>' % (' + '.join(parts) or '0')


class WhaMaps(object):
    """Dense structure constants of Ann(C, M); immutable once built."""

    def __init__(self, data, basis):
        self.data = data
        self.basis = basis
        self.index = dict((t, i) for i, t in enumerate(basis))
        self.dim = len(basis)
        self.rank_m = data.mrank

    def element(self, coeffs):
        return AlgElement(self, coeffs)

    def basis_element(self, label):
        v = np.zeros(self.dim, dtype=complex)
        v[self.index[TubeLabel(*label)]] = 1
        return AlgElement(self, v)

    def unit(self):
        return AlgElement(self, self.unit_vec)

    def left_regular(self):
        """Matrices of left multiplication by each basis tube."""
        return self.product.transpose(0, 2, 1)

    def idempotent(self, a, b):
        """The unit summand p_{a,b} = tube(a,b -> a,b; 1,unit,1)."""
        return self.basis_element((a, b, a, b, 0, 0, 0))

    def counit_pairing(self):
        """eps(e_i e_j)."""
        return np.einsum('ijm,m->ij', self.product, self.counit_vec)

    def delta_unit(self):
        """Delta(1) as a dim x dim coefficient matrix."""
        return np.einsum('i,ijk->jk', self.unit_vec, self.coproduct)

    def target_counit_matrix(self):
        """Row i holds the coefficients of eps(1_(1) e_i) 1_(2)."""
        return np.einsum('jm,ji->im', self.delta_unit(),
                         self.counit_pairing())

    def source_counit_matrix(self):
        """Row i holds the coefficients of 1_(1) eps(e_i 1_(2))."""
        return np.einsum('mk,ik->im', self.delta_unit(),
                         self.counit_pairing())

    def target_counit(self, u):
        return AlgElement(self, u.coeffs @ self.target_counit_matrix())

    def source_counit(self, u):
        return AlgElement(self, u.coeffs @ self.source_counit_matrix())

    def to_jsondata(self):
        """Basis and nonzero structure constants, for debugging."""
        def nonzero(arr):
            out = []
            for idx in zip(*np.nonzero(np.abs(arr) > Config.prune_tolerance)):
                v = arr[idx]
                out.append([int(i) for i in idx] + [float(v.real),
                                                    float(v.imag)])
            return out
        return dict(dim=self.dim,
                    basis=[list(t) for t in self.basis],
                    product=nonzero(self.product),
                    coproduct=nonzero(self.coproduct),
                    counit=nonzero(self.counit_vec),
                    antipode=nonzero(self.antipode),
                    star=nonzero(self.star),
                    haar=nonzero(self.haar_vec),
                    haar_measure=nonzero(self.haar_measure_vec),
                    grouplike=nonzero(self.grouplike_vec))


def _product(maps, data):
    d = data.d
    n = maps.dim
    prod = np.zeros((n, n, n), dtype=complex)
    by_inner = {}
    for j, t in enumerate(maps.basis):
        by_inner.setdefault((t.c, t.d), []).append(j)
    for i, outer in enumerate(maps.basis):
        xo = outer.x
        for j in by_inner.get((outer.a, outer.b), ()):
            inner = maps.basis[j]
            x = inner.x
            k1 = (xo, x, inner.a, outer.c)
            k2 = (xo, x, inner.b, outer.d)
            col1 = (inner.alpha, inner.c, outer.alpha)
            col2 = (inner.beta, inner.d, outer.beta)
            rows1 = data.rows('f1', k1)
            rows2 = data.rows('f1', k2)
            for (ze, y, mu) in rows1:
                f = data.entry('f1', k1, (ze, y, mu), col1)
                if f == 0:
                    continue
                w = np.sqrt(d[x] * d[xo] / d[y])
                for (ze2, y2, nu) in rows2:
                    if ze2 != ze or y2 != y:
                        continue
                    g = data.lowered_entry('f1', k2, (ze, y, nu), col2)
                    k = maps.index[TubeLabel(inner.a, inner.b, outer.c,
                                             outer.d, y, mu, nu)]
                    prod[i, j, k] += w * f * g
    return prod


def _coproduct(maps, data):
    act = data.module.act
    n = maps.dim
    cop = np.zeros((n, n, n), dtype=complex)
    nm = data.mrank
    for i, t in enumerate(maps.basis):
        w = 1 / np.sqrt(data.d[t.x])
        for e, f in itertools.product(range(nm), repeat=2):
            for mu in range(act[t.x, e, f]):
                left = maps.index[TubeLabel(e, t.b, f, t.d, t.x, mu, t.beta)]
                right = maps.index[TubeLabel(t.a, e, t.c, f, t.x, t.alpha,
                                             mu)]
                cop[i, left, right] += w
    return cop


def _cup_entry(data, lowered, x, a, col):
    """F1[xbar, x, a, a; (1,unit,1); col], or its lowered form."""
    xb = data.left.dual[x]
    key = (xb, x, a, a)
    if lowered:
        return data.lowered_entry('f1', key, (0, 0, 0), col)
    return data.entry('f1', key, (0, 0, 0), col)


def _antipode_and_star(maps, data):
    act = data.module.act
    d = data.d
    m = data.m
    n = maps.dim
    anti = np.zeros((n, n), dtype=complex)
    star = np.zeros((n, n), dtype=complex)
    for i, t in enumerate(maps.basis):
        x = t.x
        xb = data.left.dual[x]
        a, b, c, dd = t.a, t.b, t.c, t.d
        ws = m[b] * d[x] / m[dd]
        wz = d[x] * np.sqrt(m[a] * m[b] / (m[c] * m[dd]))
        # S: tube(d,c -> b,a; mu,xbar,nu)
        for mu in range(act[xb, dd, b]):
            for nu in range(act[xb, c, a]):
                f = _cup_entry(data, False, x, a, (t.alpha, c, nu))
                g = _cup_entry(data, True, x, b, (t.beta, dd, mu))
                k = maps.index[TubeLabel(dd, c, b, a, xb, mu, nu)]
                anti[k, i] += ws * f * g
        # star: tube(c,d -> a,b; mu,xbar,nu)
        for mu in range(act[xb, c, a]):
            for nu in range(act[xb, dd, b]):
                f = _cup_entry(data, False, x, b, (t.beta, dd, nu))
                g = _cup_entry(data, True, x, a, (t.alpha, c, mu))
                k = maps.index[TubeLabel(c, dd, a, b, xb, mu, nu)]
                star[k, i] += wz * f * g
    return anti, star


def build_algebra(mod):
    """Tube basis and full weak Hopf structure of Ann(C, M)."""
    data = as_bimodule(mod)
    if not data.has('f1'):
        raise AlgebraMismatch("the annular algebra needs F1")
    basis = tube_basis(data.module.act)
    maps = WhaMaps(data, basis)
    n = maps.dim
    d = data.d
    m = data.m
    rk = data.mrank
    debug("building annular algebra of dimension %d", n)

    maps.product = _product(maps, data)
    maps.coproduct = _coproduct(maps, data)
    maps.counit_vec = np.array([np.sqrt(d[t.x]) if (t.alpha == t.beta and
                                                    t.a == t.b and
                                                    t.c == t.d) else 0.0
                                for t in basis], dtype=complex)
    maps.antipode, maps.star = _antipode_and_star(maps, data)

    unit = np.zeros(n, dtype=complex)
    g = np.zeros(n, dtype=complex)
    ginv = np.zeros(n, dtype=complex)
    haar = np.zeros(n, dtype=complex)
    measure = np.zeros(n, dtype=complex)
    for i, t in enumerate(basis):
        if t.x == 0:
            unit[i] = 1
            g[i] = m[t.a] / m[t.b]
            ginv[i] = m[t.b] / m[t.a]
            measure[i] = rk * m[t.a] ** 2
        if t.a == t.b and t.c == t.d and t.alpha == t.beta:
            haar[i] = np.sqrt(d[t.x]) / (m[t.a] * m[t.c] * rk)
    maps.unit_vec = unit
    maps.grouplike_vec = g
    maps.grouplike_inv_vec = ginv
    maps.haar_vec = haar
    maps.haar_measure_vec = measure
    return basis, maps


# -- element-level API


def multiply(u, v):
    u._check(v)
    coeffs = np.einsum('i,j,ijk->k', u.coeffs, v.coeffs, u.maps.product)
    return AlgElement(u.maps, coeffs)


def coproduct(u):
    """Delta(u) as a list of (left, right) pairs of basis multiples."""
    maps = u.maps
    mat = np.einsum('i,ijk->jk', u.coeffs, maps.coproduct)
    pairs = []
    for j, k in zip(*np.nonzero(np.abs(mat) > Config.prune_tolerance)):
        left = np.zeros(maps.dim, dtype=complex)
        left[j] = mat[j, k]
        right = np.zeros(maps.dim, dtype=complex)
        right[k] = 1
        pairs.append((AlgElement(maps, left), AlgElement(maps, right)))
    return pairs


def counit(u):
    return complex(u.coeffs @ u.maps.counit_vec)


def antipode(u):
    return AlgElement(u.maps, u.maps.antipode @ u.coeffs)


def star(u):
    return AlgElement(u.maps, u.maps.star @ u.coeffs.conj())


def haar(maps):
    return AlgElement(maps, maps.haar_vec)


def haar_measure(u):
    return complex(u.coeffs @ u.maps.haar_measure_vec)


def grouplike(maps, inverse=False):
    return AlgElement(maps, maps.grouplike_inv_vec if inverse
                      else maps.grouplike_vec)


# -- axiom verification


def _worst(report, name, diff, maps, fatal=True):
    diff = np.abs(diff)
    if diff.size == 0:
        report.residuals.setdefault(name, 0.0)
        return
    pos = np.unravel_index(np.argmax(diff), diff.shape)
    witness = tuple(str(maps.basis[p]) if p < maps.dim else p
                    for p in pos[:2])
    res = float(diff[pos])
    if fatal:
        report.add(name, res, witness)
    else:
        report.informative[name] = (res, witness)


def _sample_residual(report, name, diff, s):
    diff = np.abs(diff)
    report.add(name, float(diff.max()) if diff.size else 0.0, ('sample', s))


def _dense_axioms(maps, report):
    """Axioms on every tuple of basis tubes; holds dim^4 arrays."""
    n = maps.dim
    P = maps.product
    C = maps.coproduct
    eps = maps.counit_vec
    S = maps.antipode
    Z = maps.star
    u = maps.unit_vec
    eye = np.eye(n)

    _worst(report, 'associativity',
           np.einsum('ijl,lkm->ijkm', P, P) - np.einsum('jkl,ilm->ijkm', P, P),
           maps)
    _worst(report, 'unit',
           np.stack([np.einsum('i,ijk->jk', u, P) - eye,
                     np.einsum('j,ijk->ik', u, P) - eye]).transpose(1, 2, 0),
           maps)
    _worst(report, 'coassociativity',
           np.einsum('ijk,jab->iabk', C, C) - np.einsum('ijk,kab->ijab', C, C),
           maps)
    _worst(report, 'counit',
           np.stack([np.einsum('j,ijk->ik', eps, C) - eye,
                     np.einsum('k,ijk->ij', eps, C) - eye]).transpose(1, 2, 0),
           maps)

    # Delta(e_i e_j) = Delta(e_i) Delta(e_j)
    lhs = np.einsum('ijk,kab->ijab', P, C)
    rhs = np.empty_like(lhs)
    for i in range(n):
        t1 = np.einsum('pq,pra->qra', C[i], P)
        rhs[i] = np.einsum('qra,jrs,qsb->jab', t1, C, P, optimize=True)
    _worst(report, 'multiplicativity', lhs - rhs, maps)

    E2 = maps.counit_pairing()
    lhs = np.einsum('ijl,lk->ijk', P, E2)
    r1 = np.einsum('jpq,ip,qk->ijk', C, E2, E2)
    r2 = np.einsum('jpq,iq,pk->ijk', C, E2, E2)
    _worst(report, 'weak_counit', np.maximum(np.abs(lhs - r1),
                                             np.abs(lhs - r2)), maps)

    D = maps.delta_unit()
    d2 = np.einsum('jk,jab->abk', D, C)
    r1 = np.einsum('ap,qc,pqb->abc', D, D, P)
    r2 = np.einsum('ap,qc,qpb->abc', D, D, P)
    _worst(report, 'weak_unit', np.maximum(np.abs(d2 - r1),
                                           np.abs(d2 - r2)), maps)

    PL = maps.target_counit_matrix()
    PR = maps.source_counit_matrix()
    _worst(report, 'antipode_left',
           np.einsum('ijk,lk,jlm->im', C, S, P) - PL, maps)
    _worst(report, 'antipode_right',
           np.einsum('ijk,lj,lkm->im', C, S, P) - PR, maps)
    t2 = np.einsum('ijk,jab->iabk', C, C)
    q = np.einsum('pa,pbq->abq', S, P)
    r = np.einsum('rk,qrm->qkm', S, P)
    _worst(report, 'antipode_sandwich',
           np.einsum('iabk,abq,qkm->im', t2, q, r, optimize=True) - S.T, maps)
    _worst(report, 'antipode_antimultiplicative',
           np.einsum('ijk,mk->ijm', P, S)
           - np.einsum('pj,qi,pqm->ijm', S, S, P), maps)

    _worst(report, 'star_antimultiplicative',
           np.einsum('ijk,mk->ijm', P.conj(), Z)
           - np.einsum('pj,qi,pqm->ijm', Z, Z, P), maps)
    _worst(report, 'star_coproduct',
           np.einsum('ki,kab->iab', Z, C)
           - np.einsum('ipq,ap,bq->iab', C.conj(), Z, Z), maps)


def _sampled_axioms(maps, report, rng):
    """
    The same axioms on random elements x, y, z, one sample at a time.
    Every contraction goes through the dim^3 structure constants.
    """
    n = maps.dim
    P = maps.product
    C = maps.coproduct
    eps = maps.counit_vec
    S = maps.antipode
    Z = maps.star
    u = maps.unit_vec
    E2 = maps.counit_pairing()
    D = maps.delta_unit()
    PL = maps.target_counit_matrix()
    PR = maps.source_counit_matrix()
    # S(e_a) e_b as [a, b, :] and e_q S(e_k) as [q, k, :]
    s_left = np.tensordot(S, P, ([0], [0]))
    s_right = np.tensordot(P, S, ([1], [0])).transpose(0, 2, 1)

    def mul(x, y):
        return y @ np.tensordot(x, P, 1)

    def cop(x):
        return np.tensordot(x, C, 1)

    def conj(x):
        return Z @ x.conj()

    for s in range(Config.wha_samples):
        vecs = rng.normal(size=(3, n)) + 1j * rng.normal(size=(3, n))
        x, y, z = vecs / np.linalg.norm(vecs, axis=1)[:, None]
        mx = cop(x)
        my = cop(y)
        xy = mul(x, y)

        _sample_residual(report, 'associativity',
                         mul(xy, z) - mul(x, mul(y, z)), s)
        _sample_residual(report, 'unit',
                         np.concatenate([mul(u, x) - x, mul(x, u) - x]), s)
        _sample_residual(report, 'coassociativity',
                         np.tensordot(mx, C, ([0], [0])).transpose(1, 2, 0)
                         - np.tensordot(mx, C, ([1], [0])), s)
        _sample_residual(report, 'counit',
                         np.concatenate([eps @ mx - x, mx @ eps - x]), s)

        t = np.tensordot(mx, P, ([0], [0]))
        t = np.tensordot(t, my, ([1], [0]))
        _sample_residual(report, 'multiplicativity',
                         cop(xy) - np.tensordot(t, P, ([0, 2], [0, 1])), s)

        lhs = eps @ mul(xy, z)
        xl = x @ E2
        zr = E2 @ z
        _sample_residual(report, 'weak_counit',
                         np.array([lhs - xl @ my @ zr, lhs - zr @ my @ xl]),
                         s)

        # Delta^2(1) with its third leg paired against z
        g = D @ z
        d2 = np.tensordot(g, C, 1)
        r1 = D @ np.tensordot(P, g, ([1], [0]))
        r2 = D @ np.tensordot(g, P, 1)
        _sample_residual(report, 'weak_unit',
                         np.stack([d2 - r1, d2 - r2]), s)

        _sample_residual(report, 'antipode_left',
                         np.tensordot(mx @ S.T, P, ([0, 1], [0, 1]))
                         - x @ PL, s)
        _sample_residual(report, 'antipode_right',
                         np.tensordot(S @ mx, P, ([0, 1], [0, 1]))
                         - x @ PR, s)
        w = np.tensordot(np.tensordot(mx, C, ([0], [0])), s_left,
                         ([1, 2], [0, 1]))
        _sample_residual(report, 'antipode_sandwich',
                         np.tensordot(w, s_right, ([0, 1], [1, 0]))
                         - S @ x, s)
        _sample_residual(report, 'antipode_antimultiplicative',
                         S @ xy - mul(S @ y, S @ x), s)

        _sample_residual(report, 'star_antimultiplicative',
                         conj(xy) - mul(conj(y), conj(x)), s)
        _sample_residual(report, 'star_coproduct',
                         cop(conj(x)) - Z @ mx.conj() @ Z.T, s)


def verify_wha(maps, tolerance=None, seed=None):
    """
    Check every weak Hopf and star axiom numerically.

    Algebras of dimension up to Config.wha_dense_limit are checked on all
    tuples of basis tubes, larger ones on Config.wha_samples random
    elements drawn from ``seed``.
    """
    tol = maps.data.tolerance if tolerance is None else tolerance
    report = Report('wha', tol)
    report.informative = {}
    n = maps.dim
    P = maps.product
    C = maps.coproduct
    S = maps.antipode
    Z = maps.star
    u = maps.unit_vec
    eye = np.eye(n)

    if n <= Config.wha_dense_limit:
        _dense_axioms(maps, report)
    else:
        debug("verify_wha: sampling %d random elements (dim %d)",
              Config.wha_samples, n)
        rng = np.random.default_rng(Config.seed if seed is None else seed)
        _sampled_axioms(maps, report, rng)
    _worst(report, 'star_involution', (Z @ Z.conj()).T - eye, maps)

    PL = maps.target_counit_matrix()
    D = maps.delta_unit()
    lam = maps.haar_vec
    e_lam = np.tensordot(P, lam, ([1], [0]))
    _worst(report, 'haar_invariance', e_lam - PL @ e_lam, maps)
    _worst(report, 'haar_selfadjoint', (Z @ lam.conj() - lam)[None], maps)
    _worst(report, 'haar_antipode', (S @ lam - lam)[None], maps)
    _worst(report, 'haar_idempotent',
           (lam @ np.tensordot(lam, P, 1) - lam)[None], maps)
    _worst(report, 'haar_pairing',
           np.array([[lam @ maps.haar_measure_vec - maps.rank_m]]), maps)

    gram = inner_product_matrix(maps)
    _worst(report, 'inner_product_hermitian', gram - gram.conj().T, maps)
    herm = (gram + gram.conj().T) / 2
    low = float(np.linalg.eigvalsh(herm).min())
    report.residuals['inner_product_positive'] = max(0.0, -low)
    if low <= tol:
        report.failures.append(('inner_product_positive', (), low))

    g = maps.grouplike_vec
    gi = maps.grouplike_inv_vec
    gp = np.tensordot(g, P, 1)
    _worst(report, 'grouplike_inverse', (gi @ gp - u)[None], maps)
    _worst(report, 'grouplike_coproduct',
           np.tensordot(g, C, 1) - gp.T @ D @ gp, maps)

    if maps.rank_m == 1:
        _worst(report, 'hopf_degeneration', D - np.outer(u, u), maps)

    # S^2 = Ad_g is reported but never fails the check
    ad = gp @ np.tensordot(P, gi, ([1], [0]))
    _worst(report, 'antipode_square', (S @ S).T - ad, maps, fatal=False)
    if report.informative['antipode_square'][0] >= tol:
        warn("S^2 differs from conjugation by g by %g",
             report.informative['antipode_square'][0])
    debug("verify_wha: %d checks, max residual %g", len(report.residuals),
          report.max_residual)
    return report


def inner_product_matrix(maps):
    """G[i, j] = lambda(e_i* e_j)."""
    return maps.star.T @ (maps.product @ maps.haar_measure_vec)


__all__ = ['AlgebraMismatch', 'TubeLabel', 'AlgElement', 'WhaMaps',
           'tube_basis', 'build_algebra', 'multiply', 'coproduct', 'counit',
           'antipode', 'star', 'haar', 'haar_measure', 'grouplike',
           'verify_wha', 'inner_product_matrix']
