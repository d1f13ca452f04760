"""

skeletal data for unitary fusion, module and bimodule categories.

Objects are dense integer labels, the unit of a fusion category is always
label 0.  Strands come in three kinds: 'C' (left fusion category), 'M'
(the module) and 'D' (right fusion category).  A fusion space is named by
the kinds of its two incoming strands:

    'CC'  a (x) b -> e      fusion of C
    'CM'  x |> a -> c       left action of C on M
    'MD'  a <| c -> e       right action of D on M
    'DD'  a (x) b -> e      fusion of D

Each of the five associator families F0..F4 is stored block by block.  For
fixed outer labels (a, b, c, d) a block is a square matrix whose rows are
the trees (alpha, e, beta) -- a,b fuse to e through alpha, then e,c fuse to
d through beta -- and whose columns are the trees (mu, f, nu) -- b,c fuse to
f through mu, then a,f fuse to d through nu.  Rows and columns are ordered
lexicographically by (e, alpha, beta) and (f, mu, nu).

The lowered (inverse) symbol of a block F is inv(F).T, so that
sum_col F[r, col] Finv[r', col] = delta(r, r').

"""

import itertools

import numpy as np
import scipy.linalg as sla
from scipy.stats import unitary_group

from morita.config import Config
from morita.logutil import debug


class MoritaError(RuntimeError):
    pass


class NonUnitalFusion(MoritaError):
    pass


class NumericalFailure(MoritaError):
    pass


class InconsistentAction(MoritaError):
    pass


class MissingBlock(MoritaError):
    pass


class ShapeMismatch(MoritaError):
    pass


class GaugeError(MoritaError):
    pass


FAMILIES = ('f0', 'f1', 'f2', 'f3', 'f4')

# kinds of the three outer strands a, b, c of each family
FAMILY_KINDS = {'f0': ('C', 'C', 'C'),
                'f1': ('C', 'C', 'M'),
                'f2': ('C', 'M', 'D'),
                'f3': ('M', 'D', 'D'),
                'f4': ('D', 'D', 'D')}

_FAMILY_OF = dict((v, k) for k, v in FAMILY_KINDS.items())

# result kind of fusing two strands
PRODUCT_KIND = {('C', 'C'): 'C',
                ('C', 'M'): 'M',
                ('M', 'D'): 'M',
                ('D', 'D'): 'D'}

# four-strand pentagon instances, named by the kinds of the fused strands
PENTAGONS = {'CCCC': ('f0',),
             'CCCM': ('f0', 'f1'),
             'CCMD': ('f1', 'f2'),
             'CMDD': ('f2', 'f3'),
             'MDDD': ('f3', 'f4'),
             'DDDD': ('f4',)}


def _as_fusion(fusion):
    n = np.asarray(fusion)
    if n.ndim != 3 or n.shape[0] != n.shape[1] or n.shape[0] != n.shape[2]:
        raise ShapeMismatch("fusion tensor must be rank x rank x rank, got %s"
                            % (n.shape,))
    if np.any(n < 0) or np.any(n != np.round(n)):
        raise ShapeMismatch(
            "fusion multiplicities must be nonnegative integers")
    return n.astype(int)


def _perron(mat, tol):
    """Perron eigenvalue and positive eigenvector of a nonnegative matrix."""
    vals, vecs = np.linalg.eig(mat)
    order = np.argsort(-vals.real)
    top = vals[order[0]]
    if len(vals) > 1 and abs(top - vals[order[1]]) <= tol:
        raise NumericalFailure("Perron eigenvalue %r is not separated" % top)
    vec = vecs[:, order[0]]
    vec = vec / vec[np.argmax(np.abs(vec))]
    return top.real, vec.real


def compute_fp_dims(fusion, tol=None):
    """Frobenius-Perron dimensions from fusion multiplicities N[a,b,c]."""
    if tol is None:
        tol = Config.dim_tolerance
    n = _as_fusion(fusion)
    rank = n.shape[0]
    eye = np.eye(rank, dtype=int)
    if not (np.array_equal(n[0], eye) and np.array_equal(n[:, 0, :], eye)):
        raise NonUnitalFusion("label 0 does not fuse as a unit")
    # (N_a)_{bc} = N^{ab}_c; d is their common Perron vector
    total = n.sum(axis=0)
    _, vec = _perron(total.astype(float), max(tol, 1e-10))
    if np.any(vec <= 0):
        raise NumericalFailure(
            "fusion rules have no positive dimension vector")
    dims = vec / vec[0]
    # refine each d_a as the eigenvalue of N_a on the common vector
    dims = np.array([(n[a] @ dims)[0] for a in range(rank)], dtype=float)
    resid = np.abs(np.einsum('abc,c->ab', n, dims)
                   - np.outer(dims, dims)).max()
    if resid > 1e-8 * max(1.0, dims.max() ** 2):
        raise NumericalFailure("dimension equations violated by %g" % resid)
    return dims


def compute_module_dims(act, dims, tol=None):
    """Module dimensions m with d_x m_a = sum_c act[x,a,c] m_c.

    Normalized so that sum m^2 = FPdim.
    """
    if tol is None:
        tol = Config.dim_tolerance
    act = np.asarray(act)
    total = act.sum(axis=0).astype(float)
    try:
        top, vec = _perron(total, max(tol, 1e-10))
    except NumericalFailure:
        raise InconsistentAction("module action has no simple Perron vector "
                                 "(is the module decomposable?)")
    if abs(top - dims.sum()) > 1e-8 * dims.sum() or np.any(vec <= 0):
        raise InconsistentAction("no positive solution of the module "
                                 "dimension equations")
    m = vec * np.sqrt((dims ** 2).sum() / (vec ** 2).sum())
    resid = np.abs(np.einsum('xac,c->xa', act, m) - np.outer(dims, m)).max()
    if resid > 1e-8 * max(1.0, m.max() * dims.max()):
        raise InconsistentAction("module dimension equations violated by %g"
                                 % resid)
    return m


class FSymbol(object):
    """One associator family: blocks keyed by the outer labels (a, b, c, d)."""

    def __init__(self, blocks=None):
        self.blocks = {}
        for key, mat in (blocks or {}).items():
            self.blocks[tuple(key)] = np.asarray(mat, dtype=complex)

    def __getitem__(self, key):
        return self.blocks[key]

    def __setitem__(self, key, mat):
        self.blocks[tuple(key)] = np.asarray(mat, dtype=complex)

    def __contains__(self, key):
        return key in self.blocks

    def __len__(self):
        return len(self.blocks)

    def keys(self):
        return sorted(self.blocks)

    def items(self):
        return [(k, self.blocks[k]) for k in sorted(self.blocks)]

    def copy(self):
        return FSymbol(dict((k, v.copy()) for k, v in self.blocks.items()))


class SkeletalCategory(object):
    """A unitary fusion category given by fusion rules and F-symbols."""

    def __init__(self, fusion, f0=None, dual=None, fp_dims=None, name=None):
        self.fusion = _as_fusion(fusion)
        self.rank = self.fusion.shape[0]
        self.unit = 0
        self.name = name
        if fp_dims is None:
            fp_dims = compute_fp_dims(self.fusion)
        self.fp_dims = np.asarray(fp_dims, dtype=float)
        if dual is None:
            dual = []
            for a in range(self.rank):
                hits = [b for b in range(self.rank) if self.fusion[a, b, 0]]
                if len(hits) != 1 or self.fusion[a, hits[0], 0] != 1:
                    raise NonUnitalFusion("label %d has no unique dual" % a)
                dual.append(hits[0])
        self.dual = list(dual)
        self.f0 = f0 if isinstance(f0, FSymbol) or f0 is None else FSymbol(f0)

    @property
    def fpdim(self):
        return float((self.fp_dims ** 2).sum())

    def __repr__(self):
        return '<SkeletalCategory %s rank=%d>' % (self.name or '?', self.rank)


class ModuleData(object):
    """A left C-module category: action multiplicities and F1."""

    def __init__(self, base, act, f1=None, m_dims=None, name=None):
        self.base = base
        self.act = np.asarray(act).astype(int)
        if self.act.ndim != 3 or self.act.shape[0] != base.rank \
                or self.act.shape[1] != self.act.shape[2]:
            raise ShapeMismatch("action tensor must be rankC x rankM x rankM, "
                                "got %s" % (self.act.shape,))
        self.mrank = self.act.shape[1]
        if not np.array_equal(self.act[0], np.eye(self.mrank, dtype=int)):
            raise InconsistentAction("the unit of C does not act trivially")
        if m_dims is None:
            m_dims = compute_module_dims(self.act, base.fp_dims)
        self.m_dims = np.asarray(m_dims, dtype=float)
        self.f1 = f1 if isinstance(f1, FSymbol) or f1 is None else FSymbol(f1)
        self.name = name


class BimoduleData(object):
    """
    A (C, D)-bimodule category M, possibly partial.

    Only the left category and module are required; the right category, the
    right action multiplicities and F2/F3 may be missing, in which case only
    the checks involving F0/F1 can run.
    """

    def __init__(self, module, right=None, ract=None, f2=None, f3=None,
                 tolerance=None, gauge=None):
        self.module = module
        self.left = module.base
        self.right = right
        self.ract = None if ract is None else np.asarray(ract).astype(int)
        if self.ract is not None and right is not None:
            if self.ract.shape != (module.mrank, right.rank, module.mrank):
                raise ShapeMismatch("right action must be rankM x rankD x "
                                    "rankM, got %s" % (self.ract.shape,))
        self.f = {'f0': self.left.f0,
                  'f1': module.f1,
                  'f2': f2 if isinstance(f2, FSymbol) or f2 is None
                  else FSymbol(f2),
                  'f3': f3 if isinstance(f3, FSymbol) or f3 is None
                  else FSymbol(f3),
                  'f4': None if right is None else right.f0}
        self.tolerance = Config.tolerance if tolerance is None else tolerance
        # the transform that brought the input to the normalized gauge
        self.gauge = gauge if gauge is not None else GaugeTransform()
        self._index_cache = {}
        self._lowered_cache = {}

    # -- basic accessors

    @property
    def mrank(self):
        return self.module.mrank

    @property
    def d(self):
        return self.left.fp_dims

    @property
    def m(self):
        return self.module.m_dims

    @property
    def dd(self):
        return self.right.fp_dims

    def rank(self, kind):
        if kind == 'C':
            return self.left.rank
        if kind == 'M':
            return self.module.mrank
        return self.right.rank

    def space(self, kinds):
        """Multiplicity tensor of the fusion space named by two kinds."""
        if kinds == 'CC':
            return self.left.fusion
        if kinds == 'CM':
            return self.module.act
        if kinds == 'MD':
            if self.ract is None:
                raise MissingBlock("no right action available")
            return self.ract
        if kinds == 'DD':
            if self.right is None:
                raise MissingBlock("no right category available")
            return self.right.fusion
        raise ValueError("no fusion space of kinds %r" % (kinds,))

    def has(self, family):
        return self.f.get(family) is not None

    # -- block structure

    def rows(self, family, key):
        """Row trees (alpha, e, beta) of block `key` of `family`."""
        return self._index(family, key)[0]

    def cols(self, family, key):
        return self._index(family, key)[2]

    def _index(self, family, key):
        ck = (family, key)
        try:
            return self._index_cache[ck]
        except KeyError:
            pass
        k1, k2, k3 = FAMILY_KINDS[family]
        k12 = PRODUCT_KIND[(k1, k2)]
        k23 = PRODUCT_KIND[(k2, k3)]
        a, b, c, d = key
        n12 = self.space(k1 + k2)
        n123 = self.space(k12 + k3)
        n23 = self.space(k2 + k3)
        n1_23 = self.space(k1 + k23)
        rows = []
        for e in range(self.rank(k12)):
            for al in range(n12[a, b, e]):
                for be in range(n123[e, c, d]):
                    rows.append((al, e, be))
        cols = []
        for f in range(self.rank(k23)):
            for mu in range(n23[b, c, f]):
                for nu in range(n1_23[a, f, d]):
                    cols.append((mu, f, nu))
        entry = (rows, dict((r, i) for i, r in enumerate(rows)),
                 cols, dict((r, i) for i, r in enumerate(cols)))
        self._index_cache[ck] = entry
        return entry

    def block_keys(self, family):
        """All (a, b, c, d) with a nonempty block in `family`."""
        k1, k2, k3 = FAMILY_KINDS[family]
        k12 = PRODUCT_KIND[(k1, k2)]
        kd = PRODUCT_KIND[(k12, k3)]
        ranges = [range(self.rank(k)) for k in (k1, k2, k3, kd)]
        return [key for key in itertools.product(*ranges)
                if self.rows(family, key)]

    def block(self, family, key):
        fs = self.f.get(family)
        if fs is None:
            raise MissingBlock("family %s is absent" % family)
        try:
            return fs[key]
        except KeyError:
            if self.rows(family, key):
                raise MissingBlock("%s block %s is absent" % (family, key))
            raise

    def lowered(self, family, key):
        """The lowered (inverse) block inv(F).T."""
        ck = (family, key)
        try:
            return self._lowered_cache[ck]
        except KeyError:
            pass
        inv = sla.inv(self.block(family, key)).T
        self._lowered_cache[ck] = inv
        return inv

    def entry(self, family, key, row, col):
        rows, rindex, cols, cindex = self._index(family, key)
        return self.block(family, key)[rindex[row], cindex[col]]

    def lowered_entry(self, family, key, row, col):
        rows, rindex, cols, cindex = self._index(family, key)
        return self.lowered(family, key)[rindex[row], cindex[col]]

    def fusion_spaces(self):
        """Every (kinds, x, y, z) with nonzero multiplicity."""
        kinds = ['CC', 'CM']
        if self.ract is not None:
            kinds.append('MD')
        if self.right is not None:
            kinds.append('DD')
        out = []
        for k in kinds:
            n = self.space(k)
            for x, y, z in zip(*np.nonzero(n)):
                out.append((k, int(x), int(y), int(z)))
        return out

    def replace(self, **kw):
        """A copy with some associator families replaced."""
        f = dict(self.f)
        f.update(kw)
        left = SkeletalCategory(self.left.fusion, f['f0'], self.left.dual,
                                self.left.fp_dims, self.left.name)
        module = ModuleData(left, self.module.act, f['f1'],
                            self.module.m_dims, self.module.name)
        right = None
        if self.right is not None:
            right = SkeletalCategory(self.right.fusion, f['f4'],
                                     self.right.dual, self.right.fp_dims,
                                     self.right.name)
        return BimoduleData(module, right, self.ract, f['f2'], f['f3'],
                            self.tolerance, self.gauge)


def as_bimodule(data):
    if isinstance(data, BimoduleData):
        return data
    if isinstance(data, ModuleData):
        return BimoduleData(data)
    raise TypeError("expected ModuleData or BimoduleData, got %r" % (data,))


class Report(object):
    """Per-family maximum residuals with the worst witness of each."""

    def __init__(self, kind, tolerance):
        self.kind = kind
        self.tolerance = tolerance
        self.residuals = {}
        self.witness = {}
        self.failures = []

    def add(self, family, residual, witness):
        if residual > self.residuals.get(family, -1.0):
            self.residuals[family] = float(residual)
            self.witness[family] = witness
        if residual >= self.tolerance:
            self.failures.append((family, witness, float(residual)))

    @property
    def passed(self):
        return not self.failures

    @property
    def max_residual(self):
        return max(self.residuals.values()) if self.residuals else 0.0

    def to_jsondata(self):
        return dict(kind=self.kind,
                    passed=self.passed,
                    tolerance=self.tolerance,
                    residuals=dict(self.residuals),
                    witness=dict((k, list(v) if isinstance(v, tuple) else v)
                                 for k, v in self.witness.items()),
                    failures=[[f, list(w), r] for f, w, r in self.failures])

    def __repr__(self):
        return '<Report %s passed=%s max=%g>' % (self.kind, self.passed,
                                                 self.max_residual)


def _move(data, family, key, rows_from, rows_to, row_of, col_of):
    """Matrix of one F-move between two bases of four-strand trees."""
    mat = np.zeros((len(rows_from), len(rows_to)), dtype=complex)
    _, rindex, _, cindex = data._index(family, key)
    blk = data.block(family, key)
    to_index = dict((t, j) for j, t in enumerate(rows_to))
    for i, src in enumerate(rows_from):
        r, fixed = row_of(src)
        ri = rindex[r]
        for c, ci in cindex.items():
            dst = col_of(fixed, c)
            j = to_index.get(dst)
            if j is not None:
                mat[i, j] = blk[ri, ci]
    return mat


def _pentagon(data, kinds, p, q, r, s, t):
    """Residual of one pentagon instance, or None for an empty instance."""
    kp, kq, kr, ks = kinds
    kpq = PRODUCT_KIND[(kp, kq)]
    kpqr = PRODUCT_KIND[(kpq, kr)]
    krs = PRODUCT_KIND[(kr, ks)]
    kqr = PRODUCT_KIND[(kq, kr)]
    kqrs = PRODUCT_KIND[(kq, krs)]
    n_pq = data.space(kp + kq)
    n_pq_r = data.space(kpq + kr)
    n_pqr_s = data.space(kpqr + ks)
    n_rs = data.space(kr + ks)
    n_pq_rs = data.space(kpq + krs)
    n_q_rs = data.space(kq + krs)
    n_p_qrs = data.space(kp + kqrs)
    n_qr = data.space(kq + kr)
    n_p_qr = data.space(kp + kqr)
    n_qr_s = data.space(kqr + ks)

    nC = data.rank
    # ((pq)r)s: (a1,u,a2,v,a3)
    b1 = [(a1, u, a2, v, a3)
          for u in range(nC(kpq)) for a1 in range(n_pq[p, q, u])
          for v in range(nC(kpqr)) for a2 in range(n_pq_r[u, r, v])
          for a3 in range(n_pqr_s[v, s, t])]
    if not b1:
        return None
    # (pq)(rs): (a1,u,b1,w,b2) with u(x)w -> t
    b2 = [(a1, u, c1, w, c2)
          for u in range(nC(kpq)) for a1 in range(n_pq[p, q, u])
          for w in range(nC(krs)) for c1 in range(n_rs[r, s, w])
          for c2 in range(n_pq_rs[u, w, t])]
    # p(q(rs)): (b1,w,g1,x,g2)
    b5 = [(c1, w, g1, x, g2)
          for w in range(nC(krs)) for c1 in range(n_rs[r, s, w])
          for x in range(nC(kqrs)) for g1 in range(n_q_rs[q, w, x])
          for g2 in range(n_p_qrs[p, x, t])]
    # (p(qr))s: (d1,y,d2,v,a3)
    b3 = [(d1, y, d2, v, a3)
          for y in range(nC(kqr)) for d1 in range(n_qr[q, r, y])
          for v in range(nC(kpqr)) for d2 in range(n_p_qr[p, y, v])
          for a3 in range(n_pqr_s[v, s, t])]
    # p((qr)s): (d1,y,e1,x,g2)
    b4 = [(d1, y, e1, x, g2)
          for y in range(nC(kqr)) for d1 in range(n_qr[q, r, y])
          for x in range(nC(kqrs)) for e1 in range(n_qr_s[y, s, x])
          for g2 in range(n_p_qrs[p, x, t])]

    fam = lambda k1, k2, k3: _FAMILY_OF[(k1, k2, k3)]

    def m1():
        mats = []
        for u in set(x[1] for x in b1):
            src = [x for x in b1 if x[1] == u]
            mats.append((src, _move(
                data, fam(kpq, kr, ks), (u, r, s, t), src, b2,
                lambda x: ((x[2], x[3], x[4]), (x[0], x[1])),
                lambda fx, c: (fx[0], fx[1], c[0], c[1], c[2]))))
        return _stack(mats, b1, b2)

    def m2():
        mats = []
        for w in set(x[3] for x in b2):
            src = [x for x in b2 if x[3] == w]
            mats.append((src, _move(
                data, fam(kp, kq, krs), (p, q, w, t), src, b5,
                lambda x: ((x[0], x[1], x[4]), (x[2], x[3])),
                lambda fx, c: (fx[0], fx[1], c[0], c[1], c[2]))))
        return _stack(mats, b2, b5)

    def m3():
        mats = []
        for v in set(x[3] for x in b1):
            src = [x for x in b1 if x[3] == v]
            mats.append((src, _move(
                data, fam(kp, kq, kr), (p, q, r, v), src, b3,
                lambda x: ((x[0], x[1], x[2]), (x[3], x[4])),
                lambda fx, c: (c[0], c[1], c[2], fx[0], fx[1]))))
        return _stack(mats, b1, b3)

    def m4():
        mats = []
        for y in set(x[1] for x in b3):
            src = [x for x in b3 if x[1] == y]
            mats.append((src, _move(
                data, fam(kp, kqr, ks), (p, y, s, t), src, b4,
                lambda x: ((x[2], x[3], x[4]), (x[0], x[1])),
                lambda fx, c: (fx[0], fx[1], c[0], c[1], c[2]))))
        return _stack(mats, b3, b4)

    def m5():
        mats = []
        for x_ in set(x[3] for x in b4):
            src = [x for x in b4 if x[3] == x_]
            mats.append((src, _move(
                data, fam(kq, kr, ks), (q, r, s, x_), src, b5,
                lambda x: ((x[0], x[1], x[2]), (x[3], x[4])),
                lambda fx, c: (c[0], c[1], c[2], fx[0], fx[1]))))
        return _stack(mats, b4, b5)

    lhs = m1() @ m2()
    rhs = m3() @ m4() @ m5()
    if lhs.size == 0:
        return 0.0
    return float(np.abs(lhs - rhs).max())


def _stack(parts, rows_from, rows_to):
    mat = np.zeros((len(rows_from), len(rows_to)), dtype=complex)
    index = dict((x, i) for i, x in enumerate(rows_from))
    for src, sub in parts:
        for k, x in enumerate(src):
            mat[index[x]] += sub[k]
    return mat


def available_pentagons(data):
    data = as_bimodule(data)
    return [name for name, fams in sorted(PENTAGONS.items())
            if all(data.has(f) for f in fams)]


def verify_pentagons(data, families=None, tolerance=None):
    """Maximum residual of every pentagon instance, per family."""
    data = as_bimodule(data)
    tol = data.tolerance if tolerance is None else tolerance
    report = Report('pentagon', tol)
    if families is None:
        families = available_pentagons(data)
    for name in families:
        kinds = tuple(name)
        for fam in PENTAGONS[name]:
            if not data.has(fam):
                raise MissingBlock("pentagon %s needs family %s" % (name, fam))
        kt = PRODUCT_KIND[(PRODUCT_KIND[(PRODUCT_KIND[kinds[:2]],
                                         kinds[2])], kinds[3])]
        count = 0
        report.residuals.setdefault(name, 0.0)
        for p, q, r, s in itertools.product(*[range(data.rank(k))
                                              for k in kinds]):
            for t in range(data.rank(kt)):
                res = _pentagon(data, kinds, p, q, r, s, t)
                if res is not None:
                    count += 1
                    report.add(name, res, (p, q, r, s, t))
        debug("pentagon %s: %d instances, max residual %g", name, count,
              report.residuals[name])
    unit_report = verify_units(data, tol)
    report.residuals['units'] = unit_report.residuals.get('units', 0.0)
    report.witness.update(unit_report.witness)
    report.failures.extend(unit_report.failures)
    return report


def _unit_positions(family):
    return [i for i, k in enumerate(FAMILY_KINDS[family]) if k in 'CD']


def verify_units(data, tolerance=None):
    """Blocks with a unit outer strand must be the identity."""
    data = as_bimodule(data)
    tol = data.tolerance if tolerance is None else tolerance
    report = Report('units', tol)
    report.residuals['units'] = 0.0
    for fam in FAMILIES:
        if not data.has(fam):
            continue
        pos = _unit_positions(fam)
        for key, blk in data.f[fam].items():
            if any(key[i] == 0 for i in pos):
                res = np.abs(blk - np.eye(len(blk))).max()
                report.add('units', res, (fam,) + tuple(key))
    return report


def verify_unitarity(data, tolerance=None):
    """Per-block max |F F^dagger - 1|."""
    data = as_bimodule(data)
    tol = data.tolerance if tolerance is None else tolerance
    report = Report('unitarity', tol)
    for fam in FAMILIES:
        if not data.has(fam):
            continue
        report.residuals.setdefault(fam, 0.0)
        for key, blk in data.f[fam].items():
            res = np.abs(blk @ blk.conj().T - np.eye(len(blk))).max()
            report.add(fam, res, tuple(key))
    return report


def verify_dims(data):
    """Residuals of the left and right action dimension equations."""
    data = as_bimodule(data)
    out = {}
    out['left'] = float(np.abs(np.einsum('xac,c->xa', data.module.act, data.m)
                               - np.outer(data.d, data.m)).max())
    if data.ract is not None and data.right is not None:
        out['right'] = float(np.abs(
            np.einsum('ace,e->ac', data.ract, data.m)
            - np.outer(data.m, data.dd)).max())
    return out


# -- gauge transformations


def _is_unit_space(kinds, x, y):
    if kinds in ('CC', 'DD'):
        return x == 0 or y == 0
    if kinds == 'CM':
        return x == 0
    return y == 0


class GaugeTransform(object):
    """
    Unitary basis changes on fusion spaces.

    ``matrices[(kinds, x, y, z)]`` maps the old basis of the space to the
    new one: new_i = sum_j u[i, j] old_j.  Spaces without an entry keep
    their basis.
    """

    def __init__(self, matrices=None):
        self.matrices = {}
        for key, mat in (matrices or {}).items():
            self.matrices[tuple(key)] = np.asarray(mat, dtype=complex)

    def get(self, kinds, x, y, z, size):
        u = self.matrices.get((kinds, x, y, z))
        if u is None:
            return np.eye(size, dtype=complex)
        if u.shape != (size, size):
            raise ShapeMismatch("gauge on %s has shape %s, space has dim %d"
                                % ((kinds, x, y, z), u.shape, size))
        return u

    def is_identity(self, tol=1e-12):
        return all(np.abs(u - np.eye(len(u))).max() < tol
                   for u in self.matrices.values())

    def compose(self, other):
        """The transform applying self first, then other."""
        keys = set(self.matrices) | set(other.matrices)
        out = {}
        for k in keys:
            a = self.matrices.get(k)
            b = other.matrices.get(k)
            if a is None:
                out[k] = b
            elif b is None:
                out[k] = a
            else:
                out[k] = b @ a
        return GaugeTransform(out)


def _tree_matrix(data, family, key, trees, gauge, which):
    """Kronecker action of the per-vertex gauges on the row or column trees."""
    k1, k2, k3 = FAMILY_KINDS[family]
    a, b, c, d = key
    if which == 'rows':
        k12 = PRODUCT_KIND[(k1, k2)]
        first = lambda e: (k1 + k2, a, b, e)
        second = lambda e: (k12 + k3, e, c, d)
    else:
        k23 = PRODUCT_KIND[(k2, k3)]
        first = lambda f: (k2 + k3, b, c, f)
        second = lambda f: (k1 + k23, a, f, d)
    mat = np.zeros((len(trees), len(trees)), dtype=complex)
    by_mid = {}
    for i, (x, mid, y) in enumerate(trees):
        by_mid.setdefault(mid, []).append((i, x, y))
    for mid, items in by_mid.items():
        s1 = first(mid)
        s2 = second(mid)
        n1 = data.space(s1[0])[s1[1], s1[2], s1[3]]
        n2 = data.space(s2[0])[s2[1], s2[2], s2[3]]
        u1 = gauge.get(s1[0], s1[1], s1[2], s1[3], n1)
        u2 = gauge.get(s2[0], s2[1], s2[2], s2[3], n2)
        for i, x, y in items:
            for j, x2, y2 in items:
                mat[i, j] = u1[x, x2] * u2[y, y2]
    return mat


def apply_gauge(data, gauge):
    """Change fusion-space bases: F -> G_rows F G_cols^{-1} on every block."""
    data = as_bimodule(data)
    for (kinds, x, y, z), u in gauge.matrices.items():
        n = data.space(kinds)[x, y, z]
        if u.shape != (n, n):
            raise ShapeMismatch("gauge on %s has shape %s, space has dim %d"
                                % ((kinds, x, y, z), u.shape, n))
        if _is_unit_space(kinds, x, y) and \
                np.abs(u - np.eye(n)).max() > 1e-12:
            raise GaugeError("unit-strand space %s must keep its basis"
                             % ((kinds, x, y, z),))
    new = {}
    for fam in FAMILIES:
        if not data.has(fam):
            new[fam] = None
            continue
        fs = FSymbol()
        for key, blk in data.f[fam].items():
            gr = _tree_matrix(data, fam, key, data.rows(fam, key), gauge,
                              'rows')
            gc = _tree_matrix(data, fam, key, data.cols(fam, key), gauge,
                              'cols')
            fs[key] = gr @ blk @ sla.inv(gc)
        new[fam] = fs
    out = data.replace(**new)
    out.gauge = data.gauge.compose(gauge)
    return out


def random_gauge(data, rng, kinds=None):
    """Haar-random unitaries on every space without a unit strand."""
    data = as_bimodule(data)
    mats = {}
    for k, x, y, z in data.fusion_spaces():
        if kinds is not None and k not in kinds:
            continue
        if _is_unit_space(k, x, y):
            continue
        n = data.space(k)[x, y, z]
        if n == 1:
            phase = np.exp(2j * np.pi * rng.random())
            mats[(k, x, y, z)] = phase.reshape(1, 1)
        else:
            mats[(k, x, y, z)] = unitary_group.rvs(n, random_state=rng)
    return GaugeTransform(mats)


def canonical_gauge(data, tolerance=None):
    """
    Transform taking loaded data to the normalized gauge.

    Only data already normalized (unit-strand blocks equal to the identity)
    is accepted, so the returned transform is the identity.
    """
    report = verify_units(data, tolerance)
    if not report.passed:
        fam, witness, res = report.failures[0]
        raise GaugeError("block %s is not normalized (residual %g)"
                         % (witness, res))
    return GaugeTransform()


__all__ = ['MoritaError', 'NonUnitalFusion', 'NumericalFailure',
           'InconsistentAction', 'MissingBlock', 'ShapeMismatch', 'GaugeError',
           'FSymbol', 'SkeletalCategory', 'ModuleData', 'BimoduleData',
           'GaugeTransform', 'Report', 'compute_fp_dims',
           'compute_module_dims', 'verify_pentagons', 'verify_unitarity',
           'verify_units', 'verify_dims', 'apply_gauge', 'random_gauge',
           'canonical_gauge', 'as_bimodule', 'available_pentagons',
           'FAMILIES', 'FAMILY_KINDS', 'PENTAGONS']
