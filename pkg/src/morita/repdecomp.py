"""
Irreducible *-representations of the annular algebra.

The regular representation is made unitary with the inner product
<u, v> = lambda(u* v) and split by eigenspaces of random Hermitian elements
of its commutant.  Commutant elements come from the Haar average

    X_M = rho_W(S(Lambda_(1))) M rho_V(Lambda_(2))

which maps any matrix M : V -> W into Hom_A(V, W).

Irreps carry a grading: every basis vector lies in a sector (b, f) cut out
by the unit summand p_{b,f}, i.e. it is a vector of Hom(b <| c, f).  The
grading entry of a basis vector is (b, mu, f), mu counting vectors inside the
sector.

Two graded modules V (drawn below) and W (drawn above) are stacked into
V [x] W, the image of Delta(1) inside W (x) V: the upper module sits in the
first tensor leg of the coproduct.
"""

import numpy as np
import scipy.linalg as sla

from morita.annular import TubeLabel, inner_product_matrix
from morita.config import Config
from morita.logutil import debug, warn
from morita.skeletal import MoritaError


class DecompositionFailure(MoritaError):
    pass


class DegenerateSpectrum(MoritaError):
    pass


class RankAmbiguous(MoritaError):
    pass


def fix_phase(vec):
    """Make the first entry of largest modulus real and positive."""
    flat = np.ravel(vec)
    mags = np.abs(flat)
    top = mags.max()
    if top == 0:
        return vec
    k = int(np.flatnonzero(mags >= top * (1 - 1e-8))[0])
    return vec * (abs(flat[k]) / flat[k])


class Representation(object):
    """Matrices rho(e_i) for every basis tube e_i."""

    def __init__(self, maps, matrices, grading=None):
        self.maps = maps
        self.matrices = np.asarray(matrices, dtype=complex)
        self.grading = grading

    @property
    def dim(self):
        return self.matrices.shape[1]

    def of(self, u):
        """Matrix of an AlgElement."""
        return np.tensordot(u.coeffs, self.matrices, axes=1)

    def of_coeffs(self, coeffs):
        return np.tensordot(coeffs, self.matrices, axes=1)

    def tube(self, label):
        return self.matrices[self.maps.index[TubeLabel(*label)]]

    def restrict(self, q):
        """The subrepresentation on the orthonormal columns of q."""
        return Representation(self.maps,
                              np.einsum('ab,iac,cd->ibd', q.conj(),
                                        self.matrices, q))

    def character(self):
        return np.einsum('ijj->i', self.matrices)

    def sector_indices(self):
        out = {}
        for i, (b, mu, f) in enumerate(self.grading or ()):
            out.setdefault((b, f), []).append(i)
        return out


class Irrep(Representation):

    def __init__(self, maps, matrices, grading, ident=None):
        Representation.__init__(self, maps, matrices, grading)
        self.id = ident
        self.char = self.character()
        self.index_of = dict((g, i) for i, g in enumerate(grading))

    def sector_dim(self, b, f):
        return len(self.sector_indices().get((b, f), ()))

    def signature(self):
        nm = self.maps.rank_m
        sec = self.sector_indices()
        return tuple(len(sec.get((b, f), ())) for b in range(nm)
                     for f in range(nm))

    def to_jsondata(self):
        return dict(id=self.id,
                    dim=self.dim,
                    grading=[list(g) for g in self.grading],
                    character=[[float(z.real), float(z.imag)]
                               for z in self.char])

    def __repr__(self):
        return '<Irrep %s dim=%d>' % (self.id, self.dim)


def character(V, t):
    """chi_V(t) for a single tube t."""
    return complex(np.trace(V.tube(t)))


class Intertwiner(object):
    """Isometry V_c -> V_a [x] V_b (V_a drawn below V_b)."""

    def __init__(self, a, b, c, alpha, matrix, space):
        self.a = a
        self.b = b
        self.c = c
        self.alpha = alpha
        self.matrix = matrix
        self.space = space


# -- Haar averaging


def _haar_split(maps):
    """Nonzero terms (coeff, j, k) of Delta(Lambda) = sum coeff e_j (x) e_k."""
    cached = getattr(maps, '_haar_split', None)
    if cached is not None:
        return cached
    cl = np.einsum('i,ijk->jk', maps.haar_vec, maps.coproduct)
    js, ks = np.nonzero(np.abs(cl) > Config.prune_tolerance)
    split = (cl[js, ks], js, ks)
    maps._haar_split = split
    return split


def _antipode_images(maps, rep):
    """rho(S(e_j)) for every basis tube."""
    return np.einsum('mj,mab->jab', maps.antipode, rep.matrices)


def commutant_projection(V, W, M):
    """X_M = rho_W(S(Lambda_(1))) M rho_V(Lambda_(2)), a map V -> W."""
    maps = V.maps
    coeff, js, ks = _haar_split(maps)
    sw = _antipode_images(maps, W)[js]
    return np.einsum('t,tab,bd,tdc->ac', coeff, sw, M, V.matrices[ks],
                     optimize=True)


def _hom_superoperator(V, W):
    """Matrix of M -> X_M on row-major flattened M (dim W x dim V)."""
    maps = V.maps
    coeff, js, ks = _haar_split(maps)
    sw = _antipode_images(maps, W)[js]
    t = np.einsum('t,tab,tdc->acbd', coeff, sw, V.matrices[ks],
                  optimize=True)
    return t.reshape(W.dim * V.dim, W.dim * V.dim)


def _hom_space(V, W):
    sup = _hom_superoperator(V, W)
    u, s, _ = sla.svd(sup)
    tol = Config.rank_tolerance
    if np.any((s > tol) & (s < 0.5)):
        raise RankAmbiguous("singular values %s do not separate"
                            % np.round(s[(s > tol) & (s < 0.5)], 4))
    rank = int((s >= 0.5).sum())
    return rank, u[:, :rank]


def hom_dim(V, W):
    """dim Hom_A(V, W)."""
    return _hom_space(V, W)[0]


def schur_pair(V, W):
    """<chi_V* chi_W, Lambda>; delta(V, W) for irreps."""
    coeff, js, ks = _haar_split(V.maps)
    cv = dual_character(V)
    cw = W.character() if not isinstance(W, Irrep) else W.char
    return complex(np.sum(coeff * cv[js] * cw[ks]))


def dual_character(V):
    """chi*(x) = conj(chi(S(x)*))."""
    maps = V.maps
    chi = V.char if isinstance(V, Irrep) else V.character()
    return (chi @ maps.star @ maps.antipode.conj()).conj()


# -- tensor products


class TensorModule(Representation):
    """
    V (x) W restricted to the image of Delta(1).

    ``pairs[n] = (i, j)`` when basis vector n is e_i (x) f_j; ``embedding``
    holds the basis as columns in the full product space.
    """

    def __init__(self, maps, matrices, embedding, pairs, grading):
        Representation.__init__(self, maps, matrices, grading)
        self.embedding = embedding
        self.pairs = pairs
        self.index_of_pair = (dict((p, n) for n, p in enumerate(pairs))
                              if pairs is not None else None)


def tensor_module(V, W):
    """The Delta-action on Delta(1)(V (x) W), with an orthonormal basis."""
    maps = V.maps
    dv, dw = V.dim, W.dim
    full = np.einsum('ijk,jab,kcd->iacbd', maps.coproduct, V.matrices,
                     W.matrices, optimize=True).reshape(maps.dim, dv * dw,
                                                        dv * dw)
    proj = np.tensordot(maps.unit_vec, full, axes=1)
    off = proj - np.diag(np.diag(proj))
    pairs = None
    grading = None
    if np.abs(off).max() < Config.tolerance:
        keep = np.flatnonzero(np.diag(proj).real > 0.5)
        q = np.zeros((dv * dw, len(keep)), dtype=complex)
        q[keep, np.arange(len(keep))] = 1
        pairs = [(int(n // dw), int(n % dw)) for n in keep]
        if V.grading is not None and W.grading is not None:
            grading = [(W.grading[j][0], (i, j), V.grading[i][2])
                       for i, j in pairs]
    else:
        vals, vecs = sla.eigh((proj + proj.conj().T) / 2)
        q = vecs[:, vals > 0.5]
    mats = np.einsum('ab,iac,cd->ibd', q.conj(), full, q)
    return TensorModule(maps, mats, q, pairs, grading)


def fuse(lower, upper):
    """lower [x] upper; ``stack[n]`` is (lower index, upper index)."""
    tm = tensor_module(upper, lower)
    if tm.pairs is not None:
        tm.stack = [(j, i) for i, j in tm.pairs]
        tm.index_of_stack = dict((s, n) for n, s in enumerate(tm.stack))
    return tm


def intertwiners(A, B, C, space=None):
    """Orthonormal isometries V_C -> V_A [x] V_B commuting with the action."""
    if space is None:
        space = fuse(A, B)
    rank, vecs = _hom_space(C, space)
    out = []
    for alpha in range(rank):
        x = vecs[:, alpha].reshape(space.dim, C.dim) * np.sqrt(C.dim)
        out.append(Intertwiner(A.id, B.id, C.id, alpha, fix_phase(x), space))
    return out


# -- decomposition


def regular_representation(maps):
    """Left regular action in coordinates orthonormal for lambda(u* v)."""
    gram = inner_product_matrix(maps)
    gram = (gram + gram.conj().T) / 2
    try:
        r = sla.cholesky(gram)
    except sla.LinAlgError:
        raise DecompositionFailure("lambda(u* u) is not positive definite")
    rinv = sla.solve_triangular(r, np.eye(len(r)))
    mats = np.einsum('ab,ibc,cd->iad', r, maps.left_regular(), rinv)
    return Representation(maps, mats)


def cluster_eigenvalues(vals, tol):
    """Index groups of sorted eigenvalues separated by gaps above tol."""
    scale = max(1.0, np.abs(vals).max())
    groups = [[0]]
    for k in range(1, len(vals)):
        if vals[k] - vals[k - 1] > tol * scale:
            groups.append([k])
        else:
            groups[-1].append(k)
    return groups


def _random_hermitian(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (z + z.conj().T) / 2


def split_irreducible(rep, rng, retries=None):
    """Orthonormal bases (columns) of irreducible pieces of rep."""
    retries = Config.retries if retries is None else retries
    tol = Config.cluster_tolerance
    pending = [np.eye(rep.dim, dtype=complex)]
    done = []
    failures = 0
    while pending:
        q = pending.pop(0)
        sub = rep.restrict(q)
        if sub.dim == 1:
            done.append(q)
            continue
        x = commutant_projection(sub, sub, _random_hermitian(rng, sub.dim))
        vals, vecs = sla.eigh((x + x.conj().T) / 2)
        groups = cluster_eigenvalues(vals, tol)
        if len(groups) > 1:
            pending.extend(q @ vecs[:, g] for g in groups)
            continue
        if hom_dim(sub, sub) == 1:
            done.append(q)
            continue
        failures += 1
        warn("commutant element did not split a %d-dim piece (try %d)",
             sub.dim, failures)
        if failures > retries:
            raise DegenerateSpectrum("no splitting after %d random draws"
                                     % retries)
        pending.append(q)
    return done


def _graded_basis(maps, rep):
    """Orthonormal basis adapted to the sectors p_{b,f}, with grading."""
    nm = maps.rank_m
    cols = []
    grading = []
    for b in range(nm):
        for f in range(nm):
            p = rep.of(maps.idempotent(b, f))
            vals, vecs = sla.eigh((p + p.conj().T) / 2)
            mu = 0
            for k in np.flatnonzero(vals > 0.5):
                cols.append(fix_phase(vecs[:, k]))
                grading.append((b, mu, f))
                mu += 1
    if len(cols) != rep.dim:
        raise DecompositionFailure("sector projectors do not resolve the "
                                   "identity (%d of %d vectors)"
                                   % (len(cols), rep.dim))
    return np.array(cols).T, grading


def _normalize_trivial(maps, irrep):
    """Phase the trivial irrep so that rho(tube(0,0->e,e; a,x,a)) > 0."""
    act = maps.data.module.act
    phases = np.ones(irrep.dim, dtype=complex)
    base = irrep.index_of.get((0, 0, 0))
    if base is None:
        raise DecompositionFailure("trivial irrep has no (0, 0) sector")
    for (e, mu, f), n in irrep.index_of.items():
        if n == base:
            continue
        xs = [x for x in range(act.shape[0]) if act[x, 0, e]]
        if e != f or mu != 0 or not xs:
            raise DecompositionFailure("trivial irrep sector (%d, %d) is "
                                       "not reachable from (0, 0)" % (e, f))
        z = irrep.tube((0, 0, e, e, xs[0], 0, 0))[n, base]
        phases[n] = z / abs(z)
    mats = np.einsum('a,iab,b->iab', phases.conj(), irrep.matrices, phases)
    return Irrep(maps, mats, irrep.grading)


def _char_key(chi):
    return tuple((round(float(z.real), 6), round(float(z.imag), 6))
                 for z in chi)


def decompose(maps, seed=None):
    """All inequivalent irreps of Ann(C, M), trivial first."""
    if seed is None:
        seed = Config.seed
    rng = np.random.default_rng(seed)
    reg = regular_representation(maps)
    pieces = split_irreducible(reg, rng)
    debug("regular representation split into %d irreducible pieces",
          len(pieces))
    found = []
    for q in pieces:
        sub = reg.restrict(q)
        basis, grading = _graded_basis(maps, sub)
        cand = Irrep(maps, sub.restrict(basis).matrices, grading)
        if any(abs(schur_pair(cand, old) - 1) < 0.25 for old in found):
            continue
        found.append(cand)
    total = sum(v.dim ** 2 for v in found)
    if total != maps.dim:
        raise DecompositionFailure("irreps account for %d of %d dimensions"
                                   % (total, maps.dim))
    lam = maps.haar_vec
    trivial = [v for v in found if abs(v.char @ lam - 1) < 1e-6]
    if len(trivial) != 1:
        raise DecompositionFailure("found %d irreps with chi(Lambda) = 1"
                                   % len(trivial))
    rest = sorted((v for v in found if v is not trivial[0]),
                  key=lambda v: (v.dim, v.signature(), _char_key(v.char)))
    irreps = [_normalize_trivial(maps, trivial[0])] + rest
    for n, v in enumerate(irreps):
        v.id = n
    assign_duals(irreps)
    debug("irrep dimensions: %s", [v.dim for v in irreps])
    return irreps


def assign_duals(irreps):
    """Set ``dual`` on every irrep from chi_a* = chi_abar."""
    for v in irreps:
        target = dual_character(v)
        hits = [w.id for w in irreps if np.abs(w.char - target).max() < 1e-6]
        if len(hits) != 1:
            raise DecompositionFailure("irrep %d has %d dual candidates"
                                       % (v.id, len(hits)))
        v.dual = hits[0]


# -- diagnostics


def verify_irrep(V):
    """Residuals of the defining properties of a graded *-irrep."""
    maps = V.maps
    out = {}
    adj = np.einsum('ki,kab->iab', maps.star, V.matrices)
    # rho(e_i*) versus rho(e_i)^dagger
    out['star'] = float(np.abs(adj - V.matrices.conj().transpose(0, 2, 1))
                        .max())
    out['unit'] = float(np.abs(V.of(maps.unit()) - np.eye(V.dim)).max())
    prod = np.einsum('ijk,kab->ijab', maps.product, V.matrices)
    out['homomorphism'] = float(np.abs(
        prod - np.einsum('iab,jbc->ijac', V.matrices, V.matrices)).max())
    worst = 0.0
    for n, t in enumerate(maps.basis):
        mat = V.matrices[n]
        for (b, mu, f), i in V.index_of.items():
            for (e, nu, d), j in V.index_of.items():
                if (b, f) != (t.a, t.b) or (e, d) != (t.c, t.d):
                    worst = max(worst, abs(mat[j, i]))
    out['grading'] = float(worst)
    out['hom_dim'] = hom_dim(V, V)
    return out


def check_grouplike_trace(maps, V, d_v):
    """Grouplike trace residual.

    Compares rho(Lambda_(2) S(Lambda_(1))) with dim V/(eps(1) d_V) rho(g^-1).
    """
    coeff, js, ks = _haar_split(maps)
    sv = _antipode_images(maps, V)
    lhs = np.einsum('t,tab,tbc->ac', coeff, V.matrices[ks], sv[js])
    eps1 = maps.rank_m
    rhs = V.dim / (eps1 * d_v) * V.of_coeffs(maps.grouplike_inv_vec)
    return float(np.abs(lhs - rhs).max())


def intertwiner_residual(itw, C):
    space = itw.space
    lhs = np.einsum('ab,ibc->iac', itw.matrix, C.matrices)
    rhs = np.einsum('iab,bc->iac', space.matrices, itw.matrix)
    iso = itw.matrix.conj().T @ itw.matrix - np.eye(C.dim)
    return float(max(np.abs(lhs - rhs).max(), np.abs(iso).max()))


__all__ = ['DecompositionFailure', 'DegenerateSpectrum', 'RankAmbiguous',
           'Representation', 'Irrep', 'Intertwiner', 'TensorModule',
           'character', 'commutant_projection', 'hom_dim', 'schur_pair',
           'dual_character', 'tensor_module', 'fuse', 'intertwiners',
           'regular_representation', 'split_irreducible', 'decompose',
           'assign_duals', 'verify_irrep', 'check_grouplike_trace',
           'intertwiner_residual', 'fix_phase', 'cluster_eigenvalues']
