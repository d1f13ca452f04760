"""
Vec_G acting on Vec, and classical representation theory to check it against.

Groups are given by their multiplication tables with the identity at index
0; a 2-cocycle twists the module associator F1[g,h,*,*] = phi(g,h).
"""

import numpy as np
import scipy.linalg as sla

from morita.config import Config
from morita.logutil import debug, warn
from morita.dualdata import assemble_dual
from morita.repdecomp import cluster_eigenvalues
from morita.skeletal import (MoritaError, FSymbol, SkeletalCategory,
                             ModuleData, Report)


class GroupError(MoritaError):
    pass


class CocycleError(MoritaError):
    pass


class MismatchedRank(MoritaError):
    pass


class FiniteGroup(object):
    """A finite group as a multiplication table, identity at index 0."""

    def __init__(self, table, name=None):
        table = np.asarray(table)
        n = len(table)
        if table.shape != (n, n) or n == 0:
            raise GroupError("multiplication table must be square, got %s"
                             % (table.shape,))
        if np.any(table < 0) or np.any(table >= n):
            raise GroupError("table entries must be element indices")
        table = table.astype(int)
        ident = np.arange(n)
        if not (np.array_equal(table[0], ident) and
                np.array_equal(table[:, 0], ident)):
            raise GroupError("element 0 is not the identity")
        for g in range(n):
            if len(set(table[g])) != n or len(set(table[:, g])) != n:
                raise GroupError("element %d has no inverse" % g)
        # (gh)k == g(hk) for all triples
        if not np.array_equal(table[table], table[:, table]):
            raise GroupError("multiplication is not associative")
        self.table = table
        self.order = n
        self.name = name
        self.inverse = [int(np.flatnonzero(table[g] == 0)[0])
                        for g in range(n)]

    def mul(self, g, h):
        return int(self.table[g, h])

    def inv(self, g):
        return self.inverse[g]

    def element_order(self, g):
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    def to_jsondata(self):
        return dict(name=self.name, table=self.table.tolist())

    def __repr__(self):
        return '<FiniteGroup %s order=%d>' % (self.name or '?', self.order)


class Cocycle(object):
    """A normalized U(1)-valued 2-cocycle phi(g, h)."""

    def __init__(self, group, values, tolerance=1e-12):
        values = np.asarray(values, dtype=complex)
        n = group.order
        if values.shape != (n, n):
            raise CocycleError("cocycle table must be %dx%d, got %s"
                               % (n, n, values.shape))
        if np.abs(np.abs(values) - 1).max() > tolerance:
            raise CocycleError("cocycle values must have modulus one")
        if np.abs(values[0] - 1).max() > tolerance or \
                np.abs(values[:, 0] - 1).max() > tolerance:
            raise CocycleError("cocycle is not normalized")
        t = group.table
        # phi(g,h) phi(gh,k) = phi(g,hk) phi(h,k)
        lhs = values[:, :, None] * values[t]
        rhs = values[np.arange(n)[:, None, None], t[None, :, :]] \
            * values[None, :, :]
        res = np.abs(lhs - rhs).max()
        if res > tolerance:
            raise CocycleError("cocycle identity violated by %g" % res)
        self.group = group
        self.values = values

    @classmethod
    def trivial(cls, group):
        return cls(group, np.ones((group.order, group.order)))

    @property
    def is_trivial(self):
        return bool(np.all(self.values == 1))

    def to_jsondata(self):
        return dict(values=[[[float(z.real), float(z.imag)] for z in row]
                            for row in self.values])


def gen_vecg(group, phi=None):
    """(F0, F1) of Vec_G acting on Vec, twisted by phi."""
    if phi is None:
        phi = Cocycle.trivial(group)
    n = group.order
    fusion = np.zeros((n, n, n), dtype=int)
    for g in range(n):
        for h in range(n):
            fusion[g, h, group.mul(g, h)] = 1
    f0 = FSymbol()
    for a in range(n):
        for b in range(n):
            for c in range(n):
                f0[(a, b, c, group.mul(group.mul(a, b), c))] = [[1]]
    cat = SkeletalCategory(fusion, f0, group.inverse, np.ones(n),
                           name=group.name)
    f1 = FSymbol()
    for g in range(n):
        for h in range(n):
            f1[(g, h, 0, 0)] = [[phi.values[g, h]]]
    act = np.ones((n, 1, 1), dtype=int)
    return ModuleData(cat, act, f1, [np.sqrt(n)], name='Vec')


def regular_form(group):
    """Left regular permutation matrices L[g] with L[g] e_h = e_gh."""
    n = group.order
    reg = np.zeros((n, n, n))
    for g in range(n):
        reg[g, group.table[g], np.arange(n)] = 1
    return reg


class ClassicalIrreps(object):
    """Unitary irreps of a group, trivial first; ``characters[i, g]``."""

    def __init__(self, group, matrices):
        self.group = group
        self.matrices = matrices
        self.characters = np.array([np.einsum('gii->g', m) for m in matrices])

    @property
    def dims(self):
        return [m.shape[1] for m in self.matrices]

    def __len__(self):
        return len(self.matrices)


def classical_irreps(group, seed=None):
    """Split the regular representation by random elements of its commutant."""
    n = group.order
    if n > Config.max_group_order:
        raise GroupError("group of order %d exceeds max_group_order %d"
                         % (n, Config.max_group_order))
    rng = np.random.default_rng(Config.seed if seed is None else seed)
    reg = regular_form(group).astype(complex)
    pending = [np.eye(n, dtype=complex)]
    pieces = []
    failures = 0
    while pending:
        q = pending.pop(0)
        sub = np.einsum('ab,gac,cd->gbd', q.conj(), reg, q)
        chi = np.einsum('gii->g', sub)
        # dim of the commutant
        if round((np.abs(chi) ** 2).sum().real / n) == 1:
            pieces.append(sub)
            continue
        k = q.shape[1]
        z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        x = np.einsum('gab,bc,gdc->ad', sub, z + z.conj().T, sub.conj()) / n
        vals, vecs = sla.eigh((x + x.conj().T) / 2)
        groups = cluster_eigenvalues(vals, Config.cluster_tolerance)
        if len(groups) == 1:
            failures += 1
            warn("random commutant element did not split (try %d)", failures)
            if failures > Config.retries:
                raise GroupError("regular representation did not split")
            pending.append(q)
            continue
        pending.extend(q @ vecs[:, g] for g in groups)
    found = []
    for sub in pieces:
        chi = np.einsum('gii->g', sub)
        if any(abs(np.vdot(np.einsum('gii->g', old), chi) / n - 1) < 0.25
               for old in found):
            continue
        found.append(sub)
    found.sort(key=lambda m: (m.shape[1],
                              tuple(np.round(-np.einsum('gii->g', m).real,
                                             6))))
    debug("classical irreps of %s: dims %s", group.name,
          [m.shape[1] for m in found])
    return ClassicalIrreps(group, found)


def _group_tube_index(maps):
    return [maps.index[(0, 0, 0, 0, g, 0, 0)]
            for g in range(len(maps.data.d))]


def crosscheck_vecg(group, seed=None, tolerance=None):
    """
    Compare the computed dual of (Vec_G, Vec) with classical representation
    theory of G.
    """
    tol = Config.tolerance if tolerance is None else tolerance
    n = group.order
    dual = assemble_dual(gen_vecg(group), seed)
    classical = classical_irreps(group, seed)
    if len(dual.irreps) != len(classical):
        raise MismatchedRank("pipeline found %d irreps, classical %d"
                             % (len(dual.irreps), len(classical)))
    report = Report('vecg', tol)
    idx = _group_tube_index(dual.algebra)

    # characters up to a permutation of the irreps
    table = classical.characters
    used = set()
    for v in dual.irreps:
        chi = v.char[idx]
        dist = np.abs(table - chi[None, :]).max(axis=1)
        best = int(np.argmin(dist))
        if best in used:
            raise MismatchedRank("irrep %d matches an already matched "
                                 "classical character" % v.id)
        used.add(best)
        report.add('characters', dist[best], (v.id, best))

    # F2[g,*,c,*] as representation matrices
    nd = dual.right.rank
    mats = [np.array([dual.block('f2', (g, 0, c, 0)) for g in range(n)])
            for c in range(nd)]
    for c, m in enumerate(mats):
        res = np.abs(np.einsum('gab,hbc->ghac', m, m)
                     - m[group.table]).max()
        report.add('f2_representation', res, (c,))
    chis = np.array([np.einsum('gii->g', m) for m in mats])
    report.add('character_orthogonality',
               np.abs(chis @ chis.conj().T / n - np.eye(nd)).max(), ())
    for c in range(nd):
        for c2 in range(nd):
            s = np.einsum('gab,gcd->abcd', mats[c], mats[c2].conj())
            expect = np.zeros_like(s)
            if c == c2:
                k = len(mats[c][0])
                expect = np.einsum('ac,bd->abcd', np.eye(k),
                                   np.eye(k)) * n / k
            report.add('matrix_orthogonality', np.abs(s - expect).max(),
                       (c, c2))

    # Clebsch-Gordan coefficients from F3 intertwine the F2 representations
    reps = [np.array([dual.lowered('f2', (g, 0, c, 0)) for g in range(n)])
            for c in range(nd)]
    for key in dual.block_keys('f3'):
        _, b, c, _ = key
        low = dual.lowered('f3', key)
        for j, (mu, f, nu) in enumerate(dual.cols('f3', key)):
            if nu != 0:
                continue
            y = np.array([low[:, dual.cols('f3', key).index((mu, f, k))]
                          for k in range(len(reps[f][0]))]).T
            lhs = np.einsum('gab,gcd->gacbd', reps[b], reps[c]).reshape(
                n, len(y), len(y)) @ y
            rhs = y @ reps[f]
            report.add('clebsch_gordan', np.abs(lhs - rhs).max(),
                       (b, c, f, mu))
    debug("crosscheck %s: max residual %g", group.name, report.max_residual)
    return report


__all__ = ['GroupError', 'CocycleError', 'MismatchedRank', 'FiniteGroup',
           'Cocycle', 'ClassicalIrreps', 'gen_vecg', 'regular_form',
           'classical_irreps', 'crosscheck_vecg']
