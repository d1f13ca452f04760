"""
Dual bimodule data from the representation theory of Ann(C, M).

The dual category D is realized as the category of graded *-representations
of the annular algebra: its simples are the irreps V_c, its tensor product is
the stacking product [x] and its fusion spaces are spaces of isometric
intertwiners.  Matrix elements of the irreps give F2, components of the
intertwiners give F3, and recoupling intertwiners inside a threefold stack
gives F4.
"""

import itertools

import numpy as np
import scipy.linalg as sla

from morita import repdecomp
from morita.annular import build_algebra
from morita.config import Config
from morita.logutil import debug, warn
from morita.skeletal import (MoritaError, GaugeError, FSymbol,
                             SkeletalCategory, ModuleData, BimoduleData,
                             as_bimodule, compute_fp_dims,
                             compute_module_dims, verify_pentagons,
                             verify_unitarity, verify_dims)


class GradingMismatch(MoritaError):
    pass


class PipelineInconsistent(MoritaError):
    pass


# pentagon families that involve the computed data
DUAL_PENTAGONS = ('CCMD', 'CMDD', 'MDDD', 'DDDD')


class GaugeFactors(object):
    """
    Normalization of the graded basis vectors of the irreps.

    The basis vector of Hom(a <| b, c) carries
    X^{a,b}_c = tau_b/(m_a m_c)^(1/4),
    with one unimodular tau per dual label.
    """

    def __init__(self, m_dims, tau=None):
        self.m = np.asarray(m_dims, dtype=float)
        if tau is not None:
            tau = np.asarray(tau, dtype=complex)
            if np.abs(np.abs(tau) - 1).max() > 1e-12:
                raise GaugeError("tau factors must have modulus one")
        self.tau = tau

    def __call__(self, a, b, c):
        t = 1.0 if self.tau is None else self.tau[b]
        return t / (self.m[a] * self.m[c]) ** 0.25


class IntertwinerTable(object):
    """
    Stacked modules V_a [x] V_b and the isometries V_c -> V_a [x] V_b.

    ``fusion[a, b, c]`` counts the intertwiners, i.e. the fusion rules of
    the dual category.
    """

    def __init__(self, irreps):
        n = len(irreps)
        self.irreps = irreps
        self.spaces = {}
        self.maps = {}
        self.fusion = np.zeros((n, n, n), dtype=int)
        for a, b in itertools.product(range(n), repeat=2):
            space = repdecomp.fuse(irreps[a], irreps[b])
            if space.pairs is None:
                raise GradingMismatch("Delta(1) is not diagonal on V_%d [x] "
                                      "V_%d" % (a, b))
            self.spaces[(a, b)] = space
            total = 0
            for c in range(n):
                found = repdecomp.intertwiners(irreps[a], irreps[b],
                                               irreps[c], space)
                if found:
                    self.maps[(a, b, c)] = found
                self.fusion[a, b, c] = len(found)
                total += len(found) * irreps[c].dim
            if total != space.dim:
                raise PipelineInconsistent("V_%d [x] V_%d has dimension %d "
                                           "but its irreducible parts only %d"
                                           % (a, b, space.dim, total))
        debug("dual fusion rules computed for %d irreps", n)

    def get(self, a, b, c, alpha):
        return self.maps[(a, b, c)][alpha].matrix


def dual_frame(data, irreps, table):
    """
    The bimodule skeleton D acts through: right action multiplicities from
    the sector dimensions and the dual fusion rules, without associators.
    """
    data = as_bimodule(data)
    nm = data.mrank
    ract = np.zeros((nm, len(irreps), nm), dtype=int)
    for c, v in enumerate(irreps):
        for b in range(nm):
            for f in range(nm):
                ract[b, c, f] = v.sector_dim(b, f)
    dims = compute_fp_dims(table.fusion)
    right = SkeletalCategory(table.fusion, None, [v.dual for v in irreps],
                             dims, name='dual')
    fpc = data.left.fpdim
    if abs(right.fpdim - fpc) > Config.fpdim_rtol * fpc:
        raise PipelineInconsistent("FPdim of the dual is %.12g, expected %.12g"
                                   % (right.fpdim, fpc))
    return BimoduleData(data.module, right, ract, tolerance=data.tolerance,
                        gauge=data.gauge)


def compute_f2(frame, irreps, factors=None):
    """F2 blocks read off from the matrix elements of the irreps."""
    if factors is None:
        factors = GaugeFactors(frame.m)
    d = frame.d
    m = frame.m
    f2 = FSymbol()
    for key in frame.block_keys('f2'):
        a, b, c, dd = key
        v = irreps[c]
        rows = frame.rows('f2', key)
        cols = frame.cols('f2', key)
        low = np.zeros((len(rows), len(cols)), dtype=complex)
        for i, (al, e, be) in enumerate(rows):
            out = v.index_of.get((e, be, dd))
            if out is None:
                raise GradingMismatch("irrep %d has no vector (%d, %d, %d)"
                                      % (c, e, be, dd))
            for j, (mu, f, nu) in enumerate(cols):
                inc = v.index_of.get((b, mu, f))
                if inc is None:
                    raise GradingMismatch("irrep %d has no vector (%d, %d, %d)"
                                          % (c, b, mu, f))
                w = (np.sqrt(d[a] * m[b] / m[e]) * factors(b, c, f)
                     / factors(e, c, dd))
                low[i, j] = v.tube((b, f, e, dd, a, al, nu))[out, inc] / w
        f2[key] = sla.inv(low.T)
    debug("F2: %d blocks", len(f2))
    return f2


def compute_f3(frame, table):
    """F3 blocks from the components of the intertwiners."""
    irreps = table.irreps
    f3 = FSymbol()
    for key in frame.block_keys('f3'):
        a, b, c, dd = key
        space = table.spaces[(b, c)]
        vb, vc = irreps[b], irreps[c]
        rows = frame.rows('f3', key)
        cols = frame.cols('f3', key)
        low = np.zeros((len(rows), len(cols)), dtype=complex)
        for i, (al, e, be) in enumerate(rows):
            n = space.index_of_stack.get((vb.index_of[(a, al, e)],
                                          vc.index_of[(e, be, dd)]))
            if n is None:
                raise GradingMismatch("no stacked vector for row %s of block "
                                      "%s" % ((al, e, be), key))
            for j, (mu, f, nu) in enumerate(cols):
                y = table.get(b, c, f, mu)
                low[i, j] = y[n, irreps[f].index_of[(a, nu, dd)]]
        f3[key] = sla.inv(low.T)
    debug("F3: %d blocks", len(f3))
    return f3


def _triple_index(irreps, a, b, c):
    """Basis of V_a [x] V_b [x] V_c, V_a lowest, as index triples."""
    va, vb, vc = irreps[a], irreps[b], irreps[c]
    index = {}
    for ia, ga in enumerate(va.grading):
        for ib, gb in enumerate(vb.grading):
            if gb[0] != ga[2]:
                continue
            for ic, gc in enumerate(vc.grading):
                if gc[0] == gb[2]:
                    index[(ia, ib, ic)] = len(index)
    return index


def _embed_lower(table, triple, a, b, e, alpha, c):
    """V_e [x] V_c -> V_a [x] V_b [x] V_c through Y_ab^{e;alpha}."""
    y = table.get(a, b, e, alpha)
    inner = table.spaces[(a, b)]
    outer = table.spaces[(e, c)]
    mat = np.zeros((len(triple), outer.dim), dtype=complex)
    for n, (ie, ic) in enumerate(outer.stack):
        for k, (ia, ib) in enumerate(inner.stack):
            t = triple.get((ia, ib, ic))
            if t is not None:
                mat[t, n] += y[k, ie]
    return mat


def _embed_upper(table, triple, a, b, c, f, mu):
    """V_a [x] V_f -> V_a [x] V_b [x] V_c through Y_bc^{f;mu}."""
    y = table.get(b, c, f, mu)
    inner = table.spaces[(b, c)]
    outer = table.spaces[(a, f)]
    mat = np.zeros((len(triple), outer.dim), dtype=complex)
    for n, (ia, jf) in enumerate(outer.stack):
        for k, (ib, ic) in enumerate(inner.stack):
            t = triple.get((ia, ib, ic))
            if t is not None:
                mat[t, n] += y[k, jf]
    return mat


def _unitarize(key, blk, tol):
    res = np.abs(blk @ blk.conj().T - np.eye(len(blk))).max()
    if res >= Config.polar_threshold:
        raise PipelineInconsistent("F4 block %s is off unitary by %g"
                                   % (key, res))
    if res >= tol:
        warn("F4 block %s repaired by polar decomposition (residual %g)",
             key, res)
    u, _ = sla.polar(blk)
    return u


def compute_f4(frame, table):
    """
    F4 blocks by recoupling.

    Both ways of embedding V_d into V_a [x] V_b [x] V_c give families of
    isometries L_(alpha,e,beta) and R_(mu,f,nu); the block holds their
    overlaps tr(R^dagger L)/dim V_d.
    """
    irreps = table.irreps
    tol = frame.tolerance
    f4 = FSymbol()
    triples = {}
    for key in frame.block_keys('f4'):
        a, b, c, dd = key
        if (a, b, c) not in triples:
            triples[(a, b, c)] = _triple_index(irreps, a, b, c)
        triple = triples[(a, b, c)]
        rows = frame.rows('f4', key)
        cols = frame.cols('f4', key)
        lefts = [_embed_lower(table, triple, a, b, e, al, c)
                 @ table.get(e, c, dd, be) for al, e, be in rows]
        rights = [_embed_upper(table, triple, a, b, c, f, mu)
                  @ table.get(a, f, dd, nu) for mu, f, nu in cols]
        blk = np.array([[np.vdot(r, l) for r in rights] for l in lefts])
        f4[key] = _unitarize(key, blk / irreps[dd].dim, tol)
    debug("F4: %d blocks", len(f4))
    return f4


def _require(report):
    if not report.passed:
        fam, witness, res = report.failures[0]
        raise PipelineInconsistent("assembled data fails %s check %s at %s "
                                   "(residual %g)" % (report.kind, fam,
                                                      witness, res))


def assemble_dual(mod, seed=None):
    """
    The invertible bimodule (C, M, D) with D the dual of C with respect to M.

    The result carries the irreps and the annular algebra it was computed
    from as ``irreps`` and ``algebra``.
    """
    data = as_bimodule(mod)
    _, maps = build_algebra(data)
    irreps = repdecomp.decompose(maps, seed)
    table = IntertwinerTable(irreps)
    frame = dual_frame(data, irreps, table)
    f2 = compute_f2(frame, irreps)
    f3 = compute_f3(frame, table)
    f4 = compute_f4(frame, table)
    right = SkeletalCategory(table.fusion, f4, frame.right.dual,
                             frame.right.fp_dims, name='dual')
    out = BimoduleData(data.module, right, frame.ract, f2, f3,
                       data.tolerance, data.gauge)
    dims = verify_dims(out)
    if dims['right'] > 1e-8 * max(1.0, out.m.max() * out.dd.max()):
        raise PipelineInconsistent("right action dimension equations "
                                   "violated by %g" % dims['right'])
    _require(verify_unitarity(out))
    _require(verify_pentagons(out, DUAL_PENTAGONS))
    out.irreps = irreps
    out.algebra = maps
    debug("dual category of rank %d, dims %s", right.rank,
          np.round(right.fp_dims, 6))
    return out


def restrict_left(data, labels):
    """
    Keep only the left labels in ``labels``, which must contain the unit and
    be closed under fusion.  Module dimensions are recomputed.
    """
    data = as_bimodule(data)
    keep = sorted(set(int(x) for x in labels))
    if not keep or keep[0] != 0:
        raise ValueError("restricted labels must contain the unit 0")
    new = dict((old, i) for i, old in enumerate(keep))
    fusion = data.left.fusion
    for a, b in itertools.product(keep, repeat=2):
        for c in np.flatnonzero(fusion[a, b]):
            if c not in new:
                raise ValueError("labels %s are not closed under fusion "
                                 "(%d x %d -> %d)" % (keep, a, b, c))

    def relabel(fs, positions):
        if fs is None:
            return None
        out = FSymbol()
        for key, blk in fs.items():
            if all(key[p] in new for p in positions):
                k = list(key)
                for p in positions:
                    k[p] = new[k[p]]
                out[tuple(k)] = blk
        return out

    left = SkeletalCategory(fusion[np.ix_(keep, keep, keep)],
                            relabel(data.left.f0, (0, 1, 2, 3)),
                            [new[data.left.dual[a]] for a in keep],
                            data.left.fp_dims[keep], data.left.name)
    act = data.module.act[keep]
    module = ModuleData(left, act, relabel(data.module.f1, (0, 1)),
                        compute_module_dims(act, left.fp_dims),
                        data.module.name)
    return BimoduleData(module, data.right, data.ract,
                        relabel(data.f['f2'], (0,)), data.f['f3'],
                        data.tolerance)


__all__ = ['GradingMismatch', 'PipelineInconsistent', 'GaugeFactors',
           'IntertwinerTable', 'DUAL_PENTAGONS', 'dual_frame', 'compute_f2',
           'compute_f3', 'compute_f4', 'assemble_dual', 'restrict_left']
