"""
Invertibility of bimodule categories.

A (C, D)-bimodule M is invertible exactly when FPdim C = FPdim D and the
characters read off from F2 are orthonormal.  The checks here work on any
BimoduleData carrying F2 (and F3 for the MPO identity); they never require
the data to be invertible and report residuals instead.
"""

import itertools

import numpy as np

from morita.config import Config
from morita.logutil import debug, warn
from morita.skeletal import MissingBlock, Report, as_bimodule


MISSING_IRREPS = 'MissingIrreps'
DUPLICATE_LABELS = 'DuplicateLabels'
REDUCIBLE_LABELS = 'ReducibleLabels'


class Verdict(object):
    """Outcome of check_invertible with its diagnosis."""

    def __init__(self, invertible, fpdim_c, fpdim_d, gram, failure_modes,
                 definitive=True):
        self.invertible = invertible
        self.fpdim_c = fpdim_c
        self.fpdim_d = fpdim_d
        self.gram = gram
        # (mode, witness, message)
        self.failure_modes = failure_modes
        self.definitive = definitive

    @property
    def modes(self):
        return sorted(set(m for m, _, _ in self.failure_modes))

    def reasons(self):
        return ['%s: %s' % (m, msg) for m, _, msg in self.failure_modes]

    def to_jsondata(self):
        return dict(invertible=self.invertible,
                    definitive=self.definitive,
                    fpdim_c=self.fpdim_c,
                    fpdim_d=self.fpdim_d,
                    gram=[[[float(z.real), float(z.imag)] for z in row]
                          for row in self.gram],
                    failure_modes=[dict(mode=m, witness=list(w), reason=msg)
                                   for m, w, msg in self.failure_modes])

    def __repr__(self):
        return '<Verdict invertible=%s %s>' % (self.invertible, self.modes)


def _require_f2(data):
    if not data.has('f2') or data.right is None or data.ract is None:
        raise MissingBlock("F2 and the right action are required")


def _trace_sums(data, lowered):
    """
    sum_mu F2[a,b,c,d; (alpha,b,mu); (mu,d,beta)] for every (a,b,d,alpha,beta)
    as a vector over the D-labels c.
    """
    nd = data.right.rank
    out = {}
    for key in data.f['f2'].keys():
        a, b, c, d = key
        get = data.lowered_entry if lowered else data.entry
        rows = data.rows('f2', key)
        cols = set(data.cols('f2', key))
        for al, e, mu in rows:
            if e != b:
                continue
            for be in range(data.module.act[a, d, d]):
                if (mu, d, be) not in cols:
                    continue
                vec = out.setdefault((a, b, d, al, be),
                                     np.zeros(nd, dtype=complex))
                vec[c] += get('f2', key, (al, e, mu), (mu, d, be))
    return out


def character_gram(data):
    """
    Gram matrix of the characters carried by F2; the identity exactly when
    the D-labels are distinct irreducible representations of Ann(C, M).
    """
    data = as_bimodule(data)
    _require_f2(data)
    d = data.d
    m = data.m
    direct = _trace_sums(data, False)
    lowered = _trace_sums(data, True)
    gram = np.zeros((data.right.rank,) * 2, dtype=complex)
    for k, s in direct.items():
        t = lowered.get(k)
        if t is None:
            continue
        a, b = k[0], k[1]
        gram += d[a] / m[b] ** 2 * np.outer(s, t)
    return gram / data.mrank


def character_from_f2(data, c, basis):
    """
    chi_c on every tube of ``basis`` from F2 alone:
    chi_c(tube(b,f -> b,f; alpha,a,nu)) = sqrt(d_a) sum_mu
    F2inv[a,b,c,f; (alpha,b,mu); (mu,f,nu)], and zero off the diagonal
    sectors.
    """
    data = as_bimodule(data)
    _require_f2(data)
    d = data.d
    chi = np.zeros(len(basis), dtype=complex)
    for n, t in enumerate(basis):
        if t.a != t.c or t.b != t.d:
            continue
        key = (t.x, t.a, c, t.b)
        if key not in data.f['f2']:
            continue
        cols = set(data.cols('f2', key))
        for mu in range(data.ract[t.a, c, t.b]):
            if (mu, t.b, t.beta) in cols:
                chi[n] += data.lowered_entry('f2', key, (t.alpha, t.a, mu),
                                             (mu, t.b, t.beta))
        chi[n] *= np.sqrt(d[t.x])
    return chi


def check_invertible(data, tolerance=None):
    """FPdim equality and orthonormality of the F2 characters, diagnosed."""
    data = as_bimodule(data)
    _require_f2(data)
    tol = data.tolerance if tolerance is None else tolerance
    fc = data.left.fpdim
    fd = data.right.fpdim
    gram = character_gram(data)
    n = len(gram)
    diag = gram.diagonal().real
    modes = []
    for c in range(n):
        if diag[c] > 1.5:
            modes.append((REDUCIBLE_LABELS, (c,),
                          'label %d carries a reducible representation '
                          '(self-overlap %g)' % (c, round(diag[c], 9))))
    for c, c2 in itertools.combinations(range(n), 2):
        if abs(gram[c, c2]) > 0.5 and diag[c] < 1.5 and diag[c2] < 1.5:
            modes.append((DUPLICATE_LABELS, (c, c2),
                          'labels %d and %d carry the same representation'
                          % (c, c2)))
    gram_ok = np.abs(gram - np.eye(n)).max() < tol
    fpdim_ok = abs(fc - fd) < Config.fpdim_rtol * max(fc, fd)
    if gram_ok and not fpdim_ok:
        modes.append((MISSING_IRREPS, (),
                      'FPdim %g ≠ %g' % (fc, fd)))
    definitive = data.has('f3')
    if not definitive:
        warn("no F3 given; the verdict only tests necessary conditions")
    verdict = Verdict(bool(gram_ok and fpdim_ok), fc, fd, gram, modes,
                      definitive)
    debug("check_invertible: %r", verdict)
    return verdict


def _orthogonality_sums(data):
    """
    sum_{a,alpha,nu} d_a F2[a,b,c,d; (alpha,e,beta); (mu,f,nu)]
    F2inv[a,b,c',d; (alpha,e,beta'); (mu',f,nu)] keyed by (b,d,e,f,c,c'),
    as matrices with rows (beta, mu) and columns (beta', mu').
    """
    nm = data.mrank
    nd = data.right.rank
    ract = data.ract
    d = data.d
    sums = {}
    for b, dd, e, f in itertools.product(range(nm), repeat=4):
        for c, c2 in itertools.product(range(nd), repeat=2):
            r1 = ract[e, c, dd] * ract[b, c, f]
            r2 = ract[e, c2, dd] * ract[b, c2, f]
            if r1 and r2:
                sums[(b, dd, e, f, c, c2)] = np.zeros((r1, r2), dtype=complex)
    blocks = data.f['f2'].keys()
    for (a, b, c, dd), (a2, b2, c2, dd2) in itertools.product(blocks,
                                                             repeat=2):
        if (a, b, dd) != (a2, b2, dd2):
            continue
        key1 = (a, b, c, dd)
        key2 = (a, b, c2, dd)
        blk = data.block('f2', key1)
        low = data.lowered('f2', key2)
        rows1, cols1 = data.rows('f2', key1), data.cols('f2', key1)
        rows2, cols2 = data.rows('f2', key2), data.cols('f2', key2)
        for (i, (al, e, be)), (j, (mu, f, nu)) in itertools.product(
                enumerate(rows1), enumerate(cols1)):
            acc = sums.get((b, dd, e, f, c, c2))
            if acc is None:
                continue
            n1 = ract[b, c, f]
            n2 = ract[b, c2, f]
            for i2, (al2, e2, be2) in enumerate(rows2):
                if (al2, e2) != (al, e):
                    continue
                for j2, (mu2, f_, nu2) in enumerate(cols2):
                    if (f_, nu2) != (f, nu):
                        continue
                    acc[be * n1 + mu, be2 * n2 + mu2] += \
                        d[a] * blk[i, j] * low[i2, j2]
    return sums


def check_matrix_orthogonality(data, tolerance=None):
    """
    Residuals of the orthogonality of F2 matrix elements.

    Summed over a in C with weight d_a, the products of F2 elements with
    the matching elements of the inverse blocks must equal

        delta(c,c') delta(beta,beta') delta(mu,mu') m_e m_f / d_c
            * FPdim C / FPdim D.

    The factor FPdim C / FPdim D is 1 for invertible data.  With it the
    relation is the reduced form of the MPO-injectivity identity and holds
    exactly when that identity does, so the two checks in
    check_mpo_injectivity agree on non-invertible data too.
    """
    data = as_bimodule(data)
    _require_f2(data)
    tol = data.tolerance if tolerance is None else tolerance
    report = Report('orthogonality', tol)
    report.residuals['matrix_elements'] = 0.0
    m = data.m
    dd = data.dd
    ratio = data.left.fpdim / data.right.fpdim
    sums = _orthogonality_sums(data)
    for b, d, e, f, c, c2 in sorted(sums):
        acc = sums[(b, d, e, f, c, c2)]
        expect = np.zeros_like(acc)
        if c == c2:
            expect = np.eye(len(acc)) * m[e] * m[f] / dd[c] * ratio
        report.add('matrix_elements', np.abs(acc - expect).max(),
                   (b, d, e, f, c, c2))
    return report


def _mpo_residuals(data, report):
    nm = data.mrank
    nd = data.right.rank
    nc = data.left.rank
    act = data.module.act
    ract = data.ract
    nD = data.right.fusion
    d, m, dd = data.d, data.m, data.dd
    fpc = data.left.fpdim
    fpd = data.right.fpdim
    ent = data.entry
    low = data.lowered_entry
    for b, e, f, d_, j, k in itertools.product(range(nm), repeat=6):
        for g, h, cp in itertools.product(range(nd), repeat=3):
            mults = [ract[e, g, k], ract[b, g, j], ract[k, h, d_],
                     ract[j, h, f], ract[e, cp, d_], ract[b, cp, f]]
            if not all(mults):
                continue
            pre = m[e] * m[f] / (dd[cp] * fpd)
            for g0, g1, e0, e1, bp, mp in itertools.product(
                    *[range(n) for n in mults]):
                lhs = 0j
                for z in range(nD[g, h, cp]):
                    lhs += (low('f3', (b, g, h, f), (g1, j, e1), (z, cp, mp))
                            * ent('f3', (e, g, h, d_), (g0, k, e0),
                                 (z, cp, bp)))
                lhs *= pre
                rhs = 0j
                for a in range(nc):
                    for al, nu, eta in itertools.product(
                            range(act[a, b, e]), range(act[a, f, d_]),
                            range(act[a, j, k])):
                        rhs += (d[a] / fpc
                                * low('f2', (a, b, cp, d_), (al, e, bp),
                                      (mp, f, nu))
                                * ent('f2', (a, b, g, k), (al, e, g0),
                                     (g1, j, eta))
                                * ent('f2', (a, j, h, d_), (eta, k, e0),
                                     (e1, f, nu)))
                report.add('mpo', abs(lhs - rhs),
                           (b, e, f, d_, j, k, g, h, cp))


def check_mpo_injectivity(data, tolerance=None):
    """
    Residual of the MPO-injectivity identity relating F3 to products of F2,
    together with its reduced form (the matrix-element orthogonality) and
    whether the two verdicts agree.
    """
    data = as_bimodule(data)
    _require_f2(data)
    if not data.has('f3'):
        raise MissingBlock("the MPO identity needs F3")
    tol = data.tolerance if tolerance is None else tolerance
    report = Report('mpo', tol)
    report.residuals['mpo'] = 0.0
    _mpo_residuals(data, report)
    mpo_ok = report.passed
    reduced = check_matrix_orthogonality(data, tol)
    report.residuals['reduced'] = reduced.residuals['matrix_elements']
    report.witness.update(('reduced', w) for f, w in reduced.witness.items())
    report.failures.extend(('reduced', w, r) for f, w, r in reduced.failures)
    report.agreement = mpo_ok == reduced.passed
    if not report.agreement:
        warn("MPO identity and matrix-element orthogonality disagree")
    return report


__all__ = ['Verdict', 'MISSING_IRREPS', 'DUPLICATE_LABELS',
           'REDUCIBLE_LABELS', 'character_gram', 'character_from_f2',
           'check_invertible', 'check_matrix_orthogonality',
           'check_mpo_injectivity']
