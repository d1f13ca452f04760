"""
Bundled examples: small groups, the Fibonacci category and the
non-invertible bimodules used to exercise the invertibility diagnosis.
"""

import re

import numpy as np

from morita.dualdata import assemble_dual, restrict_left
from morita.skeletal import (FSymbol, SkeletalCategory, ModuleData,
                             BimoduleData)
from morita.vecg import FiniteGroup, Cocycle, gen_vecg


def _closure(gens, mul, ident):
    """Elements generated by gens, identity first, in breadth-first order."""
    elements = [ident]
    seen = set(elements)
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    return elements


def _from_elements(elements, mul, name):
    index = dict((x, i) for i, x in enumerate(elements))
    table = [[index[mul(x, y)] for y in elements] for x in elements]
    return FiniteGroup(table, name)


def _compose(p, q):
    return tuple(p[i] for i in q)


def permutation_group(gens, name=None):
    n = len(gens[0])
    return _from_elements(_closure(gens, _compose, tuple(range(n))),
                          _compose, name)


def cyclic(n):
    return FiniteGroup([[(g + h) % n for h in range(n)] for g in range(n)],
                       'Z%d' % n)


def klein():
    """Z2 x Z2 with (a, b) stored as 2a + b."""
    return FiniteGroup([[g ^ h for h in range(4)] for g in range(4)], 'Z2xZ2')


def symmetric(n):
    cycle = tuple(range(1, n)) + (0,)
    swap = (1, 0) + tuple(range(2, n))
    return permutation_group([swap, cycle], 'S%d' % n)


def dihedral(n):
    """Symmetries of the regular n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return permutation_group([rot, ref], 'D%d' % n)


def quaternion():
    # products of the imaginary units: (sign, unit)
    prod = {('i', 'j'): (1, 'k'), ('j', 'k'): (1, 'i'), ('k', 'i'): (1, 'j'),
            ('j', 'i'): (-1, 'k'), ('k', 'j'): (-1, 'i'),
            ('i', 'k'): (-1, 'j')}

    def mul(x, y):
        (s, u), (t, v) = x, y
        if u == '1':
            return (s * t, v)
        if v == '1':
            return (s * t, u)
        if u == v:
            return (-s * t, '1')
        r, w = prod[(u, v)]
        return (r * s * t, w)

    gens = [(1, 'i'), (1, 'j')]
    return _from_elements(_closure(gens, mul, (1, '1')), mul, 'Q8')


GROUPS = {'Z2xZ2': klein,
          'S3': lambda: symmetric(3),
          'S4': lambda: symmetric(4),
          'D4': lambda: dihedral(4),
          'Q8': quaternion}


def get_group(name):
    """A bundled group by name; Z<n> gives the cyclic group of order n."""
    m = re.match(r'^Z(\d+)$', name)
    if m and int(m.group(1)) > 0:
        return cyclic(int(m.group(1)))
    if name not in GROUPS:
        raise ValueError("unknown group %r (known: Z<n>, %s)"
                         % (name, ', '.join(sorted(GROUPS))))
    return GROUPS[name]()


def symplectic_cocycle(group=None):
    """phi((a,b), (c,d)) = (-1)^(bc) on Z2 x Z2."""
    if group is None:
        group = klein()
    vals = [[(-1) ** ((g & 1) * (h >> 1)) for h in range(4)]
            for g in range(4)]
    return Cocycle(group, vals)


def _blocks(frame, family, value=None):
    """Every block of a family filled with 1s, or by ``value(key)``."""
    fs = FSymbol()
    for key in frame.block_keys(family):
        n = len(frame.rows(family, key))
        fs[key] = np.eye(n) if value is None else value(key)
    return fs


def fib():
    """The Fibonacci category acting on itself, labels (1, tau) = (0, 1)."""
    fusion = np.zeros((2, 2, 2), dtype=int)
    fusion[0, 0, 0] = fusion[0, 1, 1] = fusion[1, 0, 1] = 1
    fusion[1, 1, 0] = fusion[1, 1, 1] = 1
    phi = (1 + np.sqrt(5)) / 2
    ftau = np.array([[1 / phi, 1 / np.sqrt(phi)],
                     [1 / np.sqrt(phi), -1 / phi]])
    cat = SkeletalCategory(fusion, name='Fib')
    frame = BimoduleData(ModuleData(cat, fusion))

    def value(key):
        if key == (1, 1, 1, 1):
            return ftau
        return np.eye(len(frame.rows('f0', key)))

    cat.f0 = _blocks(frame, 'f0', value)
    return regular_module(cat)


def regular_module(cat, name=None):
    """C acting on itself; the module associator is F0 itself."""
    return ModuleData(cat, cat.fusion, cat.f0.copy(),
                      name=name or cat.name)


def _vec_category():
    return SkeletalCategory(np.ones((1, 1, 1), dtype=int),
                            FSymbol({(0, 0, 0, 0): [[1]]}), name='Vec')


def failure_missing_irreps():
    """(Vec_Z2, Vec, Vec): D is too small to be the dual."""
    mod = gen_vecg(cyclic(2))
    right = _vec_category()
    ract = np.ones((1, 1, 1), dtype=int)
    frame = BimoduleData(mod, right, ract)
    return BimoduleData(mod, right, ract, _blocks(frame, 'f2'),
                        _blocks(frame, 'f3'))


def failure_duplicate_labels():
    """(Vec_Z2, Vec, Vec_Z2) with every F equal to 1."""
    mod = gen_vecg(cyclic(2))
    right = gen_vecg(cyclic(2)).base
    right.name = 'Z2'
    ract = np.ones((1, 2, 1), dtype=int)
    frame = BimoduleData(mod, right, ract)
    return BimoduleData(mod, right, ract, _blocks(frame, 'f2'),
                        _blocks(frame, 'f3'))


def failure_reducible_labels(seed=None):
    """(Vec_Z2, Vec, Rep S3), restricted from the dual of Vec_S3."""
    s3 = symmetric(3)
    full = assemble_dual(gen_vecg(s3), seed)
    inv = [g for g in range(1, s3.order) if s3.element_order(g) == 2]
    out = restrict_left(full, [0, inv[0]])
    out.left.name = 'Z2'
    return out


def rep_z2():
    """(Vec_Z2, Vec, Rep Z2) with F2[g,*,c,*] = (-1)^(gc)."""
    mod = gen_vecg(cyclic(2))
    right = gen_vecg(cyclic(2)).base
    right.name = 'RepZ2'
    ract = np.ones((1, 2, 1), dtype=int)
    frame = BimoduleData(mod, right, ract)
    f2 = _blocks(frame, 'f2', lambda key: [[(-1) ** (key[0] * key[2])]])
    return BimoduleData(mod, right, ract, f2, _blocks(frame, 'f3'))


EXAMPLES = {'Z2': lambda: gen_vecg(cyclic(2)),
            'Z3': lambda: gen_vecg(cyclic(3)),
            'Z4': lambda: gen_vecg(cyclic(4)),
            'Z2xZ2': lambda: gen_vecg(klein()),
            'Z2xZ2-twisted': lambda: gen_vecg(klein(), symplectic_cocycle()),
            'S3': lambda: gen_vecg(symmetric(3)),
            'D4': lambda: gen_vecg(dihedral(4)),
            'Q8': lambda: gen_vecg(quaternion()),
            'Z2-regular': lambda: regular_module(gen_vecg(cyclic(2)).base),
            'Fib': fib,
            'rep-z2': rep_z2,
            'failure-missing': failure_missing_irreps,
            'failure-duplicate': failure_duplicate_labels,
            'failure-reducible': failure_reducible_labels}


def get_example(name):
    if name not in EXAMPLES:
        raise ValueError("unknown example %r (known: %s)"
                         % (name, ', '.join(sorted(EXAMPLES))))
    return EXAMPLES[name]()


__all__ = ['cyclic', 'klein', 'symmetric', 'dihedral', 'quaternion',
           'permutation_group', 'get_group', 'regular_module',
           'symplectic_cocycle', 'fib', 'failure_missing_irreps',
           'failure_duplicate_labels', 'failure_reducible_labels',
           'rep_z2', 'get_example', 'GROUPS', 'EXAMPLES']
