"""
Reading and writing skeletal data as JSON.

A skeletal file is a single JSON object::

    {"format_version": 1,
     "category_c": {"name": ..., "fusion": [[a, b, c, N], ...],
                    "duals": [...], "dims": [...]},
     "category_d": {...},                         (optional)
     "module": {"name": ..., "action": [[x, a, c, N], ...],
                "right_action": [[a, c, e, N], ...], "dims": [...]},
     "f0": {"a,b,c,d|alpha,e,beta|mu,f,nu": [re, im], ...},
     ...
     "f4": {...},
     "tolerance": 1e-09}

Labels are 0-based, multiplicity indices in F keys are 1-based.  Entries
missing from a present family are zero; a missing family is absent.
Output is canonical: parts smaller than ``Config.prune_tolerance`` are
zeroed, zero entries omitted and keys sorted, so saving the same data twice
gives the same bytes.
"""

import sys

try:
    import simplejson as json
except ImportError:
    import json

import numpy as np

from morita.config import Config
from morita.logutil import debug
from morita.skeletal import (MoritaError, FAMILIES, FSymbol, SkeletalCategory,
                             ModuleData, BimoduleData, as_bimodule,
                             canonical_gauge)

FORMAT_VERSION = 1


class FormatError(MoritaError, ValueError):

    def __init__(self, msg, lineno=None, colno=None):
        MoritaError.__init__(self, msg)
        self.msg = msg
        self.lineno = lineno
        self.colno = colno

    def __str__(self):
        if self.lineno is None:
            return self.msg
        return 'line %d column %d: %s' % (self.lineno, self.colno, self.msg)


def _real(x, tol):
    x = float(x)
    if abs(x) < tol:
        return 0.0
    # no negative zero in the output
    return x + 0.0


def _pair(z, tol):
    return [_real(z.real, tol), _real(z.imag, tol)]


def format_key(key, row, col):
    al, e, be = row
    mu, f, nu = col
    return '%d,%d,%d,%d|%d,%d,%d|%d,%d,%d' % (tuple(key) +
                                              (al + 1, e, be + 1,
                                               mu + 1, f, nu + 1))


def parse_key(s):
    """(a,b,c,d), (alpha,e,beta), (mu,f,nu) from an entry key, 0-based."""
    try:
        parts = [[int(x) for x in p.split(',')] for p in s.split('|')]
    except ValueError:
        raise FormatError("malformed entry key %r" % (s,))
    if [len(p) for p in parts] != [4, 3, 3]:
        raise FormatError("malformed entry key %r" % (s,))
    key, (al, e, be), (mu, f, nu) = parts
    if min(al, be, mu, nu) < 1:
        raise FormatError("multiplicity indices are 1-based in %r" % (s,))
    return tuple(key), (al - 1, e, be - 1), (mu - 1, f, nu - 1)


def _sparse(tensor):
    return [[int(i), int(j), int(k), int(tensor[i, j, k])]
            for i, j, k in zip(*np.nonzero(tensor))]


def _dense(entries, shape, what):
    out = np.zeros(shape, dtype=int)
    for ent in entries:
        try:
            i, j, k, n = [int(x) for x in ent]
            out[i, j, k] = n
        except (TypeError, ValueError, IndexError):
            raise FormatError("bad %s entry %r for shape %s"
                              % (what, ent, shape))
    return out


def category_to_jsondata(cat):
    return dict(name=cat.name,
                rank=cat.rank,
                fusion=_sparse(cat.fusion),
                duals=list(cat.dual),
                dims=[float(x) for x in cat.fp_dims])


def category_from_jsondata(obj, what):
    try:
        rank = int(obj['rank'])
        fusion = _dense(obj['fusion'], (rank,) * 3, '%s fusion' % what)
    except (KeyError, TypeError):
        raise FormatError("%s needs 'rank' and 'fusion'" % what)
    return SkeletalCategory(fusion, None, obj.get('duals'), obj.get('dims'),
                            name=obj.get('name'))


def fsymbol_to_jsondata(data, family, tol=None):
    tol = Config.prune_tolerance if tol is None else tol
    out = {}
    for key, blk in data.f[family].items():
        rows, cols = data.rows(family, key), data.cols(family, key)
        for i, j in zip(*np.nonzero(np.abs(blk) >= tol)):
            out[format_key(key, rows[i], cols[j])] = _pair(blk[i, j], tol)
    return out


def fsymbol_from_jsondata(obj, frame, family):
    """Blocks of `family` shaped by the multiplicities of `frame`."""
    fs = FSymbol()
    for key in frame.block_keys(family):
        n = len(frame.rows(family, key))
        fs[key] = np.zeros((n, n), dtype=complex)
    for s, val in obj.items():
        key, row, col = parse_key(s)
        if key not in fs:
            raise FormatError("%s entry %s is outside the block structure"
                              % (family, s))
        _, rindex, _, cindex = frame._index(family, key)
        if row not in rindex or col not in cindex:
            raise FormatError("%s entry %s is outside the block structure"
                              % (family, s))
        try:
            re_, im = val
            fs[key][rindex[row], cindex[col]] = complex(float(re_), float(im))
        except (TypeError, ValueError):
            raise FormatError("%s entry %s must be [re, im], got %r"
                              % (family, s, val))
    return fs


def to_jsondata(data):
    data = as_bimodule(data)
    module = dict(name=data.module.name,
                  rank=data.mrank,
                  action=_sparse(data.module.act),
                  dims=[float(x) for x in data.m])
    out = dict(format_version=FORMAT_VERSION,
               tolerance=data.tolerance,
               category_c=category_to_jsondata(data.left),
               module=module)
    if data.right is not None:
        out['category_d'] = category_to_jsondata(data.right)
    if data.ract is not None:
        module['right_action'] = _sparse(data.ract)
    for fam in FAMILIES:
        if data.has(fam):
            out[fam] = fsymbol_to_jsondata(data, fam)
    return out


def from_jsondata(obj):
    """BimoduleData from a decoded skeletal file, checked for normalization."""
    if not isinstance(obj, dict):
        raise FormatError("a skeletal file must hold a JSON object")
    version = obj.get('format_version')
    if version != FORMAT_VERSION:
        raise FormatError("unsupported format_version %r" % (version,))
    if 'category_c' not in obj or 'module' not in obj:
        raise FormatError("'category_c' and 'module' are required")
    left = category_from_jsondata(obj['category_c'], 'category_c')
    mod = obj['module']
    try:
        mrank = int(mod['rank'])
        act = _dense(mod['action'], (left.rank, mrank, mrank), 'action')
    except (KeyError, TypeError):
        raise FormatError("module needs 'rank' and 'action'")
    module = ModuleData(left, act, None, mod.get('dims'), mod.get('name'))
    right = ract = None
    if 'category_d' in obj:
        right = category_from_jsondata(obj['category_d'], 'category_d')
        if 'right_action' not in mod:
            raise FormatError("category_d given without module.right_action")
        ract = _dense(mod['right_action'], (mrank, right.rank, mrank),
                      'right_action')
    elif 'right_action' in mod:
        raise FormatError("module.right_action given without category_d")
    tol = obj.get('tolerance')
    frame = BimoduleData(module, right, ract, tolerance=tol)
    blocks = {}
    for fam in FAMILIES:
        if fam not in obj:
            continue
        if fam == 'f4' and right is None:
            raise FormatError("f4 given without category_d")
        if fam in ('f2', 'f3') and right is None:
            raise FormatError("%s given without category_d" % fam)
        blocks[fam] = fsymbol_from_jsondata(obj[fam], frame, fam)
    if 'f0' not in blocks:
        raise FormatError("f0 is required")
    data = frame.replace(**blocks)
    data.gauge = canonical_gauge(data)
    debug("loaded %s", ', '.join('%s: %d blocks' % (k, len(v))
                                 for k, v in sorted(blocks.items())))
    return data


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1,
                      separators=(',', ': ')) + '\n'


def loads(text):
    try:
        return json.loads(text)
    except ValueError as e:
        lineno = getattr(e, 'lineno', None)
        colno = getattr(e, 'colno', None)
        raise FormatError(getattr(e, 'msg', str(e)), lineno, colno)


def _read(filename):
    if filename == '-':
        return sys.stdin.read()
    with open(filename) as fp:
        return fp.read()


def write_text(text, filename):
    if filename == '-':
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(filename, 'w') as fp:
        fp.write(text)


def load(filename):
    return from_jsondata(loads(_read(filename)))


def save(data, filename):
    write_text(dumps(to_jsondata(data)), filename)


# -- groups and cocycles


def group_from_jsondata(obj):
    from morita.vecg import FiniteGroup
    if isinstance(obj, dict) and 'group' in obj:
        obj = obj['group']
    try:
        return FiniteGroup(obj['table'], obj.get('name'))
    except (KeyError, TypeError):
        raise FormatError("a group needs a 'table'")


def cocycle_from_jsondata(obj, group):
    from morita.vecg import Cocycle
    if isinstance(obj, dict) and 'cocycle' in obj:
        obj = obj['cocycle']
    try:
        values = [[complex(float(re_), float(im)) for re_, im in row]
                  for row in obj['values']]
    except (KeyError, TypeError, ValueError):
        raise FormatError("a cocycle needs 'values' as rows of [re, im]")
    return Cocycle(group, values)


def load_group(filename):
    return group_from_jsondata(loads(_read(filename)))


def load_cocycle(filename, group):
    return cocycle_from_jsondata(loads(_read(filename)), group)


__all__ = ['FORMAT_VERSION', 'FormatError', 'format_key', 'parse_key',
           'to_jsondata', 'from_jsondata', 'fsymbol_to_jsondata',
           'fsymbol_from_jsondata', 'category_to_jsondata',
           'category_from_jsondata', 'dumps', 'loads', 'load', 'save',
           'write_text', 'group_from_jsondata', 'cocycle_from_jsondata',
           'load_group', 'load_cocycle']
