"""
A barebones config object loaded from a Python config file.

Library code reads its numerical thresholds from ``Config``; the defaults
below are merged at import time so no config file is needed.
"""

import os


class _config(object):

    def load(self, filename):
        filename = os.path.abspath(filename)
        with open(filename) as fp:
            s = fp.read()
        codeobj = compile(s, filename, 'exec')
        env = {}
        exec(codeobj, {}, env)
        # load env selectively into self.__dict__
        for key in (k for k in env if not k.startswith('_')):
            self.__dict__[key] = env[key]

    def merge_defaults(self, **kw):
        for k in kw:
            self.__dict__.setdefault(k, kw[k])

    def keys(self):
        return self.__dict__.keys()

    def __iter__(self):
        return iter(self.__dict__)

    def items(self):
        return self.__dict__.items()

    def clear(self):
        self.__dict__.clear()


Config = _config()

DEFAULTS = dict(loglevel='warning',
                logfile=None,
                logrotate=None,
                # absolute tolerance for F-symbol checks
                tolerance=1e-9,
                dim_tolerance=1e-12,
                prune_tolerance=1e-12,
                cluster_tolerance=1e-7,
                rank_tolerance=0.01,
                polar_threshold=1e-6,
                fpdim_rtol=1e-8,
                seed=0x5EED,
                retries=8,
                max_group_order=48,
                # verify_wha switches to random elements above this dimension
                wha_dense_limit=40,
                wha_samples=4)

CONFIG_PATHS = ('~/.morita.conf', '/etc/morita.conf')


def find_config(configfile=None):
    """Return the first config file that exists, or None."""
    if configfile:
        return configfile
    for p in CONFIG_PATHS:
        p = os.path.expanduser(p)
        if os.path.exists(p):
            return p
    return None


def initConfig(configfile=None):
    if configfile:
        Config.load(configfile)
    Config.merge_defaults(**DEFAULTS)
    seed = os.environ.get('MORITA_SEED')
    if seed:
        Config.seed = int(seed, 0)


def resetConfig():
    Config.clear()
    initConfig()


initConfig()

__all__ = ['Config', 'initConfig', 'resetConfig', 'find_config', 'DEFAULTS']
