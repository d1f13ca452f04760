"""
The package logger.

Library modules log through the aliases below and never attach handlers;
the command line does that once per run from Config.loglevel,
Config.logfile and Config.logrotate.
"""

import logging as _logging
import logging.handlers as _loghandlers
import re as _re
import sys as _sys

logger = _logging.getLogger('morita')
debug = logger.debug
warn = logger.warning
error = logger.error
critical = logger.critical
info = logger.info
exception = logger.exception

FORMAT = '%(levelname)s %(asctime)s %(module)s | %(message)s'

# scipy reports near-singular F-block inversions through warnings
_pywarnings = _logging.getLogger('py.warnings')

_SIZE = _re.compile(r'^(\d+)\s*([kmg]?)b?(?:\s*,\s*(\d+))?$', _re.I)
_UNITS = {'': 1, 'k': 1 << 10, 'm': 1 << 20, 'g': 1 << 30}
_WHEN = {'hourly': 'h', 'daily': 'd', 'weekly': 'w0'}


def parse_rotate(rotate):
    """
    Normalize a logrotate setting to None, ('size', maxBytes, backupCount)
    or ('time', when, interval).

    Besides True, an int and a (maxBytes, backupCount) pair, config files
    may spell the size forms as strings ('10M', '5000000,3'); any other
    string is 'when' or 'when:interval' of a timed rotation, with 'hourly',
    'daily' and 'weekly' as aliases. Anything else raises ValueError.
    """
    if rotate is None or rotate is False:
        return None
    if rotate is True:
        return ('size', 10 << 20, 10)
    if isinstance(rotate, int):
        return ('size', rotate, 10)
    if isinstance(rotate, tuple) and len(rotate) == 2:
        return ('size', int(rotate[0]), int(rotate[1]))
    if not isinstance(rotate, str):
        raise ValueError("illegal value for logrotate: %r" % (rotate,))
    m = _SIZE.match(rotate.strip())
    if m:
        size = int(m.group(1)) * _UNITS[m.group(2).lower()]
        return ('size', size, int(m.group(3) or 10))
    when, _, interval = rotate.strip().partition(':')
    try:
        interval = int(interval or 1)
    except ValueError:
        raise ValueError("illegal logrotate interval in %r" % (rotate,))
    when = _WHEN.get(when.lower(), when.lower())
    if not _re.match(r'^(s|m|h|d|w[0-6]|midnight)$', when):
        raise ValueError("illegal value for logrotate: %r" % (rotate,))
    return ('time', when, interval)


def _handler(filename, rotate):
    parsed = parse_rotate(rotate)
    if parsed is None:
        return _logging.FileHandler(filename, 'a')
    kind, a, b = parsed
    if kind == 'size':
        return _loghandlers.RotatingFileHandler(filename, mode='a',
                                                maxBytes=a, backupCount=b)
    return _loghandlers.TimedRotatingFileHandler(filename, when=a,
                                                 interval=b)


def _level(level):
    if not isinstance(level, str):
        return level
    name = level.upper()
    if name == 'WARN':
        name = 'WARNING'
    value = _logging.getLevelName(name)
    if not isinstance(value, int):
        raise ValueError("unknown log level: %s" % level)
    return value


def initLogging(level=_logging.INFO,
                format=FORMAT,
                stream=None,
                filename=None,
                datefmt=None,
                rotate=None):
    """
    Give the morita logger a single handler, replacing earlier ones.

    Python warnings are routed to the same handler.
    """
    level = _level(level)
    if filename:
        handler = _handler(filename, rotate)
    else:
        handler = _logging.StreamHandler(stream or _sys.stderr)
    handler.setFormatter(_logging.Formatter(format, datefmt))
    for log in (logger, _pywarnings):
        for old in list(log.handlers):
            log.removeHandler(old)
            if old is not handler:
                old.close()
        log.addHandler(handler)
    logger.setLevel(level)
    _logging.captureWarnings(True)
    return handler


def log_report(report, limit=5):
    """Residuals of a verification report at debug, failures at info."""
    for fam in sorted(report.residuals):
        debug("%s %s: %.3e at %s", report.kind, fam, report.residuals[fam],
              report.witness.get(fam, '-'))
    for fam, witness, res in report.failures[:limit]:
        info("%s %s fails with residual %.3e at %s", report.kind, fam, res,
             witness)
    if len(report.failures) > limit:
        info("%s: %d more failures", report.kind,
             len(report.failures) - limit)
