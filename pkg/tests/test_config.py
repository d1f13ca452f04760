import logging
import logging.handlers
import os
import tempfile

import pytest

from morita.config import Config, DEFAULTS, initConfig, resetConfig
from morita.logutil import initLogging, log_report, logger, parse_rotate
from morita.skeletal import Report


def teardown_function(func):
    resetConfig()


def test_defaults():
    resetConfig()
    for k, v in DEFAULTS.items():
        assert getattr(Config, k) == v


def test_load_config_file():
    tmp = tempfile.NamedTemporaryFile('w', suffix='.conf', delete=False)
    tmp.write('tolerance = 1e-6\n_private = 3\nseed = 42\n')
    tmp.close()
    try:
        Config.clear()
        initConfig(tmp.name)
    finally:
        os.unlink(tmp.name)
    assert Config.tolerance == 1e-6
    assert Config.seed == 42
    assert 'private' not in Config.keys()
    assert '_private' not in Config.keys()
    # defaults fill in the rest
    assert Config.retries == DEFAULTS['retries']


def test_seed_from_environment():
    os.environ['MORITA_SEED'] = '0x10'
    try:
        resetConfig()
        assert Config.seed == 16
    finally:
        del os.environ['MORITA_SEED']


def test_init_logging_replaces_handler():
    first = initLogging(level='debug')
    second = initLogging(level='warning')
    assert logger.handlers == [second]
    assert first not in logger.handlers
    assert logger.level == logging.WARNING


def test_parse_rotate():
    assert parse_rotate(None) is None
    assert parse_rotate(True) == ('size', 10 << 20, 10)
    assert parse_rotate(4096) == ('size', 4096, 10)
    assert parse_rotate((1000, 3)) == ('size', 1000, 3)
    assert parse_rotate('10M') == ('size', 10 << 20, 10)
    assert parse_rotate('512kb, 2') == ('size', 512 << 10, 2)
    assert parse_rotate('5000000,3') == ('size', 5000000, 3)
    assert parse_rotate('daily') == ('time', 'd', 1)
    assert parse_rotate('weekly') == ('time', 'w0', 1)
    assert parse_rotate('H:6') == ('time', 'h', 6)
    assert parse_rotate('midnight') == ('time', 'midnight', 1)
    for bad in ('fortnightly', 'daily:x', 1.5, [1, 2]):
        with pytest.raises(ValueError):
            parse_rotate(bad)


def test_rotating_file_handler():
    tmp = tempfile.mkdtemp(prefix='morita-log')
    path = os.path.join(tmp, 'morita.log')
    try:
        handler = initLogging(level='warn', filename=path, rotate='1M,2')
        assert isinstance(handler, logging.handlers.RotatingFileHandler)
        assert handler.maxBytes == 1 << 20
        assert handler.backupCount == 2
        assert logger.level == logging.WARNING
        assert logging.getLogger('py.warnings').handlers == [handler]
        handler = initLogging(filename=path, rotate='daily')
        assert isinstance(handler,
                          logging.handlers.TimedRotatingFileHandler)
    finally:
        initLogging(level='warning')
        handler.close()
        for name in os.listdir(tmp):
            os.unlink(os.path.join(tmp, name))
        os.rmdir(tmp)


def test_unknown_level():
    with pytest.raises(ValueError):
        initLogging(level='chatty')


def test_log_report(caplog):
    initLogging(level='debug')
    report = Report('pentagons', 1e-9)
    report.add('CCCC', 1e-14, (0, 0, 0, 0, 0))
    for i in range(7):
        report.add('CCCM', 0.5, (i, 0, 0, 0, 0))
    try:
        with caplog.at_level(logging.DEBUG, logger='morita'):
            log_report(report, limit=3)
    finally:
        initLogging(level='warning')
    infos = [r.getMessage() for r in caplog.records
             if r.levelno == logging.INFO]
    assert len(infos) == 4
    assert infos[0].startswith('pentagons CCCM fails')
    assert infos[-1] == 'pentagons: 4 more failures'
    debugs = [r.getMessage() for r in caplog.records
              if r.levelno == logging.DEBUG]
    assert debugs[0].startswith('pentagons CCCC: 1.000e-14')
