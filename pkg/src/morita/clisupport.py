import logging
from optparse import OptionParser
import os
from os import path
import sys

from morita.annular import build_algebra, verify_wha
from morita.catalog import EXAMPLES, get_example, get_group
from morita.config import Config, initConfig, find_config
from morita.dualdata import assemble_dual
from morita.invertibility import check_invertible, check_mpo_injectivity
from morita.logutil import debug, initLogging, log_report
from morita.skeletal import (MoritaError, Report, verify_pentagons,
                             verify_unitarity, verify_dims)
from morita import skelfile
from morita.vecg import crosscheck_vecg, gen_vecg
from morita import __version__

VERSION_TEXT = """\
%%s %s

Computes dual fusion categories and tests bimodule categories
for invertibility from skeletal F-symbol data.
""" % __version__

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_INVERTIBLE = 2

COMMANDS = {}


def command(name, description):
    def register(func):
        COMMANDS[name] = (func, description)
        return func
    return register


class _OptionParser(OptionParser):

    def error(self, msg):
        # optparse exits with 2, which is reserved for "not invertible"
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.get_prog_name(), msg))
        sys.exit(EXIT_ERROR)


def _parser(usage, description):
    parser = _OptionParser(usage, description=description)
    parser.add_option('-c',
                      '--config',
                      dest='configfile',
                      default=None,
                      help="path to morita config file")
    parser.add_option('--tolerance',
                      dest='tolerance',
                      type=float,
                      default=None,
                      metavar='EPS',
                      help="absolute tolerance for residual checks")
    parser.add_option('--json',
                      action='store_true',
                      default=False,
                      dest='json',
                      help="print the report as JSON")
    parser.add_option('-d',
                      '--debug',
                      action='store_true',
                      default=False,
                      dest='debugmode',
                      help="print debugging information")
    parser.add_option('--version',
                      action='store_true',
                      dest='version',
                      help="show version and exit")
    return parser


def _add_output(parser):
    parser.add_option('-o',
                      '--output',
                      dest='output',
                      default='-',
                      metavar='OUT',
                      help="output file (default: stdout)")


def _add_seed(parser):
    parser.add_option('--seed',
                      dest='seed',
                      type=int,
                      default=None,
                      help="random seed (MORITA_SEED takes precedence)")


def _setup(parser, args):
    opts, args = parser.parse_args(args)
    if opts.version:
        print(VERSION_TEXT % path.basename(sys.argv[0]))
        sys.exit(0)
    configfile = find_config(opts.configfile)
    if opts.configfile and not path.exists(opts.configfile):
        parser.error("config file does not exist: %s" % opts.configfile)
    Config.clear()
    initConfig(configfile)
    if opts.debugmode:
        Config.loglevel = logging.DEBUG
    initLogging(level=Config.loglevel,
                filename=Config.logfile,
                rotate=Config.logrotate)
    if opts.tolerance is not None:
        if opts.tolerance <= 0:
            parser.error("tolerance must be positive")
        Config.tolerance = opts.tolerance
    if getattr(opts, 'seed', None) is not None \
            and not os.environ.get('MORITA_SEED'):
        Config.seed = opts.seed
    return opts, args


def _input(parser, args):
    if len(args) > 1:
        parser.error("expected at most one input file")
    return args[0] if args else '-'


def _load(parser, args, tolerance):
    data = skelfile.load(_input(parser, args))
    if tolerance is not None:
        data.tolerance = tolerance
    return data


def _print_report(report):
    status = 'ok' if report.passed else 'FAILED'
    print('%s: %s (tolerance %g)' % (report.kind, status, report.tolerance))
    for fam in sorted(report.residuals):
        print('  %-24s %.3e  at %s' % (fam, report.residuals[fam],
                                       report.witness.get(fam, '-')))
    for fam, witness, res in report.failures[:20]:
        print('  failed %s %s: %.3e' % (fam, witness, res))
    if len(report.failures) > 20:
        print('  ... %d more failures' % (len(report.failures) - 20))


def _emit(opts, reports, extra=None):
    for r in reports:
        log_report(r)
    if opts.json:
        obj = dict((r.kind, r.to_jsondata()) for r in reports)
        if extra:
            obj.update(extra)
        sys.stdout.write(skelfile.dumps(obj))
    else:
        for r in reports:
            _print_report(r)


@command('validate', "Checks pentagons, units, unitarity and dimensions.")
def do_validate(args):
    parser = _parser("%prog validate [options] [file]",
                     COMMANDS['validate'][1])
    opts, args = _setup(parser, args)
    data = _load(parser, args, opts.tolerance)
    dims = Report('dims', data.tolerance)
    for side, res in sorted(verify_dims(data).items()):
        dims.add(side, res, (side,))
    reports = [verify_pentagons(data), verify_unitarity(data), dims]
    _emit(opts, reports)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_ERROR


@command('gen-vecg', "Writes (F0, F1) of Vec_G acting on Vec.")
def do_gen_vecg(args):
    parser = _parser("%prog gen-vecg --group NAME|FILE [options]",
                     COMMANDS['gen-vecg'][1])
    parser.add_option('-g',
                      '--group',
                      dest='group',
                      default=None,
                      help="bundled group name (Z<n>, S3, ...) or group file")
    parser.add_option('--cocycle',
                      dest='cocycle',
                      default=None,
                      metavar='FILE',
                      help="file holding a normalized 2-cocycle")
    _add_output(parser)
    opts, args = _setup(parser, args)
    if args:
        parser.error("unexpected arguments: %s" % ' '.join(args))
    if not opts.group:
        parser.error("--group is required")
    if path.exists(opts.group):
        group = skelfile.load_group(opts.group)
    else:
        group = get_group(opts.group)
    phi = None
    if opts.cocycle:
        phi = skelfile.load_cocycle(opts.cocycle, group)
    skelfile.save(gen_vecg(group, phi), opts.output)
    return EXIT_OK


@command('compute-dual', "Computes the dual category and F2, F3, F4.")
def do_compute_dual(args):
    parser = _parser("%prog compute-dual [options] [file]",
                     COMMANDS['compute-dual'][1])
    _add_output(parser)
    _add_seed(parser)
    opts, args = _setup(parser, args)
    data = _load(parser, args, opts.tolerance)
    dual = assemble_dual(data, Config.seed)
    debug("irreps: %s", [v.signature() for v in dual.irreps])
    skelfile.save(dual, opts.output)
    return EXIT_OK


@command('check-invertible', "Decides invertibility and diagnoses failures.")
def do_check_invertible(args):
    parser = _parser("%prog check-invertible [options] [file]",
                     COMMANDS['check-invertible'][1])
    opts, args = _setup(parser, args)
    data = _load(parser, args, opts.tolerance)
    verdict = check_invertible(data)
    if opts.json:
        sys.stdout.write(skelfile.dumps(verdict.to_jsondata()))
    else:
        print('invertible' if verdict.invertible else 'not invertible')
        print('  FPdim C = %.12g, FPdim D = %.12g'
              % (verdict.fpdim_c, verdict.fpdim_d))
        for reason in verdict.reasons():
            print('  %s' % reason)
        if not verdict.definitive:
            print('  (no F3 given: necessary conditions only)')
    return EXIT_OK if verdict.invertible else EXIT_NOT_INVERTIBLE


@command('verify-wha', "Builds the annular algebra and checks its axioms.")
def do_verify_wha(args):
    parser = _parser("%prog verify-wha [options] [file]",
                     COMMANDS['verify-wha'][1])
    parser.add_option('--dump',
                      dest='dump',
                      default=None,
                      metavar='FILE',
                      help="write basis and structure constants to FILE")
    _add_seed(parser)
    opts, args = _setup(parser, args)
    data = _load(parser, args, opts.tolerance)
    _, maps = build_algebra(data)
    report = verify_wha(maps, seed=Config.seed)
    if opts.dump:
        skelfile.write_text(skelfile.dumps(maps.to_jsondata()), opts.dump)
    informative = dict((k, v[0]) for k, v in report.informative.items())
    _emit(opts, [report], dict(dim=maps.dim, informative=informative))
    if not opts.json:
        print('  algebra dimension %d' % maps.dim)
        for k in sorted(informative):
            print('  %-24s %.3e  (informative)' % (k, informative[k]))
    return EXIT_OK if report.passed else EXIT_ERROR


@command('check-mpo', "Checks the MPO-injectivity identity.")
def do_check_mpo(args):
    parser = _parser("%prog check-mpo [options] [file]",
                     COMMANDS['check-mpo'][1])
    opts, args = _setup(parser, args)
    data = _load(parser, args, opts.tolerance)
    report = check_mpo_injectivity(data)
    _emit(opts, [report], dict(agreement=report.agreement))
    if not opts.json:
        print('  mpo %.3e, reduced %.3e, agreement %s'
              % (report.residuals['mpo'], report.residuals['reduced'],
                 report.agreement))
    return EXIT_OK if report.passed else EXIT_NOT_INVERTIBLE


@command('crosscheck-vecg', "Compares the dual of Vec_G with Rep G.")
def do_crosscheck_vecg(args):
    parser = _parser("%prog crosscheck-vecg --group NAME|FILE [options]",
                     COMMANDS['crosscheck-vecg'][1])
    parser.add_option('-g',
                      '--group',
                      dest='group',
                      default=None,
                      help="bundled group name or group file")
    _add_seed(parser)
    opts, args = _setup(parser, args)
    if not opts.group:
        parser.error("--group is required")
    if path.exists(opts.group):
        group = skelfile.load_group(opts.group)
    else:
        group = get_group(opts.group)
    report = crosscheck_vecg(group, Config.seed, opts.tolerance)
    _emit(opts, [report])
    return EXIT_OK if report.passed else EXIT_ERROR


@command('gen-example', "Writes a bundled example as a skeletal file.")
def do_gen_example(args):
    parser = _parser("%prog gen-example [options] NAME",
                     COMMANDS['gen-example'][1])
    parser.add_option('-l',
                      '--list',
                      action='store_true',
                      default=False,
                      dest='list',
                      help="list the bundled examples")
    _add_output(parser)
    opts, args = _setup(parser, args)
    if opts.list:
        for name in sorted(EXAMPLES):
            print(name)
        return EXIT_OK
    if len(args) != 1:
        parser.error("expected one example name")
    skelfile.save(get_example(args[0]), opts.output)
    return EXIT_OK


def usage():
    lines = ["usage: %s COMMAND [options] [args]" % path.basename(sys.argv[0]),
             "", "commands:"]
    for name in sorted(COMMANDS):
        lines.append('  %-18s %s' % (name, COMMANDS[name][1]))
    return '\n'.join(lines)


def run(args):
    """Dispatch to a subcommand and return its exit status."""
    if not args or args[0] in ('-h', '--help'):
        print(usage())
        return EXIT_OK if args else EXIT_ERROR
    if args[0] == '--version':
        print(VERSION_TEXT % path.basename(sys.argv[0]))
        return EXIT_OK
    name, rest = args[0], args[1:]
    if name not in COMMANDS:
        sys.stderr.write("unknown command: %s\n%s\n" % (name, usage()))
        return EXIT_ERROR
    try:
        return COMMANDS[name][0](rest)
    except SystemExit as e:
        # usage errors and --version
        return e.code
    except (MoritaError, ValueError, IOError) as e:
        debug("%s failed", name, exc_info=True)
        sys.stderr.write('%s: %s\n' % (name, e))
        return EXIT_ERROR


def main(args=None):
    if args is None:
        args = sys.argv[1:]
    sys.exit(run(args))
