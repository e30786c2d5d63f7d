"""reduce pairs modulo k, and find the inputs that make it slow.

Usage: jwa SUBCOMMAND [FLAGS]

Subcommands:

  reduce     reduce (x, y) modulo k, optionally with the full trace
  t          iteration count t(k, c)
  nk         N(k), by brute force, analytically, or both
  worst      every c reaching N(k)
  table      one N(k) row per modulus
  cf         continued fraction of num/den
  intervals  the Fibonacci interval I_p(k) and its coprime members
  sigma      trailing-pair solutions for the single-2 patterns
  scan       lower bound report over a range of k

Flags (after the subcommand name):

  --format FORMAT   tsv or json (defaults to tsv)
  --strict          fail when a witness list cannot be proven complete
  --cache PATH      reuse and extend a table cache at PATH
  --ceiling INT     largest k handled by brute force
  --witness-cap INT most witnesses printed per row
  --workers INT     processes for brute force
  --family FAMILY   quotient patterns solved analytically (all or single-two)
  --verbose         debug logging

try out:
`
jwa table --pow2-even --max-s 16 --method analytic
`
"""

import os
import re
import sys
import json
import logging
from itertools import islice

import attr
from face import (Command,
                  Flag,
                  face_middleware,
                  UsageError)

from .core import (JWAError,
                   InvalidInput,
                   Inconsistent,
                   TooLarge,
                   jwa_reduce,
                   jwa_trace,
                   mod_div,
                   iteration_count,
                   verify_output)
from .fib import (m_of_k,
                  interval_I,
                  iter_members_J,
                  cf_expansion,
                  convergents,
                  ones_prefix_len)
from .worst import (BRUTE_CEILING,
                    WITNESS_CAP,
                    WORKERS,
                    ANALYTIC,
                    METHODS,
                    FAMILY_ALL,
                    table_row,
                    worst_case_row,
                    sigma_solutions,
                    even_powers_of_two,
                    scan_lower_bound)
from . import cache as cache_mod

logger = logging.getLogger(__name__)

SCHEMA_VERSION = '1'
FORMATS = ('tsv', 'json')

JWA_DEBUG = os.getenv('JWA_DEBUG', '').strip().lower()
JWA_DEBUG = False if (JWA_DEBUG in ('', '0', 'false')) else True

_DIGITS_RE = re.compile(r'^[0-9]+$')

# subtables are keyed by these result fields
_NESTED = ('steps', 'candidates')


@attr.s(frozen=True)
class Settings:
    format = attr.ib(default='tsv')
    strict = attr.ib(default=False)
    cache = attr.ib(default=None)
    ceiling = attr.ib(default=BRUTE_CEILING)
    witness_cap = attr.ib(default=WITNESS_CAP)
    workers = attr.ib(default=WORKERS)
    family = attr.ib(default=FAMILY_ALL)


@attr.s(frozen=True)
class OutputRecord:
    command = attr.ib()
    inputs = attr.ib()
    results = attr.ib()
    schema_version = attr.ib(default=SCHEMA_VERSION)

    def to_dict(self):
        return {'schema_version': self.schema_version,
                'command': self.command,
                'inputs': dict(self.inputs),
                'results': dict(self.results)}


def _tsv_value(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (list, tuple)):
        return ','.join(_tsv_value(v) for v in value)
    return str(value)


def _tsv_line(values):
    return '\t'.join(_tsv_value(v) for v in values) + '\n'


def format_records(records, fmt):
    """Render *records* as text. TSV prints a header before the first
    row, and any nested step or candidate list as its own table after
    its record."""
    if fmt == 'json':
        return ''.join(json.dumps(r.to_dict(), sort_keys=True) + '\n' for r in records)
    parts = []
    header = None
    for record in records:
        flat = {k: v for k, v in record.results.items() if k not in _NESTED}
        keys = ['command'] + list(record.inputs) + list(flat)
        if keys != header:
            header = keys
            parts.append(_tsv_line(keys))
        parts.append(_tsv_line([record.command] + list(record.inputs.values())
                               + list(flat.values())))
        for name in _NESTED:
            nested = record.results.get(name)
            if not nested:
                continue
            sub_keys = list(nested[0])
            parts.append('\n' + _tsv_line(sub_keys))
            parts.extend(_tsv_line([row[key] for key in sub_keys]) for row in nested)
    return ''.join(parts)


def emit(records, settings, out=None):
    text = format_records(records, settings.format)
    if out:
        with open(out, 'w', encoding='utf8') as f:
            f.write(text)
        return
    sys.stdout.write(text)


def _parse_int(command, name, text, minimum=1):
    if text is None:
        raise InvalidInput(command, f'expected --{name.replace("_", "-")}')
    text = text.strip()
    if not _DIGITS_RE.match(text):
        raise InvalidInput(command, 'expected a nonnegative decimal integer', **{name: text})
    value = int(text)
    if value < minimum:
        raise InvalidInput(command, f'expected {name} >= {minimum}', **{name: value})
    return value


def _row_results(row, settings):
    return {'m': row.m,
            'N': row.n_big,
            'method': row.method,
            'witnesses': list(row.witnesses[:settings.witness_cap]),
            'witness_count': row.witness_count,
            'complete': row.complete,
            'fallback_used': row.fallback_used}


def jwa_root():
    raise UsageError('expected a subcommand, see jwa --help')


def cmd_reduce(settings, k, x, y, trace):
    "reduce (x, y) modulo k"
    k, x, y = (_parse_int('reduce', name, text) for name, text in (('k', k), ('x', x), ('y', y)))
    pair = jwa_reduce(k, x, y)
    if not verify_output(k, x, y, pair):
        raise Inconsistent('reduce', f'output {tuple(pair)} fails the contract for k={k}')
    run = jwa_trace(k, mod_div(x, y, k))
    results = {'c': run.input.c, 'n': pair.n, 'd': pair.d, 't': run.t}
    if trace:
        results['steps'] = [step.to_dict() for step in run.steps]
    emit([OutputRecord('reduce', {'k': k, 'x': x, 'y': y}, results)], settings)


def cmd_t(settings, k, c):
    "iteration count t(k, c)"
    k, c = _parse_int('t', 'k', k), _parse_int('t', 'c', c)
    t = iteration_count(k, c)
    emit([OutputRecord('t', {'k': k, 'c': c}, {'t': t, 'm': m_of_k(k)})], settings)


def cmd_nk(settings, k, method):
    "N(k), the worst-case iteration count modulo k"
    k = _parse_int('nk', 'k', k, minimum=3)
    row = table_row(k, method, ceiling=settings.ceiling,
                    family=settings.family, workers=settings.workers)
    emit([OutputRecord('nk', {'k': k}, _row_results(row, settings))],
         settings)


def cmd_worst(settings, k):
    "every c with t(k, c) == N(k)"
    k = _parse_int('worst', 'k', k, minimum=3)
    row = worst_case_row(k, ceiling=settings.ceiling,
                         family=settings.family, workers=settings.workers)
    if settings.strict and not row.complete:
        raise TooLarge('worst', k, settings.ceiling)
    emit([OutputRecord('worst', {'k': k}, _row_results(row, settings))], settings)


def cmd_table(settings, k, pow2_even, min_s, max_s, method):
    "one N(k) row per modulus"
    ks = [_parse_int('table', 'k', text, minimum=3) for text in (k or [])]
    if pow2_even:
        ks.extend(even_powers_of_two(_parse_int('table', 'min_s', min_s),
                                     _parse_int('table', 'max_s', max_s)))
    if method not in METHODS:
        raise InvalidInput('table', f'expected method in {METHODS!r}', method=method)
    cached = cache_mod.load(settings.cache) if settings.cache else {}
    rows, fresh = [], []
    for mod in ks:
        hit = cached.get(mod)
        if hit is not None and cache_mod.reusable(hit, method):
            logger.debug('table: k=%s from cache', mod)
            rows.append(hit)
            continue
        row = table_row(mod, method, ceiling=settings.ceiling,
                        family=settings.family, workers=settings.workers)
        rows.append(row)
        fresh.append(row)
    if settings.cache:
        cache_mod.append(settings.cache, fresh, witness_cap=settings.witness_cap)
    emit([OutputRecord('table', {'k': row.k}, _row_results(row, settings)) for row in rows],
         settings)


def cmd_cf(settings, num, den):
    "continued fraction of num/den"
    num = _parse_int('cf', 'num', num)
    den = _parse_int('cf', 'den', den, minimum=0)
    pattern = cf_expansion(num, den)
    results = {'quotients': list(pattern.q),
               'length': len(pattern),
               'ones_prefix': ones_prefix_len(pattern),
               'convergents': [f'{h}/{q}' for h, q in convergents(pattern)]}
    emit([OutputRecord('cf', {'num': num, 'den': den}, results)], settings)


def cmd_intervals(settings, k, p):
    "the Fibonacci interval I_p(k)"
    k, p = _parse_int('intervals', 'k', k), _parse_int('intervals', 'p', p)
    interval = interval_I(k, p)
    cap = settings.witness_cap
    results = {'lo': str(interval.lo),
               'hi': str(interval.hi),
               'member_count': interval.member_count(),
               'members': list(interval.members()[:cap]),
               'coprime_count': interval.coprime_count(),
               'coprime': list(islice(iter_members_J(k, p), cap))}
    emit([OutputRecord('intervals', {'k': k, 'p': p}, results)], settings)


def cmd_sigma(settings, k, t, p):
    "trailing-pair solutions for the all-ones pattern with a 2 at p"
    k = _parse_int('sigma', 'k', k, minimum=3)
    t, p = _parse_int('sigma', 't', t), _parse_int('sigma', 'p', p)
    candidates = sigma_solutions(k, t, p)
    results = {'candidate_count': len(candidates),
               'accepted': [cand.c for cand in candidates if cand.accepted],
               'candidates': [cand.to_dict() for cand in candidates]}
    emit([OutputRecord('sigma', {'k': k, 't': t, 'p': p}, results)], settings)


def cmd_scan(settings, start, stop, out):
    "report where N(k) falls more than two below m(k)"
    start = _parse_int('scan', 'start', start, minimum=3)
    stop = _parse_int('scan', 'stop', stop, minimum=3)
    report = scan_lower_bound(range(start, stop + 1),
                              family=settings.family, ceiling=settings.ceiling)
    results = {'checked': report.checked,
               'violations': [row.k for row in report.violations],
               'pow4_below': [row.k for row in report.pow4_below],
               'gaps': [f'{gap}:{count}' for gap, count in sorted(report.gaps.items())]}
    emit([OutputRecord('scan', {'start': start, 'stop': stop}, results)], settings, out=out)


_EXIT_CODES = ((Inconsistent, 3), (JWAError, 2))


def _exit_code(exc):
    for exc_type, code in _EXIT_CODES:
        if isinstance(exc, exc_type):
            return code
    return 1


@face_middleware(provides=['settings'],
                 flags=[Flag('--format', parse_as=str, missing='tsv',
                             doc='output format, tsv or json'),
                        Flag('--strict', parse_as=True,
                             doc='fail when a witness list cannot be proven complete'),
                        Flag('--cache', parse_as=str, missing=None,
                             doc='path of a table cache to reuse and extend'),
                        Flag('--ceiling', parse_as=int, missing=BRUTE_CEILING,
                             doc='largest k handled by brute force'),
                        Flag('--witness-cap', parse_as=int, missing=WITNESS_CAP,
                             doc='most witnesses printed per row'),
                        Flag('--workers', parse_as=int, missing=WORKERS,
                             doc='processes for brute force'),
                        Flag('--family', parse_as=str, missing=FAMILY_ALL,
                             doc='quotient patterns solved analytically, all or single-two'),
                        Flag('--verbose', parse_as=True, doc='debug logging')])
def mw_settings(next_, format, strict, cache, ceiling, witness_cap, workers, family, verbose):
    if verbose:
        logging.getLogger('jwa').setLevel(logging.DEBUG)
    try:
        if format not in FORMATS:
            raise InvalidInput('jwa', f'expected --format to be one of {", ".join(FORMATS)}',
                               format=format)
        settings = Settings(format, strict, cache, ceiling, witness_cap, workers, family)
        return next_(settings=settings)
    except JWAError as je:
        print(f'{je.__class__.__name__}: {je}', file=sys.stderr)
        sys.exit(_exit_code(je))


def get_command():
    cmd = Command(jwa_root, name='jwa', middlewares=[mw_settings])

    reduce_cmd = Command(cmd_reduce, name='reduce')
    for name in ('--k', '--x', '--y'):
        reduce_cmd.add(name, str, missing=None)
    reduce_cmd.add('--trace', parse_as=True, doc='print every step of the run')
    cmd.add(reduce_cmd)

    t_cmd = Command(cmd_t, name='t')
    t_cmd.add('--k', str, missing=None)
    t_cmd.add('--c', str, missing=None)
    cmd.add(t_cmd)

    nk_cmd = Command(cmd_nk, name='nk')
    nk_cmd.add('--k', str, missing=None)
    nk_cmd.add('--method', str, missing=ANALYTIC, doc='brute, analytic, or both')
    cmd.add(nk_cmd)

    worst_cmd = Command(cmd_worst, name='worst')
    worst_cmd.add('--k', str, missing=None)
    cmd.add(worst_cmd)

    table_cmd = Command(cmd_table, name='table')
    table_cmd.add('--k', str, multi='extend', missing=None, doc='a modulus, repeatable')
    table_cmd.add('--pow2-even', parse_as=True, doc='add k = 2**(2s) for each s in range')
    table_cmd.add('--min-s', str, missing='2')
    table_cmd.add('--max-s', str, missing='16')
    table_cmd.add('--method', str, missing=ANALYTIC, doc='brute, analytic, or both')
    cmd.add(table_cmd)

    cf_cmd = Command(cmd_cf, name='cf')
    cf_cmd.add('--num', str, missing=None)
    cf_cmd.add('--den', str, missing=None)
    cmd.add(cf_cmd)

    intervals_cmd = Command(cmd_intervals, name='intervals')
    intervals_cmd.add('--k', str, missing=None)
    intervals_cmd.add('--p', str, missing=None)
    cmd.add(intervals_cmd)

    sigma_cmd = Command(cmd_sigma, name='sigma')
    for name in ('--k', '--t', '--p'):
        sigma_cmd.add(name, str, missing=None)
    cmd.add(sigma_cmd)

    scan_cmd = Command(cmd_scan, name='scan')
    scan_cmd.add('--start', str, missing=None)
    scan_cmd.add('--stop', str, missing=None)
    scan_cmd.add('--out', str, missing=None, doc='write the report here instead of stdout')
    cmd.add(scan_cmd)

    return cmd


def main(argv):
    cmd = get_command()
    return cmd.run(argv) or 0


def console_main():
    _enable_debug = os.getenv('JWA_CLI_DEBUG')
    if _enable_debug:
        print(sys.argv)
    logging.basicConfig(level=logging.DEBUG if JWA_DEBUG else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        sys.exit(main(sys.argv) or 0)
    except Exception:
        if _enable_debug:
            import pdb;pdb.post_mortem()
        raise
