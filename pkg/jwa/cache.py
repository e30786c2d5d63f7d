"""A plain-text store of computed table rows.

One row per line, tab separated: ``k m N method witnesses``, with
witnesses comma separated. Rows are only ever appended; when a *k*
appears more than once, the last line wins.
"""

import os
import logging
import threading

from boltons.fileutils import mkdir_p

from .core import JWAError
from .worst import TableRow, METHODS, BOTH

logger = logging.getLogger(__name__)

_WRITE_LOCK = threading.Lock()


class CacheError(JWAError):
    """Raised when a cache line cannot be parsed."""
    def __init__(self, path, lineno, line):
        self.path, self.lineno, self.line = path, lineno, line
        super().__init__(path, lineno, line)

    def get_message(self):
        return f'{self.path}:{self.lineno}: malformed cache line {self.line!r}'


def format_line(row):
    witnesses = ','.join(str(c) for c in row.witnesses)
    return f'{row.k}\t{row.m}\t{row.n_big}\t{row.method}\t{witnesses}\n'


def parse_line(line, path='<cache>', lineno=0):
    parts = line.rstrip('\n').split('\t')
    if len(parts) != 5 or parts[3] not in METHODS:
        raise CacheError(path, lineno, line)
    try:
        k, m, n_big = (int(p) for p in parts[:3])
        witnesses = [int(c) for c in parts[4].split(',')] if parts[4] else []
    except ValueError:
        raise CacheError(path, lineno, line)
    # the stored list may be capped, so a loaded row never claims completeness
    return TableRow(k, m, n_big, witnesses, parts[3], complete=False)


def load(path):
    """Read *path* into a dict mapping *k* to its last :class:`TableRow`.
    A missing file loads as empty."""
    ret = {}
    try:
        f = open(path, encoding='utf8')
    except FileNotFoundError:
        return ret
    with f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            row = parse_line(line, path, lineno)
            ret[row.k] = row
    logger.debug('loaded %s cached rows from %s', len(ret), path)
    return ret


def append(path, rows, witness_cap=None):
    """Append *rows* to *path*, keeping at most *witness_cap* witnesses
    per row."""
    lines = []
    for row in rows:
        if witness_cap is not None:
            row = TableRow(row.k, row.m, row.n_big, row.witnesses[:witness_cap],
                           row.method, complete=False)
        lines.append(format_line(row))
    if not lines:
        return
    dirname = os.path.dirname(os.path.abspath(path))
    mkdir_p(dirname)
    with _WRITE_LOCK:
        with open(path, 'a', encoding='utf8') as f:
            f.writelines(lines)


def reusable(row, method):
    """Whether a cached *row* may stand in for a fresh one computed by
    *method*. Rows checked both ways serve any method."""
    return row.method == method or row.method == BOTH
