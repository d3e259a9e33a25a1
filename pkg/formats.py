# formats.py
"""
Plain-text bundles holding a construction: component codes and graph.

    kind multilevel
    seed 2024
    [graph]
    n 8
    m 2
    degrees 4 4 2
    lambda 2.1 2.3 1.4
    seed 2024
    edges
    <level> <left> <right>      one line per edge, global edge order
    end
    [code block.1]
    family linear               or reed-solomon (rows omitted)
    t 1
    poly 3
    n 10
    k 4
    rows
    <hex>                       one generator row per line, ceil(t/4) hex digits per symbol
    end

Roles: block.i (tower block G_i), outer.i, left, right, aux, aux.i, right.i.
Blank lines and lines starting with '#' are ignored.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from codes.linear import LinearCode
from codes.reed_solomon import ReedSolomonCode
from errors import ExpanderCodeError, FormatError
from fields import get_context
from graphs import BipartiteGraph, MultilevelGraph

logger = logging.getLogger(__name__)

KINDS = ('serial', 'single', 'multilevel')


@dataclass
class Bundle:
    kind: str
    seed: Optional[int] = None
    graph: Optional[MultilevelGraph] = None
    codes: Dict[str, LinearCode] = field(default_factory=dict)
    lambdas: List[float] = field(default_factory=list)

    def indexed(self, prefix: str) -> List[LinearCode]:
        """Codes with roles prefix.1, prefix.2, ... in order."""
        out = []
        i = 1
        while f"{prefix}.{i}" in self.codes:
            out.append(self.codes[f"{prefix}.{i}"])
            i += 1
        return out


# =============================================================================
# Writing
# =============================================================================

def _symbol_width(t: int) -> int:
    return (t + 3) // 4


def _code_lines(role: str, code: LinearCode) -> List[str]:
    ctx = code.ctx
    family = 'reed-solomon' if isinstance(code, ReedSolomonCode) else 'linear'
    lines = [f"[code {role}]", f"family {family}", f"t {ctx.t}", f"poly {ctx.primitive_poly}",
             f"n {code.n}", f"k {code.k}"]
    if family == 'linear':
        width = _symbol_width(ctx.t)
        lines.append('rows')
        lines.extend(''.join(f"{int(s):0{width}x}" for s in row) for row in code.generator)
        lines.append('end')
    return lines


def _graph_lines(graph: MultilevelGraph) -> List[str]:
    lines = ['[graph]', f"n {graph.n}", f"m {graph.m}",
             'degrees ' + ' '.join(str(d) for d in graph.degrees),
             'lambda ' + ' '.join(f"{lam:.12g}" for lam in graph.lambdas())]
    if graph.seed is not None:
        lines.append(f"seed {graph.seed}")
    lines.append('edges')
    for level, g in enumerate(graph.levels, start=1):
        lines.extend(f"{level} {int(v)} {int(w)}" for v, w in g.edges)
    lines.append('end')
    return lines


def dumps(bundle: Bundle) -> str:
    lines = [f"kind {bundle.kind}"]
    if bundle.seed is not None:
        lines.append(f"seed {bundle.seed}")
    if bundle.graph is not None:
        lines.extend(_graph_lines(bundle.graph))
    for role, code in bundle.codes.items():
        lines.extend(_code_lines(role, code))
    return '\n'.join(lines) + '\n'


def save(bundle: Bundle, path: str):
    with open(path, 'w') as f:
        f.write(dumps(bundle))
    logger.info(f"Saved {bundle.kind} bundle to {path}")


# =============================================================================
# Reading
# =============================================================================

class _Lines:
    """Numbered significant lines with a cursor."""

    def __init__(self, text: str):
        self.items: List[Tuple[int, str]] = [
            (number, raw.strip()) for number, raw in enumerate(text.splitlines(), start=1)
            if raw.strip() and not raw.strip().startswith('#')
        ]
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def peek(self) -> Tuple[int, str]:
        return self.items[self.pos]

    def next(self) -> Tuple[int, str]:
        if self.done():
            last = self.items[-1][0] if self.items else 0
            raise FormatError("unexpected end of bundle", line=last)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def field(self, key: str) -> Tuple[int, List[str]]:
        number, text = self.next()
        parts = text.split()
        if parts[0] != key or len(parts) < 2:
            raise FormatError(f"expected '{key} <value>', got {text!r}", line=number)
        return number, parts[1:]

    def integer(self, key: str) -> int:
        number, values = self.field(key)
        try:
            return int(values[0])
        except ValueError:
            raise FormatError(f"{key} must be an integer, got {values[0]!r}", line=number)

    def block(self) -> List[Tuple[int, str]]:
        """Lines up to the next 'end'."""
        out = []
        while True:
            number, text = self.next()
            if text == 'end':
                return out
            out.append((number, text))


def _read_graph(lines: _Lines, header: int) -> Tuple[MultilevelGraph, List[float]]:
    n = lines.integer('n')
    m = lines.integer('m')
    number, values = lines.field('degrees')
    try:
        degrees = [int(v) for v in values]
    except ValueError:
        raise FormatError("degrees must be integers", line=number)
    if len(degrees) != m + 1:
        raise FormatError(f"expected {m + 1} degrees, got {len(degrees)}", line=number)
    number, values = lines.field('lambda')
    try:
        lambdas = [float(v) for v in values]
    except ValueError:
        raise FormatError("lambda values must be numbers", line=number)
    seed = None
    if not lines.done() and lines.peek()[1].startswith('seed'):
        seed = lines.integer('seed')
    number, text = lines.next()
    if text != 'edges':
        raise FormatError(f"expected 'edges', got {text!r}", line=number)

    per_level: List[List[Tuple[int, int]]] = [[] for _ in range(m + 1)]
    for number, text in lines.block():
        try:
            level, v, w = (int(x) for x in text.split())
        except ValueError:
            raise FormatError(f"edge line must be '<level> <left> <right>', got {text!r}", line=number)
        if not 1 <= level <= m + 1:
            raise FormatError(f"edge level {level} outside 1..{m + 1}", line=number)
        per_level[level - 1].append((v, w))
    try:
        levels = [BipartiteGraph(n, d, np.array(e, dtype=np.int64).reshape(-1, 2))
                  for d, e in zip(degrees, per_level)]
        return MultilevelGraph(n, levels, seed=seed), lambdas
    except ExpanderCodeError as e:
        raise FormatError(f"invalid graph: {e}", line=header)


def _read_code(lines: _Lines, role: str, header: int) -> LinearCode:
    number, values = lines.field('family')
    family = values[0]
    if family not in ('linear', 'reed-solomon'):
        raise FormatError(f"unknown code family {family!r}", line=number)
    t = lines.integer('t')
    poly = lines.integer('poly')
    n = lines.integer('n')
    k = lines.integer('k')
    try:
        ctx = get_context(t, poly)
    except ExpanderCodeError as e:
        raise FormatError(str(e), line=header)

    try:
        if family == 'reed-solomon':
            return ReedSolomonCode(ctx, n, k, name=role)
        number, text = lines.next()
        if text != 'rows':
            raise FormatError(f"expected 'rows', got {text!r}", line=number)
        width = _symbol_width(t)
        rows = []
        for number, text in lines.block():
            if len(text) != n * width:
                raise FormatError(f"row has {len(text)} hex digits, expected {n * width}", line=number)
            try:
                rows.append([int(text[j * width:(j + 1) * width], 16) for j in range(n)])
            except ValueError:
                raise FormatError(f"row is not hexadecimal: {text!r}", line=number)
        if len(rows) != k:
            raise FormatError(f"[code {role}] has {len(rows)} rows, expected k={k}", line=header)
        return LinearCode(ctx, np.array(rows, dtype=np.int64), name=role)
    except (ExpanderCodeError, ValueError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"invalid code {role}: {e}", line=header)


def loads(text: str) -> Bundle:
    """
    Parse a bundle.

    Raises:
        FormatError: with the offending line number
    """
    lines = _Lines(text)
    if lines.done():
        raise FormatError("empty bundle", line=0)
    number, values = lines.field('kind')
    if values[0] not in KINDS:
        raise FormatError(f"unknown kind {values[0]!r}; expected one of {KINDS}", line=number)
    bundle = Bundle(kind=values[0])
    if not lines.done() and lines.peek()[1].startswith('seed'):
        bundle.seed = lines.integer('seed')

    while not lines.done():
        number, text = lines.next()
        if text == '[graph]':
            if bundle.graph is not None:
                raise FormatError("duplicate [graph] section", line=number)
            bundle.graph, bundle.lambdas = _read_graph(lines, number)
        elif text.startswith('[code ') and text.endswith(']'):
            role = text[len('[code '):-1].strip()
            if role in bundle.codes:
                raise FormatError(f"duplicate code role {role!r}", line=number)
            bundle.codes[role] = _read_code(lines, role, number)
        else:
            raise FormatError(f"unexpected line {text!r}", line=number)
    return bundle


def load(path: str) -> Bundle:
    with open(path) as f:
        return loads(f.read())
