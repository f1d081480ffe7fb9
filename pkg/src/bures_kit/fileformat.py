"""Plain-text matrix and curve files.

A matrix block is a header line ``dim=<d> kind=<kind>`` followed by
``d*d`` lines ``<re> <im>`` in row-major order.  Vectors use
``kind=vector`` with an optional ``dim_right=<r>`` and ``d*r`` lines.
A curve file starts with ``grid=<s0>,<s1>,...``, may carry ``# key=value``
metadata lines, and separates its matrix blocks with ``---``.
Numbers are written with ``repr`` so files round-trip losslessly.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError

KINDS = ('density', 'positive', 'amplitude', 'vector')


@dataclass
class MatrixFile:
    data: np.ndarray
    kind: str = 'density'

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def dim_right(self) -> int:
        return self.data.shape[1] if self.data.ndim == 2 else 1


@dataclass
class CurveFile:
    grid: np.ndarray
    blocks: list
    metadata: dict = field(default_factory=dict)


def _parse_header(line: str) -> dict:
    fields = {}
    for token in line.split():
        key, sep, value = token.partition('=')
        if not sep:
            raise ParseError(f'malformed header token {token!r}')
        fields[key] = value
    return fields


def format_matrix(M, kind: str = 'density') -> str:
    if kind not in KINDS:
        raise ParseError(f'unknown kind {kind!r}')
    M = np.asarray(M, dtype=np.complex128)
    if kind == 'vector':
        M = M.reshape(M.shape[0], -1)
        header = f'dim={M.shape[0]} kind=vector dim_right={M.shape[1]}'
    else:
        header = f'dim={M.shape[0]} kind={kind}'
    lines = [header] + [f'{float(z.real)!r} {float(z.imag)!r}' for z in M.reshape(-1)]
    return '\n'.join(lines) + '\n'


def parse_matrix(text: str) -> MatrixFile:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ParseError('empty matrix block')
    header = _parse_header(lines[0])
    try:
        d = int(header['dim'])
        kind = header.get('kind', 'density')
        d_right = int(header.get('dim_right', d if kind != 'vector' else 1))
    except (KeyError, ValueError) as exc:
        raise ParseError(f'bad header {lines[0]!r}') from exc
    if kind not in KINDS:
        raise ParseError(f'unknown kind {kind!r}')
    if d < 1 or d_right < 1:
        raise ParseError('dimensions must be positive')
    expected = d * d_right
    if len(lines) - 1 != expected:
        raise ParseError(f'expected {expected} entries, found {len(lines) - 1}')
    entries = np.empty(expected, dtype=np.complex128)
    for i, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f'entry line {i + 2} must hold "re im": {line!r}')
        try:
            entries[i] = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ParseError(f'non-numeric entry on line {i + 2}: {line!r}') from exc
    if not np.all(np.isfinite(entries)):
        raise ParseError('non-finite entry')
    data = entries.reshape(d, d_right)
    if kind == 'vector' and d_right == 1:
        data = data[:, 0]
    return MatrixFile(data, kind)


def format_curve(grid, states, kind: str = 'density', metadata: dict | None = None) -> str:
    out = ['grid=' + ','.join(repr(float(s)) for s in grid)]
    for key, value in (metadata or {}).items():
        out.append(f'# {key}={value}')
    blocks = [format_matrix(M, kind) for M in states]
    return '\n'.join(out) + '\n' + '---\n'.join(blocks)


def parse_curve(text: str) -> CurveFile:
    lines = text.splitlines()
    grid = None
    metadata = {}
    body_start = 0
    for i, line in enumerate(lines):
        s = line.strip()
        if not s:
            continue
        if s.startswith('#'):
            key, sep, value = s.lstrip('#').strip().partition('=')
            if sep:
                metadata[key.strip()] = value.strip()
            continue
        if s.startswith('grid='):
            try:
                grid = np.array([float(x) for x in s[5:].split(',') if x.strip()])
            except ValueError as exc:
                raise ParseError(f'bad grid line {s!r}') from exc
            continue
        body_start = i
        break
    else:
        body_start = len(lines)
    if grid is None:
        raise ParseError('curve file needs a grid= header')
    chunks, current = [], []
    for line in lines[body_start:]:
        if line.strip() == '---':
            chunks.append('\n'.join(current))
            current = []
        else:
            current.append(line)
    if any(ln.strip() for ln in current):
        chunks.append('\n'.join(current))
    blocks = [parse_matrix(c) for c in chunks]
    if len(blocks) != grid.size:
        raise ParseError(f'{len(blocks)} blocks for {grid.size} grid points')
    return CurveFile(grid, blocks, metadata)


def read_matrix(path) -> MatrixFile:
    return parse_matrix(Path(path).read_text())


def read_curve(path) -> CurveFile:
    return parse_curve(Path(path).read_text())


def write_matrix(path, M, kind: str = 'density') -> None:
    Path(path).write_text(format_matrix(M, kind))
