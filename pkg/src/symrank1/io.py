"""Text formats for symmetric tensors and covariance-matrix sets.

Tensor file::

    symtensor m n k
    i1 i2 ... im value      (k lines, 1-based non-decreasing indices)

Matrix file (TVCA2 input)::

    matrices T n
    <T blocks of n rows with n values each>

Values are written with 17 significant digits so a write/read round trip is
exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .tensor import SymTensor, SymTensorSparse, sparsify


class FormatError(ValueError):
    pass


def format_float(v: float) -> str:
    return format(float(v), ".17g")


def _data_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def dumps_tensor(tensor: SymTensor) -> str:
    sp = sparsify(tensor, drop_zeros=False) if not isinstance(tensor, SymTensorSparse) else tensor
    out = [f"symtensor {sp.m} {sp.n} {sp.nnz}"]
    for idx, v in sp.terms:
        out.append(" ".join(str(i + 1) for i in idx) + " " + format_float(v))
    return "\n".join(out) + "\n"


def loads_tensor(text: str) -> SymTensorSparse:
    lines = _data_lines(text)
    if not lines:
        raise FormatError("empty tensor file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "symtensor":
        raise FormatError(f"bad header {lines[0]!r}; expected 'symtensor m n k'")
    try:
        m, n, k = (int(h) for h in head[1:])
    except ValueError as exc:
        raise FormatError(f"bad header {lines[0]!r}") from exc
    if len(lines) - 1 != k:
        raise FormatError(f"header announces {k} terms but file has {len(lines) - 1}")
    idx = np.zeros((k, m), dtype=np.intp)
    vals = np.zeros(k)
    for row, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != m + 1:
            raise FormatError(f"term line {row + 1} has {len(parts)} fields, expected {m + 1}")
        ii = [int(p) for p in parts[:m]]
        if any(b < a for a, b in zip(ii, ii[1:])):
            raise FormatError(f"term line {row + 1}: indices must be non-decreasing")
        if min(ii) < 1 or max(ii) > n:
            raise FormatError(f"term line {row + 1}: indices must lie in 1..{n}")
        idx[row] = np.array(ii) - 1
        vals[row] = float(parts[m])
    return SymTensorSparse(m, n, idx, vals)


def write_tensor(tensor: SymTensor, path) -> None:
    Path(path).write_text(dumps_tensor(tensor))


def read_tensor(path) -> SymTensorSparse:
    return loads_tensor(Path(path).read_text())


def loads_matrices(text: str) -> list[np.ndarray]:
    lines = _data_lines(text)
    if not lines:
        raise FormatError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "matrices":
        raise FormatError(f"bad header {lines[0]!r}; expected 'matrices T n'")
    t_count, n = int(head[1]), int(head[2])
    rows = [[float(v) for v in line.split()] for line in lines[1:]]
    if len(rows) != t_count * n or any(len(r) != n for r in rows):
        raise FormatError(f"expected {t_count} blocks of {n}x{n} values")
    arr = np.array(rows).reshape(t_count, n, n)
    return [arr[t] for t in range(t_count)]


def dumps_matrices(matrices) -> str:
    matrices = [np.asarray(a, dtype=float) for a in matrices]
    n = matrices[0].shape[0] if matrices else 0
    out = [f"matrices {len(matrices)} {n}"]
    for a in matrices:
        for row in a:
            out.append(" ".join(format_float(v) for v in row))
    return "\n".join(out) + "\n"


def read_matrices(path) -> list[np.ndarray]:
    return loads_matrices(Path(path).read_text())


def write_matrices(matrices, path) -> None:
    Path(path).write_text(dumps_matrices(matrices))
