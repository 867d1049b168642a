"""Matrix Market exchange for dense real matrices.

Reads `array` and `coordinate` files with `general` or `symmetric` storage
(symmetric storage is expanded to the full matrix). Writes `array general`
with 17 significant digits, so a write/read round trip is bitwise exact.
Malformed input raises MatrixMarketParseError carrying the 1-based line number.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from beamlu.core.errors import InvalidArgumentError, MatrixMarketParseError
from beamlu.core.logging import get_logger
from beamlu.linalg.dense import as_matrix

logger = get_logger(__name__)

_BANNER = "%%matrixmarket"
_FORMATS = {"array", "coordinate"}
_FIELDS = {"real", "integer", "double"}
_SYMMETRIES = {"general", "symmetric"}


def _tokens(path: Path) -> list[tuple[int, list[str]]]:
    """(line number, tokens) for every non-comment, non-blank line after the banner."""
    out: list[tuple[int, list[str]]] = []
    with path.open("r", encoding="utf-8") as fh:
        for num, raw in enumerate(fh, start=1):
            if num == 1:
                continue
            s = raw.strip()
            if not s or s.startswith("%"):
                continue
            out.append((num, s.split()))
    return out


def _parse_header(path: Path) -> tuple[str, str]:
    with path.open("r", encoding="utf-8") as fh:
        first = fh.readline()
    parts = first.strip().lower().split()
    src = str(path)
    if len(parts) != 5 or parts[0] != _BANNER or parts[1] != "matrix":
        raise MatrixMarketParseError(line=1, message="expected '%%MatrixMarket matrix <format> <field> <symmetry>'", path=src)
    fmt, fld, sym = parts[2], parts[3], parts[4]
    if fmt not in _FORMATS:
        raise MatrixMarketParseError(line=1, message=f"unsupported format {fmt!r}", path=src)
    if fld not in _FIELDS:
        raise MatrixMarketParseError(line=1, message=f"unsupported field {fld!r}", path=src)
    if sym not in _SYMMETRIES:
        raise MatrixMarketParseError(line=1, message=f"unsupported symmetry {sym!r}", path=src)
    return fmt, sym


def _ints(num: int, toks: list[str], count: int, src: str) -> list[int]:
    if len(toks) != count:
        raise MatrixMarketParseError(line=num, message=f"expected {count} integers, got {len(toks)} tokens", path=src)
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise MatrixMarketParseError(line=num, message=f"bad integer in {' '.join(toks)!r}", path=src) from None


def _float(num: int, tok: str, src: str) -> float:
    try:
        value = float(tok)
    except ValueError:
        raise MatrixMarketParseError(line=num, message=f"bad value {tok!r}", path=src) from None
    if not np.isfinite(value):
        raise MatrixMarketParseError(line=num, message=f"non-finite value {tok!r}", path=src)
    return value


def read_matrix_market(path: str | Path) -> np.ndarray:
    p = Path(path)
    if not p.is_file():
        raise InvalidArgumentError(f"Matrix Market file not found: {p}")
    src = str(p)
    fmt, sym = _parse_header(p)
    lines = _tokens(p)
    if not lines:
        raise MatrixMarketParseError(line=1, message="missing size line", path=src)

    size_num, size_toks = lines[0]
    body = lines[1:]
    if fmt == "array":
        rows, cols = _ints(size_num, size_toks, 2, src)
        expected = rows * cols if sym == "general" else rows * (rows + 1) // 2
    else:
        rows, cols, expected = _ints(size_num, size_toks, 3, src)
    if rows < 1 or cols < 1:
        raise MatrixMarketParseError(line=size_num, message=f"invalid size {rows}x{cols}", path=src)
    if sym == "symmetric" and rows != cols:
        raise MatrixMarketParseError(line=size_num, message="symmetric storage needs a square matrix", path=src)
    if len(body) != expected:
        where = body[expected][0] if len(body) > expected else (body[-1][0] if body else size_num)
        raise MatrixMarketParseError(line=where, message=f"expected {expected} entries, found {len(body)}", path=src)

    a = np.zeros((rows, cols))
    if fmt == "array":
        # column-major; symmetric stores the lower triangle only
        cells = [(i, j) for j in range(cols) for i in range(rows) if sym == "general" or i >= j]
        for (num, toks), (i, j) in zip(body, cells):
            if len(toks) != 1:
                raise MatrixMarketParseError(line=num, message="expected one value per line", path=src)
            a[i, j] = _float(num, toks[0], src)
    else:
        for num, toks in body:
            if len(toks) != 3:
                raise MatrixMarketParseError(line=num, message="expected 'row col value'", path=src)
            i, j = _ints(num, toks[:2], 2, src)
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise MatrixMarketParseError(line=num, message=f"index ({i}, {j}) outside {rows}x{cols}", path=src)
            if sym == "symmetric" and i < j:
                raise MatrixMarketParseError(line=num, message="symmetric storage expects the lower triangle", path=src)
            a[i - 1, j - 1] = _float(num, toks[2], src)
    if sym == "symmetric":
        a = np.tril(a) + np.tril(a, -1).T

    logger.info("matrix_market_read", path=src, rows=rows, cols=cols, format=fmt, symmetry=sym)
    return a


def write_matrix_market(path: str | Path, a: np.ndarray) -> None:
    m = as_matrix(a)
    p = Path(path)
    rows, cols = m.shape
    lines = ["%%MatrixMarket matrix array real general", f"{rows} {cols}"]
    lines.extend(f"{value:.17g}" for value in m.T.reshape(-1))
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("matrix_market_written", path=str(p), rows=rows, cols=cols)
