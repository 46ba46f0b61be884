"""Linear algebra over GF(2) on bit-packed matrices.

Rows are stored as little-endian 64-bit words, so row operations
(the workhorse of elimination, syndrome computation and decoding)
are word-wise XORs.  Shape-changing assembly (kron, stacking,
transpose) goes through a dense 0/1 view, which is cheap at the
matrix sizes used here.

Also implements the MacKay ``alist`` sparse text format used to
exchange parity-check matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NoRightInverse, NoSolution

_WORD = 64


def _n_words(cols: int) -> int:
    return (cols + _WORD - 1) // _WORD


def _pack(dense: np.ndarray) -> np.ndarray:
    """Pack a dense 0/1 array of shape (rows, cols) into uint64 words."""
    dense = np.atleast_2d(np.asarray(dense, dtype=np.uint8) & 1)
    rows, cols = dense.shape
    words = _n_words(cols)
    if words == 0:
        return np.zeros((rows, 0), dtype=np.uint64)
    padded = np.zeros((rows, words * _WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if cols == 0:
        return np.zeros((rows, 0), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


def _pack_vec(v: np.ndarray, cols: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.uint8).reshape(1, -1)
    if v.shape[1] != cols:
        raise ValueError(f"expected vector of length {cols}, got {v.shape[1]}")
    return _pack(v)[0]


class F2Matrix:
    """Matrix over GF(2); the backbone of every code and decoder here."""

    __slots__ = ("rows", "cols", "_words")

    def __init__(self, rows: int, cols: int, _words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        if _words is None:
            _words = np.zeros((rows, _n_words(cols)), dtype=np.uint64)
        self._words = _words

    # -- construction -------------------------------------------------

    @classmethod
    def from_dense(cls, array: Iterable) -> "F2Matrix":
        dense = np.atleast_2d(np.asarray(array, dtype=np.uint8))
        rows, cols = dense.shape
        return cls(rows, cols, _pack(dense))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    def copy(self) -> "F2Matrix":
        return F2Matrix(self.rows, self.cols, self._words.copy())

    # -- views ---------------------------------------------------------

    def to_dense(self) -> np.ndarray:
        return _unpack(self._words, self.cols)

    def row_dense(self, i: int) -> np.ndarray:
        return _unpack(self._words[i : i + 1], self.cols)[0]

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        w, b = divmod(j, _WORD)
        return int((self._words[i, w] >> np.uint64(b)) & np.uint64(1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, F2Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self._words, other._words))
        )

    def __hash__(self) -> int:  # content hash; matrices are treated as values
        return hash((self.rows, self.cols, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"F2Matrix({self.rows}x{self.cols})"

    @property
    def T(self) -> "F2Matrix":
        return F2Matrix.from_dense(self.to_dense().T)

    def is_zero(self) -> bool:
        return not self._words.any()

    # -- products ------------------------------------------------------

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = np.zeros((self.rows, other._words.shape[1]), dtype=np.uint64)
        dense = self.to_dense()
        for i in range(self.rows):
            sel = np.nonzero(dense[i])[0]
            if sel.size:
                out[i] = np.bitwise_xor.reduce(other._words[sel], axis=0)
        return F2Matrix(self.rows, other.cols, out)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Return M @ v over GF(2) as a dense uint8 vector."""
        vw = _pack_vec(v, self.cols)
        if vw.size == 0:
            return np.zeros(self.rows, dtype=np.uint8)
        acc = np.bitwise_and(self._words, vw[None, :])
        return (np.bitwise_count(acc).sum(axis=1) & 1).astype(np.uint8)

    def rmatvec(self, v: np.ndarray) -> np.ndarray:
        """Return v @ M (v a row vector) by XORing the selected rows."""
        v = np.asarray(v, dtype=np.uint8) & 1
        if v.shape != (self.rows,):
            raise ValueError(f"expected vector of length {self.rows}, got {v.shape}")
        sel = np.nonzero(v)[0]
        if sel.size == 0:
            return np.zeros(self.cols, dtype=np.uint8)
        w = np.bitwise_xor.reduce(self._words[sel], axis=0)
        return _unpack(w[None, :], self.cols)[0]

    # -- elimination ---------------------------------------------------

    def eliminate(self, column_order: Sequence[int] | None = None) -> "EliminationResult":
        """Row reduce, trying pivots greedily in ``column_order``.

        Returns the pivot columns (in the order they were chosen), an
        invertible row transform T, and the reduced matrix R = T @ M in
        reduced row-echelon form relative to the supplied order.  Ties
        are broken by taking the first eligible nonzero row.
        """
        if column_order is None:
            order = range(self.cols)
        else:
            order = list(column_order)
            if sorted(order) != list(range(self.cols)):
                raise ValueError("column_order must be a permutation of range(cols)")
        m = self._words.copy()
        t = F2Matrix.identity(self.rows)._words
        pivots: list[int] = []
        r = 0
        for col in order:
            if r == self.rows:
                break
            w, b = divmod(col, _WORD)
            mask = np.uint64(1 << b)
            hits = np.nonzero(m[r:, w] & mask)[0]
            if hits.size == 0:
                continue
            p = r + int(hits[0])
            if p != r:
                m[[r, p]] = m[[p, r]]
                t[[r, p]] = t[[p, r]]
            elim = (m[:, w] & mask).astype(bool)
            elim[r] = False
            if elim.any():
                m[elim] ^= m[r]
                t[elim] ^= t[r]
            pivots.append(col)
            r += 1
        return EliminationResult(
            pivot_columns=tuple(pivots),
            row_transform=F2Matrix(self.rows, self.rows, t),
            reduced=F2Matrix(self.rows, self.cols, m),
        )

    def rank(self) -> int:
        m = self._words.copy()
        r = 0
        for col in range(self.cols):
            if r == m.shape[0]:
                break
            w, b = divmod(col, _WORD)
            mask = np.uint64(1 << b)
            hits = np.nonzero(m[r:, w] & mask)[0]
            if hits.size == 0:
                continue
            p = r + int(hits[0])
            if p != r:
                m[[r, p]] = m[[p, r]]
            elim = (m[r + 1 :, w] & mask).astype(bool)
            if elim.any():
                m[r + 1 :][elim] ^= m[r]
            r += 1
        return r

    def right_inverse(self) -> "F2Matrix":
        """Return R with self @ R = I; raises if rows are dependent."""
        res = self.eliminate()
        if len(res.pivot_columns) < self.rows:
            raise NoRightInverse(f"rank {len(res.pivot_columns)} < {self.rows} rows")
        out = F2Matrix(self.cols, self.rows)
        for i, p in enumerate(res.pivot_columns):
            out._words[p] = res.row_transform._words[i]
        return out

    def kernel_basis(self) -> "F2Matrix":
        """Rows form a basis of the null space {v : M v = 0}."""
        res = self.eliminate()
        pivots = list(res.pivot_columns)
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = np.zeros((len(free), self.cols), dtype=np.uint8)
        reduced = res.reduced
        for k, f in enumerate(free):
            basis[k, f] = 1
            for i, p in enumerate(pivots):
                basis[k, p] = reduced[i, f]
        return F2Matrix.from_dense(basis) if free else F2Matrix(0, self.cols)

    def solve_columns(self, cols: Sequence[int], s: np.ndarray) -> np.ndarray:
        """Solve M x = s with x supported on ``cols``; dense result.

        Raises NoSolution if the restricted system is inconsistent.
        """
        cols = list(cols)
        if len(set(cols)) != len(cols):
            raise ValueError("column subset contains duplicates")
        s = np.asarray(s, dtype=np.uint8) & 1
        if s.shape != (self.rows,):
            raise ValueError("syndrome length does not match row count")
        sub = F2Matrix.from_dense(self.to_dense()[:, cols]) if cols else F2Matrix(self.rows, 0)
        res = sub.eliminate()
        rhs = res.row_transform.matvec(s)
        r = len(res.pivot_columns)
        if np.any(rhs[r:]):
            raise NoSolution("syndrome not in the image of the selected columns")
        x = np.zeros(self.cols, dtype=np.uint8)
        for i, p in enumerate(res.pivot_columns):
            # free columns of the restricted system are pinned to zero
            x[cols[p]] = rhs[i]
        return x


@dataclass(frozen=True)
class EliminationResult:
    """Outcome of F2Matrix.eliminate: T @ M = R with T invertible."""

    pivot_columns: tuple[int, ...]
    row_transform: F2Matrix
    reduced: F2Matrix


class RowSpace:
    """Incrementally built row space supporting membership queries.

    Keeps one reduced pivot row per leading column, so adding and
    reducing stay word-XOR operations.
    """

    def __init__(self, cols: int):
        self.cols = cols
        self._pivots: dict[int, np.ndarray] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _reduce_words(self, w: np.ndarray) -> np.ndarray:
        w = w.copy()
        for col, row in self._pivots.items():
            wi, b = divmod(col, _WORD)
            if w[wi] & np.uint64(1 << b):
                w ^= row
        return w

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Residue of vec modulo the current span (dense)."""
        w = self._reduce_words(_pack_vec(vec, self.cols))
        return _unpack(w[None, :], self.cols)[0]

    def contains(self, vec: np.ndarray) -> bool:
        return not self._reduce_words(_pack_vec(vec, self.cols)).any()

    def add(self, vec: np.ndarray) -> bool:
        """Add vec to the span; False when it was already a member."""
        w = self._reduce_words(_pack_vec(vec, self.cols))
        if not w.any():
            return False
        wi = int(np.nonzero(w)[0][0])
        iv = int(w[wi])
        lead = wi * _WORD + (iv & -iv).bit_length() - 1
        # keep existing pivot rows reduced against the new one
        mask = np.uint64(1 << (lead % _WORD))
        for col, row in self._pivots.items():
            if row[lead // _WORD] & mask:
                self._pivots[col] = row ^ w
        self._pivots[lead] = w
        return True


# -- assembly ------------------------------------------------------------


def kron(a: F2Matrix, b: F2Matrix) -> F2Matrix:
    return F2Matrix.from_dense(np.kron(a.to_dense(), b.to_dense()))


def hstack(blocks: Sequence[F2Matrix]) -> F2Matrix:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("row count mismatch in hstack")
    return F2Matrix.from_dense(np.hstack([b.to_dense() for b in blocks]))


def vstack(blocks: Sequence[F2Matrix]) -> F2Matrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("column count mismatch in vstack")
    return F2Matrix.from_dense(np.vstack([b.to_dense() for b in blocks]))


def block_diag(blocks: Sequence[F2Matrix]) -> F2Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.uint8)
    r = c = 0
    for b in blocks:
        out[r : r + b.rows, c : c + b.cols] = b.to_dense()
        r += b.rows
        c += b.cols
    return F2Matrix.from_dense(out)


# -- MacKay alist format -------------------------------------------------


def to_alist(m: F2Matrix) -> str:
    """Serialize in MacKay's alist format (1-based, zero padded)."""
    dense = m.to_dense()
    col_lists = [list(np.nonzero(dense[:, j])[0] + 1) for j in range(m.cols)]
    row_lists = [list(np.nonzero(dense[i, :])[0] + 1) for i in range(m.rows)]
    max_col = max((len(c) for c in col_lists), default=0)
    max_row = max((len(r) for r in row_lists), default=0)
    lines = [
        f"{m.cols} {m.rows}",
        f"{max_col} {max_row}",
        " ".join(str(len(c)) for c in col_lists),
        " ".join(str(len(r)) for r in row_lists),
    ]
    for entries in col_lists:
        padded = entries + [0] * (max_col - len(entries))
        lines.append(" ".join(str(e) for e in padded))
    for entries in row_lists:
        padded = entries + [0] * (max_row - len(entries))
        lines.append(" ".join(str(e) for e in padded))
    return "\n".join(lines) + "\n"


def from_alist(text: str) -> F2Matrix:
    lines = text.splitlines()
    if len(lines) < 4:
        raise ValueError("truncated alist")
    cols, rows = (int(x) for x in lines[0].split())
    col_degs = [int(x) for x in lines[2].split()]
    row_degs = [int(x) for x in lines[3].split()]
    if len(col_degs) != cols or len(row_degs) != rows:
        raise ValueError("alist degree lists do not match header")
    dense = np.zeros((rows, cols), dtype=np.uint8)
    for j in range(cols):
        entries = [int(x) for x in lines[4 + j].split() if int(x) != 0]
        if len(entries) != col_degs[j]:
            raise ValueError(f"column {j} degree mismatch")
        for i in entries:
            dense[i - 1, j] = 1
    # row blocks are redundant with the column blocks; cross-check them
    for i in range(rows):
        entries = [int(x) for x in lines[4 + cols + i].split() if int(x) != 0]
        if sorted(entries) != list(np.nonzero(dense[i, :])[0] + 1):
            raise ValueError(f"row {i} entries inconsistent with columns")
    return F2Matrix.from_dense(dense)


def write_alist(m: F2Matrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_alist(m))


def read_alist(path) -> F2Matrix:
    with open(path) as fh:
        return from_alist(fh.read())
