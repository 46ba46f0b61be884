"""Stabilizer codes, CSS codes, logical operators and distance search.

Codes are held as binary symplectic check matrices (one row per
generator).  Logical representatives come from the centralizer of the
stabilizer group modulo the group itself and are arranged in
anticommuting X/Z pairs; destabilizers complete the set to a full
symplectic basis of the 2n-dimensional Pauli space.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapacityExceeded, DistanceUnknown, NotAbelian, NotCss
from .f2 import F2Matrix, RowSpace, block_diag, read_alist, vstack, write_alist
from .pauli import PauliOperator, swap_halves, symplectic_product

DISTANCE_QUBIT_GUARD = 20
DISTANCE_WEIGHT_GUARD = 6


@dataclass(frozen=True)
class StabilizerCode:
    """n-qubit code fixed by the group generated by the rows of h."""

    h: F2Matrix            # r x 2n binary symplectic rows, signs all +1
    n: int
    k: int
    logicals: F2Matrix     # rows: Xbar_1..Xbar_k, Zbar_1..Zbar_k
    destabilizers: F2Matrix  # n-k rows; row j anticommutes with pivot row j only
    pivot_rows: tuple[int, ...]  # independent generating subset of h's rows

    def generator(self, i: int) -> PauliOperator:
        return PauliOperator.from_bsr(self.h.row_dense(i))

    @property
    def h_independent(self) -> F2Matrix:
        return F2Matrix.from_dense(self.h.to_dense()[list(self.pivot_rows)])

    def __repr__(self) -> str:
        return f"StabilizerCode(n={self.n}, k={self.k})"


def stabilizer_code(generators) -> StabilizerCode:
    """Build a code from PauliOperators or a symplectic check matrix.

    Raises NotAbelian when generators fail to commute, carry imaginary
    phases, or multiply to -identity along a dependency.
    """
    if isinstance(generators, F2Matrix):
        h = generators
        paulis = [PauliOperator.from_bsr(h.row_dense(i)) for i in range(h.rows)]
    else:
        paulis = list(generators)
        if not paulis:
            raise ValueError("need at least one generator (or a check matrix)")
        h = F2Matrix.from_dense(np.stack([p.bsr() for p in paulis]))
    if h.cols % 2:
        raise ValueError("symplectic rows must have even length")
    n = h.cols // 2

    gram = swap_halves(h) @ h.T
    if not gram.is_zero():
        raise NotAbelian("generators do not mutually commute")
    for p in paulis:
        if p.phase % 2:
            raise NotAbelian("generator carries an imaginary phase")
    # normalize signs to +1 (replacing S by -S fixes the same code family)
    paulis = [PauliOperator(p.x, p.z, 0) for p in paulis]
    # a dependent subset multiplying to -I would make the group inconsistent
    dependencies = h.T.kernel_basis()
    for dep_row in range(dependencies.rows):
        dep = dependencies.row_dense(dep_row)
        prod = PauliOperator.identity(n)
        for i in np.nonzero(dep)[0]:
            prod = prod * paulis[i]
        if prod.phase != 0:
            raise NotAbelian("-identity lies in the span of the generators")

    # pivot rows of h give an independent generating subset; redundant
    # rows stay in h for syndrome extraction but take no destabilizer
    pivots = h.T.eliminate(range(h.rows)).pivot_columns
    k = n - len(pivots)
    h_ind = F2Matrix.from_dense(h.to_dense()[list(pivots)])
    logicals = _logical_pairs(h, n, k)
    destab = _destabilizers(h_ind, logicals)
    return StabilizerCode(
        h=h, n=n, k=k, logicals=logicals, destabilizers=destab,
        pivot_rows=tuple(int(i) for i in pivots),
    )


def _logical_pairs(h: F2Matrix, n: int, k: int) -> F2Matrix:
    """Centralizer mod stabilizer, arranged as X/Z anticommuting pairs."""
    if k == 0:
        return F2Matrix(0, 2 * n)
    centralizer = swap_halves(h).kernel_basis()
    span = RowSpace(2 * n)
    for i in range(h.rows):
        span.add(h.row_dense(i))
    reps = []
    for i in range(centralizer.rows):
        v = centralizer.row_dense(i)
        if span.add(v):
            reps.append(v)
    assert len(reps) == 2 * k
    xs, zs = [], []
    rem = list(reps)
    while rem:
        u = rem.pop(0)
        j = next(
            i for i, w in enumerate(rem) if symplectic_product(u, w) == 1
        )
        w = rem.pop(j)
        for i, v in enumerate(rem):
            if symplectic_product(v, w):
                v = v ^ u
            if symplectic_product(v, u):
                v = v ^ w
            rem[i] = v
        xs.append(u)
        zs.append(w)
    return F2Matrix.from_dense(np.stack(xs + zs))


def _destabilizers(h: F2Matrix, logicals: F2Matrix) -> F2Matrix:
    """Row j anticommutes with generator j only and with no logical."""
    if h.rows == 0:
        return F2Matrix(0, h.cols)
    rows: list[np.ndarray] = []
    for j in range(h.rows):
        blocks = [h, logicals] + (
            [F2Matrix.from_dense(np.stack(rows))] if rows else []
        )
        system = swap_halves(vstack(blocks))
        rhs = np.zeros(system.rows, dtype=np.uint8)
        rhs[j] = 1
        rows.append(system.solve_columns(range(system.cols), rhs))
    return F2Matrix.from_dense(np.stack(rows))


def tls_decompose(code: StabilizerCode, p: PauliOperator):
    """Coordinates of p in the destabilizer/logical/stabilizer basis.

    Returns (t_bits, l_bits, s_bits) with bsr(p) = t.T + l.L + s.S; the
    t bits are exactly the syndrome of p over the independent generators.
    """
    e = p.bsr()
    t_bits = np.array(
        [symplectic_product(code.h.row_dense(i), e) for i in code.pivot_rows],
        dtype=np.uint8,
    )
    k = code.k
    l_bits = np.zeros(2 * k, dtype=np.uint8)
    for j in range(k):
        xbar = code.logicals.row_dense(j)
        zbar = code.logicals.row_dense(k + j)
        l_bits[j] = symplectic_product(e, zbar)      # coefficient of Xbar_j
        l_bits[k + j] = symplectic_product(e, xbar)  # coefficient of Zbar_j
    s_bits = np.array(
        [
            symplectic_product(e, code.destabilizers.row_dense(i))
            for i in range(code.destabilizers.rows)
        ],
        dtype=np.uint8,
    )
    return t_bits, l_bits, s_bits


def tls_recombine(code: StabilizerCode, t_bits, l_bits, s_bits) -> np.ndarray:
    """Inverse of tls_decompose at the symplectic-row level."""
    out = code.destabilizers.rmatvec(t_bits)
    out ^= code.logicals.rmatvec(l_bits)
    out ^= code.h_independent.rmatvec(s_bits)
    return out


def syndrome_of(code: StabilizerCode, p: PauliOperator) -> np.ndarray:
    e = p.bsr()
    return np.array(
        [symplectic_product(code.h.row_dense(i), e) for i in range(code.h.rows)],
        dtype=np.uint8,
    )


# -- CSS codes -------------------------------------------------------------


@dataclass(frozen=True)
class CssCode:
    """Code with separated X and Z checks satisfying Hx Hz^T = 0."""

    hx: F2Matrix
    hz: F2Matrix
    lx: F2Matrix  # k x n, X-type logical representatives
    lz: F2Matrix  # k x n, Z-type, paired so that lx_i . lz_j = delta_ij

    @property
    def n(self) -> int:
        return self.hx.cols

    @property
    def k(self) -> int:
        return self.lx.rows

    def __repr__(self) -> str:
        return f"CssCode(n={self.n}, k={self.k})"


def css_code(hx: F2Matrix, hz: F2Matrix) -> CssCode:
    if hx.cols != hz.cols:
        raise ValueError("Hx and Hz act on different qubit counts")
    if not (hx @ hz.T).is_zero():
        raise NotCss("Hx Hz^T != 0")
    n = hx.cols
    k = n - hx.rank() - hz.rank()
    lx = _coset_reps(hz, hx, k)  # commute with Z checks, mod X stabilizers
    lz = _coset_reps(hx, hz, k)
    if k:
        # re-pair so the logical bases are mutually dual
        pairing = lx @ lz.T  # k x k, invertible by nondegeneracy
        lz = pairing.right_inverse().T @ lz
    return CssCode(hx=hx, hz=hz, lx=lx, lz=lz)


def _coset_reps(h_commute: F2Matrix, h_mod: F2Matrix, k: int) -> F2Matrix:
    if k == 0:
        return F2Matrix(0, h_commute.cols)
    kernel = h_commute.kernel_basis()
    span = RowSpace(h_commute.cols)
    for i in range(h_mod.rows):
        span.add(h_mod.row_dense(i))
    reps = []
    for i in range(kernel.rows):
        v = kernel.row_dense(i)
        if span.add(v):
            reps.append(v)
    assert len(reps) == k
    return F2Matrix.from_dense(np.stack(reps))


def to_stabilizer_code(css: CssCode) -> StabilizerCode:
    """Block-diagonal symplectic form of a CSS code."""
    h = block_diag([css.hx, css.hz])
    code = stabilizer_code(h)
    return code


def css_syndrome(css: CssCode, ex: np.ndarray, ez: np.ndarray):
    """(X-check syndrome of the Z part, Z-check syndrome of the X part)."""
    return css.hx.matvec(ez), css.hz.matvec(ex)


# -- distance ---------------------------------------------------------------


def distance(code: StabilizerCode, max_weight: int = 3) -> float:
    """Exhaustive minimum weight of a logical operator.

    Searches all Paulis by increasing weight; raises DistanceUnknown
    when nothing is found up to max_weight.
    """
    if code.k == 0:
        return math.inf
    if code.n > DISTANCE_QUBIT_GUARD or max_weight > DISTANCE_WEIGHT_GUARD:
        raise CapacityExceeded(
            f"distance search limited to n <= {DISTANCE_QUBIT_GUARD}, "
            f"weight <= {DISTANCE_WEIGHT_GUARD}"
        )
    hs = swap_halves(code.h).to_dense().astype(np.int64)
    ls = swap_halves(code.logicals).to_dense().astype(np.int64)
    n = code.n
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(n), w):
            support = list(support)
            for types in itertools.product((1, 2, 3), repeat=w):
                v = np.zeros(2 * n, dtype=np.int64)
                for q, t in zip(support, types):
                    v[q] = t & 1          # X component
                    v[n + q] = (t >> 1) & 1  # Z component
                if (hs @ v % 2).any():
                    continue
                if (ls @ v % 2).any():
                    return w
    raise DistanceUnknown(max_weight)


def css_distance(css: CssCode, max_weight: int | None = None) -> float:
    """min(d_X, d_Z) via pure-type search; inf when k = 0."""
    if css.k == 0:
        return math.inf
    if css.n > 24:
        raise CapacityExceeded("pure-type distance search limited to n <= 24")
    cap = max_weight if max_weight is not None else css.n
    dx = _pure_distance(css.hz, css.hx, css.n, cap)
    dz = _pure_distance(css.hx, css.hz, css.n, cap)
    if dx is None or dz is None:
        raise DistanceUnknown(cap)
    return min(dx, dz)


def _pure_distance(h_commute, h_mod, n, max_weight):
    hc = h_commute.to_dense().astype(np.int64)
    span = RowSpace(n)
    for i in range(h_mod.rows):
        span.add(h_mod.row_dense(i))
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(n), w):
            v = np.zeros(n, dtype=np.uint8)
            v[list(support)] = 1
            if hc.size and (hc @ v % 2).any():
                continue
            if not span.contains(v):
                return w
    return None


# -- standard codes ----------------------------------------------------------


def five_qubit_code() -> StabilizerCode:
    """The [[5,1,3]] code with cyclic generators XZZXI etc."""
    gens = [
        PauliOperator.from_string(s)
        for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
    ]
    return stabilizer_code(gens)


def four_two_two_checks() -> tuple[F2Matrix, F2Matrix]:
    """Check matrices of the [[4,1,2]] detection code used in examples."""
    hx = F2Matrix.from_dense([[1, 1, 0, 0], [0, 0, 1, 1]])
    hz = F2Matrix.from_dense([[1, 1, 1, 1]])
    return hx, hz


# -- descriptors --------------------------------------------------------------


def save_stabilizer_code(code: StabilizerCode, path) -> None:
    doc = {
        "n": code.n,
        "k": code.k,
        "generators": [code.generator(i).to_string() for i in range(code.h.rows)],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_stabilizer_code(path) -> StabilizerCode:
    doc = json.loads(Path(path).read_text())
    code = stabilizer_code(
        [PauliOperator.from_string(s) for s in doc["generators"]]
    )
    if (code.n, code.k) != (doc["n"], doc["k"]):
        raise ValueError("descriptor parameters disagree with the generators")
    return code


def save_css_code(css: CssCode, json_path, name: str = "css") -> None:
    json_path = Path(json_path)
    hx_path = json_path.with_suffix(".hx.alist")
    hz_path = json_path.with_suffix(".hz.alist")
    write_alist(css.hx, hx_path)
    write_alist(css.hz, hz_path)
    doc = {
        "name": name,
        "n": css.n,
        "k": css.k,
        "H_X": hx_path.name,
        "H_Z": hz_path.name,
    }
    json_path.write_text(json.dumps(doc, indent=2) + "\n")


def load_css_code(json_path) -> CssCode:
    json_path = Path(json_path)
    doc = json.loads(json_path.read_text())
    hx = read_alist(json_path.parent / doc["H_X"])
    hz = read_alist(json_path.parent / doc["H_Z"])
    css = css_code(hx, hz)
    if (css.n, css.k) != (doc["n"], doc["k"]):
        raise ValueError("descriptor parameters disagree with the matrices")
    return css
