"""Kochen-Specker parity argument and EPR correlations on ququarts."""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._validation import check_dim
from .exceptions import InvalidInputError, ShapeError, SizeError

CEGA_COLUMNS = (
    "abcd", "aefg", "hicj", "hkgl", "bemn", "ikno", "pqdj", "prfl", "qrmo",
)

MAX_ALPHABET = 24


@dataclass(frozen=True)
class IncidenceTable:
    """Columns of mutually exclusive outcome labels.

    A valid truth assignment makes exactly one label TRUE per column.
    Labels may be shared between columns.
    """

    columns: tuple

    def __post_init__(self):
        cols = tuple(tuple(str(x) for x in col) for col in self.columns)
        if not cols:
            raise InvalidInputError("table needs at least one column")
        for k, col in enumerate(cols):
            if not col:
                raise InvalidInputError(f"column {k} is empty")
            if len(set(col)) != len(col):
                raise InvalidInputError(f"column {k} repeats a letter: {col}")
        object.__setattr__(self, "columns", cols)

    @property
    def alphabet(self):
        return tuple(sorted({x for col in self.columns for x in col}))

    def occurrences(self):
        return Counter(x for col in self.columns for x in col)

    def to_dict(self):
        return {"columns": [list(col) for col in self.columns]}


def cega_table():
    """The nine interlocking four-outcome measurements on 18 labels a..r."""
    return IncidenceTable(tuple(tuple(c) for c in CEGA_COLUMNS))


@dataclass(frozen=True)
class ParityResult:
    required_true: int
    parity_forced: str
    contradiction: bool


def parity_check(table):
    """Compare the TRUE count demanded by the columns with label parity.

    One TRUE per column needs ``len(columns)`` TRUE slots. If every label
    occurs an even number of times, the number of TRUE slots is even
    whatever the assignment, so an odd column count is contradictory.
    """
    required = len(table.columns)
    if all(n % 2 == 0 for n in table.occurrences().values()):
        forced = "even"
    else:
        forced = "none"
    return ParityResult(required, forced, forced == "even" and required % 2 == 1)


@dataclass(frozen=True)
class SearchCount:
    satisfying_count: int
    total: int
    witnesses: list


def exhaustive_search(table, max_witnesses=16, chunk=1 << 20):
    """Count assignments with exactly one TRUE label in every column.

    Enumerates all ``2**len(alphabet)`` assignments as bit patterns, in
    chunks. Witnesses are the first ``max_witnesses`` satisfying
    assignments, as ``{label: bool}`` dicts.
    """
    alphabet = table.alphabet
    n = len(alphabet)
    if n > MAX_ALPHABET:
        raise SizeError(f"alphabet of {n} letters exceeds the limit {MAX_ALPHABET}")
    index = {x: k for k, x in enumerate(alphabet)}
    masks = [sum(1 << index[x] for x in col) for col in table.columns]
    total = 1 << n
    count = 0
    witnesses = []
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        ok = np.ones(codes.shape, dtype=bool)
        for mask in masks:
            hit = codes & mask
            # exactly one bit set: nonzero power of two
            ok &= (hit != 0) & ((hit & (hit - 1)) == 0)
            if not ok.any():
                break
        found = codes[ok]
        count += int(found.size)
        for code in found[: max(0, max_witnesses - len(witnesses))]:
            witnesses.append({x: bool((int(code) >> index[x]) & 1) for x in alphabet})
    return SearchCount(count, total, witnesses)


@dataclass(frozen=True)
class EntangledPair:
    d: int
    joint: np.ndarray

    @property
    def amplitudes(self):
        """Amplitudes as a ``d x d`` array indexed (left, right)."""
        return self.joint.reshape(self.d, self.d)


def max_entangled(d):
    """``(1/sqrt(d)) sum_i |i>|i>``."""
    d = check_dim(d, 2)
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / np.sqrt(d)
    return EntangledPair(d, psi)


def epr_joint(basis, pair, tol=1e-10):
    """Joint outcome distribution for ``H`` on the left and ``H^T`` on the right.

    ``basis`` rows are the eigenvectors ``e_i`` of a nondegenerate ``H``.
    Transposition is taken in the computational basis, so the right-hand
    measurement projects onto the conjugates ``e_j*``. Entry (i, j) is
    ``|(<e_i| ⊗ <e_j*|) |psi>|**2``.
    """
    e = np.asarray(basis, dtype=complex)
    if e.shape != (pair.d, pair.d):
        raise ShapeError(f"basis shape {e.shape} does not match d={pair.d}")
    dev = np.max(np.abs(e.conj() @ e.T - np.eye(pair.d)))
    if dev > tol:
        raise InvalidInputError(f"basis is not orthonormal (Gram deviation {dev:.3g})")
    # <e_j*| has components e_j, so the right factor contracts with e, unconjugated
    amp = np.einsum("ia,ab,jb->ij", e.conj(), pair.amplitudes, e)
    return np.abs(amp) ** 2


def random_eigenbasis(d, rng):
    """Eigenvectors (as rows) of a random Hermitian operator."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    _, vecs = np.linalg.eigh(g + g.conj().T)
    return vecs.T


__all__ = [
    "CEGA_COLUMNS", "IncidenceTable", "cega_table", "ParityResult", "parity_check",
    "SearchCount", "exhaustive_search", "EntangledPair", "max_entangled",
    "epr_joint", "random_eigenbasis",
]
