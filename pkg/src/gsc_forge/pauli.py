"""Phase-tracked Pauli strings and GF(2) symplectic linear algebra.

A Pauli operator on n qubits is stored as a pair of length-n bit vectors
(x_bits, z_bits) plus a power of i, so that

    P = i^phase_exp * prod_j X_j^{x_j} Z_j^{z_j}.

The single-qubit operator with both bits set is XZ; the letter Y is defined
as Y = i * X * Z, which makes every letter square to the identity with
phase +1.  All phase arithmetic below is exact in the four-element group
{+1, +i, -1, -i}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

_PHASE_TOKENS = {0: "", 1: "+i", 2: "-", 3: "-i"}
_TOKEN_PHASES = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


class PauliError(ValueError):
    """Raised on malformed Pauli text or mismatched qubit counts."""


def _as_bits(n: int, bits) -> np.ndarray:
    arr = np.zeros(n, dtype=bool) if bits is None else np.asarray(bits, dtype=bool)
    if arr.shape != (n,):
        raise PauliError(f"bit vector has shape {arr.shape}, expected ({n},)")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli with exact phase in {+1, +i, -1, -i}.

    phase_exp is the exponent k in i^k applied to the XZ-ordered product;
    the human-readable phase (relative to I/X/Y/Z letters) differs by one
    factor of i per Y and is handled by ``phase`` and ``text``.
    """

    n: int
    x_bits: np.ndarray = field(default=None)  # type: ignore[assignment]
    z_bits: np.ndarray = field(default=None)  # type: ignore[assignment]
    phase_exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "x_bits", _as_bits(self.n, self.x_bits))
        object.__setattr__(self, "z_bits", _as_bits(self.n, self.z_bits))
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """One non-identity letter at ``qubit``, identity elsewhere."""
        if not 0 <= qubit < n:
            raise PauliError(f"qubit {qubit} out of range for n={n}")
        x = np.zeros(n, dtype=bool)
        z = np.zeros(n, dtype=bool)
        xb, zb = _LETTER_BITS[letter.upper()]
        x[qubit], z[qubit] = bool(xb), bool(zb)
        # Y = i X Z
        return cls(n, x, z, 1 if (xb and zb) else 0)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        """Parse e.g. ``"ZZII"``, ``"-XIY"`` or ``"+iYZ"`` (qubit 0 first)."""
        s = text.strip()
        token = ""
        for cand in ("+i", "-i", "+", "-", "i"):
            if s.startswith(cand) and not all(c in "IXYZ" for c in s[: len(cand)]):
                token, s = cand, s[len(cand):]
                break
        if not s or any(c not in "IXYZ" for c in s):
            raise PauliError(f"bad Pauli text {text!r}")
        n = len(s)
        x = np.fromiter((c in "XY" for c in s), dtype=bool, count=n)
        z = np.fromiter((c in "YZ" for c in s), dtype=bool, count=n)
        n_y = int(np.count_nonzero(x & z))
        return cls(n, x, z, (_TOKEN_PHASES[token] + n_y) % 4)

    @classmethod
    def from_support(cls, n: int, letter: str, qubits: Iterable[int]) -> "PauliString":
        """Same letter on every listed qubit (e.g. an X-type stabilizer)."""
        out = cls.identity(n)
        for q in qubits:
            out = out * cls.single(n, q, letter)
        return out

    # -- views ---------------------------------------------------------

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits | self.z_bits))

    @property
    def support(self) -> tuple:
        return tuple(int(q) for q in np.flatnonzero(self.x_bits | self.z_bits))

    @property
    def phase(self) -> complex:
        """Scalar in front of the I/X/Y/Z letter string."""
        n_y = int(np.count_nonzero(self.x_bits & self.z_bits))
        return (1j) ** ((self.phase_exp - n_y) % 4)

    def letters(self) -> str:
        return "".join(
            _BITS_LETTER[(int(xb), int(zb))]
            for xb, zb in zip(self.x_bits, self.z_bits)
        )

    def text(self) -> str:
        n_y = int(np.count_nonzero(self.x_bits & self.z_bits))
        return _PHASE_TOKENS[(self.phase_exp - n_y) % 4] + self.letters()

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"PauliString({self.text()!r})"

    # -- algebra --------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.n == other.n
            and self.phase_exp == other.phase_exp
            and np.array_equal(self.x_bits, other.x_bits)
            and np.array_equal(self.z_bits, other.z_bits)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.phase_exp, self.x_bits.tobytes(), self.z_bits.tobytes()))

    def with_phase_exp(self, phase_exp: int) -> "PauliString":
        return PauliString(self.n, self.x_bits, self.z_bits, phase_exp)

    def unsigned(self) -> "PauliString":
        """Same bits with the letter-form phase reset to +1."""
        n_y = int(np.count_nonzero(self.x_bits & self.z_bits))
        return PauliString(self.n, self.x_bits, self.z_bits, n_y)

    def is_identity_bits(self) -> bool:
        return not (self.x_bits.any() or self.z_bits.any())

    def embed(self, n_total: int, offset: int) -> "PauliString":
        """Place this Pauli inside a larger register starting at ``offset``."""
        if offset < 0 or offset + self.n > n_total:
            raise PauliError(f"embedding [{offset}, {offset + self.n}) exceeds n={n_total}")
        x = np.zeros(n_total, dtype=bool)
        z = np.zeros(n_total, dtype=bool)
        x[offset: offset + self.n] = self.x_bits
        z[offset: offset + self.n] = self.z_bits
        return PauliString(n_total, x, z, self.phase_exp)

    def restrict(self, qubits: Sequence[int]) -> "PauliString":
        """The factor of this Pauli living on ``qubits`` (letter phases +1)."""
        idx = np.asarray(qubits, dtype=int)
        x = self.x_bits[idx].copy()
        z = self.z_bits[idx].copy()
        n_y = int(np.count_nonzero(x & z))
        return PauliString(len(idx), x, z, n_y)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic inner product of p and q is even."""
    if p.n != q.n:
        raise PauliError(f"length mismatch: {p.n} vs {q.n}")
    overlap = np.count_nonzero(p.x_bits & q.z_bits) + np.count_nonzero(p.z_bits & q.x_bits)
    return overlap % 2 == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Group product p*q with exact phase tracking."""
    if p.n != q.n:
        raise PauliError(f"length mismatch: {p.n} vs {q.n}")
    # Commute q's X block through p's Z block: each crossing gives i^2.
    crossings = int(np.count_nonzero(p.z_bits & q.x_bits))
    phase_exp = (p.phase_exp + q.phase_exp + 2 * crossings) % 4
    return PauliString(p.n, p.x_bits ^ q.x_bits, p.z_bits ^ q.z_bits, phase_exp)


@dataclass(frozen=True)
class SymplecticTable:
    """An ordered list of equal-length Pauli rows (e.g. code generators)."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        if rows:
            n = rows[0].n
            for r in rows:
                if r.n != n:
                    raise PauliError("rows of a SymplecticTable must share n")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.rows[0].n if self.rows else 0

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def bit_matrix(self) -> np.ndarray:
        """(rows, 2n) boolean matrix, X block first then Z block."""
        if not self.rows:
            return np.zeros((0, 0), dtype=bool)
        return np.array([np.concatenate([r.x_bits, r.z_bits]) for r in self.rows], dtype=bool)


def _pack_rows(bits: np.ndarray) -> list:
    """Rows of a boolean matrix packed into python ints (LSB = column 0)."""
    out = []
    for row in bits:
        v = 0
        for j in np.flatnonzero(row):
            v |= 1 << int(j)
        out.append(v)
    return out


def rank_gf2(table: SymplecticTable | np.ndarray | Sequence) -> int:
    """GF(2) rank of a symplectic table's bit matrix (or any bit matrix)."""
    if isinstance(table, SymplecticTable):
        bits = table.bit_matrix()
    elif isinstance(table, np.ndarray):
        bits = table.astype(bool)
    else:
        bits = SymplecticTable(tuple(table)).bit_matrix()
    if bits.size == 0:
        return 0
    rows = _pack_rows(bits)
    rank = 0
    for col in range(bits.shape[1]):
        mask = 1 << col
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and (rows[i] & mask):
                rows[i] ^= rows[rank]
        rank += 1
        if rank == len(rows):
            break
    return rank


def in_group(p: PauliString, generators: Sequence[PauliString]) -> bool:
    """Whether p's bits lie in the GF(2) span of the generators' bits.

    Phases are ignored: membership is at the symplectic-vector level.
    """
    gens = list(generators)
    if p.is_identity_bits():
        return True
    if not gens:
        return False
    base = SymplecticTable(tuple(gens))
    aug = SymplecticTable(tuple(gens) + (p,))
    return rank_gf2(aug) == rank_gf2(base)


__all__ = [
    "PauliError",
    "PauliString",
    "SymplecticTable",
    "commutes",
    "multiply",
    "rank_gf2",
    "in_group",
]
