"""Syndrome lookup tables for the combined two-partition code.

Errors are enumerated per partition up to each partition's correctable
weight and combined as products, which covers every propagated image of
up-to-t faults (a fault on a flip-step control or target qubit spreads to
one extra qubit in the other partition).  Tables map packed syndromes to
minimum-weight corrections, ties broken by the lexicographic order of the
Pauli text form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .codes import BudgetError, StabilizerCode, stabilizer_span
from .pauli import PauliString, commutes, multiply
from .protocol import CombinedCode

MAX_TABLE_ENTRIES = 10 ** 7
_LETTERS = ("X", "Y", "Z")


# ---------------------------------------------------------------------------
# Packed Pauli batches (x and z bit masks in uint64; n <= 64)
# ---------------------------------------------------------------------------

def _pack_pauli(p: PauliString) -> tuple:
    x = int(sum(1 << int(q) for q in np.flatnonzero(p.x_bits)))
    z = int(sum(1 << int(q) for q in np.flatnonzero(p.z_bits)))
    return x, z


def _unpack_pauli(n: int, x: int, z: int) -> PauliString:
    xb = np.array([(x >> q) & 1 for q in range(n)], dtype=bool)
    zb = np.array([(z >> q) & 1 for q in range(n)], dtype=bool)
    n_y = int(np.count_nonzero(xb & zb))
    return PauliString(n, xb, zb, n_y)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a)


@dataclass
class PackedPaulis:
    """A batch of phase-free Paulis on n <= 64 qubits."""

    n: int
    x: np.ndarray  # uint64
    z: np.ndarray  # uint64

    def __len__(self) -> int:
        return len(self.x)

    def weights(self) -> np.ndarray:
        return _popcount(self.x | self.z).astype(np.uint8)

    def to_pauli(self, i: int) -> PauliString:
        return _unpack_pauli(self.n, int(self.x[i]), int(self.z[i]))

    def lex_keys(self) -> tuple:
        """(hi, lo) uint64 pair ordering by the Pauli letter string."""
        hi = np.zeros(len(self.x), dtype=np.uint64)
        lo = np.zeros(len(self.x), dtype=np.uint64)
        for q in range(self.n):
            xq = (self.x >> np.uint64(q)) & np.uint64(1)
            zq = (self.z >> np.uint64(q)) & np.uint64(1)
            code = xq * np.uint64(1) + zq * np.uint64(2)
            # remap so that I<X<Y<Z: (x,z)=(1,1) -> 2, (0,1) -> 3
            code = np.where(code == 3, np.uint64(2), np.where(code == 2, np.uint64(3), code))
            if q < 32:
                hi |= code << np.uint64(2 * (31 - q))
            else:
                lo |= code << np.uint64(2 * (63 - q))
        return hi, lo


def enumerate_partition_errors(
    n_total: int, qubits: Sequence[int], t: int
) -> PackedPaulis:
    """All Paulis of weight <= t supported on ``qubits`` (identity included)."""
    if n_total > 64:
        raise BudgetError("packed enumeration supports at most 64 qubits")
    xs = [0]
    zs = [0]
    for w in range(1, t + 1):
        for pos in itertools.combinations(qubits, w):
            for letters in itertools.product(_LETTERS, repeat=w):
                ex = ez = 0
                for q, L in zip(pos, letters):
                    if L != "Z":
                        ex |= 1 << q
                    if L != "X":
                        ez |= 1 << q
                xs.append(ex)
                zs.append(ez)
    return PackedPaulis(n_total, np.array(xs, dtype=np.uint64), np.array(zs, dtype=np.uint64))


def product_errors(a: PackedPaulis, b: PackedPaulis) -> PackedPaulis:
    """All pairwise products (supports assumed disjoint)."""
    if len(a) * len(b) > MAX_TABLE_ENTRIES:
        raise BudgetError(
            f"error enumeration {len(a)}x{len(b)} exceeds {MAX_TABLE_ENTRIES:g} entries"
        )
    x = (a.x[:, None] | b.x[None, :]).reshape(-1)
    z = (a.z[:, None] | b.z[None, :]).reshape(-1)
    return PackedPaulis(a.n, x, z)


def syndromes_packed(errors: PackedPaulis, gen_rows: Sequence[PauliString]) -> np.ndarray:
    """Packed syndrome word per error: bit j set iff error anticommutes with
    generator j (generator order = bit order, LSB first)."""
    if len(gen_rows) > 64:
        raise BudgetError("at most 64 generators fit a packed syndrome")
    out = np.zeros(len(errors), dtype=np.uint64)
    for j, g in enumerate(gen_rows):
        gx, gz = _pack_pauli(g)
        bits = (_popcount(errors.x & np.uint64(gz)) + _popcount(errors.z & np.uint64(gx))) & np.uint64(1)
        out |= bits.astype(np.uint64) << np.uint64(j)
    return out


# ---------------------------------------------------------------------------
# Error families
# ---------------------------------------------------------------------------

@dataclass
class ErrorSet:
    """Named error families for a combined code at one protocol step."""

    single_partition: list = field(default_factory=list)
    cross_backward: list = field(default_factory=list)
    cross_forward: list = field(default_factory=list)

    def all_errors(self) -> list:
        seen = {}
        for p in self.single_partition + self.cross_backward + self.cross_forward:
            seen.setdefault((p.x_bits.tobytes(), p.z_bits.tobytes()), p)
        return list(seen.values())


def _t_of(code_distance: Optional[int], what: str) -> int:
    if code_distance is None:
        raise ValueError(f"{what} has no distance metadata")
    return (code_distance - 1) // 2


def enumerate_errors(combined: CombinedCode) -> ErrorSet:
    """Single-partition errors up to each partition's t, plus the backward
    and forward cross-propagation families of the modified stabilizer."""
    n = combined.n
    params = combined.params
    target = combined.target
    t_h = _t_of(params.distance, "helper")
    t_t = _t_of(target.distance, "target")
    helper_qubits = list(combined.helper_qubits())
    target_qubits = list(combined.target_qubits())

    singles: list = []
    for qubits, t in ((helper_qubits, t_h), (target_qubits, t_t)):
        batch = enumerate_partition_errors(n, qubits, t)
        for i in range(1, len(batch)):  # skip identity
            singles.append(batch.to_pauli(i))

    backward: list = []
    forward: list = []
    i = combined.step
    if i <= params.a - 2:
        b = params.b
        gx_support = [
            combined.helper_offset + q for q in range(b * i, b * i + 2 * b)
        ]
        o_ops = target.logical_x if combined.flip == "X" else target.logical_z
        o_t = o_ops[combined.target_logical_index].embed(n, combined.target_offset)
        z_t = target.logical_z[combined.target_logical_index].embed(
            n, combined.target_offset
        )
        # backward: Z on the modified stabilizer's helper support, times the
        # plain (non-Y) target letter anticommuting with the flip operator's
        # factor there; Y variants factor through single-partition entries
        for k in gx_support:
            zk = PauliString.single(n, k, "Z")
            for q in o_t.support:
                for L in ("X", "Z"):
                    e = PauliString.single(n, q, L)
                    if not commutes(e, o_t.restrict([q]).embed(n, q)):
                        backward.append(multiply(zk, e).unsigned())
        # forward: X on the helper support, times a target error on the
        # logical-Z support that is Y or commutes with logical Z
        for k in gx_support:
            xk = PauliString.single(n, k, "X")
            for q in z_t.support:
                for L in _LETTERS:
                    e = PauliString.single(n, q, L)
                    if L == "Y" or commutes(e, z_t):
                        forward.append(multiply(xk, e).unsigned())
    return ErrorSet(singles, backward, forward)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

@dataclass
class SyndromeTable:
    """Sorted packed syndrome -> minimum-weight correction."""

    n: int
    generators: tuple
    syndromes: np.ndarray  # sorted uint64, zero syndrome excluded
    corr_x: np.ndarray
    corr_z: np.ndarray

    def __len__(self) -> int:
        return len(self.syndromes)

    def lookup_packed(self, synd: np.ndarray) -> tuple:
        """Vectorized decode: returns (x, z) packed corrections, identity on
        misses."""
        synd = np.asarray(synd, dtype=np.uint64)
        idx = np.searchsorted(self.syndromes, synd)
        idx = np.minimum(idx, len(self.syndromes) - 1) if len(self.syndromes) else idx * 0
        if len(self.syndromes):
            hit = self.syndromes[idx] == synd
        else:
            hit = np.zeros(len(synd), dtype=bool)
        x = np.where(hit, self.corr_x[idx], np.uint64(0)) if len(self.syndromes) else np.zeros(len(synd), np.uint64)
        z = np.where(hit, self.corr_z[idx], np.uint64(0)) if len(self.syndromes) else np.zeros(len(synd), np.uint64)
        return x, z

    def decode_bits(self, bits: Sequence[int]) -> PauliString:
        word = np.uint64(sum((1 << j) for j, b in enumerate(bits) if b))
        x, z = self.lookup_packed(np.array([word], dtype=np.uint64))
        return _unpack_pauli(self.n, int(x[0]), int(z[0]))

    def save(self, path: str | Path) -> None:
        """Lines of '<syndrome-hex> <pauli-text>' in syndrome order."""
        with open(path, "w") as f:
            f.write(f"# gsc-forge v1 syndrome table; {len(self.generators)} generators\n")
            for s, x, z in zip(self.syndromes, self.corr_x, self.corr_z):
                f.write(f"{int(s):x} {_unpack_pauli(self.n, int(x), int(z)).text()}\n")

    @classmethod
    def load(cls, path: str | Path, n: int, generators: tuple = ()) -> "SyndromeTable":
        synd, xs, zs = [], [], []
        with open(path) as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                s_hex, text = line.split()
                p = PauliString.from_text(text)
                x, z = _pack_pauli(p)
                synd.append(int(s_hex, 16))
                xs.append(x)
                zs.append(z)
        order = np.argsort(np.array(synd, dtype=np.uint64))
        return cls(
            n,
            tuple(generators),
            np.array(synd, dtype=np.uint64)[order],
            np.array(xs, dtype=np.uint64)[order],
            np.array(zs, dtype=np.uint64)[order],
        )


def syndrome(error: PauliString, combined: CombinedCode) -> np.ndarray:
    """Syndrome bit vector of ``error`` against the combined generators."""
    rows = combined.stabilizers.rows
    if error.n != rows[0].n:
        raise ValueError(f"error width {error.n} != code width {rows[0].n}")
    return np.array([0 if commutes(error, g) else 1 for g in rows], dtype=np.uint8)


def _table_from_packed(
    n: int, gen_rows: Sequence[PauliString], errors: PackedPaulis
) -> SyndromeTable:
    synd = syndromes_packed(errors, gen_rows)
    weights = errors.weights()
    lex_hi, lex_lo = errors.lex_keys()
    order = np.lexsort((lex_lo, lex_hi, weights, synd))
    synd_sorted = synd[order]
    keep = np.ones(len(order), dtype=bool)
    keep[1:] = synd_sorted[1:] != synd_sorted[:-1]
    keep &= synd_sorted != 0  # all-zero syndrome decodes to identity by default
    sel = order[keep]
    return SyndromeTable(
        n,
        tuple(gen_rows),
        synd_sorted[keep],
        errors.x[sel],
        errors.z[sel],
    )


def build_table(combined: CombinedCode) -> SyndromeTable:
    """Lookup table for the combined code at one protocol step.

    Entries cover every product of a weight-<=t_helper error on the helper
    partition with a weight-<=t_target error on the target partition; this
    contains the named single-partition and cross-propagation families.
    Collisions keep the lower-weight correction, then lexicographic order.
    """
    params, target = combined.params, combined.target
    t_h = _t_of(params.distance, "helper")
    t_t = _t_of(target.distance, "target")
    helper = enumerate_partition_errors(combined.n, list(combined.helper_qubits()), t_h)
    targ = enumerate_partition_errors(combined.n, list(combined.target_qubits()), t_t)
    errors = product_errors(helper, targ)
    return _table_from_packed(combined.n, combined.stabilizers.rows, errors)


def build_single_code_table(
    code: StabilizerCode, n_total: Optional[int] = None, offset: int = 0,
    t: Optional[int] = None,
) -> SyndromeTable:
    """Independent-code table: all errors of weight <= t on the code's qubits."""
    if n_total is None:
        n_total = code.n
    if t is None:
        t = code.t
    gen_rows = tuple(g.embed(n_total, offset) for g in code.generators)
    errors = enumerate_partition_errors(n_total, list(range(offset, offset + code.n)), t)
    return _table_from_packed(n_total, gen_rows, errors)


def decode(syndrome_bits: Sequence[int], table: SyndromeTable) -> PauliString:
    """Stored correction on a hit; identity on a miss."""
    bits = list(syndrome_bits)
    if len(bits) != len(table.generators):
        raise ValueError(
            f"syndrome length {len(bits)} != generator count {len(table.generators)}"
        )
    return table.decode_bits(bits)


def residual_in_group(
    error: PauliString, correction: PauliString, combined: CombinedCode
) -> bool:
    """Whether correction*error lies in the combined stabilizer group."""
    res = multiply(correction, error)
    return stabilizer_span(list(combined.stabilizers.rows)).contains(res)


__all__ = [
    "ErrorSet",
    "MAX_TABLE_ENTRIES",
    "PackedPaulis",
    "SyndromeTable",
    "build_single_code_table",
    "build_table",
    "decode",
    "enumerate_errors",
    "enumerate_partition_errors",
    "product_errors",
    "residual_in_group",
    "syndrome",
    "syndromes_packed",
]
