"""Dense state-vector simulation for exact gate-effect verification.

Qubit 0 is the most significant bit of the amplitude index, so basis kets
read left to right like Pauli text.  The simulator is exact (complex128),
supports non-Clifford Z^p, projective Pauli measurement with classical
feedback, and refuses noise instructions; circuits above 24 qubits are
rejected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .codes import CodeError, StabilizerCode
from .pauli import PauliString
from .protocol import (
    CapabilityError,
    CatPrep,
    Circuit,
    CliffordGate,
    ClassicallyControlledPauli,
    Depolarize1,
    EncodeIdeal,
    MeasurePauli,
    ObservableCheck,
    PauliGate,
    PhaseGate,
    QecRound,
)

MAX_QUBITS = 24
_SQRT_HALF = 1.0 / np.sqrt(2.0)


class LeakageError(RuntimeError):
    """State left the expected codespace beyond tolerance."""


class ZeroBranchError(RuntimeError):
    """A forced measurement branch has (near-)zero probability."""


@dataclass
class StateVector:
    n: int
    amp: np.ndarray

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        if n > MAX_QUBITS:
            raise CodeError(f"n={n} exceeds the {MAX_QUBITS}-qubit cap")
        amp = np.zeros(2 ** n, dtype=np.complex128)
        amp[0] = 1.0
        return cls(n, amp)

    @classmethod
    def from_amplitudes(cls, amp: Sequence[complex]) -> "StateVector":
        arr = np.asarray(amp, dtype=np.complex128)
        n = int(np.log2(arr.size))
        if 2 ** n != arr.size:
            raise ValueError(f"amplitude count {arr.size} is not a power of two")
        return cls(n, arr.copy())

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amp.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def normalize(self) -> None:
        self.amp /= np.linalg.norm(self.amp)

    def tensor(self, other: "StateVector") -> "StateVector":
        if self.n + other.n > MAX_QUBITS:
            raise CodeError("tensor product exceeds the qubit cap")
        return StateVector(self.n + other.n, np.kron(self.amp, other.amp))

    def _view(self, q: int) -> np.ndarray:
        return self.amp.reshape(2 ** q, 2, -1)


def tensor_all(states: Iterable[StateVector]) -> StateVector:
    states = list(states)
    out = states[0]
    for s in states[1:]:
        out = out.tensor(s)
    return out


# ---------------------------------------------------------------------------
# In-place operators
# ---------------------------------------------------------------------------

def _apply_h(state: StateVector, q: int) -> None:
    v = state._view(q)
    a = v[:, 0, :].copy()
    b = v[:, 1, :]
    v[:, 0, :] = (a + b) * _SQRT_HALF
    v[:, 1, :] = (a - b) * _SQRT_HALF


def _apply_s(state: StateVector, q: int) -> None:
    state._view(q)[:, 1, :] *= 1j


def _apply_phase(state: StateVector, q: int, p: float) -> None:
    state._view(q)[:, 1, :] *= np.exp(1j * np.pi * p)


def apply_pauli(state: StateVector, pauli: PauliString) -> None:
    """Apply the exact operator i^phase_exp * prod X^x Z^z (Z's act first)."""
    if pauli.n != state.n:
        raise ValueError(f"pauli width {pauli.n} != state width {state.n}")
    for q in np.flatnonzero(pauli.z_bits):
        state._view(int(q))[:, 1, :] *= -1
    for q in np.flatnonzero(pauli.x_bits):
        v = state._view(int(q))
        tmp = v[:, 0, :].copy()
        v[:, 0, :] = v[:, 1, :]
        v[:, 1, :] = tmp
    if pauli.phase_exp:
        state.amp *= (1j) ** pauli.phase_exp


def _apply_controlled(state: StateVector, kind: str, ctrl: int, tgt: int) -> None:
    lo, hi = (ctrl, tgt) if ctrl < tgt else (tgt, ctrl)
    v = state.amp.reshape(2 ** lo, 2, 2 ** (hi - lo - 1), 2, -1)
    if kind == "CZ":
        v[:, 1, :, 1, :] *= -1
        return
    if ctrl < tgt:
        sub0, sub1 = v[:, 1, :, 0, :].copy(), v[:, 1, :, 1, :].copy()
        slot0, slot1 = (slice(None), 1, slice(None), 0), (slice(None), 1, slice(None), 1)
    else:
        sub0, sub1 = v[:, 0, :, 1, :].copy(), v[:, 1, :, 1, :].copy()
        slot0, slot1 = (slice(None), 0, slice(None), 1), (slice(None), 1, slice(None), 1)
    if kind == "CX":
        v[slot0], v[slot1] = sub1, sub0
    elif kind == "CY":
        v[slot0], v[slot1] = -1j * sub1, 1j * sub0


def _pauli_times_state(state: StateVector, pauli: PauliString) -> np.ndarray:
    tmp = state.copy()
    apply_pauli(tmp, pauli)
    return tmp.amp


def expectation(state: StateVector, pauli: PauliString) -> complex:
    return complex(np.vdot(state.amp, _pauli_times_state(state, pauli)))


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def _project_codeword(
    state: StateVector, ops_signs: Sequence[tuple], renormalize: bool = True
) -> float:
    """Apply prod (I + s*P)/2 in place; returns the pre-normalization norm."""
    for pauli, sign in ops_signs:
        state.amp += sign * _pauli_times_state(state, pauli)
        state.amp *= 0.5
    norm = state.norm()
    if renormalize and norm > 1e-12:
        state.amp /= norm
    return norm


def _reference_states(n: int, tries: int = 200):
    yield np.zeros(n, dtype=bool)
    rng = np.random.default_rng(0xC0DE)
    for _ in range(tries):
        yield rng.integers(0, 2, n).astype(bool)


def encode_logical(
    code: StabilizerCode, amplitudes: Sequence[complex]
) -> StateVector:
    """Encode the logical amplitude vector (length 2^k) into the codespace.

    |0...0>_L is fixed by projecting a computational reference state onto
    the +1 eigenspace of every generator and logical Z; other basis states
    apply the stored logical X representatives on top.
    """
    amps = np.asarray(amplitudes, dtype=np.complex128)
    if amps.size != 2 ** code.k:
        raise ValueError(f"expected 2^k={2 ** code.k} amplitudes, got {amps.size}")
    nrm = np.linalg.norm(amps)
    if nrm < 1e-12:
        raise ValueError("zero logical amplitude vector")
    amps = amps / nrm
    base = _encoded_zero(code)
    out = StateVector(code.n, np.zeros(2 ** code.n, dtype=np.complex128))
    for x in range(2 ** code.k):
        if amps[x] == 0:
            continue
        ket = base.copy()
        for j in range(code.k):
            if (x >> (code.k - 1 - j)) & 1:
                apply_pauli(ket, code.logical_x[j])
        out.amp += amps[x] * ket.amp
    out.normalize()
    return out


def _encoded_zero(code: StabilizerCode) -> StateVector:
    ops = [(g, +1.0) for g in code.generators]
    ops += [(lz, +1.0) for lz in code.logical_z]
    for ref in _reference_states(code.n):
        state = StateVector.zero(code.n)
        if ref.any():
            apply_pauli(state, PauliString(code.n, ref, None))
        if _project_codeword(state, ops) > 1e-9:
            return state
    raise CodeError(f"no computational reference overlaps the codespace of {code.name}")


def encode_at(
    n_total: int, code: StabilizerCode, offset: int, amplitudes: Sequence[complex]
) -> StateVector:
    """Product state: |0...0> everywhere except ``code`` encoded at ``offset``."""
    left = StateVector.zero(offset) if offset else None
    mid = encode_logical(code, amplitudes)
    right_n = n_total - offset - code.n
    right = StateVector.zero(right_n) if right_n else None
    parts = [s for s in (left, mid, right) if s is not None]
    return tensor_all(parts)


# ---------------------------------------------------------------------------
# Running circuits
# ---------------------------------------------------------------------------

def _measure_pauli(
    state: StateVector,
    pauli: PauliString,
    rng: Optional[np.random.Generator],
    forced: Optional[int],
) -> int:
    if pauli.phase not in (1, -1) or pauli.phase != pauli.phase.real:
        raise ValueError(f"measurement operator must be Hermitian: {pauli.text()}")
    p_amp = _pauli_times_state(state, pauli)
    plus = 0.5 * (state.amp + p_amp)
    p_plus = float(np.vdot(plus, plus).real)
    p_plus = min(max(p_plus, 0.0), 1.0)
    if forced is not None:
        bit = int(forced)
    elif rng is not None:
        bit = 0 if rng.random() < p_plus else 1
    else:
        # deterministic outcomes only
        if p_plus > 1 - 1e-12:
            bit = 0
        elif p_plus < 1e-12:
            bit = 1
        else:
            raise ValueError("random measurement outcome but no rng supplied")
    prob = p_plus if bit == 0 else 1.0 - p_plus
    if prob < 1e-12:
        raise ZeroBranchError(f"branch {bit} of {pauli.text()} has probability {prob:.3e}")
    state.amp = plus if bit == 0 else state.amp - plus
    state.amp /= np.sqrt(prob)
    return bit


def run(
    circuit: Circuit,
    state: Optional[StateVector] = None,
    rng: Optional[np.random.Generator] = None,
    forced_outcomes: Optional[dict] = None,
):
    """Execute a circuit; returns (state, record of measured bits).

    forced_outcomes maps measurement keys to required bits (projecting onto
    that branch); a zero-probability forced branch raises ZeroBranchError.
    """
    if circuit.n_qubits > MAX_QUBITS:
        raise CodeError(f"circuit width {circuit.n_qubits} exceeds {MAX_QUBITS}")
    if state is None:
        state = StateVector.zero(circuit.n_qubits)
    else:
        state = state.copy()
    if state.n != circuit.n_qubits:
        raise ValueError(f"state width {state.n} != circuit width {circuit.n_qubits}")
    record: dict = {}
    observables: list = []
    for ins in circuit.instructions:
        if isinstance(ins, CliffordGate):
            _run_clifford(state, ins)
        elif isinstance(ins, PauliGate):
            apply_pauli(state, ins.pauli)
        elif isinstance(ins, PhaseGate):
            _apply_phase(state, ins.qubit, ins.p)
        elif isinstance(ins, EncodeIdeal):
            _run_encode(state, ins)
        elif isinstance(ins, MeasurePauli):
            forced = None if forced_outcomes is None else forced_outcomes.get(ins.key)
            record[ins.key] = _measure_pauli(state, ins.pauli, rng, forced)
        elif isinstance(ins, ClassicallyControlledPauli):
            if record[ins.key] == ins.required_bit:
                apply_pauli(state, ins.pauli)
        elif isinstance(ins, ObservableCheck):
            val = expectation(state, ins.pauli)
            observables.append((ins.pauli, ins.expected_sign, val))
        elif isinstance(ins, (QecRound, CatPrep)):
            continue
        elif isinstance(ins, Depolarize1):
            raise CapabilityError("state-vector mode is noiseless; Depolarize1 rejected")
        else:
            raise CapabilityError(f"unsupported instruction {ins!r}")
    if observables:
        record["observables"] = observables
    norm = state.norm()
    if abs(norm - 1.0) > 1e-10:
        raise RuntimeError(f"norm drifted to {norm}")
    return state, record


def _run_clifford(state: StateVector, ins: CliffordGate) -> None:
    kind = ins.kind
    if kind == "H":
        _apply_h(state, ins.qubits[0])
    elif kind == "S":
        _apply_s(state, ins.qubits[0])
    elif kind in ("X", "Y", "Z"):
        apply_pauli(state, PauliString.single(state.n, ins.qubits[0], kind))
    elif kind in ("CX", "CY", "CZ"):
        _apply_controlled(state, kind, *ins.qubits)
    else:
        raise CapabilityError(f"unsupported gate {kind}")


def _run_encode(state: StateVector, ins: EncodeIdeal) -> None:
    code, off = ins.code, ins.offset
    ops = [(g.embed(state.n, off), +1.0) for g in code.generators]
    for j, lz in enumerate(code.logical_z):
        sign = -1.0 if (ins.bit >> (code.k - 1 - j)) & 1 else +1.0
        ops.append((lz.embed(state.n, off), sign))
    norm = _project_codeword(state, ops)
    if norm < 1e-9:
        raise CodeError(
            f"ideal encoding of {code.name} at offset {off} annihilated the state"
        )


def enumerate_branches(
    circuit: Circuit, state: Optional[StateVector] = None, tol: float = 1e-12
) -> list:
    """All measurement branches with nonzero probability.

    Returns a list of (record, final_state); classically controlled
    corrections are applied inside each branch as usual.  Branch prefixes
    are shared, so the cost is roughly one pass per measurement fork
    rather than one pass per branch.
    """
    if state is None:
        state = StateVector.zero(circuit.n_qubits)
    if state.n != circuit.n_qubits:
        raise ValueError(f"state width {state.n} != circuit width {circuit.n_qubits}")
    instructions = circuit.instructions
    out: list = []

    def walk(idx: int, st: StateVector, record: dict) -> None:
        for j in range(idx, len(instructions)):
            ins = instructions[j]
            if isinstance(ins, MeasurePauli):
                p_amp = _pauli_times_state(st, ins.pauli)
                plus = 0.5 * (st.amp + p_amp)
                minus = st.amp - plus
                del p_amp
                st.amp = None  # type: ignore[assignment]  # free parent storage
                for bit, branch in ((0, plus), (1, minus)):
                    prob = float(np.vdot(branch, branch).real)
                    if prob < tol:
                        continue
                    child = StateVector(st.n, branch / np.sqrt(prob))
                    walk(j + 1, child, dict(record, **{ins.key: bit}))
                return
            _apply_instruction(st, ins, record)
        out.append((record, st))

    def _apply_instruction(st: StateVector, ins, record: dict) -> None:
        if isinstance(ins, CliffordGate):
            _run_clifford(st, ins)
        elif isinstance(ins, PauliGate):
            apply_pauli(st, ins.pauli)
        elif isinstance(ins, PhaseGate):
            _apply_phase(st, ins.qubit, ins.p)
        elif isinstance(ins, EncodeIdeal):
            _run_encode(st, ins)
        elif isinstance(ins, ClassicallyControlledPauli):
            if record[ins.key] == ins.required_bit:
                apply_pauli(st, ins.pauli)
        elif isinstance(ins, ObservableCheck):
            record.setdefault("observables", []).append(
                (ins.pauli, ins.expected_sign, expectation(st, ins.pauli))
            )
        elif isinstance(ins, (QecRound, CatPrep)):
            return
        elif isinstance(ins, Depolarize1):
            raise CapabilityError("state-vector mode is noiseless; Depolarize1 rejected")
        else:
            raise CapabilityError(f"unsupported instruction {ins!r}")

    walk(0, state.copy(), {})
    if not out:
        raise RuntimeError("no branch has nonzero probability")
    return out


# ---------------------------------------------------------------------------
# Comparison and logical readout
# ---------------------------------------------------------------------------

def assert_equiv(
    s1: StateVector,
    s2: StateVector,
    tolerance: float = 1e-9,
    up_to_global_phase: bool = True,
) -> bool:
    """min over unit phase of ||s1 - phi*s2|| <= tolerance (plain norm when
    the flag is off)."""
    if s1.n != s2.n:
        raise ValueError("state widths differ")
    if up_to_global_phase:
        inner = np.vdot(s2.amp, s1.amp)
        phi = inner / abs(inner) if abs(inner) > 1e-14 else 1.0
        diff = s1.amp - phi * s2.amp
    else:
        diff = s1.amp - s2.amp
    return float(np.linalg.norm(diff)) <= tolerance


_BASIS_CACHE: dict = {}


def _logical_basis_states(code: StabilizerCode) -> list:
    key = id(code)
    if key not in _BASIS_CACHE:
        states = []
        for x in range(2 ** code.k):
            amps = np.zeros(2 ** code.k)
            amps[x] = 1.0
            states.append(encode_logical(code, amps))
        _BASIS_CACHE[key] = states
    return _BASIS_CACHE[key]


def logical_readout(
    data: Sequence[tuple],
    state: StateVector,
    tolerance: float = 1e-9,
) -> np.ndarray:
    """Logical amplitudes over the data registers, up to global phase.

    ``data`` lists (code, offset) pairs; every other qubit is treated as a
    helper that must be unentangled from the data after the protocol.
    Raises LeakageError when weight is outside the joint codespace, and a
    RuntimeError when data and helpers remain entangled.
    """
    n = state.n
    data = list(data)
    data_axes: list = []
    for code, off in data:
        data_axes.extend(range(off, off + code.n))
    if len(set(data_axes)) != len(data_axes):
        raise ValueError("data registers overlap")
    helper_axes = [q for q in range(n) if q not in set(data_axes)]
    psi = state.amp.reshape((2,) * n)

    basis_per_code = [np.stack([s.amp for s in _logical_basis_states(c)]) for c, _ in data]
    k_total = sum(c.k for c, _ in data)
    rows = []
    for xs in itertools.product(*[range(2 ** c.k) for c, _ in data]):
        blocks = [basis_per_code[i][x] for i, x in enumerate(xs)]
        joint = blocks[0]
        for b in blocks[1:]:
            joint = np.kron(joint, b)
        joint_t = joint.reshape((2,) * len(data_axes))
        row = np.tensordot(joint_t.conj(), psi, axes=(range(len(data_axes)), data_axes))
        rows.append(row.reshape(-1))
    mat = np.stack(rows)  # (2^K, 2^H)

    total = float(np.vdot(mat, mat).real)
    norm2 = float(np.vdot(state.amp, state.amp).real)
    if abs(total - norm2) > max(tolerance, 1e-9):
        raise LeakageError(
            f"codespace weight {total:.12f} vs state norm^2 {norm2:.12f}"
        )
    if not helper_axes:
        vec = mat[:, 0]
        return vec / np.linalg.norm(vec)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size > 1 and s[1] > max(tolerance, 1e-9):
        raise RuntimeError(
            f"data registers remain entangled with helpers (sigma2={s[1]:.3e})"
        )
    return u[:, 0]


def fix_phase(vec: np.ndarray, reference_index: int = 0) -> np.ndarray:
    """Rotate a unit amplitude vector so entry ``reference_index`` is real
    positive (for comparisons up to global phase)."""
    v = vec[reference_index]
    if abs(v) < 1e-12:
        idx = int(np.argmax(np.abs(vec)))
        v = vec[idx]
    return vec * (abs(v) / v)


__all__ = [
    "LeakageError",
    "MAX_QUBITS",
    "StateVector",
    "ZeroBranchError",
    "apply_pauli",
    "assert_equiv",
    "encode_at",
    "encode_logical",
    "enumerate_branches",
    "expectation",
    "fix_phase",
    "logical_readout",
    "run",
    "tensor_all",
]
