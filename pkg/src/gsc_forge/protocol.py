"""Circuit IR and builders for the GSC-mediated logical-gate protocols.

The controlled-flip primitive targets any stabilizer code: each subregister
of a GSC/GSCH helper transversally applies the target's logical flip, with
an error-correction round (under a temporarily modified helper X-stabilizer)
after every step.  On top of that primitive sit the stabilizer-generic
Hadamard, the generic controlled-flip between two data codes, and the
generic Z-rotation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .codes import CodeError, GscParams, StabilizerCode, gsc, gsch
from .pauli import PauliString, SymplecticTable, commutes, multiply, rank_gf2


class SizingError(ValueError):
    """Raised when a helper register is too small for a target operator."""


class CapabilityError(ValueError):
    """Raised when a code lacks a declared capability (e.g. transversal Z^p)."""


# ---------------------------------------------------------------------------
# Instructions
# ---------------------------------------------------------------------------

CLIFFORD_KINDS_1Q = ("H", "S", "X", "Y", "Z")
CLIFFORD_KINDS_2Q = ("CX", "CY", "CZ")


@dataclass(frozen=True)
class CliffordGate:
    kind: str
    qubits: tuple

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        want = 1 if self.kind in CLIFFORD_KINDS_1Q else 2
        if self.kind not in CLIFFORD_KINDS_1Q + CLIFFORD_KINDS_2Q:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} takes {want} qubit(s), got {self.qubits}")


@dataclass(frozen=True)
class PauliGate:
    """Unconditional multi-qubit Pauli (e.g. a logical X applied directly)."""

    pauli: PauliString


@dataclass(frozen=True)
class PhaseGate:
    """Z^p = diag(1, exp(i*pi*p)) on one qubit."""

    p: float
    qubit: int


@dataclass(frozen=True)
class Depolarize1:
    p: float
    qubits: tuple

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))


@dataclass(frozen=True)
class MeasurePauli:
    pauli: PauliString
    key: str


@dataclass(frozen=True)
class ClassicallyControlledPauli:
    key: str
    required_bit: int
    pauli: PauliString


@dataclass(frozen=True)
class EncodeIdeal:
    """Ideal-encoding marker: prepare |bit> of ``code`` at ``offset``."""

    code: StabilizerCode
    offset: int
    bit: int = 0


@dataclass(frozen=True)
class QecRound:
    """Marker consumed by noisy simulators/decoders; no-op when noiseless."""

    combined: Optional[object] = None  # CombinedCode or StabilizerCode
    label: str = ""


@dataclass(frozen=True)
class CatPrep:
    """Cat-state ancilla block marker for Shor-style extraction."""

    qubits: tuple

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))


@dataclass(frozen=True)
class ObservableCheck:
    pauli: PauliString
    expected_sign: int = +1


Instruction = Union[
    CliffordGate,
    PauliGate,
    PhaseGate,
    Depolarize1,
    MeasurePauli,
    ClassicallyControlledPauli,
    EncodeIdeal,
    QecRound,
    CatPrep,
    ObservableCheck,
]


# ---------------------------------------------------------------------------
# Registers and layout
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    role: str  # GSC, GSC2, C1, C2, RC, A
    code: StabilizerCode
    offset: int

    @property
    def qubits(self) -> range:
        return range(self.offset, self.offset + self.code.n)


@dataclass(frozen=True)
class RegisterLayout:
    segments: tuple

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        spans = sorted((s.offset, s.offset + s.code.n, s.role) for s in self.segments)
        for (a0, a1, _), (b0, b1, _) in zip(spans, spans[1:]):
            if b0 < a1:
                raise CodeError("layout segments overlap")

    @property
    def n_qubits(self) -> int:
        return max((s.offset + s.code.n for s in self.segments), default=0)

    def segment(self, role: str) -> Segment:
        for s in self.segments:
            if s.role == role:
                return s
        raise KeyError(f"no segment with role {role!r}")


@dataclass(frozen=True)
class PlacedQubit:
    """One logical qubit of a code register placed at a qubit offset."""

    code: StabilizerCode
    offset: int
    index: int = 0

    def logical(self, kind: str, n_total: int) -> PauliString:
        ops = self.code.logical_x if kind == "X" else self.code.logical_z
        return ops[self.index].embed(n_total, self.offset)


# ---------------------------------------------------------------------------
# Circuit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    instructions: tuple
    layout: Optional[RegisterLayout] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        self.validate()

    def validate(self) -> None:
        seen_keys = set()
        for ins in self.instructions:
            for q in _instruction_qubits(ins):
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"qubit {q} out of range in {ins}")
            p = getattr(ins, "pauli", None)
            if p is not None and p.n != self.n_qubits:
                raise ValueError(f"pauli width {p.n} != circuit width {self.n_qubits} in {ins}")
            if isinstance(ins, MeasurePauli):
                seen_keys.add(ins.key)
            if isinstance(ins, ClassicallyControlledPauli) and ins.key not in seen_keys:
                raise ValueError(f"classical control on unmeasured key {ins.key!r}")

    def count_two_qubit_gates(self) -> int:
        """Emitted controlled-P gates (Shor-extraction convention: one per
        Pauli factor per round; cat-prep internals excluded)."""
        return sum(
            1
            for ins in self.instructions
            if isinstance(ins, CliffordGate) and ins.kind in CLIFFORD_KINDS_2Q
        )

    def measurement_keys(self) -> list:
        return [ins.key for ins in self.instructions if isinstance(ins, MeasurePauli)]

    def serialize(self) -> str:
        lines = [f"qubits {self.n_qubits}"]
        for ins in self.instructions:
            lines.append(_serialize_instruction(ins))
        return "\n".join(lines) + "\n"


def _instruction_qubits(ins: Instruction):
    if isinstance(ins, CliffordGate):
        return ins.qubits
    if isinstance(ins, PhaseGate):
        return (ins.qubit,)
    if isinstance(ins, (Depolarize1, CatPrep)):
        return ins.qubits
    if isinstance(ins, EncodeIdeal):
        return (ins.offset, ins.offset + ins.code.n - 1)
    return ()


def _serialize_instruction(ins: Instruction) -> str:
    if isinstance(ins, CliffordGate):
        return f"gate {ins.kind} {' '.join(map(str, ins.qubits))}"
    if isinstance(ins, PauliGate):
        return f"pauli {ins.pauli.text()}"
    if isinstance(ins, PhaseGate):
        return f"phase {ins.p!r} {ins.qubit}"
    if isinstance(ins, Depolarize1):
        return f"depolarize {ins.p!r} {' '.join(map(str, ins.qubits))}"
    if isinstance(ins, MeasurePauli):
        return f"measure {ins.key} {ins.pauli.text()}"
    if isinstance(ins, ClassicallyControlledPauli):
        return f"cpauli {ins.key} {ins.required_bit} {ins.pauli.text()}"
    if isinstance(ins, EncodeIdeal):
        return f"encode {ins.code.name} {ins.offset} {ins.bit}"
    if isinstance(ins, QecRound):
        return f"qec {ins.label}" if ins.label else "qec"
    if isinstance(ins, CatPrep):
        return f"catprep {' '.join(map(str, ins.qubits))}"
    if isinstance(ins, ObservableCheck):
        return f"observable {'+' if ins.expected_sign > 0 else '-'} {ins.pauli.text()}"
    raise TypeError(f"cannot serialize {ins!r}")


def parse_circuit(text: str) -> Circuit:
    """Parse the line format written by Circuit.serialize.

    Encode lines are resolved against the registry and the gsc_/gsch_ naming
    scheme; qec lines are kept as labelled markers.
    """
    from .codes import get_code

    def resolve(name: str) -> StabilizerCode:
        if name.startswith(("gsc_", "gsch_")):
            kind, a, b = name.split("_")
            params = GscParams(int(a), int(b))
            return gsc(params) if kind == "gsc" else gsch(params)
        return get_code(name)

    n_qubits = None
    instrs = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        op, *rest = line.split()
        if op == "qubits":
            n_qubits = int(rest[0])
        elif op == "gate":
            instrs.append(CliffordGate(rest[0], tuple(map(int, rest[1:]))))
        elif op == "pauli":
            instrs.append(PauliGate(PauliString.from_text(rest[0])))
        elif op == "phase":
            instrs.append(PhaseGate(float(rest[0]), int(rest[1])))
        elif op == "depolarize":
            instrs.append(Depolarize1(float(rest[0]), tuple(map(int, rest[1:]))))
        elif op == "measure":
            instrs.append(MeasurePauli(PauliString.from_text(rest[1]), rest[0]))
        elif op == "cpauli":
            instrs.append(
                ClassicallyControlledPauli(rest[0], int(rest[1]), PauliString.from_text(rest[2]))
            )
        elif op == "encode":
            instrs.append(EncodeIdeal(resolve(rest[0]), int(rest[1]), int(rest[2])))
        elif op == "qec":
            instrs.append(QecRound(label=" ".join(rest)))
        elif op == "catprep":
            instrs.append(CatPrep(tuple(map(int, rest))))
        elif op == "observable":
            instrs.append(
                ObservableCheck(PauliString.from_text(rest[1]), +1 if rest[0] == "+" else -1)
            )
        else:
            raise ValueError(f"unknown instruction line {raw!r}")
    if n_qubits is None:
        raise ValueError("missing 'qubits' header line")
    return Circuit(n_qubits, tuple(instrs))


# ---------------------------------------------------------------------------
# Modified stabilizers and the combined two-partition code
# ---------------------------------------------------------------------------

def modified_stabilizers(
    params: GscParams,
    i: int,
    o_target: PauliString,
    helper_offset: int = 0,
) -> list:
    """The a-1 helper X-stabilizers after flip step ``i``.

    Row j is g_x(j) embedded at ``helper_offset``, multiplied by the target
    flip operator exactly when j == i.  For i == a-1 every row is unmodified.
    """
    if not 0 <= i <= params.a - 1:
        raise CodeError(f"step {i} out of range for a={params.a}")
    n_total = o_target.n
    a, b = params.a, params.b
    rows = []
    for j in range(a - 1):
        row = PauliString.from_support(
            n_total, "X", range(helper_offset + b * j, helper_offset + b * j + 2 * b)
        )
        if j == i:
            row = multiply(row, o_target)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class CombinedCode:
    """The helper (+) target two-partition code at one protocol step.

    Stabilizer rows follow the published layout: helper Z-generators, then
    the target's non-pure-X generators, then helper X-generators (row i
    modified while 0 <= i <= a-2), then the target's pure-X generators.
    """

    layout: RegisterLayout
    params: GscParams
    target: StabilizerCode
    step: int
    flip: str
    stabilizers: SymplecticTable
    logical_ops: tuple
    modified_row: Optional[int]
    target_logical_index: int = 0

    @property
    def n(self) -> int:
        return self.layout.n_qubits

    @property
    def helper_offset(self) -> int:
        return self.layout.segment("GSC").offset

    @property
    def target_offset(self) -> int:
        return self.layout.segment("C1").offset

    def helper_qubits(self) -> range:
        return self.layout.segment("GSC").qubits

    def target_qubits(self) -> range:
        return self.layout.segment("C1").qubits

    def bit_matrix(self) -> np.ndarray:
        return self.stabilizers.bit_matrix()


def combined_code(
    params: GscParams,
    target: StabilizerCode,
    step: int,
    flip: str = "X",
    *,
    helper_offset: int = 0,
    target_offset: Optional[int] = None,
    n_total: Optional[int] = None,
    target_logical_index: int = 0,
) -> CombinedCode:
    """Build the combined code for flip step ``step`` of the protocol."""
    if flip not in ("X", "Z"):
        raise CodeError(f"flip must be 'X' or 'Z', got {flip!r}")
    a, b = params.a, params.b
    if target_offset is None:
        target_offset = helper_offset + params.n
    if n_total is None:
        n_total = max(helper_offset + params.n, target_offset + target.n)
    helper = gsch(params)
    layout = RegisterLayout(
        (
            Segment("GSC", helper, helper_offset),
            Segment("C1", target, target_offset),
        )
    )
    t_ops = target.logical_x if flip == "X" else target.logical_z
    o_target = t_ops[target_logical_index].embed(n_total, target_offset)

    gsc_z = [
        g.embed(n_total, helper_offset) for g in helper.generators if not g.x_bits.any()
    ]
    gsc_x = modified_stabilizers(params, step, o_target, helper_offset)
    target_x = [
        g.embed(n_total, target_offset) for g in target.generators if not g.z_bits.any()
    ]
    target_rest = [
        g.embed(n_total, target_offset) for g in target.generators if g.z_bits.any()
    ]
    rows = gsc_z + target_rest + gsc_x + target_x
    modified_row = None
    if step <= a - 2:
        modified_row = len(gsc_z) + len(target_rest) + step

    table = SymplecticTable(tuple(rows))
    for r1, r2 in itertools.combinations(rows, 2):
        if not commutes(r1, r2):
            raise CodeError(
                "combined-code stabilizers do not commute "
                f"({r1.text()} vs {r2.text()}); check the logical representative"
            )
    if rank_gf2(table) != len(rows):
        raise CodeError("combined-code stabilizers are not independent")

    # Logical completion valid in the presence of the modified row: the
    # target-Z representative drags one Z per already-used helper subregister.
    x_h = helper.logical_x[0].embed(n_total, helper_offset)  # X-type, subreg 0
    z_h = helper.logical_z[0].embed(n_total, helper_offset)  # Z on column qubits
    x_t = target.logical_x[target_logical_index].embed(n_total, target_offset)
    z_t = target.logical_z[target_logical_index].embed(n_total, target_offset)
    if flip == "X":
        tail = PauliString.from_support(
            n_total, "Z", [helper_offset + b * j for j in range(step + 1)]
        )
        logical_ops = (multiply(x_h, x_t), z_h, x_t, multiply(tail, z_t))
    else:
        tail = PauliString.from_support(
            n_total, "Z", [helper_offset + b * j for j in range(step + 1)]
        )
        logical_ops = (multiply(x_h, z_t), z_h, multiply(tail, x_t), z_t)
    for L in logical_ops:
        for r in rows:
            if not commutes(L, r):
                raise CodeError(f"logical {L.text()} fails to commute with {r.text()}")

    return CombinedCode(
        layout=layout,
        params=params,
        target=target,
        step=step,
        flip=flip,
        stabilizers=table,
        logical_ops=logical_ops,
        modified_row=modified_row,
        target_logical_index=target_logical_index,
    )


def table_s1_combined() -> CombinedCode:
    """The published 18-qubit example: GSCH(3,3) controlling a GSC(3,3)
    target, after the first X-flip step."""
    return combined_code(GscParams(3, 3), gsc(GscParams(3, 3)), step=0, flip="X")


# ---------------------------------------------------------------------------
# Transversal flip steps and the GSCH-controlled flip
# ---------------------------------------------------------------------------

def _controlled_factor_gates(
    o_target: PauliString, controls: Sequence[int]
) -> list:
    """One controlled-P per factor of o_target, controls used in order."""
    gates = []
    support = o_target.support
    for ctrl, q in zip(controls, support):
        xb, zb = bool(o_target.x_bits[q]), bool(o_target.z_bits[q])
        kind = {(True, False): "CX", (False, True): "CZ", (True, True): "CY"}[(xb, zb)]
        gates.append(CliffordGate(kind, (ctrl, q)))
    return gates


def transversal_flip_step(
    params: GscParams,
    helper_offset: int,
    i: int,
    o_target: PauliString,
) -> list:
    """Flip step ``i``: the j-th factor of the target operator is controlled
    by the j-th qubit of helper subregister i (no control is reused)."""
    w = o_target.weight
    if w > params.b:
        raise SizingError(
            f"target operator weight {w} exceeds b={params.b}; "
            f"the helper requires b >= |O| = {w}"
        )
    controls = [helper_offset + i * params.b + j for j in range(w)]
    return _controlled_factor_gates(o_target, controls)


def controlled_flip_gsch(
    params: GscParams,
    target: StabilizerCode,
    flip: str,
    *,
    helper_offset: int = 0,
    target_offset: Optional[int] = None,
    n_total: Optional[int] = None,
    target_logical_index: int = 0,
) -> list:
    """All ``a`` transversal steps of the GSCH-controlled flip, each followed
    by a QEC round against the step's combined code (the final round's
    stabilizers are unmodified)."""
    if target_offset is None:
        target_offset = helper_offset + params.n
    if n_total is None:
        n_total = max(helper_offset + params.n, target_offset + target.n)
    t_ops = target.logical_x if flip == "X" else target.logical_z
    o_target = t_ops[target_logical_index].embed(n_total, target_offset)
    instrs = []
    for i in range(params.a):
        instrs.extend(transversal_flip_step(params, helper_offset, i, o_target))
        combined = combined_code(
            params,
            target,
            i,
            flip,
            helper_offset=helper_offset,
            target_offset=target_offset,
            n_total=n_total,
            target_logical_index=target_logical_index,
        )
        instrs.append(
            QecRound(combined, label=f"gsc@{helper_offset} {target.name}@{target_offset} step={i} flip={flip}")
        )
    return instrs


# ---------------------------------------------------------------------------
# Stabilizer-generic gates
# ---------------------------------------------------------------------------

def _require_sizing(params: GscParams, ops: Sequence[PauliString], what: str) -> None:
    need = max(op.weight for op in ops)
    if params.b < need:
        raise SizingError(
            f"{what}: helper b={params.b} violates b >= max operator weight {need}"
        )


def _helper_measure_correct(
    circ: list,
    helper_code: StabilizerCode,
    helper_offset: int,
    n_total: int,
    key: str,
    on_one: PauliString,
    on_zero: Optional[PauliString],
) -> None:
    """Measure the helper's GSC logical Z, then apply the corrections."""
    z_gsc = helper_code.logical_z[0].embed(n_total, helper_offset)
    circ.append(MeasurePauli(z_gsc, key))
    circ.append(ClassicallyControlledPauli(key, 1, on_one))
    if on_zero is not None:
        circ.append(ClassicallyControlledPauli(key, 0, on_zero))


def hadamard_generic(
    target: StabilizerCode,
    params: GscParams,
    *,
    target_logical_index: int = 0,
) -> Circuit:
    """Stabilizer-generic Hadamard on one logical qubit of ``target``.

    A GSC helper in |0> performs the controlled X then the controlled Z
    (both via the GSCH-controlled flip), is measured in its logical Z
    basis, and the X / Z corrections fire on outcome 1 / 0.
    """
    idx = target_logical_index
    _require_sizing(params, (target.logical_x[idx], target.logical_z[idx]), "hadamard")
    helper = gsc(params)
    n_total = params.n + target.n
    t_off = params.n
    layout = RegisterLayout(
        (Segment("GSC", helper, 0), Segment("C1", target, t_off))
    )
    x_t = target.logical_x[idx].embed(n_total, t_off)
    z_t = target.logical_z[idx].embed(n_total, t_off)
    circ: list = [EncodeIdeal(helper, 0, 0)]
    circ += controlled_flip_gsch(
        params, target, "X", target_offset=t_off, n_total=n_total, target_logical_index=idx
    )
    circ += controlled_flip_gsch(
        params, target, "Z", target_offset=t_off, n_total=n_total, target_logical_index=idx
    )
    _helper_measure_correct(circ, helper, 0, n_total, "m0", on_one=x_t, on_zero=z_t)
    return Circuit(n_total, tuple(circ), layout, name="hadamard_generic")


def _inner_hadamard_on_helper(
    circ: list,
    g1: StabilizerCode,
    g1_offset: int,
    g2_params: GscParams,
    g2_offset: int,
    n_total: int,
    key: str,
) -> None:
    """Stabilizer-generic Hadamard applied to the first helper's logical
    qubit, mediated by the second helper register."""
    g2 = gsc(g2_params)
    circ.append(EncodeIdeal(g2, g2_offset, 0))
    circ.extend(
        controlled_flip_gsch(
            g2_params, g1, "X",
            helper_offset=g2_offset, target_offset=g1_offset, n_total=n_total,
        )
    )
    circ.extend(
        controlled_flip_gsch(
            g2_params, g1, "Z",
            helper_offset=g2_offset, target_offset=g1_offset, n_total=n_total,
        )
    )
    _helper_measure_correct(
        circ, g2, g2_offset, n_total, key,
        on_one=g1.logical_x[0].embed(n_total, g1_offset),
        on_zero=g1.logical_z[0].embed(n_total, g1_offset),
    )


def controlled_flip_generic(
    c1: PlacedQubit,
    c2: PlacedQubit,
    flip: str,
    params: GscParams,
    *,
    g2_params: Optional[GscParams] = None,
    n_total: Optional[int] = None,
    g1_offset: int = 0,
    g2_offset: Optional[int] = None,
    emit_layout: bool = True,
) -> Circuit:
    """Stabilizer-generic controlled flip: control c1, target c2.

    The helper applies the controlled Z to c1, receives a stabilizer-generic
    Hadamard on its own logical qubit (mediated by a second helper register),
    applies the controlled flip to c2, and is measured in its logical Z
    basis; a Z correction on c1 fires on outcome 1.
    """
    if flip not in ("X", "Z"):
        raise CodeError(f"flip must be 'X' or 'Z', got {flip!r}")
    if g2_params is None:
        g2_params = GscParams(params.a, max(params.a, params.b, 3))
    g1 = gsc(params)
    g2 = gsc(g2_params)
    if g2_offset is None:
        g2_offset = g1_offset + g1.n
    if n_total is None:
        n_total = max(
            g2_offset + g2.n,
            c1.offset + c1.code.n,
            c2.offset + c2.code.n,
        )
    o_c2 = (c2.code.logical_x if flip == "X" else c2.code.logical_z)[c2.index]
    _require_sizing(params, (c1.code.logical_z[c1.index], o_c2), "controlled flip")
    _require_sizing(g2_params, (g1.logical_x[0], g1.logical_z[0]), "inner hadamard")

    z_c1 = c1.logical("Z", n_total)
    circ: list = [EncodeIdeal(g1, g1_offset, 0)]
    circ += controlled_flip_gsch(
        params, c1.code, "Z",
        helper_offset=g1_offset, target_offset=c1.offset, n_total=n_total,
        target_logical_index=c1.index,
    )
    _inner_hadamard_on_helper(circ, g1, g1_offset, g2_params, g2_offset, n_total, "mh")
    circ += controlled_flip_gsch(
        params, c2.code, flip,
        helper_offset=g1_offset, target_offset=c2.offset, n_total=n_total,
        target_logical_index=c2.index,
    )
    _helper_measure_correct(circ, g1, g1_offset, n_total, "mf", on_one=z_c1, on_zero=None)

    layout = None
    if emit_layout:
        segs = [Segment("GSC", g1, g1_offset), Segment("GSC2", g2, g2_offset)]
        segs.append(Segment("C1", c1.code, c1.offset))
        if not (c2.code is c1.code and c2.offset == c1.offset):
            segs.append(Segment("C2", c2.code, c2.offset))
        layout = RegisterLayout(tuple(segs))
    return Circuit(n_total, tuple(circ), layout, name=f"controlled_{flip.lower()}_generic")


def build_controlled_flip(
    c1_code: StabilizerCode,
    c2_code: StabilizerCode,
    flip: str,
    params: GscParams,
    *,
    c1_index: int = 0,
    c2_index: int = 0,
    g2_params: Optional[GscParams] = None,
) -> Circuit:
    """Allocate registers (helpers first, then targets) and build the gate.

    If c1_code and c2_code are the same object, both logical qubits live in
    one shared register.
    """
    if g2_params is None:
        g2_params = GscParams(params.a, max(params.a, params.b, 3))
    off = params.n + g2_params.n
    c1 = PlacedQubit(c1_code, off, c1_index)
    if c2_code is c1_code:
        c2 = PlacedQubit(c2_code, off, c2_index)
    else:
        c2 = PlacedQubit(c2_code, off + c1_code.n, c2_index)
    return controlled_flip_generic(
        c1, c2, flip, params, g2_params=g2_params, g2_offset=params.n
    )


def z_rotation_generic(
    c1_code: StabilizerCode,
    rc_code: StabilizerCode,
    p: float,
    params: GscParams,
    *,
    c1_index: int = 0,
    g2_params: Optional[GscParams] = None,
) -> Circuit:
    """Stabilizer-generic Z^p on one logical qubit of c1.

    The rotation code RC is entangled with c1 by a generic controlled X,
    rotated transversally, and measured in its logical X basis; a Z
    correction on c1 fires on outcome 1.
    """
    if rc_code.transversal_phase_direction is None:
        raise CapabilityError(
            f"rotation code {rc_code.name!r} declares no transversal Z^p"
        )
    if g2_params is None:
        g2_params = GscParams(params.a, max(params.a, params.b, 3))
    off = params.n + g2_params.n
    c1 = PlacedQubit(c1_code, off, c1_index)
    rc = PlacedQubit(rc_code, off + c1_code.n, 0)
    n_total = rc.offset + rc_code.n
    flip = controlled_flip_generic(
        c1, rc, "X", params, g2_params=g2_params, g2_offset=params.n,
        n_total=n_total, emit_layout=False,
    )
    direction = rc_code.transversal_phase_direction
    circ: list = [EncodeIdeal(rc_code, rc.offset, 0)]
    circ += list(flip.instructions)
    for q in range(rc.offset, rc.offset + rc_code.n):
        circ.append(PhaseGate(direction * p, q))
    circ.append(QecRound(label=f"rc {rc_code.name}@{rc.offset} post-rotation"))
    circ.append(MeasurePauli(rc.logical("X", n_total), "mt"))
    circ.append(ClassicallyControlledPauli("mt", 1, c1.logical("Z", n_total)))
    layout = RegisterLayout(
        (
            Segment("GSC", gsc(params), 0),
            Segment("GSC2", gsc(g2_params), params.n),
            Segment("C1", c1_code, c1.offset),
            Segment("RC", rc_code, rc.offset),
        )
    )
    return Circuit(n_total, tuple(circ), layout, name="z_rotation_generic")


def build_hadamard(
    target: StabilizerCode, params: GscParams, *, index: int = 0
) -> Circuit:
    return hadamard_generic(target, params, target_logical_index=index)


# ---------------------------------------------------------------------------
# Shor-style syndrome extraction (resource counting / noisy QEC)
# ---------------------------------------------------------------------------

def shor_syndrome_extraction(stabilizer: PauliString, rounds: int) -> Circuit:
    """Cat-state extraction of one stabilizer, ``rounds`` times.

    Each round prepares a weight(stabilizer)-qubit cat ancilla, couples one
    ancilla qubit to each Pauli factor, and measures the ancillas
    transversally in the X basis.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    w = stabilizer.weight
    n_data = stabilizer.n
    n_total = n_data + w
    ancillas = tuple(range(n_data, n_data + w))
    instrs: list = []
    for r in range(rounds):
        instrs.append(CatPrep(ancillas))
        instrs.extend(_controlled_factor_gates(stabilizer.embed(n_total, 0), ancillas))
        for j, anc in enumerate(ancillas):
            instrs.append(
                MeasurePauli(PauliString.single(n_total, anc, "X"), f"s{r}_{j}")
            )
    return Circuit(n_total, tuple(instrs), name="shor_extraction")


# ---------------------------------------------------------------------------
# Fault-intolerant blueprints
# ---------------------------------------------------------------------------

def blueprint_fault_intolerant(
    kind: str,
    c1_code: StabilizerCode,
    c2_code: Optional[StabilizerCode] = None,
    *,
    flip: str = "X",
    c1_index: int = 0,
    c2_index: int = 0,
) -> Circuit:
    """Single-ancilla-qubit versions of the generic gates, exactly as drawn.

    kind='hadamard': H, controlled-X, controlled-Z, H, Z measurement,
    X correction on 1 then Z correction on 0.
    kind='flip': H, controlled-Z on c1, H, controlled-O on c2, H, Z
    measurement, Z correction on c1 on outcome 1.
    """
    if kind not in ("hadamard", "flip"):
        raise ValueError(f"unknown blueprint kind {kind!r}")
    shared = c2_code is c1_code
    n_total = 1 + c1_code.n + (0 if (c2_code is None or shared) else c2_code.n)
    c1 = PlacedQubit(c1_code, 1, c1_index)
    x_c1 = c1.logical("X", n_total)
    z_c1 = c1.logical("Z", n_total)
    a = 0
    circ: list = [CliffordGate("H", (a,))]
    segs = [Segment("A", _TRIVIAL_ANCILLA, 0), Segment("C1", c1_code, 1)]
    if kind == "hadamard":
        circ += _controlled_factor_gates(x_c1, [a] * x_c1.weight)
        circ += _controlled_factor_gates(z_c1, [a] * z_c1.weight)
        circ.append(CliffordGate("H", (a,)))
        circ.append(MeasurePauli(PauliString.single(n_total, a, "Z"), "m0"))
        circ.append(ClassicallyControlledPauli("m0", 1, x_c1))
        circ.append(ClassicallyControlledPauli("m0", 0, z_c1))
    else:
        if c2_code is None:
            raise ValueError("flip blueprint needs a target code c2")
        c2 = PlacedQubit(c2_code, 1 if shared else 1 + c1_code.n, c2_index)
        if not shared:
            segs.append(Segment("C2", c2_code, c2.offset))
        o_c2 = c2.logical(flip, n_total)
        circ += _controlled_factor_gates(z_c1, [a] * z_c1.weight)
        circ.append(CliffordGate("H", (a,)))
        circ += _controlled_factor_gates(o_c2, [a] * o_c2.weight)
        circ.append(CliffordGate("H", (a,)))
        circ.append(MeasurePauli(PauliString.single(n_total, a, "Z"), "m0"))
        circ.append(ClassicallyControlledPauli("m0", 1, z_c1))
    return Circuit(
        n_total, tuple(circ), RegisterLayout(tuple(segs)), name=f"blueprint_{kind}"
    )


def _make_trivial_ancilla() -> StabilizerCode:
    from .codes import trivial_code

    return trivial_code()


_TRIVIAL_ANCILLA = _make_trivial_ancilla()


def wts(label: int, i: int) -> int:
    """Hamming weight of the first i+1 bits of ``label``."""
    return sum((label >> q) & 1 for q in range(i + 1))


__all__ = [
    "CapabilityError",
    "CatPrep",
    "Circuit",
    "CliffordGate",
    "ClassicallyControlledPauli",
    "CombinedCode",
    "Depolarize1",
    "EncodeIdeal",
    "MeasurePauli",
    "ObservableCheck",
    "PauliGate",
    "PhaseGate",
    "PlacedQubit",
    "QecRound",
    "RegisterLayout",
    "Segment",
    "SizingError",
    "blueprint_fault_intolerant",
    "build_controlled_flip",
    "build_hadamard",
    "combined_code",
    "controlled_flip_generic",
    "controlled_flip_gsch",
    "hadamard_generic",
    "modified_stabilizers",
    "parse_circuit",
    "shor_syndrome_extraction",
    "table_s1_combined",
    "transversal_flip_step",
    "wts",
    "z_rotation_generic",
]
