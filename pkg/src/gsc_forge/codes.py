"""Stabilizer-code constructions: GSC/GSCH families and a registry of targets.

The generalized Shor code GSC(a, b) consists of ``a`` cat-state subregisters
of ``b`` qubits each (a odd, a >= 3, b >= 3).  Its Hadamard dual GSCH shares
the generators but swaps the logical operator pair.  The registry holds the
built-in target codes used by the gate protocols and experiments.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .pauli import (
    PauliError,
    PauliString,
    SymplecticTable,
    commutes,
    in_group,
    multiply,
    rank_gf2,
)


class CodeError(ValueError):
    """Raised on invalid code parameters or definitions."""


class BudgetError(RuntimeError):
    """Raised when an enumeration would exceed its stated budget."""


@dataclass(frozen=True)
class GscParams:
    """Cat-state count ``a`` (odd, >= 3) and qubits per cat state ``b`` (>= 3)."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 3 or self.a % 2 == 0:
            raise CodeError(f"a must be odd and >= 3, got {self.a}")
        if self.b < 3:
            raise CodeError(f"b must be >= 3, got {self.b}")

    @property
    def n(self) -> int:
        return self.a * self.b

    @property
    def distance(self) -> int:
        return min(self.a, self.b)

    def subregister(self, i: int) -> range:
        """Qubit indices of subregister ``i``."""
        if not 0 <= i < self.a:
            raise CodeError(f"subregister {i} out of range for a={self.a}")
        return range(i * self.b, (i + 1) * self.b)


@dataclass(frozen=True)
class StabilizerCode:
    """Generators plus logical X/Z representatives for an [[n, k, d]] code."""

    name: str
    n: int
    k: int
    generators: tuple
    logical_x: tuple
    logical_z: tuple
    distance: Optional[int] = None
    gsc_params: Optional[GscParams] = None
    # For codes with a transversal Z^p: physical Z^(direction*p) per qubit
    # implements logical Z^p.  None means no transversal rotation declared.
    transversal_phase_direction: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "logical_x", tuple(self.logical_x))
        object.__setattr__(self, "logical_z", tuple(self.logical_z))

    @property
    def t(self) -> int:
        """Correctable errors floor((d-1)/2); requires distance metadata."""
        if self.distance is None:
            raise CodeError(f"code {self.name} has no distance metadata")
        return (self.distance - 1) // 2

    def table(self) -> SymplecticTable:
        return SymplecticTable(self.generators)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "stabilizers": [g.text() for g in self.generators],
            "logical_x": [p.text() for p in self.logical_x],
            "logical_z": [p.text() for p in self.logical_z],
        }
        if self.distance is not None:
            d["distance"] = self.distance
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StabilizerCode":
        n = int(d["n"])
        def parse(texts):
            out = []
            for t in texts:
                p = PauliString.from_text(t)
                if p.n != n:
                    raise CodeError(f"operator {t!r} has length {p.n}, expected {n}")
                out.append(p)
            return tuple(out)
        return cls(
            name=str(d["name"]),
            n=n,
            k=int(d["k"]),
            generators=parse(d.get("stabilizers", [])),
            logical_x=parse(d["logical_x"]),
            logical_z=parse(d["logical_z"]),
            distance=d.get("distance"),
        )


def load_code_file(path: str | Path) -> StabilizerCode:
    """Read a code-definition JSON file."""
    with open(path) as f:
        return StabilizerCode.from_dict(json.load(f))


def save_code_file(code: StabilizerCode, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(code.to_dict(), f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------------------
# GSC / GSCH construction
# ---------------------------------------------------------------------------

def gsc_q(i: int, b: int) -> int:
    """First qubit of the i-th Z-generator: floor(i/(b-1))*b + i mod (b-1)."""
    return (i // (b - 1)) * b + (i % (b - 1))


def gsc(params: GscParams) -> StabilizerCode:
    """Generalized Shor code GSC(a, b) = [[a*b, 1, min(a, b)]].

    Z-generators act on adjacent qubit pairs within each subregister;
    X-generators act on all qubits of adjacent subregister pairs.
    The logical Z is X on every qubit of the first subregister; the logical
    X is Z on the first qubit of each subregister (stride b).
    """
    a, b, n = params.a, params.b, params.n
    gens = []
    for i in range(a * (b - 1)):
        q = gsc_q(i, b)
        gens.append(PauliString.from_support(n, "Z", [q, q + 1]))
    for i in range(a - 1):
        gens.append(PauliString.from_support(n, "X", range(b * i, b * i + 2 * b)))
    logical_z = PauliString.from_support(n, "X", range(b))
    logical_x = PauliString.from_support(n, "Z", [b * j for j in range(a)])
    return StabilizerCode(
        name=f"gsc_{a}_{b}",
        n=n,
        k=1,
        generators=tuple(gens),
        logical_x=(logical_x,),
        logical_z=(logical_z,),
        distance=params.distance,
        gsc_params=params,
    )


def gsch(params: GscParams) -> StabilizerCode:
    """Hadamard dual of gsc(params): same generators, logicals swapped."""
    base = gsc(params)
    return StabilizerCode(
        name=f"gsch_{params.a}_{params.b}",
        n=base.n,
        k=1,
        generators=base.generators,
        logical_x=base.logical_z,
        logical_z=base.logical_x,
        distance=base.distance,
        gsc_params=params,
    )


def gsch_basis(params: GscParams, x: int) -> list:
    """Computational-basis expansion of the GSCH logical state |x>.

    Returns 2^(a-1) pairs (bitstring, amplitude): one term per a-bit label
    whose Hamming weight has parity x, each subregister repeating its label
    bit b times, all with amplitude 2^(-(a-1)/2).
    """
    if x not in (0, 1):
        raise CodeError(f"x must be 0 or 1, got {x}")
    a, b = params.a, params.b
    amp = 2.0 ** (-(a - 1) / 2)
    out = []
    for label in range(2 ** a):
        if bin(label).count("1") % 2 != x:
            continue
        bits = "".join(str((label >> j) & 1) * b for j in range(a))
        out.append((bits, amp))
    return out


# ---------------------------------------------------------------------------
# Validation utilities
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    """Outcome of verify_code: a list of (check, detail) failures."""

    code_name: str
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, check: str, detail: str) -> None:
        self.failures.append((check, detail))

    def __str__(self) -> str:
        if self.ok:
            return f"{self.code_name}: all checks passed"
        lines = [f"{self.code_name}: {len(self.failures)} check(s) failed"]
        lines += [f"  [{c}] {d}" for c, d in self.failures]
        return "\n".join(lines)


def verify_code(code: StabilizerCode) -> ValidationReport:
    """Check the StabilizerCode invariants, reporting every failure."""
    rep = ValidationReport(code.name)
    gens = code.generators
    if len(gens) != code.n - code.k:
        rep.add("generator-count", f"{len(gens)} generators, expected n-k={code.n - code.k}")
    for p in gens + code.logical_x + code.logical_z:
        if p.n != code.n:
            rep.add("length", f"{p.text()} has n={p.n}, expected {code.n}")
            return rep
    for i, g in enumerate(gens):
        for j in range(i + 1, len(gens)):
            if not commutes(g, gens[j]):
                rep.add("generator-commutation", f"g{i}={g.text()} vs g{j}={gens[j].text()}")
    if gens and rank_gf2(SymplecticTable(gens)) != len(gens):
        rep.add("generator-independence", f"rank {rank_gf2(SymplecticTable(gens))} < {len(gens)}")
    if len(code.logical_x) != code.k or len(code.logical_z) != code.k:
        rep.add("logical-count", f"{len(code.logical_x)} X / {len(code.logical_z)} Z, expected k={code.k}")
    for kind, ops in (("X", code.logical_x), ("Z", code.logical_z)):
        for i, L in enumerate(ops):
            for j, g in enumerate(gens):
                if not commutes(L, g):
                    rep.add("logical-vs-generator", f"{kind}bar_{i}={L.text()} vs g{j}={g.text()}")
    for i, lx in enumerate(code.logical_x):
        for j, lz in enumerate(code.logical_z):
            want_anti = i == j
            if commutes(lx, lz) == want_anti:
                word = "anticommute" if want_anti else "commute"
                rep.add("logical-pairing", f"Xbar_{i} and Zbar_{j} must {word}")
    for kind, ops in (("X", code.logical_x), ("Z", code.logical_z)):
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                if not commutes(ops[i], ops[j]):
                    rep.add("logical-same-kind", f"{kind}bar_{i} vs {kind}bar_{j} must commute")
    return rep


_LETTERS = ("X", "Y", "Z")


def _enumeration_budget(n: int, w_max: int) -> int:
    return sum(math.comb(n, w) * 3 ** w for w in range(1, w_max + 1))


def distance_bruteforce(code: StabilizerCode, w_max: int, budget: int = 10 ** 8) -> Optional[int]:
    """Minimum weight <= w_max of a Pauli commuting with every generator but
    outside the generator group, or None if no such Pauli exists up to w_max."""
    if _enumeration_budget(code.n, w_max) > budget:
        raise BudgetError(
            f"enumeration of weight<= {w_max} on n={code.n} exceeds budget {budget:g}"
        )
    n = code.n
    gx = [int(sum(1 << q for q in np.flatnonzero(g.x_bits))) for g in code.generators]
    gz = [int(sum(1 << q for q in np.flatnonzero(g.z_bits))) for g in code.generators]
    span = _Gf2Span([g for g in code.generators], n)
    for w in range(1, w_max + 1):
        for pos in itertools.combinations(range(n), w):
            for letters in itertools.product(_LETTERS, repeat=w):
                ex = ez = 0
                for q, L in zip(pos, letters):
                    if L != "Z":
                        ex |= 1 << q
                    if L != "X":
                        ez |= 1 << q
                if any(
                    ((ex & z).bit_count() + (ez & x).bit_count()) % 2
                    for x, z in zip(gx, gz)
                ):
                    continue
                if not span.contains_bits(ex, ez):
                    return w
    return None


class _Gf2Span:
    """Echelonized GF(2) span of Pauli bit vectors for membership tests."""

    def __init__(self, generators: Sequence[PauliString], n: int):
        self.n = n
        rows = []
        for g in generators:
            v = 0
            for q in np.flatnonzero(g.x_bits):
                v |= 1 << int(q)
            for q in np.flatnonzero(g.z_bits):
                v |= 1 << (int(q) + n)
            rows.append(v)
        self.basis = []
        for r in rows:
            r = self._reduce(r)
            if r:
                self.basis.append(r)
                self.basis.sort(key=lambda b: b & -b)

    def _reduce(self, v: int) -> int:
        for b in self.basis:
            if v & (b & -b):
                v ^= b
        return v

    def contains_bits(self, x: int, z: int) -> bool:
        return self._reduce(x | (z << self.n)) == 0

    def contains(self, p: PauliString) -> bool:
        x = int(sum(1 << int(q) for q in np.flatnonzero(p.x_bits)))
        z = int(sum(1 << int(q) for q in np.flatnonzero(p.z_bits)))
        return self.contains_bits(x, z)


def stabilizer_span(code_or_gens) -> _Gf2Span:
    """Membership oracle for the group generated by a code's stabilizers."""
    if isinstance(code_or_gens, StabilizerCode):
        return _Gf2Span(code_or_gens.generators, code_or_gens.n)
    gens = list(code_or_gens)
    return _Gf2Span(gens, gens[0].n)


def min_weight_rep(op: PauliString, generators: Sequence[PauliString]) -> PauliString:
    """Lowest-weight element of op * <generators>, ties broken by letter text.

    Enumerates the full group (2^s elements), so only suitable for s <= ~20.
    """
    s = len(generators)
    if s == 0:
        return op.unsigned()
    if s > 22:
        raise BudgetError(f"group enumeration over 2^{s} elements refused")
    n = op.n
    def pack(p):
        x = int(sum(1 << int(q) for q in np.flatnonzero(p.x_bits)))
        z = int(sum(1 << int(q) for q in np.flatnonzero(p.z_bits)))
        return x, z
    gx, gz = zip(*(pack(g) for g in generators))
    cx, cz = pack(op)
    best = None
    for i in range(2 ** s):
        if i:
            j = (i & -i).bit_length() - 1
            cx ^= gx[j]
            cz ^= gz[j]
        w = (cx | cz).bit_count()
        letters = "".join("IXZY"[((cx >> q) & 1) + 2 * ((cz >> q) & 1)] for q in range(n))
        key = (w, letters)
        if best is None or key < best:
            best = key
    # gray-code walk: restore nothing, just rebuild from the best letters
    return PauliString.from_text(best[1])


# ---------------------------------------------------------------------------
# Built-in codes
# ---------------------------------------------------------------------------

def trivial_code() -> StabilizerCode:
    return StabilizerCode(
        name="trivial",
        n=1,
        k=1,
        generators=(),
        logical_x=(PauliString.from_text("X"),),
        logical_z=(PauliString.from_text("Z"),),
        distance=1,
        transversal_phase_direction=+1,
    )


def four_qubit_code() -> StabilizerCode:
    """[[4, 2, 2]] code with generators XXXX and ZZZZ."""
    gens = (PauliString.from_text("XXXX"), PauliString.from_text("ZZZZ"))
    return StabilizerCode(
        name="four_qubit",
        n=4,
        k=2,
        generators=gens,
        logical_x=(PauliString.from_text("XXII"), PauliString.from_text("XIXI")),
        logical_z=(PauliString.from_text("ZIZI"), PauliString.from_text("ZZII")),
        distance=2,
    )


def five_qubit_code() -> StabilizerCode:
    """[[5, 1, 3]] code: cyclic shifts of XZZXI, minimum-weight logicals."""
    gens = tuple(
        PauliString.from_text(t) for t in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
    )
    lx = min_weight_rep(PauliString.from_text("XXXXX"), gens)
    lz = min_weight_rep(PauliString.from_text("ZZZZZ"), gens)
    return StabilizerCode(
        name="five_qubit", n=5, k=1, generators=gens,
        logical_x=(lx,), logical_z=(lz,), distance=3,
    )


def steane_code() -> StabilizerCode:
    """[[7, 1, 3]] Steane code from the Hamming [7, 4, 3] checks."""
    checks = [(3, 4, 5, 6), (1, 2, 5, 6), (0, 2, 4, 6)]
    gens = tuple(
        PauliString.from_support(7, L, qs) for L in ("X", "Z") for qs in checks
    )
    lx = min_weight_rep(PauliString.from_support(7, "X", range(7)), gens)
    lz = min_weight_rep(PauliString.from_support(7, "Z", range(7)), gens)
    return StabilizerCode(
        name="steane", n=7, k=1, generators=gens,
        logical_x=(lx,), logical_z=(lz,), distance=3,
        transversal_phase_direction=None,
    )


def reed_muller_15() -> StabilizerCode:
    """[[15, 1, 3]] quantum Reed-Muller code (transversal Z^(1/4)).

    Qubit q (0-based) carries the nonzero 4-bit label q+1.  X-stabilizers
    are the four coordinate half-spaces (weight 8); Z-stabilizers are those
    four plus the six pairwise intersections (weight 4).
    """
    def labelled(pred):
        return [q for q in range(15) if pred(q + 1)]

    gens = []
    for k in range(4):
        gens.append(PauliString.from_support(15, "X", labelled(lambda v, k=k: v >> k & 1)))
    for k in range(4):
        gens.append(PauliString.from_support(15, "Z", labelled(lambda v, k=k: v >> k & 1)))
    for j in range(4):
        for k in range(j + 1, 4):
            gens.append(
                PauliString.from_support(
                    15, "Z", labelled(lambda v, j=j, k=k: (v >> j & 1) and (v >> k & 1))
                )
            )
    gens = tuple(gens)
    lx = min_weight_rep(PauliString.from_support(15, "X", range(15)), gens)
    lz = min_weight_rep(PauliString.from_support(15, "Z", range(15)), gens)
    # Physical Z^(-p) on every qubit implements logical Z^p (direction -1),
    # recorded from the state-vector check in the test suite.
    return StabilizerCode(
        name="reed_muller_15", n=15, k=1, generators=gens,
        logical_x=(lx,), logical_z=(lz,), distance=3,
        transversal_phase_direction=-1,
    )


# Fixed [[15, 1, 5]] instance: generators are the first 14 cyclic shifts of
# a single seed Pauli (the five-qubit code's structure at length 15), found
# by randomized search and validated by distance_bruteforce: no logical
# operator of weight <= 4 exists, and the weight-5 logical pair below does.
_DODECA_SEED = "IXIXIIIXIXIIYYI"
_DODECA_LOGICAL_X = "IIIIIIIIIIYXZXY"
_DODECA_LOGICAL_Z = "IIIIXXIIIYIIIXX"


def dodeca_15() -> StabilizerCode:
    """[[15, 1, 5]] code (keeps the 'dodecacode' label used for it upstream)."""
    seed = _DODECA_SEED
    gens = tuple(
        PauliString.from_text(seed[-s:] + seed[:-s]) for s in range(14)
    )
    return StabilizerCode(
        name="dodeca_15", n=15, k=1, generators=gens,
        logical_x=(PauliString.from_text(_DODECA_LOGICAL_X),),
        logical_z=(PauliString.from_text(_DODECA_LOGICAL_Z),),
        distance=5,
    )


def shor_code() -> StabilizerCode:
    code = gsc(GscParams(3, 3))
    return StabilizerCode(
        name="shor", n=code.n, k=1, generators=code.generators,
        logical_x=code.logical_x, logical_z=code.logical_z,
        distance=3, gsc_params=code.gsc_params,
    )


_REGISTRY_BUILDERS = {
    "trivial": trivial_code,
    "four_qubit": four_qubit_code,
    "five_qubit": five_qubit_code,
    "steane": steane_code,
    "shor": shor_code,
    "reed_muller_15": reed_muller_15,
    "dodeca_15": dodeca_15,
}

_REGISTRY_CACHE: Optional[dict] = None


def registry() -> dict:
    """Built-in codes by name; every entry passes verify_code."""
    global _REGISTRY_CACHE
    if _REGISTRY_CACHE is None:
        _REGISTRY_CACHE = {name: make() for name, make in _REGISTRY_BUILDERS.items()}
    return dict(_REGISTRY_CACHE)


def get_code(name_or_path: str) -> StabilizerCode:
    """Look up a registry code by name, or load a code-definition file."""
    reg = registry()
    if name_or_path in reg:
        return reg[name_or_path]
    p = Path(name_or_path)
    if p.exists():
        return load_code_file(p)
    raise CodeError(
        f"unknown code {name_or_path!r}; registry has: {', '.join(sorted(reg))}"
    )


__all__ = [
    "BudgetError",
    "CodeError",
    "GscParams",
    "StabilizerCode",
    "ValidationReport",
    "distance_bruteforce",
    "four_qubit_code",
    "five_qubit_code",
    "get_code",
    "gsc",
    "gsc_q",
    "gsch",
    "gsch_basis",
    "load_code_file",
    "min_weight_rep",
    "dodeca_15",
    "reed_muller_15",
    "registry",
    "save_code_file",
    "shor_code",
    "stabilizer_span",
    "steane_code",
    "trivial_code",
    "verify_code",
]
