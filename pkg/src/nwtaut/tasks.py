"""The four search tasks: Cert, Find, Err, Pair.

Instance records, solution verifiers, exhaustive desk-scale solvers, and the
Find-to-Cert reduction.  Solvers sweep candidates in lexicographic order and
return the least solution, so none-results are certified by a complete sweep
and reruns are deterministic.  Universal ("for all y") clauses go through
the DPLL engine on explicit circuits and bounded enumeration on opaque ones;
when a budget is too small the verdict is the distinct token ``unknown``,
never ``False``.

"Size k formula" always means: a bit string of length exactly k that decodes
under the canonical formula code.  Strings that do not decode are skipped by
solvers and rejected by verifiers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import circuits as cc
from . import formulas as fm
from .circuits import Circuit, CircuitBuilder
from .frege import FREGE, FregeSystem, parse_proof
from .nwcore import NWError, Triple
from .proofsys import PlusAlphaSystem, ProofError, check_plus_alpha

UNKNOWN = "unknown"

#: largest proof-search budget (in bits) for which sound Find verification
#: enumerates every candidate proof string
SOUND_BIT_BUDGET = 22

#: largest k for which solvers sweep all 2^k candidate indices
SWEEP_K_LIMIT = 14


class TaskError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Cert

@dataclass(frozen=True)
class CertInstance:
    """1^(k) plus a circuit D(x, y) claimed to accept exactly the size-k
    tautology codes; oracles resolve any opaque blocks of D."""

    k: int
    c: int
    D: Circuit
    oracles: dict | None = field(default=None, compare=False)
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = dict(self.D.groups)
        if set(g) != {"x", "y"} or g["x"] != self.k:
            raise TaskError(f"D must have groups x ({self.k} bits) and y")
        if len(self.D.outputs) != 1:
            raise TaskError("D must have a single output")

    @property
    def y_width(self) -> int:
        return dict(self.D.groups)["y"]


@dataclass(frozen=True)
class CertSolution:
    kind: str  # "falsifiable-accepted" | "tautology-rejected"
    code: str

    def __post_init__(self):
        if self.kind not in ("falsifiable-accepted", "tautology-rejected"):
            raise TaskError(f"unknown solution kind {self.kind!r}")


def _accepting_y(inst: CertInstance, code: str, budget: int):
    return cc.sat_search(
        inst.D, fixed={"x": code}, budget=budget, oracles=inst.oracles
    )


def verify_cert(inst: CertInstance, sol: CertSolution, budget: int = 20):
    """True, False, or UNKNOWN (opaque-enumeration budget exceeded)."""
    if len(sol.code) != inst.k:
        return False
    phi = fm.decode_k(sol.code)
    if phi is None:
        return False
    taut = fm.is_tautology(phi, mode="auto")
    try:
        y = _accepting_y(inst, sol.code, budget)
    except fm.BudgetError:
        return UNKNOWN
    if sol.kind == "falsifiable-accepted":
        return (not taut) and y is not None
    return taut and y is None


def solve_cert(inst: CertInstance, budget: int = 20) -> CertSolution | None:
    """Least x that decodes to a formula witnessing either clause; None is
    certified by the complete 2^k sweep."""
    if inst.k > SWEEP_K_LIMIT:
        raise fm.BudgetError(f"k={inst.k} exceeds sweep limit {SWEEP_K_LIMIT}")
    for v in range(1 << inst.k):
        code = format(v, f"0{inst.k}b")
        phi = fm.decode_k(code)
        if phi is None:
            continue
        taut = fm.is_tautology(phi, mode="auto")
        y = _accepting_y(inst, code, budget)
        if taut and y is None:
            return CertSolution("tautology-rejected", code)
        if not taut and y is not None:
            return CertSolution("falsifiable-accepted", code)
    return None


# ---------------------------------------------------------------------------
# Find

@dataclass(frozen=True)
class FindInstance:
    """1^(k) plus an axiom alpha with a code of at most k^c0 bits; sought is
    a size-k tautology without a P+alpha proof of size below k^c1."""

    P: FregeSystem
    alpha: fm.Formula
    k: int
    c0: int
    c1: int
    promise_checked: bool = field(init=False)

    def __post_init__(self):
        fits = any(
            fm.encode_k(self.alpha, w) is not None
            for w in range(8, max(9, self.k**self.c0 + 1))
        )
        if not fits:
            raise TaskError(f"alpha does not fit {self.k}^{self.c0} code bits")
        # the promise (alpha is a tautology) is decided eagerly when feasible
        checked = False
        if len(fm.fvars(self.alpha)) <= 20:
            if not fm.is_tautology(self.alpha, mode="auto"):
                raise TaskError("alpha is not a tautology")
            checked = True
        object.__setattr__(self, "promise_checked", checked)

    @property
    def system(self) -> PlusAlphaSystem:
        return PlusAlphaSystem(self.P, self.alpha)


def _proof_strings(bit_budget: int):
    """Every byte string shorter than bit_budget bits, lexicographically."""
    nbytes = 0
    while 8 * nbytes < bit_budget:
        if nbytes == 0:
            yield b""
        else:
            yield from (v.to_bytes(nbytes, "big") for v in range(1 << (8 * nbytes)))
        nbytes += 1


def verify_find_candidate(inst: FindInstance, beta: fm.Formula, mode: str = "sound") -> str:
    """'accepted' | 'rejected' | 'unverified'.

    Sound mode enumerates every proof string of fewer than k^c1 bits and
    accepts only when none is a P+alpha proof of beta; it therefore exists
    only under the explicit bit budget.  Heuristic mode stops after the
    tautology and size gates: proof nonexistence is not certified."""
    if fm.encode_k(beta, inst.k) is None:
        return "rejected"
    if not fm.is_tautology(beta, mode="auto"):
        return "rejected"
    if mode == "heuristic":
        return "unverified"
    if mode != "sound":
        raise TaskError(f"unknown mode {mode!r}")
    bit_budget = inst.k**inst.c1
    if bit_budget > SOUND_BIT_BUDGET:
        raise fm.BudgetError(
            f"k^c1 = {bit_budget} bits exceeds sound search budget {SOUND_BIT_BUDGET}"
        )
    S = inst.system
    for raw in _proof_strings(bit_budget):
        try:
            proof = parse_proof(raw.decode("utf-8"))
        except (UnicodeDecodeError, ProofError, fm.ParseError):
            continue
        if check_plus_alpha(S, beta, proof):
            return "rejected"
    return "accepted"


def reduce_find_to_cert(inst: FindInstance) -> CertInstance:
    """D(x, y) = 'y spells a P+alpha proof of the formula coded by x', as an
    opaque circuit over x (k bits) and y (k^c1 bits)."""
    k, yw = inst.k, inst.k**inst.c1
    b = CircuitBuilder([("x", k), ("y", yw)])
    wires = [b.inp("x", i + 1) for i in range(k)] + [b.inp("y", i + 1) for i in range(yw)]
    out = b.opaque("provable", wires)
    D = b.build([out])
    S = inst.system

    def oracle(bits: tuple[int, ...]) -> bool:
        code = "".join(str(v) for v in bits[:k])
        ybits = bits[k:]
        phi = fm.decode_k(code)
        if phi is None:
            return False
        nbytes = len(ybits) // 8
        raw = bytes(
            sum(ybits[8 * i + j] << (7 - j) for j in range(8)) for i in range(nbytes)
        ).rstrip(b"\x00")
        try:
            proof = parse_proof(raw.decode("utf-8"))
        except (UnicodeDecodeError, ProofError, fm.ParseError):
            return False
        return check_plus_alpha(S, phi, proof)

    return CertInstance(
        k, inst.c1, D, oracles={"provable": oracle},
        meta={"reduced-from": "find", "c0": inst.c0, "c1": inst.c1},
    )


# ---------------------------------------------------------------------------
# Err

@dataclass(frozen=True)
class ErrInstance:
    """Truth table L (2^k bits) with a replayable witness bundle (one base
    witness per index, relative to the generating seed), and an advice
    string w to be audited."""

    triple: Triple
    k: int
    L: str
    seed: str
    witnesses: tuple[str, ...]
    w: str

    def __post_init__(self):
        if len(self.L) != 1 << self.k:
            raise TaskError(f"truth table must have {1 << self.k} bits")
        if len(self.w) != self.triple.advice_width:
            raise TaskError(
                f"advice must have {self.triple.advice_width} bits, got {len(self.w)}"
            )
        if len(self.witnesses) != 1 << self.k:
            raise TaskError("need one witness per index")
        if self.triple.k != self.k:
            raise TaskError("triple index width disagrees with k")
        for v in range(1 << self.k):
            x = format(v, f"0{self.k}b")
            if not self.triple.accepts(int(self.L[v]), x, self.witnesses[v], self.seed):
                raise TaskError(f"witness bundle fails to replay at index {x}")


def verify_err(inst: ErrInstance, x: str, budget: int = 20):
    """True iff the advice-equipped algorithm errs at index x: no witness
    for the table's bit exists under advice w."""
    if len(x) != inst.k or any(ch not in "01" for ch in x):
        raise TaskError(f"index must be a {inst.k}-bit string")
    a = int(inst.L[int(x, 2)])
    circ = inst.triple.f1 if a else inst.triple.f0
    try:
        y = cc.sat_search(circ, fixed={"x": x, "w": inst.w}, budget=budget)
    except fm.BudgetError:
        return UNKNOWN
    return y is None


def solve_err(inst: ErrInstance, budget: int = 20) -> str | None:
    if inst.k > SWEEP_K_LIMIT:
        raise fm.BudgetError(f"k={inst.k} exceeds sweep limit {SWEEP_K_LIMIT}")
    for v in range(1 << inst.k):
        x = format(v, f"0{inst.k}b")
        verdict = verify_err(inst, x, budget)
        if verdict is UNKNOWN:
            raise fm.BudgetError(f"budget exhausted at index {x}")
        if verdict:
            return x
    return None


# ---------------------------------------------------------------------------
# Pair

@dataclass(frozen=True)
class PairInstance:
    """Disjoint sets A, B given as truth tables at width k; candidate
    reduction C from (A, B) to the canonical disjoint pair (U, V) of the
    triple (U: pairs with an F0 witness, V: with an F1 witness)."""

    A: str
    B: str
    triple: Triple
    C: Circuit
    c: int
    oracles: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        k = self.k
        if len(self.A) != 1 << k or len(self.B) != 1 << k:
            raise TaskError(f"membership tables must have {1 << k} bits")
        if any(a == "1" and b == "1" for a, b in zip(self.A, self.B)):
            raise TaskError("A and B intersect")
        g = dict(self.C.groups)
        if list(g) != ["u"] or g["u"] != k:
            raise TaskError(f"C must have the single input group u ({k} bits)")
        if len(self.C.outputs) != k + self.triple.advice_width:
            raise TaskError(
                "C must output an index plus an advice slot "
                f"({k} + {self.triple.advice_width} wires)"
            )

    @property
    def k(self) -> int:
        return self.triple.k


def passthrough_circuit(k: int, zbits: str) -> Circuit:
    """The pass-through candidate reduction: u maps to the pair (u, zbits)."""
    b = CircuitBuilder([("u", k)])
    one = b.const(1)
    zero = b.NOT(one)
    outs = [b.inp("u", i + 1) for i in range(k)]
    outs += [one if ch == "1" else zero for ch in zbits]
    return b.build(outs)


def verify_pair(inst: PairInstance, u: str, budget: int = 20):
    """True iff u certifies that C is not a reduction: u is in A but C(u)
    lands outside U, or in B but outside V."""
    if len(u) != inst.k or any(ch not in "01" for ch in u):
        raise TaskError(f"candidate must be a {inst.k}-bit string")
    v = int(u, 2)
    in_a, in_b = inst.A[v] == "1", inst.B[v] == "1"
    if not (in_a or in_b):
        return False
    out = cc.eval_circuit(inst.C, {"u": u}, inst.oracles)
    x, z = out[: inst.k], out[inst.k:]
    a = 1 if in_b else 0
    circ = inst.triple.f1 if a else inst.triple.f0
    try:
        y = cc.sat_search(circ, fixed={"x": x, "w": z}, budget=budget)
    except fm.BudgetError:
        return UNKNOWN
    return y is None


def solve_pair(inst: PairInstance, budget: int = 20) -> str | None:
    if inst.k > SWEEP_K_LIMIT:
        raise fm.BudgetError(f"k={inst.k} exceeds sweep limit {SWEEP_K_LIMIT}")
    for v in range(1 << inst.k):
        u = format(v, f"0{inst.k}b")
        verdict = verify_pair(inst, u, budget)
        if verdict is UNKNOWN:
            raise fm.BudgetError(f"budget exhausted at candidate {u}")
        if verdict:
            return u
    return None


def pair_from_err(inst: ErrInstance, c: int | None = None) -> PairInstance:
    """The induced Pair instance: A/B are the table's zero/one sets and C is
    the pass-through circuit carrying the audited advice."""
    k = inst.k
    A = "".join("1" if ch == "0" else "0" for ch in inst.L)
    B = inst.L
    C = passthrough_circuit(k, inst.w)
    return PairInstance(A, B, inst.triple, C, c if c is not None else inst.triple.c)


# ---------------------------------------------------------------------------
# instance envelopes

def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class Envelope:
    task: str
    params: dict[str, str]
    files: tuple[tuple[str, str, str], ...]  # (role, name, sha256)


def envelope_text(task: str, params: dict[str, str],
                  files: list[tuple[str, str, str]]) -> str:
    """files: (role, name, content); contents are hashed, not embedded."""
    lines = [f"envelope {task}"]
    for key in params:
        lines.append(f"param {key} {params[key]}")
    for role, name, content in files:
        lines.append(f"file {role} {name} {sha256_hex(content)}")
    return "\n".join(lines) + "\n"


def parse_envelope(text: str) -> Envelope:
    task = None
    params: dict[str, str] = {}
    files: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if toks[0] == "envelope" and len(toks) == 2:
            task = toks[1]
        elif toks[0] == "param" and len(toks) == 3:
            params[toks[1]] = toks[2]
        elif toks[0] == "file" and len(toks) == 4:
            files.append((toks[1], toks[2], toks[3]))
        else:
            raise TaskError(f"envelope line {lineno}: unrecognized {line!r}")
    if task is None:
        raise TaskError("missing envelope header")
    return Envelope(task, params, tuple(files))
