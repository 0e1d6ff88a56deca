"""Propositional formulas over {NOT, OR, AND, 0, 1} with indexed variables.

Formulas are immutable nested tuples:

    ("const", 0|1)
    ("var", i)          i >= 1
    ("not", f)
    ("and", f, g)       strictly binary
    ("or", f, g)        strictly binary

Grammar for the text form: variables ``xN`` (N >= 1), constants ``0``/``1``,
``~`` (not), ``&`` (and), ``|`` (or), parentheses.  ``~`` binds tightest,
then ``&``, then ``|``; binary connectives associate to the right, matching
the right-nested disjunction convention used by the proof checkers.

The fixed-width binary code (encode_k/decode_k) is a Polish prefix token
stream, 4 bits per token, variable tokens followed by a fixed-width index
field of ceil(log2 k) bits holding index-1, terminated by an END token and
zero-padded to exactly k bits.  Token table:

    END   0000        AND   0010        VAR   0100
    NOT   0001        OR    0011        CONST0 1110   CONST1 1111

All other 4-bit patterns are rejected by the decoder.
"""

from __future__ import annotations

from .cnf import ClauseSet, dpll_solve

Formula = tuple

CONST0: Formula = ("const", 0)
CONST1: Formula = ("const", 1)


def Var(i: int) -> Formula:
    if i < 1:
        raise ValueError(f"variable index must be >= 1, got {i}")
    return ("var", i)


def Not(f: Formula) -> Formula:
    return ("not", f)


def And(f: Formula, g: Formula) -> Formula:
    return ("and", f, g)


def Or(f: Formula, g: Formula) -> Formula:
    return ("or", f, g)


def Implies(f: Formula, g: Formula) -> Formula:
    """The defined connective f -> g, i.e. ~f | g."""
    return ("or", ("not", f), g)


def big_or(parts: list[Formula]) -> Formula:
    """Right-nested disjunction of a nonempty list."""
    if not parts:
        raise ValueError("big_or of empty list")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = ("or", p, out)
    return out


def big_and(parts: list[Formula]) -> Formula:
    """Right-nested conjunction; empty list yields constant 1."""
    if not parts:
        return CONST1
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = ("and", p, out)
    return out


def node_count(f: Formula) -> int:
    tag = f[0]
    if tag in ("const", "var"):
        return 1
    if tag == "not":
        return 1 + node_count(f[1])
    return 1 + node_count(f[1]) + node_count(f[2])


def fvars(f: Formula) -> set[int]:
    out: set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        tag = g[0]
        if tag == "var":
            out.add(g[1])
        elif tag == "not":
            stack.append(g[1])
        elif tag in ("and", "or"):
            stack.append(g[1])
            stack.append(g[2])
    return out


# ---------------------------------------------------------------------------
# parsing / printing

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def parse_or(self) -> Formula:
        left = self.parse_and()
        if self.peek() == "|":
            self.pos += 1
            return ("or", left, self.parse_or())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_unary()
        if self.peek() == "&":
            self.pos += 1
            return ("and", left, self.parse_and())
        return left

    def parse_unary(self) -> Formula:
        ch = self.peek()
        if ch == "~":
            self.pos += 1
            return ("not", self.parse_unary())
        if ch == "(":
            self.pos += 1
            inner = self.parse_or()
            self.expect(")")
            return inner
        if ch == "0":
            self.pos += 1
            return CONST0
        if ch == "1":
            self.pos += 1
            return CONST1
        if ch == "x":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                raise ParseError("expected variable index after 'x'", self.pos)
            idx = int(self.text[start : self.pos])
            if idx < 1:
                raise ParseError("variable index must be >= 1", start)
            return ("var", idx)
        raise ParseError(f"unexpected character {ch!r}" if ch else "unexpected end of input", self.pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.parse_or()
    p.skip_ws()
    if p.pos != len(text):
        raise ParseError("trailing input", p.pos)
    return f


_PREC = {"or": 1, "and": 2, "not": 3, "var": 4, "const": 4}


def to_text(f: Formula) -> str:
    """Print in the grammar; reparsing yields an equal tree."""
    tag = f[0]
    if tag == "const":
        return str(f[1])
    if tag == "var":
        return f"x{f[1]}"
    if tag == "not":
        inner = to_text(f[1])
        if _PREC[f[1][0]] < 3:
            inner = f"({inner})"
        return "~" + inner
    op = "&" if tag == "and" else "|"
    p = _PREC[tag]
    left = to_text(f[1])
    # binary connectives associate right: a left child of equal precedence
    # needs parentheses, a right child does not
    if _PREC[f[1][0]] <= p:
        left = f"({left})"
    right = to_text(f[2])
    if _PREC[f[2][0]] < p:
        right = f"({right})"
    return f"{left} {op} {right}"


# ---------------------------------------------------------------------------
# evaluation / substitution / matching

class EvalError(KeyError):
    pass


def evaluate(f: Formula, a: dict[int, int]) -> int:
    tag = f[0]
    if tag == "const":
        return f[1]
    if tag == "var":
        try:
            return a[f[1]]
        except KeyError:
            raise EvalError(f"variable x{f[1]} unmapped") from None
    if tag == "not":
        return 1 - evaluate(f[1], a)
    if tag == "and":
        return evaluate(f[1], a) & evaluate(f[2], a)
    return evaluate(f[1], a) | evaluate(f[2], a)


def substitute(f: Formula, sigma: dict[int, Formula]) -> Formula:
    """Simultaneous substitution of formulas for variables; no simplification."""
    tag = f[0]
    if tag == "const":
        return f
    if tag == "var":
        return sigma.get(f[1], f)
    if tag == "not":
        return ("not", substitute(f[1], sigma))
    return (tag, substitute(f[1], sigma), substitute(f[2], sigma))


def match_instance(candidate: Formula, pattern: Formula) -> dict[int, Formula] | None:
    """Find sigma with substitute(pattern, sigma) == candidate, targets
    restricted to variables and constants.  Unique when it exists."""
    sigma: dict[int, Formula] = {}

    def go(cand: Formula, pat: Formula) -> bool:
        tag = pat[0]
        if tag == "var":
            if cand[0] not in ("var", "const"):
                return False
            prev = sigma.get(pat[1])
            if prev is None:
                sigma[pat[1]] = cand
                return True
            return prev == cand
        if tag == "const":
            return cand == pat
        if cand[0] != tag:
            return False
        if tag == "not":
            return go(cand[1], pat[1])
        return go(cand[1], pat[1]) and go(cand[2], pat[2])

    return sigma if go(candidate, pattern) else None


def match_schema(candidate: Formula, pattern: Formula) -> dict[int, Formula] | None:
    """Like match_instance but pattern variables may map to arbitrary formulas
    (used for axiom-scheme checking)."""
    sigma: dict[int, Formula] = {}

    def go(cand: Formula, pat: Formula) -> bool:
        tag = pat[0]
        if tag == "var":
            prev = sigma.get(pat[1])
            if prev is None:
                sigma[pat[1]] = cand
                return True
            return prev == cand
        if tag == "const":
            return cand == pat
        if cand[0] != tag:
            return False
        if tag == "not":
            return go(cand[1], pat[1])
        return go(cand[1], pat[1]) and go(cand[2], pat[2])

    return sigma if go(candidate, pattern) else None


# ---------------------------------------------------------------------------
# fixed-width binary code

TOK_END = "0000"
TOK_NOT = "0001"
TOK_AND = "0010"
TOK_OR = "0011"
TOK_VAR = "0100"
TOK_CONST0 = "1110"
TOK_CONST1 = "1111"


def index_width(k: int) -> int:
    """Width of the variable-index field in a k-bit code."""
    return max(1, (k - 1).bit_length())


def _emit(f: Formula, w: int, out: list[str]) -> bool:
    tag = f[0]
    if tag == "const":
        out.append(TOK_CONST1 if f[1] else TOK_CONST0)
        return True
    if tag == "var":
        if f[1] > (1 << w):
            return False
        out.append(TOK_VAR)
        out.append(format(f[1] - 1, f"0{w}b"))
        return True
    if tag == "not":
        out.append(TOK_NOT)
        return _emit(f[1], w, out)
    out.append(TOK_AND if tag == "and" else TOK_OR)
    return _emit(f[1], w, out) and _emit(f[2], w, out)


def encode_k(f: Formula, k: int) -> str | None:
    """k-bit canonical code of f, or None if it does not fit."""
    if k < 8:
        raise ValueError("code width must be >= 8")
    w = index_width(k)
    parts: list[str] = []
    if not _emit(f, w, parts):
        return None
    parts.append(TOK_END)
    bits = "".join(parts)
    if len(bits) > k:
        return None
    return bits + "0" * (k - len(bits))


def decode_k(s: str) -> Formula | None:
    """Inverse of encode_k on its range; None on ill-formed codes."""
    k = len(s)
    if k < 8 or any(c not in "01" for c in s):
        return None
    w = index_width(k)

    def rd(pos: int) -> tuple[Formula, int] | None:
        tok = s[pos : pos + 4]
        if len(tok) < 4:
            return None
        pos += 4
        if tok == TOK_CONST0:
            return CONST0, pos
        if tok == TOK_CONST1:
            return CONST1, pos
        if tok == TOK_VAR:
            field = s[pos : pos + w]
            if len(field) < w:
                return None
            return ("var", int(field, 2) + 1), pos + w
        if tok == TOK_NOT:
            sub = rd(pos)
            if sub is None:
                return None
            return ("not", sub[0]), sub[1]
        if tok in (TOK_AND, TOK_OR):
            left = rd(pos)
            if left is None:
                return None
            right = rd(left[1])
            if right is None:
                return None
            tag = "and" if tok == TOK_AND else "or"
            return (tag, left[0], right[0]), right[1]
        return None  # END here or an invalid token

    parsed = rd(0)
    if parsed is None:
        return None
    f, pos = parsed
    if s[pos : pos + 4] != TOK_END:
        return None
    pos += 4
    if any(c != "0" for c in s[pos:]):
        return None
    return f


def code_length(f: Formula, w: int) -> int | None:
    """Bit length of the token stream of f (without END/padding) at index width w."""
    parts: list[str] = []
    if not _emit(f, w, parts):
        return None
    return sum(len(p) for p in parts)


def enumerate_fitting(k: int, var_cap: int | None = None) -> list[Formula]:
    """All formulas whose k-bit code exists, with variable indices capped.

    Deterministic order; used to build desk-scale universal evaluators.
    """
    w = index_width(k)
    cap = min(var_cap, 1 << w) if var_cap is not None else (1 << w)
    budget = k - 4  # END token
    memo: dict[int, list[Formula]] = {}

    def gen(b: int) -> list[Formula]:
        if b in memo:
            return memo[b]
        out: list[Formula] = []
        if b >= 4:
            out.append(CONST0)
            out.append(CONST1)
        if b >= 4 + w:
            out.extend(("var", i) for i in range(1, cap + 1))
        if b >= 8:
            out.extend(("not", g) for g in gen(b - 4))
        if b >= 12:
            for tag in ("and", "or"):
                # left subtree consumes exactly lb bits
                for lb in range(4, b - 4 - 3):
                    for left in gen_exact(lb):
                        for right in gen(b - 4 - lb):
                            out.append((tag, left, right))
        memo[b] = out
        return out

    exact_memo: dict[int, list[Formula]] = {}

    def gen_exact(b: int) -> list[Formula]:
        if b in exact_memo:
            return exact_memo[b]
        out = [g for g in gen(b) if code_length(g, w) == b]
        exact_memo[b] = out
        return out

    seen = set()
    result = []
    for g in gen(budget):
        if g not in seen:
            seen.add(g)
            result.append(g)
    return result


# ---------------------------------------------------------------------------
# clause translation and the tautology oracle

def to_clauses(f: Formula) -> tuple[ClauseSet, int]:
    """Tseitin translation; returns (clauses, output literal).

    Original variables keep their indices; auxiliaries come after.  The
    clause set together with the unit [output] is satisfiable exactly when f
    is, and models project to models of f.
    """
    top = max(fvars(f), default=0)
    clauses: list[list[int]] = []
    counter = [top]

    def fresh() -> int:
        counter[0] += 1
        return counter[0]

    def tr(g: Formula) -> int:
        tag = g[0]
        if tag == "var":
            return g[1]
        if tag == "const":
            v = fresh()
            clauses.append([v] if g[1] else [-v])
            return v
        if tag == "not":
            return -tr(g[1])
        a = tr(g[1])
        b = tr(g[2])
        v = fresh()
        if tag == "and":
            clauses.append([-v, a])
            clauses.append([-v, b])
            clauses.append([v, -a, -b])
        else:
            clauses.append([-v, a, b])
            clauses.append([v, -a])
            clauses.append([v, -b])
        return v

    out = tr(f)
    return ClauseSet(clauses, counter[0]), out


class BudgetError(RuntimeError):
    pass


BRUTE_VAR_LIMIT = 24


def _bitblast(f: Formula, masks: dict[int, int], full: int) -> int:
    tag = f[0]
    if tag == "const":
        return full if f[1] else 0
    if tag == "var":
        return masks[f[1]]
    if tag == "not":
        return full ^ _bitblast(f[1], masks, full)
    if tag == "and":
        return _bitblast(f[1], masks, full) & _bitblast(f[2], masks, full)
    return _bitblast(f[1], masks, full) | _bitblast(f[2], masks, full)


def is_tautology(f: Formula, mode: str = "brute") -> bool:
    """Ground-truth tautology oracle.

    brute: bit-parallel truth-table sweep, at most BRUTE_VAR_LIMIT variables.
    dpll:  run the engine on the clause translation of ~f.
    auto:  brute when it fits, dpll otherwise.
    """
    if mode == "auto":
        mode = "brute" if len(fvars(f)) <= BRUTE_VAR_LIMIT else "dpll"
    if mode == "brute":
        vs = sorted(fvars(f))
        n = len(vs)
        if n > BRUTE_VAR_LIMIT:
            raise BudgetError(f"{n} variables exceeds brute-force limit {BRUTE_VAR_LIMIT}")
        total = 1 << n
        full = (1 << total) - 1
        masks = {}
        for pos, v in enumerate(vs):
            # bit j of the mask = value of v in assignment number j
            block = 1 << pos
            period = 2 * block
            ones = (1 << block) - 1
            repeats = total // period
            comb = (1 << (period * repeats)) - 1
            masks[v] = (comb // ((1 << period) - 1)) * (ones << block)
        return _bitblast(f, masks, full) == full
    if mode == "dpll":
        cs, out = to_clauses(("not", f))
        cs.clauses.append([out])
        return dpll_solve(cs) is None
    raise ValueError(f"unknown mode {mode!r}")


def satisfying_assignment(f: Formula) -> dict[int, int] | None:
    """Lex-least satisfying assignment of f's variables via the DPLL engine."""
    cs, out = to_clauses(f)
    cs.clauses.append([out])
    vs = sorted(fvars(f))
    top = vs[-1] if vs else 0
    order = vs + list(range(top + 1, cs.nvars + 1))
    model = dpll_solve(cs, decision_order=order)
    if model is None:
        return None
    return {v: model[v] for v in vs}
