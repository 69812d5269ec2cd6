"""Boolean expression grammar: parsing, evaluation, printing and minimization.

Grammar, loosest binding first::

    iff     := implies ("<->" implies)*
    implies := or ("->" implies)?          # right associative
    or      := xor ("|" xor)*
    xor     := and ("^" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | atom
    atom    := NAME | "0" | "1" | "(" iff ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

__all__ = [
    "ExpressionError",
    "Const",
    "Var",
    "Not",
    "BinOp",
    "parse_expression",
    "variables",
    "evaluate",
    "expression_table",
    "to_text",
    "substitute",
    "minimize_table",
    "render_expression",
]

MAX_MINIMIZED_ARITY = 10


class ExpressionError(ValueError):
    """Syntax error in a rule expression; ``col`` is 1-based."""

    def __init__(self, message: str, col: int, line: int | None = None):
        self.message = message
        self.col = col
        self.line = line
        where = f"line {line}, col {col}" if line is not None else f"col {col}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Not, BinOp]

_TOKEN = re.compile(r"\s*(?:(<->)|(->)|([A-Za-z_][A-Za-z0-9_]*)|([01])|([!&|^()]))")

_TAIL = re.compile(r"\s*\Z")

# binding strength; higher binds tighter
_PREC = {"<->": 1, "->": 2, "|": 3, "^": 4, "&": 5}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if _TAIL.match(text, pos):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ExpressionError(f"unexpected character {text[col - 1]!r}", col)
        col = m.start(m.lastindex) + 1
        kind = {1: "op", 2: "op", 3: "name", 4: "const", 5: "op"}[m.lastindex]
        tokens.append((kind, m.group(m.lastindex), col))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


def _balanced(op: str, items: list) -> Expr:
    # every chained operator is associative, so a balanced tree keeps long
    # rendered formulas shallow
    if len(items) == 1:
        return items[0]
    mid = len(items) // 2
    return BinOp(op, _balanced(op, items[:mid]), _balanced(op, items[mid:]))


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str | None = None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of expression"
            raise ExpressionError(f"expected {value!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise ExpressionError("empty expression", self.peek()[2])
        node = self.iff()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def iff(self) -> Expr:
        items = [self.implies()]
        while self.peek()[1] == "<->":
            self.take()
            items.append(self.implies())
        return _balanced("<->", items)

    def implies(self) -> Expr:
        node = self.binary("|")
        if self.peek()[1] == "->":
            self.take()
            node = BinOp("->", node, self.implies())
        return node

    def binary(self, op: str) -> Expr:
        sub = {"|": "^", "^": "&"}.get(op)
        child = (lambda: self.binary(sub)) if sub else self.unary
        items = [child()]
        while self.peek()[1] == op:
            self.take()
            items.append(child())
        return _balanced(op, items)

    def unary(self) -> Expr:
        kind, value, col = self.peek()
        if value == "!":
            self.take()
            return Not(self.unary())
        if kind == "name":
            self.take()
            return Var(value)
        if kind == "const":
            self.take()
            return Const(int(value))
        if value == "(":
            self.take()
            node = self.iff()
            self.take(")")
            return node
        raise ExpressionError(f"unexpected {value or 'end of expression'!r}", col)


def parse_expression(text: str) -> Expr:
    return _Parser(text).parse()


def variables(expr: Expr) -> list[str]:
    """Variable names in order of first appearance."""
    seen: dict[str, None] = {}

    def walk(e):
        if isinstance(e, Var):
            seen.setdefault(e.name)
        elif isinstance(e, Not):
            walk(e.arg)
        elif isinstance(e, BinOp):
            walk(e.left)
            walk(e.right)

    walk(expr)
    return list(seen)


def evaluate(expr: Expr, env: Mapping[str, np.ndarray]) -> np.ndarray:
    """Vectorized evaluation; ``env`` maps names to 0/1 arrays of a common shape."""
    if isinstance(expr, Var):
        return np.asarray(env[expr.name], dtype=np.uint8)
    if isinstance(expr, Const):
        shape = np.shape(next(iter(env.values()))) if env else ()
        return np.full(shape, expr.value, dtype=np.uint8)
    if isinstance(expr, Not):
        return 1 - evaluate(expr.arg, env)
    a = evaluate(expr.left, env)
    b = evaluate(expr.right, env)
    if expr.op == "&":
        return a & b
    if expr.op == "|":
        return a | b
    if expr.op == "^":
        return a ^ b
    if expr.op == "->":
        return (1 - a) | b
    return 1 - (a ^ b)


def _canonical_inputs(k: int) -> np.ndarray:
    """``k x 2^k`` array; column j holds the argument values of canonical column j."""
    j = np.arange(1 << k)
    shifts = np.arange(k - 1, -1, -1)[:, None]
    return (1 - ((j[None, :] >> shifts) & 1)).astype(np.uint8)


def expression_table(expr: Expr, names: Sequence[str]) -> np.ndarray:
    """Truth table of ``expr`` over ``names`` (canonical column order)."""
    inputs = _canonical_inputs(len(names))
    env = {name: inputs[m] for m, name in enumerate(names)}
    missing = set(variables(expr)) - set(env)
    if missing:
        raise KeyError(f"unbound variables: {sorted(missing)}")
    if not names:
        env = {"__dummy": np.zeros(1, dtype=np.uint8)}
    return evaluate(expr, env).astype(np.uint8)


def substitute(expr: Expr, mapping: Mapping[str, Expr]) -> Expr:
    if isinstance(expr, Var):
        return mapping.get(expr.name, expr)
    if isinstance(expr, Not):
        return Not(substitute(expr.arg, mapping))
    if isinstance(expr, BinOp):
        return BinOp(expr.op, substitute(expr.left, mapping), substitute(expr.right, mapping))
    return expr


def to_text(expr: Expr) -> str:
    """Print with the fewest parentheses the grammar allows."""

    def fmt(e, parent: int, right: bool) -> str:
        if isinstance(e, Const):
            return str(e.value)
        if isinstance(e, Var):
            return e.name
        if isinstance(e, Not):
            if isinstance(e.arg, Not):
                return fmt(e.arg.arg, parent, right)
            return "!" + fmt(e.arg, 6, False)
        prec = _PREC[e.op]
        # '->' associates to the right; the others are associative
        if e.op == "->":
            s = f"{fmt(e.left, prec + 1, False)} -> {fmt(e.right, prec, True)}"
        else:
            s = f"{fmt(e.left, prec, False)} {e.op} {fmt(e.right, prec, True)}"
        return f"({s})" if prec < parent else s

    return fmt(expr, 0, False)


def _prime_implicants(ones: list[int], k: int) -> list[tuple[int, int]]:
    """Quine-McCluskey merging.  Terms are (value, care_mask) over natural bits."""
    full = (1 << k) - 1
    current = {(m, full) for m in ones}
    primes: set[tuple[int, int]] = set()
    while current:
        merged = set()
        used = set()
        by_mask: dict[int, list[tuple[int, int]]] = {}
        for t in current:
            by_mask.setdefault(t[1], []).append(t)
        for mask, terms in by_mask.items():
            lookup = set(terms)
            for value, _ in terms:
                bit = mask
                while bit:
                    low = bit & -bit
                    bit ^= low
                    if not value & low:
                        other = (value | low, mask)
                        if other in lookup:
                            merged.add((value, mask & ~low))
                            used.add((value, mask))
                            used.add(other)
        primes |= current - used
        current = merged
    return sorted(primes, key=lambda t: (-bin(t[1]).count("1"), t))


def minimize_table(table: Sequence[int]) -> list[tuple[int, int]]:
    """Two-level cover of the ones of ``table``: essential primes, then greedy."""
    t = np.asarray(table, dtype=np.uint8)
    k = int(t.size).bit_length() - 1
    # canonical column j has natural bits (all-ones means all true) full ^ j
    full = (1 << k) - 1
    ones = np.array(sorted(full ^ int(j) for j in np.flatnonzero(t)), dtype=np.int64)
    primes = _prime_implicants(ones.tolist(), k)
    value = np.array([p[0] for p in primes], dtype=np.int64)
    mask = np.array([p[1] for p in primes], dtype=np.int64)
    cover = (ones[None, :] & mask[:, None]) == value[:, None]
    # essential primes: the only cover of some minterm
    single = cover.sum(axis=0) == 1
    picked = sorted(set(np.argmax(cover[:, single], axis=0).tolist()))
    uncovered = ~cover[picked].any(axis=0) if picked else np.ones(ones.size, dtype=bool)
    width = np.array([bin(int(m)).count("1") for m in mask])
    while uncovered.any():
        gain = cover[:, uncovered].sum(axis=1)
        # most new minterms, then fewest literals, then earliest prime
        best = int(np.lexsort((np.arange(len(primes)), width, -gain))[0])
        picked.append(best)
        uncovered &= ~cover[best]
    return [primes[i] for i in picked]


def _term_text(term: tuple[int, int], names: Sequence[str], parens: bool) -> str:
    value, mask = term
    k = len(names)
    lits = []
    for m, name in enumerate(names):
        bit = 1 << (k - 1 - m)
        if mask & bit:
            lits.append(name if value & bit else "!" + name)
    if not lits:
        return "1"
    s = " & ".join(lits)
    return f"({s})" if parens and len(lits) > 1 else s


def render_expression(table: Sequence[int], names: Sequence[str]) -> str:
    """A rule-grammar formula with the given truth table over ``names``.

    Arities up to 10 get a Quine-McCluskey cover; beyond that a plain
    minterm (or negated maxterm) expansion is emitted.
    """
    t = np.asarray(table, dtype=np.uint8).ravel()
    k = len(names)
    if t.size != 1 << k:
        raise ValueError(f"table of length {t.size} does not match {k} names")
    if not t.any():
        return "0"
    if t.all():
        return "1"
    if k <= MAX_MINIMIZED_ARITY:
        # literals in argument order reads better than prime-implicant order
        terms = sorted(minimize_table(t), key=lambda p: [
            m for m in range(k) if p[1] >> (k - 1 - m) & 1])
        return " | ".join(_term_text(p, names, len(terms) > 1) for p in terms)
    full = (1 << k) - 1
    negate = int(t.sum()) * 2 > t.size
    picks = np.flatnonzero(t == (0 if negate else 1))
    body = " | ".join(_term_text((full ^ int(j), full), names, True) for j in picks)
    return f"!({body})" if negate else body
