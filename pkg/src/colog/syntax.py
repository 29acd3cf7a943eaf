"""Formula and cirquent syntax.

Formulas are negation normal: ``~`` sits on atoms only, and the parser pushes
any other negation inward while reading (``~(F & G)`` becomes ``~F | ~G``,
``~!c F`` becomes ``?c ~F``, and so on).  The ASCII operator spellings are

    ~    negation (atoms only after normalization)
    &    parallel conjunction          |    parallel disjunction
    ->   implication sugar, F -> G  ==  ~F | G   (right associative)
    !c   countable branching recurrence (prefix-addressed form)
    ?c   its dual corecurrence
    !u   uncountable branching recurrence
    ?u   its dual
    !o   countable branching recurrence, replication-tree form
    ?o   its dual

Prefix operators bind tightest, then ``&``, then ``|``, then ``->``.

A cirquent is a sequence of oformulas plus undergroups and overgroups, each a
nonempty set of 1-based oformula positions.  Groups are position sets rather
than formula sets: two groups with equal contents still count as distinct
because they sit at different places in the group sequence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


# ---------------------------------------------------------------------------
# formula AST


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class NegAtom:
    name: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class CRec:
    """Countable branching recurrence, prefix-addressed (moves ``w.move``)."""

    body: "Formula"


@dataclass(frozen=True)
class CCoRec:
    body: "Formula"


@dataclass(frozen=True)
class URec:
    """Uncountable branching recurrence (moves ``w.move``, all threads score)."""

    body: "Formula"


@dataclass(frozen=True)
class UCoRec:
    body: "Formula"


@dataclass(frozen=True)
class OldCRec:
    """Countable branching recurrence over an explicit replication tree."""

    body: "Formula"


@dataclass(frozen=True)
class OldCCoRec:
    body: "Formula"


Formula = (
    Atom | NegAtom | And | Or | CRec | CCoRec | URec | UCoRec | OldCRec | OldCCoRec
)

_DUALS = {
    CRec: CCoRec,
    CCoRec: CRec,
    URec: UCoRec,
    UCoRec: URec,
    OldCRec: OldCCoRec,
    OldCCoRec: OldCRec,
}


def negate(f: Formula) -> Formula:
    """Negation in normal form; an involution."""
    match f:
        case Atom(name):
            return NegAtom(name)
        case NegAtom(name):
            return Atom(name)
        case And(l, r):
            return Or(negate(l), negate(r))
        case Or(l, r):
            return And(negate(l), negate(r))
        case _:
            return _DUALS[type(f)](negate(f.body))


class SyntaxError_(ValueError):
    """Parse failure, carrying a 1-based line/column position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<atom>[A-Z][A-Za-z0-9_]*)"
    r"|(?P<op>!c|\?c|!u|\?u|!o|\?o|->|[~&|()])"
)

_PREFIX_OPS = {"!c": CRec, "?c": CCoRec, "!u": URec, "?u": UCoRec, "!o": OldCRec, "?o": OldCCoRec}


def _tokenize(text: str):
    line, col, pos = 1, 1, 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SyntaxError_(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        if not m.lastgroup == "ws":
            out.append((m.lastgroup, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    out.append(("end", "", line, col))
    return out


class _FormulaParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        _, _, line, col = self.peek()
        raise SyntaxError_(message, line, col)

    # precedence: prefix > & > | > ->
    def formula(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            right = self.formula()
            return Or(negate(left), right)
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, lexeme, _, _ = self.peek()
        if lexeme == "~":
            self.take()
            return negate(self.unary())
        if lexeme in _PREFIX_OPS:
            self.take()
            return _PREFIX_OPS[lexeme](self.unary())
        if lexeme == "(":
            self.take()
            f = self.formula()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if kind == "atom":
            self.take()
            return Atom(lexeme)
        self.fail(f"expected a formula, found {lexeme!r}" if lexeme else "expected a formula")


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a negation-normal formula."""
    p = _FormulaParser(text)
    f = p.formula()
    if p.peek()[0] != "end":
        p.fail(f"trailing input {p.peek()[1]!r}")
    return f


_PREFIX_NAMES = {CRec: "!c", CCoRec: "?c", URec: "!u", UCoRec: "?u", OldCRec: "!o", OldCCoRec: "?o"}


def serialize_formula(f: Formula) -> str:
    def go(f, parent_prec):
        match f:
            case Atom(name):
                s, prec = name, 4
            case NegAtom(name):
                s, prec = f"~{name}", 3
            case And(l, r):
                # & parses left associative: parenthesize an & right operand
                s, prec = f"{go(l, 2)} & {go(r, 3)}", 2
            case Or(l, r):
                s, prec = f"{go(l, 1)} | {go(r, 2)}", 1
            case _:
                s, prec = f"{_PREFIX_NAMES[type(f)]} {go(f.body, 4)}", 3
        return f"({s})" if prec < parent_prec else s

    return go(f, 0)


def atoms_of(f: Formula) -> frozenset[str]:
    match f:
        case Atom(name) | NegAtom(name):
            return frozenset({name})
        case And(l, r) | Or(l, r):
            return atoms_of(l) | atoms_of(r)
        case _:
            return atoms_of(f.body)


# ---------------------------------------------------------------------------
# cirquents


@dataclass(frozen=True)
class Cirquent:
    """Oformulas with undergroup/overgroup structure (1-based position sets)."""

    oformulas: tuple[Formula, ...]
    undergroups: tuple[frozenset[int], ...]
    overgroups: tuple[frozenset[int], ...]

    def __str__(self) -> str:
        return serialize_cirquent(self)


def make_cirquent(oformulas, undergroups, overgroups) -> Cirquent:
    return Cirquent(
        tuple(oformulas),
        tuple(frozenset(g) for g in undergroups),
        tuple(frozenset(g) for g in overgroups),
    )


def clubsuit(f: Formula) -> Cirquent:
    """The one-oformula cirquent with a single undergroup and overgroup."""
    return make_cirquent((f,), ({1},), ({1},))


def validate_cirquent(c: Cirquent) -> str | None:
    """None if well formed, else the first violation."""
    k = len(c.oformulas)
    if k == 0:
        return "no oformulas"
    if not c.undergroups:
        return "no undergroups"
    if not c.overgroups:
        return "no overgroups"
    for kind, groups in (("undergroup", c.undergroups), ("overgroup", c.overgroups)):
        for i, g in enumerate(groups, start=1):
            if not g:
                return f"empty {kind} {i}"
            bad = [a for a in g if not 1 <= a <= k]
            if bad:
                return f"{kind} {i} refers to missing oformula {min(bad)}"
    for a in range(1, k + 1):
        if not any(a in g for g in c.undergroups):
            return f"oformula {a} is in no undergroup"
        if not any(a in g for g in c.overgroups):
            return f"oformula {a} is in no overgroup"
    return None


def serialize_cirquent(c: Cirquent) -> str:
    lines = ["cirquent"]
    for i, f in enumerate(c.oformulas, start=1):
        lines.append(f"  f {i}: {serialize_formula(f)}")
    for tag, groups in (("u", c.undergroups), ("o", c.overgroups)):
        for i, g in enumerate(groups, start=1):
            lines.append(f"  {tag} {i}: {' '.join(str(a) for a in sorted(g))}")
    lines.append("end")
    return "\n".join(lines)


class FileFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


_CIRQUENT_LINE = re.compile(r"(f|u|o)\s+(\d+)\s*:\s*(.*)")


def _parse_cirquent_lines(lines, start_line=1) -> Cirquent:
    """Parse the body between ``cirquent`` and ``end`` (inclusive markers)."""
    oformulas: list[Formula] = []
    groups: dict[str, list[frozenset[int]]] = {"u": [], "o": []}
    if not lines or lines[0][1].strip() != "cirquent":
        raise FileFormatError("expected 'cirquent'", lines[0][0] if lines else start_line)
    if lines[-1][1].strip() != "end":
        raise FileFormatError("expected 'end'", lines[-1][0])
    for lineno, raw in lines[1:-1]:
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        m = _CIRQUENT_LINE.fullmatch(text)
        if m is None:
            raise FileFormatError(f"bad cirquent line {text!r}", lineno)
        tag, index, rest = m.group(1), int(m.group(2)), m.group(3).strip()
        if tag == "f":
            if index != len(oformulas) + 1:
                raise FileFormatError(f"oformula numbering gap at {index}", lineno)
            try:
                oformulas.append(parse_formula(rest))
            except SyntaxError_ as e:
                raise FileFormatError(f"bad formula: {e}", lineno) from e
        else:
            if index != len(groups[tag]) + 1:
                raise FileFormatError(f"group numbering gap at {tag} {index}", lineno)
            members = rest.split()
            if not all(w.isdigit() for w in members):
                raise FileFormatError(f"bad group members {rest!r}", lineno)
            ids = [int(w) for w in members]
            if len(set(ids)) != len(ids):
                raise FileFormatError(f"duplicate index in {tag} {index}", lineno)
            bad = [a for a in ids if not 1 <= a <= len(oformulas)]
            if bad:
                raise FileFormatError(f"index {bad[0]} out of range in {tag} {index}", lineno)
            groups[tag].append(frozenset(ids))
    if not oformulas:
        raise FileFormatError("missing oformula section", start_line)
    if not groups["u"]:
        raise FileFormatError("missing undergroup section", start_line)
    if not groups["o"]:
        raise FileFormatError("missing overgroup section", start_line)
    return Cirquent(tuple(oformulas), tuple(groups["u"]), tuple(groups["o"]))


def parse_cirquent(text: str) -> Cirquent:
    lines = [
        (i, raw)
        for i, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.strip().startswith("#")
    ]
    if not lines:
        raise FileFormatError("empty cirquent file")
    return _parse_cirquent_lines(lines)


# ---------------------------------------------------------------------------
# proof files
#
# A proof file is a sequence of blocks:
#
#   step <k>
#   rule <name> [key=value ...]
#   cirquent
#     ...
#   end
#
# Rule names and parameters are interpreted by the calculus module; here they
# are carried verbatim as (name, {key: value}) with values kept as strings.


@dataclass(frozen=True)
class RawStep:
    index: int
    rule_name: str
    params: tuple[tuple[str, str], ...]
    cirquent: Cirquent


@dataclass(frozen=True)
class RawProof:
    steps: tuple[RawStep, ...]


def parse_proof_text(text: str) -> RawProof:
    lines = [
        (i, raw)
        for i, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.strip().startswith("#")
    ]
    if not lines:
        raise FileFormatError("no steps")
    steps = []
    i = 0
    while i < len(lines):
        lineno, raw = lines[i]
        m = re.fullmatch(r"step\s+(\d+)", raw.strip())
        if m is None:
            raise FileFormatError(f"expected 'step <k>', found {raw.strip()!r}", lineno)
        index = int(m.group(1))
        if index != len(steps) + 1:
            raise FileFormatError(f"step numbering gap at {index}", lineno)
        i += 1
        if i >= len(lines):
            raise FileFormatError("missing rule line", lineno)
        lineno, raw = lines[i]
        parts = raw.strip().split()
        if not parts or parts[0] != "rule" or len(parts) < 2:
            raise FileFormatError(f"expected 'rule <name> ...', found {raw.strip()!r}", lineno)
        name = parts[1]
        params = []
        for p in parts[2:]:
            key, sep, value = p.partition("=")
            if sep != "=" or not key:
                raise FileFormatError(f"bad rule parameter {p!r}", lineno)
            params.append((key, value))
        i += 1
        body = []
        while i < len(lines) and not re.fullmatch(r"step\s+\d+", lines[i][1].strip()):
            body.append(lines[i])
            i += 1
            if body[-1][1].strip() == "end":
                break
        cirq = _parse_cirquent_lines(body, lineno)
        steps.append(RawStep(index, name, tuple(params), cirq))
    return RawProof(tuple(steps))
