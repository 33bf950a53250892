"""Formula language: AST, parser and printer.

The surface syntax is plain ASCII.  Identifiers match
``[A-Za-z_][A-Za-z0-9_-]*`` and ``#`` starts a line comment.  Operator
precedence, tightest first::

    !   unary (also all prefix modalities)
    &
    |
    ->  (right associative)
    <-> (right associative)

Modalities:

* temporal: ``X f`` (= ``AX f``), ``<> f`` (= ``AF f``), ``EX/AF/EF/AG/EG f``,
  ``A[f U g]``, ``E[f U g]``
* agency:   ``C[h] f``, ``JC[{a,b}] f``, ``G[h] f``, ``H[h] f``, ``E[h] f``,
  ``IC[h]`` where a holder ``h`` is ``a``, ``{a,b}``, ``a:r`` or
  ``{a,b}:{r,q}``
* initiative: ``I[r] f`` and ``I[{r,q}] f``
* predicates: ``member(a,O)``, ``role(r,O)``, ``play(a,r,O)``,
  ``dep(O,r,q)`` with either role argument optionally a ``{...}`` group,
  ``know(O, lits)``, ``incharge(O,r,conj)``, ``desire(O,conj)``

``incharge`` and ``desire`` bodies admit only atoms and ``&``; ``know``
bodies admit literals and ``&``.  Only the CTL fragment is accepted: a
path quantifier always wraps exactly one temporal operator, so a bare
``U`` outside ``A[...]``/``E[...]`` is a syntax error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class FormulaError(Exception):
    """Parse or well-formedness failure, with source position."""

    def __init__(self, message, pos=None, line=None, col=None):
        self.message = message
        self.pos = pos
        self.line = line
        self.col = col
        where = "" if line is None else f" at line {line}, column {col}"
        super().__init__(message + where)


# ---------------------------------------------------------------------------
# AST


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class AX(Formula):
    sub: Formula


@dataclass(frozen=True)
class EX(Formula):
    sub: Formula


@dataclass(frozen=True)
class AF(Formula):
    sub: Formula


@dataclass(frozen=True)
class EF(Formula):
    sub: Formula


@dataclass(frozen=True)
class AG(Formula):
    sub: Formula


@dataclass(frozen=True)
class EG(Formula):
    sub: Formula


@dataclass(frozen=True)
class AU(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class EU(Formula):
    left: Formula
    right: Formula


# Holders name who acts: one agent, a group, or (agent, role) shapes.


class Holder:
    __slots__ = ()


@dataclass(frozen=True)
class SingleAgent(Holder):
    agent: str


@dataclass(frozen=True)
class AgentGroup(Holder):
    agents: frozenset

    def __post_init__(self):
        if not self.agents:
            raise FormulaError("agent group must be non-empty")


@dataclass(frozen=True)
class ReaSingle(Holder):
    agent: str
    role: str


@dataclass(frozen=True)
class ReaGroup(Holder):
    agents: frozenset
    roles: frozenset

    def __post_init__(self):
        if not self.agents or not self.roles:
            raise FormulaError("role-enacting group must be non-empty")


@dataclass(frozen=True)
class Cap(Formula):
    holder: Holder
    sub: Formula


@dataclass(frozen=True)
class JointCap(Formula):
    holder: Holder
    sub: Formula

    def __post_init__(self):
        if not isinstance(self.holder, AgentGroup):
            raise FormulaError("JC is defined for agent groups only")


@dataclass(frozen=True)
class Ability(Formula):
    holder: Holder
    sub: Formula


@dataclass(frozen=True)
class Attempt(Formula):
    holder: Holder
    sub: Formula


@dataclass(frozen=True)
class Stit(Formula):
    holder: Holder
    sub: Formula


@dataclass(frozen=True)
class InControl(Formula):
    holder: Holder


@dataclass(frozen=True)
class Initiative(Formula):
    roles: frozenset
    sub: Formula

    def __post_init__(self):
        if not self.roles:
            raise FormulaError("initiative role group must be non-empty")


@dataclass(frozen=True)
class Member(Formula):
    agent: str
    org: str


@dataclass(frozen=True)
class RoleOf(Formula):
    role: str
    org: str


@dataclass(frozen=True)
class Play(Formula):
    agent: str
    role: str
    org: str


@dataclass(frozen=True)
class Dep(Formula):
    org: str
    low: frozenset
    high: frozenset

    def __post_init__(self):
        if not self.low or not self.high:
            raise FormulaError("dep role groups must be non-empty")


@dataclass(frozen=True)
class Know(Formula):
    org: str
    body: Formula

    def __post_init__(self):
        if not is_literal_conjunction(self.body):
            raise FormulaError("know admits only literals joined by &")


@dataclass(frozen=True)
class InCharge(Formula):
    org: str
    role: str
    body: Formula

    def __post_init__(self):
        if not is_positive_conjunction(self.body):
            raise FormulaError("incharge admits no negations, only atoms and &")


@dataclass(frozen=True)
class Desire(Formula):
    org: str
    body: Formula

    def __post_init__(self):
        if not is_positive_conjunction(self.body):
            raise FormulaError("desire admits no negations, only atoms and &")


def is_positive_conjunction(f):
    if isinstance(f, Atom):
        return True
    if isinstance(f, And):
        return is_positive_conjunction(f.left) and is_positive_conjunction(f.right)
    return False


def is_literal_conjunction(f):
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not):
        return isinstance(f.sub, Atom)
    if isinstance(f, And):
        return is_literal_conjunction(f.left) and is_literal_conjunction(f.right)
    return False


def conjunct_atoms(f):
    """Atom names of a positive conjunction, left to right."""
    if isinstance(f, Atom):
        return [f.name]
    if isinstance(f, And):
        return conjunct_atoms(f.left) + conjunct_atoms(f.right)
    raise ValueError(f"not a positive conjunction: {f!r}")


def conjunct_literals(f):
    """(name, positive) pairs of a literal conjunction."""
    if isinstance(f, Atom):
        return [(f.name, True)]
    if isinstance(f, Not):
        return [(f.sub.name, False)]
    if isinstance(f, And):
        return conjunct_literals(f.left) + conjunct_literals(f.right)
    raise ValueError(f"not a literal conjunction: {f!r}")


def conjoin(parts):
    """Left-associated conjunction of formulas; [] is not allowed."""
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iff><->)
  | (?P<implies>->)
  | (?P<diamond><>)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_-]*)
  | (?P<punct>[!&|(){}\[\],:])
    """,
    re.VERBOSE,
)

_KEYWORD_PREFIX = {"C", "JC", "G", "H", "E", "IC", "I", "A"}
_UNARY_TEMPORAL = {"X": AX, "AX": AX, "EX": EX, "AF": AF, "EF": EF, "AG": AG, "EG": EG}


@dataclass
class _Tok:
    kind: str  # 'ident', 'op', 'eof'
    text: str
    pos: int
    line: int
    col: int


def _tokenize(text):
    toks = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaError(
                f"unexpected character {text[pos]!r}",
                pos, line, pos - line_start + 1,
            )
        kind = m.lastgroup
        tok_text = m.group()
        if kind not in ("ws", "comment"):
            k = "ident" if kind == "ident" else "op"
            toks.append(_Tok(k, tok_text, pos, line, pos - line_start + 1))
        newlines = tok_text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok_text.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", pos, line, pos - line_start + 1))
    return toks


# ---------------------------------------------------------------------------
# Parser

_PREDICATES = {"member", "role", "play", "dep", "know", "incharge", "desire"}


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise FormulaError(message, tok.pos, tok.line, tok.col)

    def expect(self, text):
        t = self.peek()
        if t.text != text or t.kind == "eof":
            self.error(f"expected {text!r}, found {t.text!r}" if t.text else f"expected {text!r}, found end of input")
        return self.next()

    def at(self, text):
        return self.peek().text == text and self.peek().kind != "eof"

    # grammar entry

    def parse(self):
        f = self.iff()
        t = self.peek()
        if t.kind != "eof":
            if t.text == "U":
                self.error("'U' is only allowed inside A[...] or E[...]; not a CTL state formula", t)
            self.error(f"unexpected trailing input {t.text!r}", t)
        return f

    def iff(self):
        left = self.implies()
        if self.at("<->"):
            self.next()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.or_()
        if self.at("->"):
            self.next()
            return Implies(left, self.implies())
        return left

    def or_(self):
        left = self.and_()
        while self.at("|"):
            self.next()
            left = Or(left, self.and_())
        return left

    def and_(self):
        left = self.unary()
        while self.at("&"):
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self):
        t = self.peek()
        if t.text == "!":
            self.next()
            return Not(self.unary())
        if t.text == "<>":
            self.next()
            return AF(self.unary())
        if t.kind == "ident":
            if t.text in _UNARY_TEMPORAL and self.toks[self.i + 1].text != "[":
                self.next()
                return _UNARY_TEMPORAL[t.text](self.unary())
            if t.text in _KEYWORD_PREFIX and self.toks[self.i + 1].text == "[":
                return self.bracket_operator()
        return self.primary()

    def bracket_operator(self):
        op = self.next()
        self.expect("[")
        if op.text == "A":
            left = self.iff()
            self.expect("U")
            right = self.iff()
            self.expect("]")
            return AU(left, right)
        if op.text == "E":
            # Either stit E[holder] body or until E[f U g].
            save = self.i
            holder = self.try_holder()
            if holder is not None and self.at("]"):
                self.next()
                return Stit(holder, self.unary())
            self.i = save
            left = self.iff()
            self.expect("U")
            right = self.iff()
            self.expect("]")
            return EU(left, right)
        if op.text == "I":
            roles = self.role_set()
            self.expect("]")
            return Initiative(roles, self.unary())
        holder = self.try_holder()
        if holder is None:
            self.error(f"expected a holder inside {op.text}[...]")
        self.expect("]")
        if op.text == "C":
            return Cap(holder, self.unary())
        if op.text == "JC":
            if not isinstance(holder, AgentGroup):
                self.error("JC is defined for agent groups only", op)
            return JointCap(holder, self.unary())
        if op.text == "G":
            return Ability(holder, self.unary())
        if op.text == "H":
            return Attempt(holder, self.unary())
        if op.text == "IC":
            return InControl(holder)
        raise AssertionError(op.text)

    def try_holder(self):
        """Parse a holder if one starts here, else return None (no consume)."""
        save = self.i
        t = self.peek()
        if t.text == "{":
            agents = self.id_set()
            if self.at(":"):
                self.next()
                if self.at("{"):
                    roles = self.id_set()
                else:
                    if self.peek().kind != "ident":
                        self.i = save
                        return None
                    roles = frozenset([self.next().text])
                return ReaGroup(agents, roles)
            return AgentGroup(agents)
        if t.kind == "ident":
            agent = self.next().text
            if self.at(":"):
                self.next()
                if self.peek().kind != "ident":
                    self.i = save
                    return None
                return ReaSingle(agent, self.next().text)
            return SingleAgent(agent)
        self.i = save
        return None

    def id_set(self):
        self.expect("{")
        names = [self.ident("identifier")]
        while self.at(","):
            self.next()
            names.append(self.ident("identifier"))
        self.expect("}")
        return frozenset(names)

    def role_set(self):
        if self.at("{"):
            return self.id_set()
        return frozenset([self.ident("role name")])

    def ident(self, what):
        t = self.peek()
        if t.kind != "ident":
            self.error(f"expected {what}, found {t.text!r}" if t.text else f"expected {what}, found end of input")
        return self.next().text

    def primary(self):
        t = self.peek()
        if t.text == "(":
            self.next()
            f = self.iff()
            if self.at("U"):
                self.error("'U' is only allowed inside A[...] or E[...]; not a CTL state formula")
            self.expect(")")
            return f
        if t.kind != "ident":
            self.error(f"expected a formula, found {t.text!r}" if t.text else "expected a formula, found end of input")
        if t.text == "true":
            self.next()
            return TrueF()
        if t.text == "false":
            self.next()
            return FalseF()
        if t.text in _PREDICATES and self.toks[self.i + 1].text == "(":
            return self.predicate()
        return Atom(self.next().text)

    def predicate(self):
        name = self.next().text
        open_tok = self.expect("(")
        if name == "member":
            a = self.ident("agent name")
            self.expect(",")
            org = self.ident("organization name")
            self.expect(")")
            return Member(a, org)
        if name == "role":
            r = self.ident("role name")
            self.expect(",")
            org = self.ident("organization name")
            self.expect(")")
            return RoleOf(r, org)
        if name == "play":
            a = self.ident("agent name")
            self.expect(",")
            r = self.ident("role name")
            self.expect(",")
            org = self.ident("organization name")
            self.expect(")")
            return Play(a, r, org)
        if name == "dep":
            org = self.ident("organization name")
            self.expect(",")
            low = self.role_set()
            self.expect(",")
            high = self.role_set()
            self.expect(")")
            return Dep(org, low, high)
        org = self.ident("organization name")
        self.expect(",")
        if name == "incharge":
            r = self.ident("role name")
            self.expect(",")
            body = self.iff()
            self.expect(")")
            if not is_positive_conjunction(body):
                self.error("incharge admits no negations, only atoms and &", open_tok)
            return InCharge(org, r, body)
        body = self.iff()
        self.expect(")")
        if name == "know":
            if not is_literal_conjunction(body):
                self.error("know admits only literals joined by &", open_tok)
            return Know(org, body)
        if not is_positive_conjunction(body):
            self.error("desire admits no negations, only atoms and &", open_tok)
        return Desire(org, body)


def parse(text):
    """Parse formula text into an AST; raises FormulaError on bad input."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printer

_LEVEL_IFF = 1
_LEVEL_IMPLIES = 2
_LEVEL_OR = 3
_LEVEL_AND = 4
_LEVEL_UNARY = 5
_LEVEL_ATOM = 6


def _holder_text(h):
    if isinstance(h, SingleAgent):
        return h.agent
    if isinstance(h, AgentGroup):
        return "{" + ",".join(sorted(h.agents)) + "}"
    if isinstance(h, ReaSingle):
        return f"{h.agent}:{h.role}"
    return (
        "{" + ",".join(sorted(h.agents)) + "}:{" + ",".join(sorted(h.roles)) + "}"
    )


def _group_text(names):
    names = sorted(names)
    if len(names) == 1:
        return names[0]
    return "{" + ",".join(names) + "}"


def fprint(f):
    """Render a formula; parse(fprint(f)) is structurally f again."""
    text, _ = _print(f)
    return text


def _wrap(child, minimum):
    text, level = _print(child)
    if level < minimum:
        return "(" + text + ")"
    return text


def _print(f):
    if isinstance(f, TrueF):
        return "true", _LEVEL_ATOM
    if isinstance(f, FalseF):
        return "false", _LEVEL_ATOM
    if isinstance(f, Atom):
        return f.name, _LEVEL_ATOM
    if isinstance(f, Not):
        return "!" + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, And):
        left = _wrap(f.left, _LEVEL_AND)
        right_text, right_level = _print(f.right)
        if right_level < _LEVEL_AND or isinstance(f.right, And):
            right_text = "(" + right_text + ")"
        return f"{left} & {right_text}", _LEVEL_AND
    if isinstance(f, Or):
        left = _wrap(f.left, _LEVEL_OR)
        right_text, right_level = _print(f.right)
        if right_level < _LEVEL_OR or isinstance(f.right, Or):
            right_text = "(" + right_text + ")"
        return f"{left} | {right_text}", _LEVEL_OR
    if isinstance(f, Implies):
        left_text, left_level = _print(f.left)
        if left_level <= _LEVEL_IMPLIES:
            left_text = "(" + left_text + ")"
        return f"{left_text} -> {_wrap(f.right, _LEVEL_IMPLIES)}", _LEVEL_IMPLIES
    if isinstance(f, Iff):
        left_text, left_level = _print(f.left)
        if left_level <= _LEVEL_IFF:
            left_text = "(" + left_text + ")"
        return f"{left_text} <-> {_wrap(f.right, _LEVEL_IFF)}", _LEVEL_IFF
    if isinstance(f, AX):
        return "X " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, AF):
        return "<> " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    for cls, name in ((EX, "EX"), (EF, "EF"), (AG, "AG"), (EG, "EG")):
        if isinstance(f, cls):
            return f"{name} " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, AU):
        return (
            f"A[{_wrap(f.left, _LEVEL_UNARY)} U {_wrap(f.right, _LEVEL_UNARY)}]",
            _LEVEL_UNARY,
        )
    if isinstance(f, EU):
        return (
            f"E[{_wrap(f.left, _LEVEL_UNARY)} U {_wrap(f.right, _LEVEL_UNARY)}]",
            _LEVEL_UNARY,
        )
    if isinstance(f, Cap):
        return f"C[{_holder_text(f.holder)}] " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, JointCap):
        return f"JC[{_holder_text(f.holder)}] " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, Ability):
        return f"G[{_holder_text(f.holder)}] " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, Attempt):
        return f"H[{_holder_text(f.holder)}] " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, Stit):
        return f"E[{_holder_text(f.holder)}] " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, InControl):
        return f"IC[{_holder_text(f.holder)}]", _LEVEL_UNARY
    if isinstance(f, Initiative):
        return f"I[{_group_text(f.roles)}] " + _wrap(f.sub, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(f, Member):
        return f"member({f.agent}, {f.org})", _LEVEL_ATOM
    if isinstance(f, RoleOf):
        return f"role({f.role}, {f.org})", _LEVEL_ATOM
    if isinstance(f, Play):
        return f"play({f.agent}, {f.role}, {f.org})", _LEVEL_ATOM
    if isinstance(f, Dep):
        return (
            f"dep({f.org}, {_group_text(f.low)}, {_group_text(f.high)})",
            _LEVEL_ATOM,
        )
    if isinstance(f, Know):
        return f"know({f.org}, {fprint(f.body)})", _LEVEL_ATOM
    if isinstance(f, InCharge):
        return f"incharge({f.org}, {f.role}, {fprint(f.body)})", _LEVEL_ATOM
    if isinstance(f, Desire):
        return f"desire({f.org}, {fprint(f.body)})", _LEVEL_ATOM
    raise TypeError(f"not a formula: {f!r}")
