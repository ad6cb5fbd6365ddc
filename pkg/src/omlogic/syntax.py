"""
First-order syntax over a typed signature: terms, wffs, a parser and printer.

Concrete grammar (ASCII)::

    wff   := "forall" var "." wff | "exists" var "." wff
           | wff "|" wff | wff "&" wff | "~" wff
           | conn "(" wff ("," wff)* ")" | pred "(" term ("," term)* ")" | pred
           | "(" wff ")"
    term  := fn "(" term ("," term)* ")" | const | var

``~`` binds tighter than ``&``, which binds tighter than ``|``; both binary
operators associate to the left and quantifier scope extends as far right as
possible.  The infix tokens exist only for signatures whose connective
arities are exactly (2, 2, 1); every connective can be written in prefix
form.  Any identifier that is not declared is a variable.

Patterns (used by the deduction module) may also contain ``$name`` for a wff
metavariable and ``?name`` for a term metavariable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .errors import (ArityError, LexError, NameCollision, NotAConstant,
                     ParseError, UnknownSymbol)
from .tvalgebra import AlgType

KEYWORDS = frozenset({"forall", "exists"})


# AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple = ()


@dataclass(frozen=True)
class TermMeta:
    name: str


Term = Union[Var, App, TermMeta]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Conn:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Wff"


@dataclass(frozen=True)
class WffMeta:
    name: str


Wff = Union[Atom, Conn, Forall, WffMeta]


def const(name: str) -> App:
    return App(name, ())


# signatures --------------------------------------------------------------

@dataclass(frozen=True)
class Language:
    """Predicate, function and connective symbols with their arities.

    ``connectives`` is ordered; its arities form the algebra type.
    ``negation`` optionally names a unary connective used to expand
    ``exists x. w`` into ``~ forall x. ~ w``.
    """

    predicates: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, int] = field(default_factory=dict)
    connectives: tuple = ()
    negation: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "predicates", dict(self.predicates))
        object.__setattr__(self, "functions", dict(self.functions))
        object.__setattr__(self, "connectives",
                           tuple((str(n), int(a)) for n, a in self.connectives))
        conn_names = [n for n, _ in self.connectives]
        if len(set(conn_names)) != len(conn_names):
            raise NameCollision("connective names must be distinct")
        groups = [set(self.predicates), set(self.functions), set(conn_names)]
        for i in range(3):
            for j in range(i + 1, 3):
                clash = groups[i] & groups[j]
                if clash:
                    raise NameCollision(f"symbol used twice: {sorted(clash)[0]!r}")
        for name in groups[0] | groups[1] | groups[2]:
            if name in KEYWORDS or not _IDENT.fullmatch(name):
                raise NameCollision(f"{name!r} is not a usable symbol name")
        AlgType(tuple(a for _, a in self.connectives))
        if self.negation is not None and self.conn_arity(self.negation) != 1:
            raise ArityError(f"negation {self.negation!r} must be a unary connective")

    def __hash__(self):
        return hash((tuple(sorted(self.predicates.items())),
                     tuple(sorted(self.functions.items())), self.connectives,
                     self.negation))

    @property
    def typ(self) -> AlgType:
        return AlgType(tuple(a for _, a in self.connectives))

    @property
    def connective_names(self) -> list[str]:
        return [n for n, _ in self.connectives]

    def conn_index(self, name: str) -> int:
        for k, (n, _) in enumerate(self.connectives):
            if n == name:
                return k
        raise UnknownSymbol(f"unknown connective {name!r}")

    def conn_arity(self, name: str) -> int:
        return self.connectives[self.conn_index(name)][1]

    @property
    def infix(self) -> Optional[dict]:
        """Token -> connective name, for (2, 2, 1) signatures."""
        if tuple(a for _, a in self.connectives) != (2, 2, 1):
            return None
        names = self.connective_names
        return {"&": names[0], "|": names[1], "~": names[2]}

    @property
    def constants(self) -> list[str]:
        return [f for f, a in self.functions.items() if a == 0]

    def symbols(self) -> set[str]:
        return set(self.predicates) | set(self.functions) | set(self.connective_names)


def extend_with_constants(lang: Language, names: Iterable[str]) -> Language:
    """The language with every name in ``names`` added as a constant."""
    names = list(names)
    taken = lang.symbols()
    for m in names:
        if m in taken:
            raise NameCollision(f"{m!r} is already a symbol of the language")
    funcs = dict(lang.functions)
    funcs.update((m, 0) for m in names)
    return Language(lang.predicates, funcs, lang.connectives, lang.negation)


# traversal ----------------------------------------------------------------

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        out = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def free_vars(w: Wff) -> set[str]:
    if isinstance(w, Atom):
        out = set()
        for t in w.args:
            out |= term_vars(t)
        return out
    if isinstance(w, Conn):
        out = set()
        for a in w.args:
            out |= free_vars(a)
        return out
    if isinstance(w, Forall):
        return free_vars(w.body) - {w.var}
    return set()


def is_sentence(w: Wff) -> bool:
    return not free_vars(w)


def depth(w: Wff) -> int:
    if isinstance(w, Conn):
        return 1 + max((depth(a) for a in w.args), default=0)
    if isinstance(w, Forall):
        return 1 + depth(w.body)
    return 0


def _subst_term(t, bindings):
    if isinstance(t, Var):
        return bindings.get(t.name, t)
    if isinstance(t, App) and t.args:
        return App(t.fn, tuple(_subst_term(a, bindings) for a in t.args))
    return t


def _subst(w, bindings):
    if isinstance(w, Atom):
        return Atom(w.pred, tuple(_subst_term(t, bindings) for t in w.args))
    if isinstance(w, Conn):
        return Conn(w.name, tuple(_subst(a, bindings) for a in w.args))
    if isinstance(w, Forall):
        if w.var in bindings:
            bindings = {k: v for k, v in bindings.items() if k != w.var}
        return Forall(w.var, _subst(w.body, bindings)) if bindings else w
    return w


def substitute(w: Wff, bindings: Mapping[str, object],
               lang: Optional[Language] = None) -> Wff:
    """Replace free occurrences of variables by constants.

    Binding targets may be constant names or arity-0 :class:`App` terms.
    When ``lang`` is given each target must be one of its constants.
    """
    terms = {}
    for var, target in bindings.items():
        if isinstance(target, str):
            target = App(target, ())
        if not isinstance(target, App) or target.args:
            raise NotAConstant(f"{var} must be bound to a constant, not {target!r}")
        if lang is not None and lang.functions.get(target.fn) != 0:
            raise NotAConstant(f"{target.fn!r} is not a constant of the language")
        terms[var] = target
    return _subst(w, terms)


def universal_closure(w: Wff) -> Wff:
    """Quantify the free variables, the lexicographically first outermost."""
    for v in sorted(free_vars(w), reverse=True):
        w = Forall(v, w)
    return w


# lexer ----------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<meta>[$?][A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<punct>[(),.&|~]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str, patterns: bool = False) -> list[Token]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise LexError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        tok = m.group(kind)
        if kind == "meta" and not patterns:
            raise LexError(f"metavariable {tok!r} outside a pattern", start)
        if kind == "ident" and tok in KEYWORDS:
            kind = "kw"
        out.append(Token(kind, tok, start))
        pos = m.end()
    out.append(Token("eof", "", n))
    return out


# parser ------------------------------------------------------------------------

class _Parser:
    def __init__(self, lang: Language, text: str, patterns: bool):
        self.lang = lang
        self.toks = tokenize(text, patterns)
        self.i = 0
        self.infix = lang.infix

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text or t.kind not in ("punct",):
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.pos)
        return self.advance()

    def parse(self) -> Wff:
        w = self.wff()
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return w

    def _infix_name(self, token):
        if self.infix is None:
            raise ParseError(
                f"infix {token.text!r} needs connective arities (2,2,1)", token.pos)
        return self.infix[token.text]

    def wff(self) -> Wff:
        left = self.conj()
        while self.tok.kind == "punct" and self.tok.text == "|":
            name = self._infix_name(self.advance())
            left = Conn(name, (left, self.conj()))
        return left

    def conj(self) -> Wff:
        left = self.unary()
        while self.tok.kind == "punct" and self.tok.text == "&":
            name = self._infix_name(self.advance())
            left = Conn(name, (left, self.unary()))
        return left

    def unary(self) -> Wff:
        t = self.tok
        if t.kind == "punct" and t.text == "~":
            name = self._infix_name(self.advance())
            return Conn(name, (self.unary(),))
        if t.kind == "kw":
            return self.quantified()
        return self.primary()

    def quantified(self) -> Wff:
        kw = self.advance()
        v = self.tok
        if v.kind != "ident":
            raise ParseError(f"expected a variable after {kw.text!r}", v.pos)
        if v.text in self.lang.symbols():
            raise ParseError(f"{v.text!r} is a declared symbol, not a variable", v.pos)
        self.advance()
        self.expect(".")
        body = self.wff()
        if kw.text == "forall":
            return Forall(v.text, body)
        neg = self.lang.negation
        if neg is None:
            raise UnknownSymbol("'exists' needs a connective flagged as negation", kw.pos)
        return Conn(neg, (Forall(v.text, Conn(neg, (body,))),))

    def primary(self) -> Wff:
        t = self.tok
        if t.kind == "punct" and t.text == "(":
            self.advance()
            w = self.wff()
            self.expect(")")
            return w
        if t.kind == "meta":
            if t.text[0] != "$":
                raise ParseError(f"term metavariable {t.text!r} in wff position", t.pos)
            self.advance()
            return WffMeta(t.text[1:])
        if t.kind != "ident":
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)
        name = t.text
        self.advance()
        lang = self.lang
        if name in lang.connective_names:
            arity = lang.conn_arity(name)
            args = self.arglist(self.wff) if arity or self._at("(") else []
            if len(args) != arity:
                raise ArityError(f"{name} takes {arity} arguments, got {len(args)}", t.pos)
            return Conn(name, tuple(args))
        if name in lang.predicates:
            arity = lang.predicates[name]
            args = self.arglist(self.term) if self._at("(") else []
            if len(args) != arity:
                raise ArityError(f"{name} takes {arity} arguments, got {len(args)}", t.pos)
            return Atom(name, tuple(args))
        raise UnknownSymbol(f"unknown predicate or connective {name!r}", t.pos)

    def _at(self, text):
        return self.tok.kind == "punct" and self.tok.text == text

    def arglist(self, item):
        self.expect("(")
        args = []
        if self._at(")"):
            self.advance()
            return args
        args.append(item())
        while self._at(","):
            self.advance()
            args.append(item())
        self.expect(")")
        return args

    def term(self) -> Term:
        t = self.tok
        if t.kind == "meta":
            if t.text[0] != "?":
                raise ParseError(f"wff metavariable {t.text!r} in term position", t.pos)
            self.advance()
            return TermMeta(t.text[1:])
        if t.kind != "ident":
            raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", t.pos)
        name = t.text
        self.advance()
        lang = self.lang
        if name in lang.functions:
            arity = lang.functions[name]
            args = self.arglist(self.term) if self._at("(") else []
            if len(args) != arity:
                raise ArityError(f"{name} takes {arity} arguments, got {len(args)}", t.pos)
            return App(name, tuple(args))
        if name in lang.predicates or name in lang.connective_names:
            raise UnknownSymbol(f"{name!r} cannot appear inside a term", t.pos)
        if self._at("("):
            raise UnknownSymbol(f"unknown function {name!r}", t.pos)
        return Var(name)


def parse_wff(lang: Language, text: str, patterns: bool = False) -> Wff:
    return _Parser(lang, text, patterns).parse()


# printer ------------------------------------------------------------------------

def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, TermMeta):
        return "?" + t.name
    if not t.args:
        return t.fn
    return f"{t.fn}(" + ", ".join(print_term(a) for a in t.args) + ")"


def print_wff(w: Wff, lang: Optional[Language] = None) -> str:
    """Canonical text; infix notation is used when ``lang`` allows it."""
    tokens = {}
    if lang is not None and lang.infix is not None:
        tokens = {v: k for k, v in lang.infix.items()}
    return _render(w, tokens, True)


def _render(w, tokens, top):
    if isinstance(w, Atom):
        if not w.args:
            return w.pred
        return f"{w.pred}(" + ", ".join(print_term(t) for t in w.args) + ")"
    if isinstance(w, WffMeta):
        return "$" + w.name
    if isinstance(w, Forall):
        s = f"forall {w.var}. {_render(w.body, tokens, False)}"
        return s if top else f"({s})"
    tok = tokens.get(w.name)
    if tok == "~":
        return "~" + _render(w.args[0], tokens, False)
    if tok is not None:
        s = f"{_render(w.args[0], tokens, False)} {tok} {_render(w.args[1], tokens, False)}"
        return s if top else f"({s})"
    return f"{w.name}(" + ", ".join(_render(a, tokens, True) for a in w.args) + ")"


# random generation -----------------------------------------------------------------

def random_term(lang: Language, rng, variables=(), constants=(), depth: int = 1) -> Term:
    choices = [Var(v) for v in variables] + [App(c, ()) for c in constants]
    funcs = [(f, a) for f, a in lang.functions.items() if a > 0]
    if depth > 0 and funcs and (not choices or rng.random() < 0.3):
        f, a = rng.choice(funcs)
        return App(f, tuple(random_term(lang, rng, variables, constants, depth - 1)
                            for _ in range(a)))
    if not choices:
        raise ValueError("no variables or constants to build terms from")
    return rng.choice(choices)


def random_wff(lang: Language, rng, depth: int = 3, variables=("x", "y"),
               constants=None, p_stop: float = 0.3) -> Wff:
    """A random wff of depth at most ``depth``.

    ``constants`` defaults to the language's constants; ``rng`` is a
    ``random.Random``.
    """
    if constants is None:
        constants = lang.constants
    preds = list(lang.predicates.items())
    if depth == 0 or rng.random() < p_stop:
        p, a = rng.choice(preds)
        return Atom(p, tuple(random_term(lang, rng, variables, constants) for _ in range(a)))
    conns = lang.connectives
    if variables and rng.random() < 0.25:
        v = rng.choice(variables)
        return Forall(v, random_wff(lang, rng, depth - 1, variables, constants, p_stop))
    name, a = rng.choice(conns) if conns else (None, 0)
    if name is None:
        return random_wff(lang, rng, 0, variables, constants, p_stop)
    return Conn(name, tuple(random_wff(lang, rng, depth - 1, variables, constants, p_stop)
                            for _ in range(a)))
