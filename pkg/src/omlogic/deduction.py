"""
Deduction systems given by axiom schemata and rules, and a proof checker.

Patterns are wffs that may contain ``$A`` (any wff) and ``?t`` (any term).
Object variables in a pattern match object variables in the target under a
one-to-one renaming, so ``forall x. $A`` matches ``forall y. P(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import PatternError
from .syntax import (App, Atom, Conn, Forall, Language, TermMeta, Var, Wff,
                     WffMeta, print_wff)


def metavariables(p) -> set[str]:
    out = set()

    def walk(x):
        if isinstance(x, (WffMeta, TermMeta)):
            out.add(x.name)
        elif isinstance(x, (Atom, App)):
            for a in x.args:
                walk(a)
        elif isinstance(x, Conn):
            for a in x.args:
                walk(a)
        elif isinstance(x, Forall):
            walk(x.body)

    walk(p)
    return out


def has_metavariables(p) -> bool:
    return bool(metavariables(p))


@dataclass(frozen=True)
class Instantiation:
    """Bindings for metavariables plus the object-variable renaming."""

    metas: tuple = ()
    variables: tuple = ()

    def as_dict(self) -> dict:
        return dict(self.metas)


class _Matcher:
    def __init__(self, metas=None, fwd=None, back=None):
        self.metas = dict(metas or {})
        self.fwd = dict(fwd or {})
        self.back = dict(back or {})

    def copy(self):
        return _Matcher(self.metas, self.fwd, self.back)

    def var(self, pv: str, tv: str) -> bool:
        if self.fwd.setdefault(pv, tv) != tv:
            return False
        return self.back.setdefault(tv, pv) == pv

    def bind(self, name, value) -> bool:
        return self.metas.setdefault(name, value) == value

    def term(self, p, t) -> bool:
        if isinstance(p, TermMeta):
            return self.bind(p.name, t)
        if isinstance(p, Var):
            return isinstance(t, Var) and self.var(p.name, t.name)
        if isinstance(p, App):
            return (isinstance(t, App) and p.fn == t.fn and len(p.args) == len(t.args)
                    and all(self.term(a, b) for a, b in zip(p.args, t.args)))
        raise PatternError(f"not a term pattern: {p!r}")

    def wff(self, p, t) -> bool:
        if isinstance(p, WffMeta):
            return self.bind(p.name, t)
        if isinstance(p, Atom):
            return (isinstance(t, Atom) and p.pred == t.pred and len(p.args) == len(t.args)
                    and all(self.term(a, b) for a, b in zip(p.args, t.args)))
        if isinstance(p, Conn):
            return (isinstance(t, Conn) and p.name == t.name and len(p.args) == len(t.args)
                    and all(self.wff(a, b) for a, b in zip(p.args, t.args)))
        if isinstance(p, Forall):
            return isinstance(t, Forall) and self.var(p.var, t.var) and self.wff(p.body, t.body)
        raise PatternError(f"not a wff pattern: {p!r}")

    def result(self) -> Instantiation:
        return Instantiation(tuple(sorted(self.metas.items())), tuple(sorted(self.fwd.items())))


def match_pattern(pattern: Wff, target: Wff, start: Optional[_Matcher] = None) -> Optional[Instantiation]:
    m = start.copy() if start is not None else _Matcher()
    return m.result() if m.wff(pattern, target) else None


def _match(pattern, target, m: _Matcher) -> Optional[_Matcher]:
    m = m.copy()
    return m if m.wff(pattern, target) else None


@dataclass(frozen=True)
class Rule:
    premises: tuple
    conclusion: Wff

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        if self.premises:
            seen = set().union(*(metavariables(p) for p in self.premises))
            loose = metavariables(self.conclusion) - seen
            if loose:
                raise PatternError(f"metavariable {sorted(loose)[0]!r} appears only in the conclusion")

    @property
    def schematic(self) -> bool:
        return any(has_metavariables(p) for p in self.premises + (self.conclusion,))


@dataclass
class DeductionSystem:
    lang: Language
    axioms: dict = field(default_factory=dict)
    rules: dict = field(default_factory=dict)
    claimed_sound_for: Optional[str] = None

    def __post_init__(self):
        for k, r in list(self.rules.items()):
            if not isinstance(r, Rule):
                self.rules[k] = Rule(*r)


@dataclass(frozen=True)
class Hyp:
    pass


@dataclass(frozen=True)
class Ax:
    ident: str


@dataclass(frozen=True)
class By:
    ident: str
    premises: tuple = ()


@dataclass(frozen=True)
class Step:
    wff: Wff
    why: object


@dataclass
class Proof:
    steps: list
    goal: Optional[Wff] = None


@dataclass
class ProofReport:
    accepted: bool
    failed_step: Optional[int] = None
    reason: str = ""
    instantiations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"accepted": self.accepted, "failed_step": self.failed_step,
                "reason": self.reason}


def _rule_instance(rule: Rule, target: Wff, cited: Sequence[Wff], literal: bool,
                   exact: bool = True):
    if literal:
        if rule.schematic:
            return None
        if target != rule.conclusion:
            return None
        if exact and len(cited) != len(rule.premises):
            return None
        return Instantiation() if set(rule.premises) <= set(cited) else None
    m0 = _match(rule.conclusion, target, _Matcher())
    if m0 is None:
        return None
    if not rule.premises:
        return m0.result()
    if exact and len(cited) != len(rule.premises):
        return None

    # each premise takes one cited step; explicit citations are used once each
    def search(i, m, used):
        if i == len(rule.premises):
            return m
        for k, w in enumerate(cited):
            if exact and k in used:
                continue
            m2 = _match(rule.premises[i], w, m)
            if m2 is not None:
                out = search(i + 1, m2, used | {k})
                if out is not None:
                    return out
        return None
    found = search(0, m0, frozenset())
    return found.result() if found is not None else None


def check_proof(d: DeductionSystem, hypotheses: Iterable[Wff], p: Proof,
                goal: Optional[Wff] = None, literal_rules: bool = False) -> ProofReport:
    """Check every step in order; the report names the first failing step (1-based)."""
    hyps = set(hypotheses)
    if goal is None:
        goal = p.goal
    done: list[Wff] = []
    report = ProofReport(accepted=False)
    if not p.steps:
        report.reason = "empty proof"
        return report
    for n, step in enumerate(p.steps, 1):
        why = step.why
        inst = None
        if isinstance(why, Hyp):
            if step.wff not in hyps:
                report.failed_step, report.reason = n, "not a hypothesis"
                return report
        elif isinstance(why, Ax):
            schema = d.axioms.get(why.ident)
            if schema is None:
                report.failed_step, report.reason = n, f"unknown axiom {why.ident!r}"
                return report
            inst = match_pattern(schema, step.wff)
            if inst is None:
                report.failed_step, report.reason = n, f"not an instance of axiom {why.ident}"
                return report
        elif isinstance(why, By):
            rule = d.rules.get(why.ident)
            if rule is None:
                report.failed_step, report.reason = n, f"unknown rule {why.ident!r}"
                return report
            bad = [k for k in why.premises if not 1 <= k < n]
            if bad:
                report.failed_step = n
                report.reason = f"premise {bad[0]} does not precede step {n}"
                return report
            cited = [done[k - 1] for k in why.premises] if why.premises else list(done)
            inst = _rule_instance(rule, step.wff, cited, literal_rules,
                                  exact=bool(why.premises))
            if inst is None:
                report.failed_step, report.reason = n, f"rule {why.ident} does not apply"
                return report
        else:
            report.failed_step, report.reason = n, "unknown justification"
            return report
        report.instantiations.append(inst)
        done.append(step.wff)
    if goal is not None and done[-1] != goal:
        report.failed_step = len(done)
        report.reason = "last step is not the goal"
        return report
    report.accepted = True
    return report


def soundness_counterexamples(semantics, hypotheses: Sequence[Wff], goal: Wff) -> list:
    """Models of the hypotheses in which the goal fails."""
    from .semantics import holds, is_model
    return [s for s in semantics if is_model(s, hypotheses) and not holds(s, goal)]


def describe_step(lang: Language, step: Step) -> str:
    why = step.why
    if isinstance(why, Hyp):
        tag = "hyp"
    elif isinstance(why, Ax):
        tag = f"ax {why.ident}"
    else:
        tag = f"rule {why.ident} " + " ".join(map(str, why.premises))
    return f"{print_wff(step.wff, lang)} ; {tag.strip()}"
