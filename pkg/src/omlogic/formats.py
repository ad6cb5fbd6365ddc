"""
Readers and writers for the line-oriented text formats and their JSON twins.

Every text file starts with ``format 1``.  ``#`` starts a comment.  Paths
inside a file are resolved relative to that file.
"""

from __future__ import annotations

import json
import re
from itertools import product as cartesian
from pathlib import Path
from typing import Optional

from .deduction import Ax, By, DeductionSystem, Hyp, Proof, Rule, Step
from .errors import FileFormatError, OmlogicError
from .harness import FiniteSemantics
from .poset import Poset, mk_poset
from .semantics import Interpretation, Structure
from .syntax import Language, parse_wff, print_wff
from .tvalgebra import AlgType, TVAlgebra, mk_algebra

FORMAT_VERSION = 1
FORCE_JSON = False
_algebra_cache: dict = {}


def _lines(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FileFormatError(f"cannot read {path}: {e.strerror}", str(path), None) from e
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((n, line))
    return out


def _check_version(path, lines):
    if not lines or lines[0][1].split() != ["format", str(FORMAT_VERSION)]:
        raise FileFormatError(f"expected 'format {FORMAT_VERSION}' on the first line",
                              str(path), lines[0][0] if lines else 1)
    return lines[1:]


def _wrap(path, n):
    """Re-raise library errors raised while reading line ``n`` as file format errors."""
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, typ, exc, tb):
            if exc is not None and isinstance(exc, (OmlogicError, ValueError)) \
                    and not isinstance(exc, FileFormatError):
                raise FileFormatError(str(exc), str(path), n) from exc
            return False
    return _Ctx()


def is_json(path) -> bool:
    return FORCE_JSON or str(path).endswith(".json")


# algebras ------------------------------------------------------------------

def _algebra_from_parts(path, elements, covers, typ, names, tables):
    poset = mk_poset(elements, covers)
    built = []
    for name, r, tab in zip(names, typ, tables):
        if tab in ("derived-meet", "derived-join"):
            if r != 2:
                raise FileFormatError(f"{tab} needs a binary operation", str(path), None)
            f = poset.meet_idx if tab == "derived-meet" else poset.join_idx
            out = {}
            for i, x in enumerate(poset.elements):
                for j, y in enumerate(poset.elements):
                    v = f(i, j)
                    if v is None:
                        raise FileFormatError(f"{name}: {x} and {y} have no "
                                              f"{tab.split('-')[1]}", str(path), None)
                    out[(x, y)] = poset.elements[v]
            tab = out
        built.append(tab)
    return mk_algebra(poset, AlgType(tuple(typ)), built, names)


def read_algebra(path) -> TVAlgebra:
    path = Path(path).resolve()
    if path in _algebra_cache:
        return _algebra_cache[path]
    if is_json(path):
        alg = read_algebra_json(path)
    else:
        alg = _read_algebra_text(path)
    _algebra_cache[path] = alg
    return alg


def _read_algebra_text(path) -> TVAlgebra:
    lines = _check_version(path, _lines(path))
    typ = names = elements = None
    covers = []
    tables = {}
    current = None
    last = lines[-1][0] if lines else 1
    for n, line in lines:
        words = line.split()
        if current is not None:
            if words == ["end"]:
                current = None
                continue
            if "->" not in words:
                raise FileFormatError("table rows look like 'x y -> z'", str(path), n)
            k = words.index("->")
            if k != len(words) - 2:
                raise FileFormatError("one output per table row", str(path), n)
            tables[current][tuple(words[:k])] = words[-1]
            continue
        head, rest = words[0], words[1:]
        if head == "type":
            try:
                typ = [int(w) for w in rest]
            except ValueError:
                raise FileFormatError("arities must be integers", str(path), n) from None
        elif head == "names":
            names = rest
        elif head == "elements":
            elements = rest
        elif head == "cover":
            if len(rest) != 2:
                raise FileFormatError("'cover' takes two elements", str(path), n)
            covers.append(tuple(rest))
        elif head == "table":
            if not rest or len(rest) > 2:
                raise FileFormatError("'table <op> [derived-meet|derived-join]'", str(path), n)
            if rest[0] in tables:
                raise FileFormatError(f"second table for {rest[0]!r}", str(path), n)
            if len(rest) == 2:
                if rest[1] not in ("derived-meet", "derived-join"):
                    raise FileFormatError(f"unknown shorthand {rest[1]!r}", str(path), n)
                tables[rest[0]] = rest[1]
            else:
                tables[rest[0]] = {}
                current = rest[0]
        else:
            raise FileFormatError(f"unknown directive {head!r}", str(path), n)
    if current is not None:
        raise FileFormatError(f"table {current!r} is missing 'end'", str(path), last)
    for what, val in (("type", typ), ("names", names), ("elements", elements)):
        if val is None:
            raise FileFormatError(f"missing '{what}' line", str(path), None)
    if len(names) != len(typ):
        raise FileFormatError("one name per arity is required", str(path), None)
    missing = [x for x in names if x not in tables]
    if missing:
        raise FileFormatError(f"no table for {missing[0]!r}", str(path), None)
    extra = [x for x in tables if x not in names]
    if extra:
        raise FileFormatError(f"table for undeclared operation {extra[0]!r}", str(path), None)
    with _wrap(path, None):
        return _algebra_from_parts(path, elements, covers, typ, names,
                                   [tables[x] for x in names])


def read_algebra_json(path) -> TVAlgebra:
    data = _load_json(path)
    return algebra_from_dict(data, path)


def algebra_from_dict(data: dict, path="<json>") -> TVAlgebra:
    try:
        typ, names = data["type"], data["names"]
        elements, covers = data["elements"], [tuple(c) for c in data["covers"]]
        tables = []
        for name, r in zip(names, typ):
            tab = data["tables"][name]
            if isinstance(tab, list):
                tab = {tuple(row[:-1]): row[-1] for row in tab}
            tables.append(tab)
    except (KeyError, TypeError) as e:
        raise FileFormatError(f"malformed algebra object: {e}", str(path), None) from e
    with _wrap(path, None):
        return _algebra_from_parts(path, elements, covers, typ, names, tables)


def algebra_to_dict(a: TVAlgebra) -> dict:
    tables = {}
    for k, (name, r) in enumerate(zip(a.names, a.typ.arities)):
        rows = []
        for args in cartesian(range(a.size), repeat=r):
            rows.append([a.elements[x] for x in args] + [a.elements[a.apply_idx(k, args)]])
        tables[name] = rows
    return {"format": FORMAT_VERSION, "type": list(a.typ.arities), "names": list(a.names),
            "elements": list(a.elements), "covers": [list(c) for c in a.poset.covers()],
            "tables": tables}


def write_algebra(a: TVAlgebra, path=None) -> str:
    """Text form; lattice operations that equal the poset meet or join use the shorthand."""
    p: Poset = a.poset
    out = [f"format {FORMAT_VERSION}", "type " + " ".join(map(str, a.typ.arities)),
           "names " + " ".join(a.names), "elements " + " ".join(a.elements)]
    out += [f"cover {x} {y}" for x, y in p.covers()]
    for k, (name, r) in enumerate(zip(a.names, a.typ.arities)):
        if r == 2:
            for short, f in (("derived-meet", p.meet_idx), ("derived-join", p.join_idx)):
                if all(a.apply_idx(k, (i, j)) == f(i, j)
                       for i in range(a.size) for j in range(a.size)):
                    out.append(f"table {name} {short}")
                    break
            else:
                short = None
            if short is not None:
                continue
        out.append(f"table {name}")
        for args in cartesian(range(a.size), repeat=r):
            lhs = " ".join(a.elements[x] for x in args)
            out.append(f"  {lhs} -> {a.elements[a.apply_idx(k, args)]}" if lhs
                       else f"  -> {a.elements[a.apply_idx(k, args)]}")
        out.append("end")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# structures -------------------------------------------------------------------

def _language_line(words, acc, path, n) -> bool:
    head = words[0]
    if head == "predicate" and len(words) == 3:
        acc["predicates"][words[1]] = _int(words[2], path, n)
    elif head == "function" and len(words) == 3:
        acc["functions"][words[1]] = _int(words[2], path, n)
    elif head == "constant" and len(words) == 2:
        acc["functions"][words[1]] = 0
    elif head == "connective" and len(words) in (3, 4):
        acc["connectives"].append((words[1], _int(words[2], path, n)))
        if len(words) == 4:
            if words[3] != "negation":
                raise FileFormatError(f"unknown connective flag {words[3]!r}", str(path), n)
            acc["negation"] = words[1]
    else:
        return False
    return True


def _int(w, path, n):
    try:
        return int(w)
    except ValueError:
        raise FileFormatError(f"{w!r} is not an integer", str(path), n) from None


def _new_lang_acc():
    return {"predicates": {}, "functions": {}, "connectives": [], "negation": None}


def _make_language(acc, path):
    with _wrap(path, None):
        return Language(acc["predicates"], acc["functions"], tuple(acc["connectives"]),
                        negation=acc["negation"])


def read_structure(path, allow_nonsurjective=False) -> Structure:
    path = Path(path).resolve()
    if is_json(path):
        return structure_from_dict(_load_json(path), path.parent, path, allow_nonsurjective)
    lines = _check_version(path, _lines(path))
    acc = _new_lang_acc()
    algebra_path = universe = None
    tables: dict = {}
    atoms: dict = {}
    name = path.stem
    for n, line in lines:
        words = line.split()
        if _language_line(words, acc, path, n):
            continue
        head = words[0]
        if head == "algebra" and len(words) == 2:
            algebra_path = path.parent / words[1]
        elif head == "name" and len(words) == 2:
            name = words[1]
        elif head == "universe" and len(words) > 1:
            universe = words[1:]
        elif head in ("fn", "atom"):
            if "->" not in words or words.index("->") != len(words) - 2 or len(words) < 4:
                raise FileFormatError(f"'{head} <symbol> <args> -> <value>'", str(path), n)
            k = words.index("->")
            target = tables if head == "fn" else atoms
            key = tuple(words[2:k])
            row = target.setdefault(words[1], {})
            if key in row:
                raise FileFormatError(f"{words[1]}{key} given twice", str(path), n)
            row[key] = words[-1]
        else:
            raise FileFormatError(f"unknown directive {head!r}", str(path), n)
    if algebra_path is None:
        raise FileFormatError("missing 'algebra' line", str(path), None)
    if universe is None:
        raise FileFormatError("missing 'universe' line", str(path), None)
    lang = _make_language(acc, path)
    alg = read_algebra(algebra_path)
    with _wrap(path, None):
        return Structure(lang, Interpretation(universe, tables), alg, atoms,
                         allow_nonsurjective=allow_nonsurjective, name=name)


def language_to_dict(lang: Language) -> dict:
    return {"predicates": dict(lang.predicates), "functions": dict(lang.functions),
            "connectives": [list(c) for c in lang.connectives], "negation": lang.negation}


def language_from_dict(d: dict, path="<json>") -> Language:
    try:
        acc = {"predicates": d.get("predicates", {}), "functions": d.get("functions", {}),
               "connectives": [tuple(c) for c in d["connectives"]],
               "negation": d.get("negation")}
    except (KeyError, TypeError) as e:
        raise FileFormatError(f"malformed language object: {e}", str(path), None) from e
    return _make_language(acc, path)


def structure_from_dict(d: dict, base_dir=Path("."), path="<json>",
                        allow_nonsurjective=False) -> Structure:
    try:
        alg = d["algebra"]
        alg = algebra_from_dict(alg, path) if isinstance(alg, dict) \
            else read_algebra(Path(base_dir) / alg)
        lang = language_from_dict(d["language"], path)
        tables = {f: {tuple(r[:-1]): r[-1] for r in rows}
                  for f, rows in d.get("functions", {}).items()}
        atoms = {p: {tuple(r[:-1]): r[-1] for r in rows} for p, rows in d["atoms"].items()}
        universe = d["universe"]
    except (KeyError, TypeError) as e:
        raise FileFormatError(f"malformed structure object: {e}", str(path), None) from e
    with _wrap(path, None):
        return Structure(lang, Interpretation(universe, tables), alg, atoms,
                         allow_nonsurjective=allow_nonsurjective, name=d.get("name"))


def structure_to_dict(s: Structure) -> dict:
    return {
        "format": FORMAT_VERSION,
        "name": s.name,
        "language": language_to_dict(s.lang),
        "algebra": algebra_to_dict(s.algebra),
        "universe": list(s.universe),
        "functions": {f: [list(k) + [v] for k, v in sorted(t.items())]
                      for f, t in sorted(s.interp.fn_tables.items())},
        "atoms": {p: [list(k) + [v] for k, v in sorted(row.items())]
                  for p, row in sorted(s.atomic_base.items())},
    }


def write_structure(s: Structure, algebra_ref: str) -> str:
    out = [f"format {FORMAT_VERSION}", f"algebra {algebra_ref}"]
    out += _language_lines(s.lang)
    out.append("universe " + " ".join(s.universe))
    for f, t in sorted(s.interp.fn_tables.items()):
        for k, v in sorted(t.items()):
            out.append(" ".join(["fn", f, *k, "->", v]))
    for p, row in sorted(s.atomic_base.items()):
        for k, v in sorted(row.items()):
            out.append(" ".join(["atom", p, *k, "->", v]))
    return "\n".join(out) + "\n"


def _language_lines(lang: Language) -> list[str]:
    out = []
    for c, a in lang.connectives:
        out.append(f"connective {c} {a}" + (" negation" if c == lang.negation else ""))
    out += [f"predicate {p} {a}" for p, a in sorted(lang.predicates.items())]
    out += [f"function {f} {a}" for f, a in sorted(lang.functions.items())]
    return out


# semantics and wff lists --------------------------------------------------------

def read_semantics(path, allow_nonsurjective=False) -> FiniteSemantics:
    path = Path(path).resolve()
    if is_json(path):
        d = _load_json(path)
        mode = d.get("closure_mode", "declared")
        items = d.get("structures", [])
        structs = [structure_from_dict(x, path.parent, path, allow_nonsurjective)
                   if isinstance(x, dict)
                   else read_structure(path.parent / x, allow_nonsurjective) for x in items]
    else:
        lines = _check_version(path, _lines(path))
        mode = "declared"
        structs = []
        for n, line in lines:
            words = line.split()
            if words[0] in ("closure", "closure_mode") and len(words) == 2:
                mode = words[1]
            elif words[0] == "structure" and len(words) == 2:
                structs.append(read_structure(path.parent / words[1], allow_nonsurjective))
            else:
                raise FileFormatError(f"unknown directive {words[0]!r}", str(path), n)
    with _wrap(path, None):
        return FiniteSemantics(structs, mode)


def is_semantics_file(path) -> bool:
    path = Path(path)
    if is_json(path):
        d = _load_json(path)
        return isinstance(d, dict) and "structures" in d
    return any(line.split()[0] in ("structure", "closure", "closure_mode")
               for _, line in _lines(path))


def read_wffs(path, lang: Language) -> list:
    """One wff per line; a JSON file holds a list of strings."""
    path = Path(path)
    if is_json(path):
        items = _load_json(path)
        if not isinstance(items, list):
            raise FileFormatError("expected a list of formulas", str(path), None)
        return [parse_wff(lang, x) for x in items]
    out = []
    for n, line in _lines(path):
        with _wrap(path, n):
            out.append(parse_wff(lang, line))
    return out


# deduction systems and proofs ------------------------------------------------------

_RULE = re.compile(r"^rule\s+(\S+)\s*:\s*(.*)$")
_AXIOM = re.compile(r"^axiom\s+(\S+)\s*:\s*(.*)$")


def read_system(path) -> DeductionSystem:
    path = Path(path).resolve()
    if is_json(path):
        return system_from_dict(_load_json(path), path)
    lines = _check_version(path, _lines(path))
    acc = _new_lang_acc()
    pending = []
    sound_for = None
    for n, line in lines:
        words = line.split()
        if _language_line(words, acc, path, n):
            continue
        if words[0] == "claimed-sound-for" and len(words) == 2:
            sound_for = str(path.parent / words[1])
        elif _AXIOM.match(line) or _RULE.match(line):
            pending.append((n, line))
        else:
            raise FileFormatError(f"unknown directive {words[0]!r}", str(path), n)
    lang = _make_language(acc, path)
    d = DeductionSystem(lang, claimed_sound_for=sound_for)
    for n, line in pending:
        with _wrap(path, n):
            m = _AXIOM.match(line)
            if m:
                _add_axiom(d, m.group(1), parse_wff(lang, m.group(2), patterns=True), path, n)
                continue
            m = _RULE.match(line)
            ident, body = m.groups()
            if "=>" not in body:
                raise FileFormatError("rules look like 'p1 ; p2 => conclusion'", str(path), n)
            lhs, rhs = body.split("=>", 1)
            prem = [parse_wff(lang, x, patterns=True) for x in lhs.split(";") if x.strip()]
            _add_rule(d, ident, Rule(tuple(prem), parse_wff(lang, rhs, patterns=True)), path, n)
    return d


def _add_axiom(d, ident, w, path, n):
    if ident in d.axioms or ident in d.rules:
        raise FileFormatError(f"identifier {ident!r} used twice", str(path), n)
    d.axioms[ident] = w


def _add_rule(d, ident, r, path, n):
    if ident in d.axioms or ident in d.rules:
        raise FileFormatError(f"identifier {ident!r} used twice", str(path), n)
    d.rules[ident] = r


def system_from_dict(data: dict, path="<json>") -> DeductionSystem:
    lang = language_from_dict(data.get("language", {}), path)
    base = Path(path).parent if path != "<json>" else Path(".")
    sound = data.get("claimed_sound_for")
    d = DeductionSystem(lang, claimed_sound_for=str(base / sound) if sound else None)
    with _wrap(path, None):
        for ident, text in data.get("axioms", {}).items():
            _add_axiom(d, ident, parse_wff(lang, text, patterns=True), path, None)
        for ident, r in data.get("rules", {}).items():
            prem = tuple(parse_wff(lang, x, patterns=True) for x in r["premises"])
            _add_rule(d, ident, Rule(prem, parse_wff(lang, r["conclusion"], patterns=True)),
                      path, None)
    return d


_STEP = re.compile(r"^(\d+)\s*\.\s*(.*?)\s*;\s*(.*)$")


def _justification(text, path, n):
    words = text.replace("[", " ").replace("]", " ").replace(",", " ").split()
    if words == ["hyp"]:
        return Hyp()
    if len(words) == 2 and words[0] == "ax":
        return Ax(words[1])
    if len(words) >= 2 and words[0] == "rule":
        return By(words[1], tuple(_int(w, path, n) for w in words[2:]))
    raise FileFormatError(f"bad justification {text!r}", str(path), n)


def read_proof(path, lang: Language) -> Proof:
    path = Path(path)
    if is_json(path):
        return proof_from_dict(_load_json(path), lang, path)
    steps = []
    goal = None
    for n, line in _lines(path):
        if line.startswith("goal:"):
            with _wrap(path, n):
                goal = parse_wff(lang, line[5:])
            continue
        m = _STEP.match(line)
        if not m:
            raise FileFormatError("steps look like 'n. <wff> ; <justification>'", str(path), n)
        num, text, why = m.groups()
        if int(num) != len(steps) + 1:
            raise FileFormatError(f"expected step {len(steps) + 1}, found {num}", str(path), n)
        with _wrap(path, n):
            steps.append(Step(parse_wff(lang, text), _justification(why, path, n)))
    return Proof(steps, goal)


def proof_from_dict(data, lang, path="<json>") -> Proof:
    steps = []
    with _wrap(path, None):
        for item in data["steps"]:
            steps.append(Step(parse_wff(lang, item["wff"]),
                              _justification(item["by"], path, None)))
        goal = parse_wff(lang, data["goal"]) if data.get("goal") else None
    return Proof(steps, goal)


def _load_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FileFormatError(f"cannot read {path}: {e.strerror}", str(path), None) from e
    except json.JSONDecodeError as e:
        raise FileFormatError(f"invalid JSON: {e.msg}", str(path), e.lineno) from e


def format_wff(w, lang: Optional[Language]) -> str:
    return print_wff(w, lang)
