"""Command-line front end.  Exit codes: 0 ok, 1 domain failure, 2 bad input, 3 precondition."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import formats
from .deduction import check_proof, soundness_counterexamples
from .errors import FileFormatError, NotAnOml, NotFactorClosed, OmlogicError
from .harness import (FiniteSemantics, TrialConfig, recheck_witness,
                      run_trials, saturate, verify_main_theorem)
from .oml import (AXIOM_TITLES, boolean_checks, center, check_oml, decompose,
                  enumerate_omls, enumerate_ortholattices, is_irreducible_oml,
                  oml_view)
from .semantics import Evaluation, is_model
from .syntax import Forall, free_vars, parse_wff, universal_closure
from .tvalgebra import is_isomorphism

OK, FAIL, BAD_INPUT, PRECONDITION = 0, 1, 2, 3


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data = {}

    def line(self, text=""):
        if not self.as_json:
            print(text)

    def put(self, **kw):
        self.data.update(kw)

    def finish(self, code):
        if self.as_json:
            print(json.dumps(self.data, indent=2, sort_keys=True))
        return code


def _fmt_pair(t):
    return "(" + ",".join(map(str, t)) + ")"


def cmd_check_algebra(args, out):
    a = formats.read_algebra(args.path)
    report = check_oml(a)
    compat, _ = boolean_checks(a) if report.ok else (False, False)
    rows = {}
    for k, title in AXIOM_TITLES.items():
        r = report.axioms[k]
        rows[k] = {"ok": r.ok, "counterexample": list(r.counterexample) if r.counterexample else None}
        if r.ok:
            out.line(f"({k}) {title}: ok")
        else:
            out.line(f"({k}) {title}: fails at {_fmt_pair(r.counterexample)}")
    out.line(f"(vi) compatible-all: {'true' if compat else 'false'}")
    ok = report.ok and (compat or not args.boolean)
    out.line("orthomodular lattice" if report.ok else "not an orthomodular lattice")
    out.put(axioms=rows, compatible_all=compat, oml=report.ok, ok=ok)
    return out.finish(OK if ok else FAIL)


def _view(path):
    a = formats.read_algebra(path)
    try:
        return oml_view(a)
    except NotAnOml as e:
        raise NotAnOml(f"{path}: {e}") from e


def cmd_center(args, out):
    v = _view(args.path)
    z = center(v)
    out.line("center = {" + ",".join(z) + "}")
    out.put(center=z)
    return out.finish(OK)


def cmd_factorize(args, out):
    v = _view(args.path)
    z = center(v)
    factors, iso = decompose(v)
    verified = is_isomorphism(iso)
    sizes = [f.size for f in factors]
    out.put(center=z, sizes=sizes, irreducible=is_irreducible_oml(v), verified=verified)
    if v.size == 1:
        out.line("trivial")
    elif len(factors) == 1:
        out.line("irreducible (center = {" + ",".join(z) + "})")
    else:
        out.line("center = {" + ",".join(z) + "}")
        out.line(f"factors: {sizes}")
    out.line("reconstruction isomorphism verified" if verified else "reconstruction FAILED")
    return out.finish(OK if verified else FAIL)


def cmd_enumerate(args, out):
    found = enumerate_ortholattices(args.n) if args.ortho else \
        [v.algebra for v in enumerate_omls(args.n)]
    kind = "ortholattice" if args.ortho else "oml"
    listing = []
    for i, a in enumerate(found, 1):
        entry = {"size": a.size, "irreducible": None}
        if not args.ortho:
            entry["irreducible"] = is_irreducible_oml(a)
        listing.append(entry)
        tag = "" if entry["irreducible"] is None else (
            " irreducible" if entry["irreducible"] else " reducible")
        out.line(f"{kind} {i}: size {a.size}{tag}")
        if args.out:
            d = Path(args.out)
            d.mkdir(parents=True, exist_ok=True)
            name = f"{kind}-{i:03d}-n{a.size}"
            if args.json_out:
                (d / f"{name}.json").write_text(
                    json.dumps(formats.algebra_to_dict(a), indent=1), encoding="utf-8")
            else:
                formats.write_algebra(a, d / f"{name}.alg")
    out.line(f"{len(found)} found")
    out.put(count=len(found), algebras=listing)
    return out.finish(OK)


def cmd_eval(args, out):
    s = formats.read_structure(args.structure, args.allow_nonsurjective)
    w = parse_wff(s.lang_m, args.formula)
    closure = universal_closure(w)
    order = []
    x = closure
    while isinstance(x, Forall) and len(order) < len(free_vars(w)):
        order.append(x.var)
        x = x.body
    value = Evaluation(s).sentence(closure)
    holds = value == s.algebra.top
    out.line(f"value: {value}")
    out.line(f"holds: {'yes' if holds else 'no'}")
    out.put(value=value, holds=holds, closure_order=order)
    return out.finish(OK if holds else FAIL)


def _load_semantics_or_structure(path, allow):
    if formats.is_semantics_file(path):
        return formats.read_semantics(path, allow)
    return FiniteSemantics([formats.read_structure(path, allow)])


def cmd_model_check(args, out):
    t = _load_semantics_or_structure(args.target, args.allow_nonsurjective)
    if not len(t):
        raise FileFormatError("no structures to check", args.target, None)
    lang = t.structures[0].lang
    gamma = formats.read_wffs(args.gamma, lang)
    rows = []
    for i, s in enumerate(t.structures, 1):
        m = is_model(s, gamma)
        rows.append({"index": i, "name": s.name, "model": m})
        label = f"{i} {s.name}" if s.name else str(i)
        out.line(f"{label}: {'model' if m else 'not a model'}")
    out.put(structures=rows, all=all(r["model"] for r in rows))
    return out.finish(OK if all(r["model"] for r in rows) else FAIL)


def _trial_mode(args, out):
    seed = int(os.environ.get("OMLOGIC_SEED", args.seed))
    cfg = TrialConfig(seed=seed, trials=args.trials, algebra_cap=args.algebra_cap)
    summary = run_trials(cfg)
    d = summary.to_dict()
    d["seed"] = seed
    out.line(f"{summary.agreeing}/{summary.trials} agree")
    out.line(f"witnesses: {summary.witnesses} (all re-checked: "
             f"{'yes' if not summary.bad_witnesses else 'no'})")
    for o in summary.outcomes:
        if not o.agree:
            out.line(f"trial {o.index} disagrees: all models {o.all_models}, "
                     f"irreducible models {o.all_irreducible}")
    out.put(**d)
    return out.finish(OK if summary.ok else FAIL)


def cmd_verify_irreducible(args, out):
    if args.trials:
        return _trial_mode(args, out)
    if not (args.semantics and args.gamma and args.formula):
        raise FileFormatError("need SEMANTICS GAMMA FORMULA or --trials", "<args>", None)
    t = formats.read_semantics(args.semantics, args.allow_nonsurjective)
    if args.saturate:
        t = saturate(t, force=True)
    lang = t.structures[0].lang
    gamma = formats.read_wffs(args.gamma, lang)
    psi = parse_wff(lang, args.formula)
    rep = verify_main_theorem(t, gamma, psi)
    d = rep.to_dict(lang)
    d["semantics_size"] = len(t)
    out.line(f"structures: {len(t)}")
    out.line(f"models of gamma: {rep.models} ({rep.irreducible_models} irreducible)")
    out.line(f"psi holds in every model: {'yes' if rep.all_models_satisfy else 'no'}")
    out.line(f"psi holds in every irreducible model: "
             f"{'yes' if rep.all_irreducible_models_satisfy else 'no'}")
    if rep.witness is not None:
        start, w = rep.witness
        checks = recheck_witness(t, rep)
        value = Evaluation(w).wff(psi)
        out.line(f"witness: structure {rep.chain[0] + 1} -> irreducible structure "
                 f"{rep.chain[-1] + 1} (chain {[i + 1 for i in rep.chain]}), value {value}")
        out.line("witness checks: " + ", ".join(f"{k}={'ok' if v else 'FAIL'}"
                                                for k, v in checks.items()))
        d["witness"] = {"start": rep.chain[0] + 1, "irreducible": rep.chain[-1] + 1,
                        "value": value, "checks": checks}
        rep_ok = rep.agree and all(checks.values())
    else:
        rep_ok = rep.agree
    out.line("agree" if rep.agree else "DISAGREE")
    if not rep.agree:
        for i, s in enumerate(t.structures, 1):
            out.line(f"  {i}: {formats.structure_to_dict(s)}")
    out.put(**d)
    return out.finish(OK if rep_ok else FAIL)


def cmd_proof_check(args, out):
    d = formats.read_system(args.system)
    hyps = formats.read_wffs(args.hypotheses, d.lang)
    proof = formats.read_proof(args.proof, d.lang)
    goal = parse_wff(d.lang, args.goal) if args.goal else None
    rep = check_proof(d, hyps, proof, goal, literal_rules=args.literal_rules)
    out.put(**rep.to_dict())
    if rep.accepted:
        out.line(f"accepted ({len(proof.steps)} steps)")
    else:
        where = f" at step {rep.failed_step}" if rep.failed_step else ""
        out.line(f"rejected{where}: {rep.reason}")
    code = OK if rep.accepted else FAIL
    sem_path = args.sound_check or d.claimed_sound_for
    if rep.accepted and sem_path:
        t = formats.read_semantics(sem_path)
        target = goal if goal is not None else proof.steps[-1].wff
        bad = soundness_counterexamples(t, hyps, target)
        names = [s.name or str(t.structures.index(s) + 1) for s in bad]
        out.put(soundness_counterexamples=names)
        if bad:
            for s, name in zip(bad, names):
                value = Evaluation(s).wff(target)
                out.line(f"soundness counterexample: {name} models the hypotheses "
                         f"but the goal has value {value}")
            code = FAIL
        else:
            out.line(f"sound on {len(t)} structure(s)")
    return out.finish(code)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omlogic", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", "--json-out", dest="json_out", action="store_true",
                        help="machine-readable output")
    common.add_argument("--json-in", action="store_true",
                        help="read every input file as JSON")
    common.add_argument("--allow-nonsurjective", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("check-algebra", parents=[common])
    s.add_argument("path")
    s.add_argument("--boolean", action="store_true", help="also require all pairs compatible")
    s.set_defaults(func=cmd_check_algebra)

    s = sub.add_parser("center", parents=[common])
    s.add_argument("path")
    s.set_defaults(func=cmd_center)

    s = sub.add_parser("factorize", parents=[common])
    s.add_argument("path")
    s.set_defaults(func=cmd_factorize)

    s = sub.add_parser("enumerate", parents=[common])
    s.add_argument("n", type=int)
    s.add_argument("--ortho", action="store_true", help="list ortholattices instead")
    s.add_argument("--out", help="directory to write algebra files to")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("eval", parents=[common])
    s.add_argument("structure")
    s.add_argument("formula")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("model-check", parents=[common])
    s.add_argument("target", help="structure or semantics file")
    s.add_argument("gamma")
    s.set_defaults(func=cmd_model_check)

    s = sub.add_parser("verify-irreducible", parents=[common])
    s.add_argument("semantics", nargs="?")
    s.add_argument("gamma", nargs="?")
    s.add_argument("formula", nargs="?")
    s.add_argument("--saturate", action="store_true")
    s.add_argument("--trials", type=int, default=0)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--algebra-cap", type=int, default=8)
    s.set_defaults(func=cmd_verify_irreducible)

    s = sub.add_parser("proof-check", parents=[common])
    s.add_argument("system")
    s.add_argument("hypotheses")
    s.add_argument("proof")
    s.add_argument("--goal")
    s.add_argument("--sound-check", metavar="SEMANTICS")
    s.add_argument("--literal-rules", action="store_true")
    s.set_defaults(func=cmd_proof_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    formats.FORCE_JSON = args.json_in
    out = _Out(args.json_out)
    try:
        return args.func(args, out)
    except NotFactorClosed as e:
        _error(out, e, "precondition")
        return PRECONDITION
    except (OmlogicError, ValueError) as e:
        _error(out, e, "input")
        return BAD_INPUT
    finally:
        formats.FORCE_JSON = False


def _error(out, e, kind):
    if out.as_json:
        print(json.dumps({"error": kind, "type": type(e).__name__, "message": str(e)},
                         indent=2, sort_keys=True))
    else:
        print(f"error: {e}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
