"""Command-line front end.

Exit status: 0 when every query is decided, 2 when some verdict is Unknown,
1 on input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__, ali, graphs, groups, membership, oracle, solver
from .decision import DEFAULT_FUEL, UNKNOWN, Decision, Fuel
from .parse import ParseError, parse_problem
from .words import format_word

_VERDICT = {"Trivial": "trivial", "NonTrivial": "nontrivial", "In": "in", "NotIn": "not_in",
            "Unknown": "unknown"}


def _witness_text(w):
    if w is None:
        return None
    if isinstance(w, membership.MembershipWitness):
        return format_word(tuple((f"g{i}", e) for i, e in w.word))
    if isinstance(w, tuple):
        return format_word(w)
    return str(w)


def _record(query, d: Decision, fuel: Fuel, want_trace):
    rec = {"query": query, "verdict": _VERDICT.get(d.verdict, d.verdict)}
    wit = _witness_text(d.witness)
    if wit is not None:
        rec["witness"] = wit
    if d.reason:
        rec["reason"] = d.reason
    if want_trace:
        rec["trace"] = d.trace
    rec["fuel_used"] = fuel.used
    return rec


def _cmd_wp(prob, args):
    out = []
    for q in _queries(prob, "wp"):
        fuel = Fuel(args.fuel)
        if prob.relator is None:
            ok = groups.gp_word_problem(prob.group, q.word)
            d = Decision("Trivial" if ok else "NonTrivial", trace=[{"step": "graph-product"}])
        else:
            d = solver.solve_word_problem(prob.group, prob.relator, q.word, fuel)
        out.append(_record(f"wp: {q.text}", d, fuel, args.trace))
    return out


def _cmd_member(prob, args):
    out = []
    for q in _queries(prob, "member"):
        fuel = Fuel(args.fuel)
        d = membership.member(groups.MarkedSubgroup(prob.group, q.subset), q.word, fuel)
        out.append(_record(q.text, d, fuel, args.trace))
    return out


def _cmd_epi(prob, args):
    out = []
    for q in _queries(prob, "member"):
        try:
            epi = ali.epi_to_Z(prob.group, list(q.subset))
        except ali.TrivialSubgroup:
            out.append({"query": q.text, "verdict": "trivial-subgroup", "fuel_used": 0})
            continue
        rec = {"query": q.text, "verdict": "epimorphism", "images": list(epi.images)}
        d = membership.member(groups.MarkedSubgroup(prob.group, q.subset), q.word, Fuel(args.fuel))
        if d.verdict == "In":
            rec["image_of_word"] = epi(d.witness.word)
        rec["fuel_used"] = 0
        out.append(rec)
    return out


def _cmd_nf(prob, args):
    out = []
    for q in _queries(prob, "wp"):
        nf = groups.gp_normal_form(prob.group, q.word)
        syl = [[v, list(vec)] for v, vec in nf.syllables]
        out.append({"query": q.text, "verdict": "normal-form",
                    "normal_form": format_word(groups.nf_to_word(prob.group, nf)),
                    "syllables": syl, "fuel_used": 0})
    return out


def _cmd_frei(prob, args):
    if prob.relator is None:
        raise _InputError("frei needs a relator line")
    out = []
    for q in _queries(prob, "frei"):
        u = set(q.subset)
        g = prob.group.graph
        if u <= set(graphs.nodes(g)):
            ok, pred = solver.freiheitssatz_nodal(prob.group, prob.relator, u), "nodal"
        elif graphs.spans_sub_star(g, u):
            ok, pred = solver.freiheitssatz_substar(prob.group, prob.relator, u), "sub-star"
        else:
            raise _InputError(f"{q.text}: the vertex set is neither a set of nodes nor a sub-star")
        out.append({"query": q.text, "verdict": "guaranteed" if ok else "no-guarantee",
                    "predicate": pred, "fuel_used": 0})
    return out


def _queries(prob, kind):
    qs = [q for q in prob.queries if q.kind == kind]
    if not qs:
        raise _InputError(f"the file has no {kind} queries")
    return qs


class _InputError(Exception):
    pass


# -- check suites ----------------------------------------------------------------------

def _suite_bs12(radius=7):
    from .magnus import normalize_instance, quotient_word_problem
    from .words import parse_word
    inst = normalize_instance(("a",), ("b",), (), parse_word("a b a^-1 b^-2"))
    words = oracle.word_ball("ab", radius)
    agree = sum((quotient_word_problem(inst, w).verdict == "Trivial") == oracle.rep_oracle_bs12(w)
                for w in words)
    return "bs12", len(words), agree


def _suite_z2(radius=7):
    from .magnus import normalize_instance, quotient_word_problem
    from .words import parse_word
    rel = parse_word("a b a^-1 b^-1")
    inst = normalize_instance(("a",), ("b",), (), rel)
    words = oracle.word_ball("ab", radius)
    agree = sum((quotient_word_problem(inst, w).verdict == "Trivial")
                == oracle.abelian_oracle(("a", "b"), [rel], w) for w in words)
    return "z2", len(words), agree


def _suite_path(radius=6):
    from .words import parse_word
    g = groups.raag(graphs.path_graph(["v1", "v2", "v3"]))
    rel = parse_word("v1 v3 v2")
    gens = ("v1", "v2", "v3")
    comm = [parse_word("v1 v2 v1^-1 v2^-1"), parse_word("v2 v3 v2^-1 v3^-1")]
    words = oracle.word_ball(gens, radius)
    agree = sum((solver.solve_word_problem(g, rel, w).verdict == "Trivial")
                == oracle.abelian_oracle(gens, [rel] + comm, w) for w in words)
    return "path", len(words), agree


SUITES = {"bs12": _suite_bs12, "z2": _suite_z2, "path": _suite_path}


def _cmd_check(args):
    name, total, agree = SUITES[args.suite]()
    pct = 100.0 * agree / total if total else 100.0
    return [{"query": f"check {name}", "verdict": "agree" if agree == total else "disagree",
             "cases": total, "agreements": agree, "agreement_percent": round(pct, 2),
             "fuel_used": 0}]


# -- entry points --------------------------------------------------------------------------

def _parser():
    p = argparse.ArgumentParser(prog="starwp", description="One-relator quotients of starred graph "
                                "products of free abelian groups.")
    p.add_argument("--version", action="version", version=f"starwp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("wp", "word problem in the one-relator quotient"),
                           ("member", "subgroup membership in the graph product"),
                           ("frei", "Freiheitssatz embedding predicates"),
                           ("epi", "epimorphism onto Z of finitely generated subgroups"),
                           ("nf", "normal forms in the graph product")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("file")
        _common(s)
    s = sub.add_parser("check", help="oracle cross-check suite")
    s.add_argument("suite", choices=sorted(SUITES))
    _common(s)
    return p


def _common(s):
    s.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="work budget per query")
    s.add_argument("--trace", action="store_true", help="include the decomposition trace")
    s.add_argument("--format", choices=("json", "text"), default="json")


def _emit(records, fmt, stream):
    for rec in records:
        if fmt == "json":
            stream.write(json.dumps(rec, sort_keys=False) + "\n")
            continue
        extra = ""
        if "witness" in rec:
            extra += f" witness={rec['witness']}"
        if "reason" in rec:
            extra += f" reason={rec['reason']}"
        for key in ("images", "normal_form", "agreement_percent", "predicate"):
            if key in rec:
                extra += f" {key}={rec[key]}"
        stream.write(f"{rec['query']}: {rec['verdict']}{extra}\n")
        for step in rec.get("trace", []):
            stream.write("  " + " ".join(f"{k}={v}" for k, v in step.items()) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.command == "check":
            records = _cmd_check(args)
        else:
            try:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise _InputError(f"cannot read {args.file}: {exc.strerror}") from None
            prob = parse_problem(text)
            records = {"wp": _cmd_wp, "member": _cmd_member, "epi": _cmd_epi, "nf": _cmd_nf,
                       "frei": _cmd_frei}[args.command](prob, args)
    except ParseError as exc:
        stderr.write(f"{getattr(args, 'file', '')}:{exc.line}:{exc.column}: error: {exc.message}\n")
        return 1
    except (_InputError, graphs.GraphError, groups.UnsupportedGroup, groups.ForeignGenerator) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        stderr.write(f"error: {msg}\n")
        return 1
    _emit(records, args.format, stdout)
    if any(r.get("verdict") == _VERDICT[UNKNOWN] for r in records):
        return 2
    if any(r.get("verdict") == "disagree" for r in records):
        return 2
    return 0


def main():
    sys.exit(run())
