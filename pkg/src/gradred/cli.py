"""Command-line front end: problem files in, verdict reports out.

Problem files are section/key/value text::

    # comment
    [variables]
    names = x1, x2, x3, x4

    [bivector]
    x1^x2 = 1
    x3^x4 = 1

    [submanifold]
    x4 = 0
    th4 = -x2*th1

Repeated keys accumulate (``generator = ...`` twice gives two generators).
A line starting with whitespace continues the previous value.

Exit status: 0 all audited conditions PASS, 1 some FAIL, 2 parse or usage
error, 3 UNKNOWN without FAIL.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .dgla import (
    ActionData,
    DGLASpec,
    audit_action,
    audit_crossed_module,
    audit_dgla,
    compute_D_and_invariance,
    crossed_module_to_dgla,
    dgla_to_crossed_module,
    mw_reduce,
)
from .exactpoly import Polynomial, parse_polynomial
from .exprparse import ParseError
from .gradedalg import GradedFunction, PoissonBivector, parse_graded
from .polylinalg import DEFAULT_SAMPLES
from .reduction import (
    FAIL,
    PASS,
    UNKNOWN,
    ReductionReport,
    check_coisotropic,
    check_marsden_ratiu,
    check_stages_A1,
    check_stages_A2,
    reduce_bivector_onC,
)
from .subman import DistributionSpec, SubmanifoldSpec, bracket_matrix_rank_probe, graph_form

EXIT = {PASS: 0, FAIL: 1, UNKNOWN: 3}
EXIT_PARSE = 2
ACT_TOL = 1e-8
CALIBRATION_TOL = 1e-9
MOMENT_TOL = 1e-6


class ProblemError(ValueError):
    """Problem-file error with a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, filename: str = "<input>"):
        self.message, self.line, self.column, self.filename = message, line, column, filename
        super().__init__(f"{filename}:{line}:{column}: {message}")


@dataclass
class Entry:
    key: str
    value: str
    line: int
    column: int


@dataclass
class Section:
    name: str
    line: int
    entries: list = field(default_factory=list)

    def get(self, key: str, default=None):
        hits = [e for e in self.entries if e.key == key]
        return hits[-1] if hits else default

    def all(self, key: str) -> list:
        return [e for e in self.entries if e.key == key]


@dataclass
class ProblemFile:
    filename: str
    sections: dict = field(default_factory=dict)

    def section(self, name: str):
        return self.sections.get(name)

    def error(self, message: str, where=None) -> ProblemError:
        line = getattr(where, "line", 0)
        col = getattr(where, "column", 0)
        return ProblemError(message, line, col, self.filename)

    def value(self, section: str, key: str, default=None):
        sec = self.section(section)
        e = sec.get(key) if sec else None
        return e.value if e else default


def parse_problem(text: str, filename: str = "<input>") -> ProblemFile:
    pf = ProblemFile(filename)
    current = None
    last = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        if body[0] in " \t" and last is not None:
            last.value = f"{last.value} {body.strip()}"
            continue
        stripped = body.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]") or len(stripped) < 3:
                raise ProblemError("malformed section header", lineno, 1, filename)
            name = stripped[1:-1].strip()
            if name in pf.sections:
                raise ProblemError(f"duplicate section [{name}]", lineno, 1, filename)
            current = pf.sections[name] = Section(name, lineno)
            last = None
            continue
        if current is None:
            raise ProblemError("entry outside of any section", lineno, 1, filename)
        if "=" not in body:
            raise ProblemError("expected 'key = value'", lineno, len(body) - len(body.lstrip()) + 1, filename)
        k, v = body.split("=", 1)
        col = len(k) + 2 + (len(v) - len(v.lstrip()))
        key = k.strip()
        if not key:
            raise ProblemError("empty key", lineno, 1, filename)
        last = Entry(key, v.strip(), lineno, col)
        current.entries.append(last)
    return pf


# -- payload builders ------------------------------------------------------

def _expr(pf: ProblemFile, entry: Entry, fn):
    try:
        return fn(entry.value)
    except ParseError as exc:
        raise ProblemError(exc.message, entry.line, entry.column + exc.column - 1, pf.filename) from None
    except (ValueError, KeyError) as exc:
        raise ProblemError(str(exc), entry.line, entry.column, pf.filename) from None


def _names(text: str) -> list:
    return [t.strip() for t in text.replace(";", ",").split(",") if t.strip()]


def build_variables(pf: ProblemFile) -> tuple:
    sec = pf.section("variables")
    if sec is None or sec.get("names") is None:
        raise pf.error("missing [variables] names")
    names = _names(sec.get("names").value)
    if len(set(names)) != len(names):
        raise pf.error("duplicate variable name", sec.get("names"))
    for n in names:
        if n.startswith("th") and n[2:].isdigit():
            raise pf.error(f"{n!r} is reserved for odd coordinates", sec.get("names"))
    return tuple(names)


def build_bivector(pf: ProblemFile, V: tuple) -> PoissonBivector:
    sec = pf.section("bivector")
    if sec is None:
        return PoissonBivector(V, {})
    entries = {}
    S = None
    for e in sec.entries:
        if e.key == "S":
            S = _expr(pf, e, lambda t: parse_graded(t, V).require_degree(2, "S"))
        elif "^" in e.key:
            a, b = (s.strip() for s in e.key.split("^", 1))
            if a not in V or b not in V:
                raise pf.error(f"unknown coordinate in {e.key!r}", e)
            p = _expr(pf, e, lambda t: parse_polynomial(t, V))
            entries[(a, b)] = entries.get((a, b), Polynomial.zero(V)) + p
        else:
            raise pf.error(f"unexpected key {e.key!r} in [bivector]", e)
    if S is not None:
        if entries:
            raise pf.error("give the bivector either as S or as entries, not both", sec)
        return PoissonBivector.from_function(S)
    return PoissonBivector(V, entries)


def build_submanifold(pf: ProblemFile, V: tuple, name: str, required: bool = False):
    sec = pf.section(name)
    if sec is None:
        if required:
            raise pf.error(f"missing [{name}]")
        return None
    even, odd, gens, constraints = {}, {}, [], []
    quotient = None
    for e in sec.entries:
        if e.key == "generator":
            gens.append(_expr(pf, e, lambda t: parse_graded(t, V).require_degree(1, "generator")))
        elif e.key == "constraint":
            constraints.append(_expr(pf, e, lambda t: parse_polynomial(t, V)))
        elif e.key == "quotient":
            quotient = _names(e.value)
            bad = [q for q in quotient if q not in V]
            if bad:
                raise pf.error(f"unknown quotient coordinate {bad[0]!r}", e)
        elif e.key in V:
            even[e.key] = _expr(pf, e, lambda t: parse_polynomial(t, V))
        elif e.key.startswith("th") and e.key[2:].isdigit():
            if not 1 <= int(e.key[2:]) <= len(V):
                raise pf.error(f"odd coordinate {e.key} out of range", e)
            odd[e.key] = _expr(pf, e, lambda t: parse_graded(t, V).require_degree(1, e.key))
        else:
            raise pf.error(f"unexpected key {e.key!r} in [{name}]", e)
    if constraints:
        try:
            extra = graph_form(constraints)
        except ValueError as exc:
            raise pf.error(str(exc), sec) from None
        clash = set(extra) & set(even)
        if clash:
            raise pf.error(f"coordinate {sorted(clash)[0]} solved twice", sec)
        even.update(extra)
    try:
        return SubmanifoldSpec(V, even, odd, gens, quotient, name=name)
    except (ValueError, KeyError) as exc:
        raise pf.error(str(exc), sec) from None


def build_distribution(pf: ProblemFile, V: tuple, label: str):
    sec = pf.section(f"distribution.{label}")
    if sec is None:
        return None
    gens = []
    for e in sec.entries:
        if e.key != "generator":
            raise pf.error(f"unexpected key {e.key!r} in [distribution.{label}]", e)
        gens.append(_expr(pf, e, lambda t: parse_graded(t, V).require_degree(1, "generator")))
    return DistributionSpec(V, gens)


def _lincomb(pf: ProblemFile, entry: Entry, basis: list) -> list:
    p = _expr(pf, entry, lambda t: parse_polynomial(t, basis) if basis else parse_polynomial(t, ["_"]))
    if p.degree() > 1 or (p and p.terms.get((0,) * len(p.vars))):
        raise pf.error("expected a linear combination of basis symbols", entry)
    return [Fraction(p.diff(b).constant_value()) if p.diff(b) else Fraction(0) for b in basis]


def build_dgla(pf: ProblemFile) -> DGLASpec | None:
    sec = pf.section("dgla")
    if sec is None:
        return None
    try:
        g = int(pf.value("dgla", "dim_g", "0"))
        h = int(pf.value("dgla", "dim_h", "0"))
    except ValueError:
        raise pf.error("dim_g and dim_h must be integers", sec) from None
    vs = [f"v{i + 1}" for i in range(g)]
    ws = [f"w{a + 1}" for a in range(h)]
    gg = [[[Fraction(0)] * g for _ in range(g)] for _ in range(g)]
    gh = [[[Fraction(0)] * h for _ in range(h)] for _ in range(g)]
    delta = [[Fraction(0)] * h for _ in range(g)]
    for e in sec.entries:
        key = e.key.replace(" ", "")
        if key in ("dim_g", "dim_h"):
            continue
        if key.startswith("[") and key.endswith("]") and "," in key:
            a, b = key[1:-1].split(",", 1)
            if a in vs and b in vs:
                i, j = vs.index(a), vs.index(b)
                vec = _lincomb(pf, e, vs)
                gg[i][j] = vec
                gg[j][i] = [-c for c in vec]
            elif a in vs and b in ws:
                gh[vs.index(a)][ws.index(b)] = _lincomb(pf, e, ws)
            else:
                raise pf.error(f"unsupported bracket {e.key!r}", e)
        elif key.startswith("delta") and key[5:] in ws:
            vec = _lincomb(pf, e, vs)
            a = ws.index(key[5:])
            for k in range(g):
                delta[k][a] = vec[k]
        else:
            raise pf.error(f"unexpected key {e.key!r} in [dgla]", e)
    return DGLASpec(g, h, gg, gh, delta)


def build_action(pf: ProblemFile, V: tuple, pi: PoissonBivector, spec: DGLASpec) -> ActionData | None:
    sec = pf.section("action")
    if sec is None:
        return None
    J0 = [Polynomial.zero(V) for _ in range(spec.dim_h)]
    J1 = [GradedFunction.zero(V) for _ in range(spec.dim_g)]
    for e in sec.entries:
        parts = e.key.split()
        if len(parts) == 2 and parts[0] == "J0" and parts[1][:1] == "w" and parts[1][1:].isdigit():
            a = int(parts[1][1:]) - 1
            if not 0 <= a < spec.dim_h:
                raise pf.error(f"{parts[1]} out of range", e)
            J0[a] = _expr(pf, e, lambda t: parse_polynomial(t, V))
        elif len(parts) == 2 and parts[0] == "J1" and parts[1][:1] == "v" and parts[1][1:].isdigit():
            i = int(parts[1][1:]) - 1
            if not 0 <= i < spec.dim_g:
                raise pf.error(f"{parts[1]} out of range", e)
            J1[i] = _expr(pf, e, lambda t: parse_graded(t, V).require_degree(1, "J1 component"))
        else:
            raise pf.error(f"unexpected key {e.key!r} in [action]", e)
    return ActionData(J0, J1, pi)


# -- reports -----------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return f"{obj:.3e}"
    try:
        import numpy as np

        if isinstance(obj, np.generic):
            return _jsonable(obj.item())
    except ImportError:  # pragma: no cover
        pass
    return str(obj)


def render_json(doc: dict) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def worst(*statuses) -> str:
    if FAIL in statuses:
        return FAIL
    if UNKNOWN in statuses:
        return UNKNOWN
    return PASS


def _human(rep: ReductionReport) -> list:
    lines = [f"{rep.theorem}: {rep.status}"]
    for name, v in rep.verdicts.items():
        tag = "" if v.required else " (info)"
        wit = f"  witness: {v.witness}" if v.witness else ""
        lines.append(f"  {name:<22}{v.status}{tag}{wit}")
    return lines


@dataclass
class Outcome:
    status: str
    doc: dict
    text: list


def _problem_meta(pf: ProblemFile) -> dict:
    return {"file": Path(pf.filename).name, "name": pf.value("problem", "name", "")}


def cmd_check(pf: ProblemFile, args, reduce: bool = False) -> Outcome:
    V = build_variables(pf)
    pi = build_bivector(pf, V)
    theorem = pf.value("problem", "theorem", "coisotropic")
    C = build_submanifold(pf, V, "submanifold") or SubmanifoldSpec(V, name="submanifold")
    E, D, Dc = (build_distribution(pf, V, k) for k in ("E", "D", "Dc"))
    samples = args.samples if args.samples is not None else DEFAULT_SAMPLES
    seed = args.seed if args.seed is not None else 0
    kw = dict(samples=samples, seed=seed, degree_bound=args.degree_bound)
    doc = {"problem": _problem_meta(pf), "command": "reduce" if reduce else "check", "seed": seed, "samples": samples}
    if theorem == "presymplectic":
        Cm = C.with_generators(E.generators) if E else C
        probe = bracket_matrix_rank_probe(Cm, samples, seed)
        status = {"CONSTANT": PASS, "NOT_CONSTANT": FAIL}.get(probe.verdict, UNKNOWN)
        doc.update(theorem="PRESYMPLECTIC", status=status, probe=probe.as_dict())
        text = [f"PRESYMPLECTIC: {status} ({probe.verdict})", f"  degree-0 rank {probe.degree0.generic}"]
        if probe.gamma_witness:
            text.append(f"  involutivity witness: {probe.gamma_witness}")
        return Outcome(status, doc, text)
    try:
        if theorem == "coisotropic":
            rep = check_coisotropic(C, pi, E, **kw)
        elif theorem == "marsden-ratiu":
            rep = check_marsden_ratiu(C, pi, E, **kw)
        elif theorem in ("stages-A1", "stages-A2"):
            A = build_submanifold(pf, V, "stage.A", required=True)
            if theorem == "stages-A1":
                rep = check_stages_A1(C, A, pi, E, D, **kw)
            else:
                rep = check_stages_A2(C, A, pi, E, D, Dc, **kw)
        else:
            raise pf.error(f"unknown theorem {theorem!r}", pf.section("problem").get("theorem"))
    except ProblemError:
        raise
    doc.update(rep.as_dict())
    text = _human(rep)
    status = rep.status
    bivector = rep.reduced_bivector or rep.descended_bivector
    if bivector is not None:
        text.append(f"  bivector: {bivector}")
    if rep.jacobi_defect is not None:
        text.append(f"  jacobi defect: {rep.jacobi_defect if rep.jacobi_defect else 0}")
    if reduce:
        if bivector is None:
            text.append("  no bivector descends")
            status = worst(status, FAIL)
        if "onC" in _names(pf.value("problem", "route", "")):
            try:
                onc = reduce_bivector_onC(pi, C, E)
                doc["onC_bivector"] = str(onc)
                agree = bivector is not None and onc == bivector
                doc["route_agreement"] = agree
                text.append(f"  onC route: {onc} ({'agrees' if agree else 'DIFFERS'})")
                if not agree:
                    status = worst(status, FAIL)
            except ValueError as exc:
                doc["onC_error"] = str(exc)
                text.append(f"  onC route unavailable: {exc}")
                status = worst(status, UNKNOWN)
        doc["status"] = status
    return Outcome(status, doc, text)


def cmd_dgla(pf: ProblemFile, args) -> Outcome:
    spec = build_dgla(pf)
    if spec is None:
        raise pf.error("missing [dgla]")
    doc = {"problem": _problem_meta(pf), "command": "dgla-check", "dgla": spec.to_dict()}
    reports = [audit_dgla(spec)]
    if reports[0].status == PASS:
        cm = dgla_to_crossed_module(spec)
        cmr = audit_crossed_module(cm)
        back = crossed_module_to_dgla(cm) if cmr.status == PASS else None
        cmr.add("round_trip", PASS if back == spec else FAIL)
        reports.append(cmr)
    if pf.section("action") is not None:
        V = build_variables(pf)
        pi = build_bivector(pf, V)
        data = _expr_action(pf, V, pi, spec)
        reports.append(audit_action(data, spec))
        if spec.dim_h:
            try:
                reports.append(compute_D_and_invariance(data, args.samples or DEFAULT_SAMPLES, args.seed or 0).verdicts)
            except ValueError as exc:
                r = ReductionReport("D_INVARIANCE")
                r.add("J0_submersion", UNKNOWN, detail=str(exc))
                reports.append(r)
    status = worst(*(r.status for r in reports))
    doc["reports"] = [r.as_dict() for r in reports]
    doc["status"] = status
    text = [line for r in reports for line in _human(r)]
    return Outcome(status, doc, text)


def _expr_action(pf, V, pi, spec):
    try:
        return build_action(pf, V, pi, spec)
    except ValueError as exc:
        if isinstance(exc, ProblemError):
            raise
        raise pf.error(str(exc), pf.section("action")) from None


def _pair_action(pf: ProblemFile):
    from .liegroupoid import PairGroupoidAction, vector_crossed_module

    V = build_variables(pf)
    pi = build_bivector(pf, V)
    spec = build_dgla(pf)
    if spec is None or pf.section("action") is None:
        raise pf.error("act-verify and mw-quotient need [dgla] and [action]")
    kind = pf.value("groups", "realization", "vector")
    if kind != "vector":
        raise pf.error(f"unsupported group realization {kind!r}", pf.section("groups"))
    if any(c for m in spec.bracket_gg for r in m for c in r):
        raise pf.error("vector realizations need an abelian g", pf.section("dgla"))
    data = _expr_action(pf, V, pi, spec)
    delta = [[float(c) for c in row] for row in spec.delta] if spec.dim_g else [[] for _ in range(0)]
    lam = [[[float(spec.bracket_gh[i][a][b]) for a in range(spec.dim_h)] for b in range(spec.dim_h)] for i in range(spec.dim_g)]
    import numpy as np

    D = np.array(delta, dtype=float).reshape(spec.dim_g, spec.dim_h)
    cm = vector_crossed_module(D, lam)
    try:
        return PairGroupoidAction(data, cm), spec
    except ValueError as exc:
        raise pf.error(str(exc), pf.section("action")) from None


def cmd_act_verify(pf: ProblemFile, args) -> Outcome:
    from .liegroupoid import check_flow_agreement, verify_kxky

    action, _ = _pair_action(pf)
    samples = args.samples if args.samples is not None else int(pf.value("pairgroupoid", "samples", "100"))
    seed = args.seed if args.seed is not None else int(pf.value("pairgroupoid", "seed", "0"))
    stats = verify_kxky(action, samples, seed)
    stats["moment_map"] = [str(p) for p in action.moment_map()]
    stats["moment_map_deviation"] = action.check_moment_map(seed=seed)
    stats["flow_agreement"] = check_flow_agreement(action, seed=seed)
    checks = {
        "classification": stats["classification_errors"] == 0,
        "composition": stats["max_deviation"] <= ACT_TOL,
        "source": stats["source_deviation"] <= ACT_TOL,
        "target": stats["target_deviation"] <= ACT_TOL,
        "kxy": stats["kxy_deviation"] <= ACT_TOL,
        "interchange": stats["interchange_deviation"] <= ACT_TOL,
        "calibration": action.calibration["deviation"] <= CALIBRATION_TOL,
        "flows": stats["flow_agreement"] <= CALIBRATION_TOL,
        "moment_map": stats["moment_map_deviation"] <= MOMENT_TOL,
    }
    status = PASS if all(checks.values()) else FAIL
    doc = {"problem": _problem_meta(pf), "command": "act-verify", "statistics": stats,
           "checks": {k: PASS if v else FAIL for k, v in checks.items()}, "status": status}
    text = [f"ACT-VERIFY: {status} (samples {samples}, seed {seed})",
            f"  classification errors {stats['classification_errors']}",
            f"  max deviation {stats['max_deviation']:.3e}",
            f"  calibration sign {action.calibration['sign']} deviation {action.calibration['deviation']:.3e}",
            f"  moment map {', '.join(stats['moment_map'])}"]
    text += [f"  {k:<16}{'PASS' if v else 'FAIL'}" for k, v in checks.items()]
    return Outcome(status, doc, text)


def cmd_mw(pf: ProblemFile, args) -> Outcome:
    from .liegroupoid import mw_quotient_pair

    action, spec = _pair_action(pf)
    samples = args.samples if args.samples is not None else 8
    seed = args.seed if args.seed is not None else 0
    try:
        res = mw_quotient_pair(action, samples, seed)
    except ValueError as exc:
        raise pf.error(str(exc), pf.section("action")) from None
    statuses = []
    doc = {"problem": _problem_meta(pf), "command": "mw-quotient"}
    text = []
    for label in ("global", "mw"):
        r = res[label]
        st = r.report.status
        if r.multiplicative == FAIL:
            st = worst(st, FAIL)
        statuses.append(st)
        doc[label] = r.as_dict()
        text.append(f"{label} quotient of the pair groupoid: {st}")
        text.append(f"  coordinates {', '.join(r.quotient_coords)}")
        text.append(f"  bivector {r.bivector}")
        text.append(f"  multiplicative {r.multiplicative} {r.multiplicative_detail}".rstrip())
    base = mw_reduce(action.data, spec, degree_bound=args.degree_bound)
    doc["base"] = base.as_dict()
    statuses.append(base.status)
    text.append(f"base quotient J0^-1(0)/G: {base.status}  bivector {base.reduced_bivector}")
    status = worst(*statuses)
    doc["status"] = status
    return Outcome(status, doc, text)


COMMANDS = {
    "check": lambda pf, a: cmd_check(pf, a),
    "reduce": lambda pf, a: cmd_check(pf, a, reduce=True),
    "dgla-check": cmd_dgla,
    "act-verify": cmd_act_verify,
    "mw-quotient": cmd_mw,
}


def fixture_paths() -> list:
    root = resources.files("gradred") / "fixtures"
    return sorted((p for p in root.iterdir() if p.name.endswith(".grp")), key=lambda p: p.name)


def run_file(path, command: str | None, args) -> Outcome:
    text = Path(path).read_text(encoding="utf-8") if not hasattr(path, "read_text") else path.read_text(encoding="utf-8")
    pf = parse_problem(text, str(path))
    cmd = command or pf.value("problem", "command")
    if cmd not in COMMANDS:
        raise pf.error(f"unknown command {cmd!r}")
    return COMMANDS[cmd](pf, args)


def cmd_examples(args) -> Outcome:
    rows, text = [], []
    ok = True
    for p in fixture_paths():
        pf = parse_problem(p.read_text(encoding="utf-8"), p.name)
        cmd = pf.value("problem", "command", "check")
        expect = pf.value("problem", "expect", PASS)
        out = COMMANDS[cmd](pf, args)
        match = out.status == expect
        ok &= match
        rows.append({"fixture": p.name, "command": cmd, "expect": expect, "status": out.status, "match": match})
        text.append(f"{'ok  ' if match else 'BAD '} {p.name:<28}{cmd:<12}{out.status:<8}(expected {expect})")
    status = PASS if ok else FAIL
    return Outcome(status, {"command": "examples", "fixtures": rows, "status": status}, text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gradred", description="Graded Poisson reduction audits")
    ap.add_argument("command", choices=sorted(COMMANDS) + ["examples"])
    ap.add_argument("file", nargs="?", help="problem file (not used by 'examples')")
    ap.add_argument("--degree-bound", type=int, default=None, help="lift solver degree bound")
    ap.add_argument("--samples", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--report", default=None, help="write the machine report here ('-' for stdout)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    if args.command != "examples" and not args.file:
        print("gradred: a problem file is required", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "examples":
            out = cmd_examples(args)
        else:
            out = run_file(args.file, args.command, args)
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = render_json(out.doc)
    if args.report and args.report != "-":
        Path(args.report).write_text(report, encoding="utf-8")
        human = sys.stdout
    else:
        sys.stdout.write(report)
        human = sys.stderr
    for line in out.text:
        print(line, file=human)
    return EXIT[out.status]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
