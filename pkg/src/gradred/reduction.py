"""Hypothesis audits and reduced brackets for Poisson reduction.

Four audit entry points share one report type:

* ``check_coisotropic``   E inside TC, closure of the vanishing ideal,
* ``check_marsden_ratiu`` presymplectic C with sharp(E°) tangent to C,
* ``check_stages_A1`` / ``check_stages_A2``  reduction through an
  intermediate coisotropic submanifold A with distribution D.

Functional conditions are audited on finite frames: a condition of the form
"brackets of E-basic functions are F-basic" becomes "{S, X} lies in the
ideal" for X running over a frame of the degree-1 normalizer-ideal overlap.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactpoly import Polynomial
from .gradedalg import (
    GradedFunction,
    PoissonBivector,
    jacobi_defect,
    odd_name,
    schouten_bracket,
)
from .polylinalg import (
    DEFAULT_SAMPLES,
    determinant,
    generic_rank,
    nullspace,
    rank_info,
    solve_rational,
    span_contains,
)
from .subman import DistributionSpec, SubmanifoldSpec, format_vector

PASS, FAIL, UNKNOWN = "PASS", "FAIL", "UNKNOWN"


class LiftError(ValueError):
    """No polynomial lift exists within the degree bound."""


class BasicnessError(ValueError):
    """A reduced bracket depends on directions along F."""


@dataclass
class Verdict:
    status: str
    witness: str = ""
    required: bool = True
    detail: str = ""

    def as_dict(self) -> dict:
        d = {"status": self.status, "required": self.required}
        if self.witness:
            d["witness"] = self.witness
        if self.detail:
            d["detail"] = self.detail
        return d


def _bivector_dict(P: PoissonBivector) -> dict:
    return {
        "coords": list(P.vars),
        "entries": {f"{a}^{b}": str(p) for a, b, p in P.entries()},
        "text": str(P),
    }


@dataclass
class ReductionReport:
    theorem: str
    verdicts: dict = field(default_factory=dict)
    reduced_bivector: PoissonBivector | None = None
    descended_bivector: PoissonBivector | None = None
    jacobi_defect: GradedFunction | None = None
    lift_table: dict = field(default_factory=dict)
    frames: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, name: str, status: str, witness: str = "", required: bool = True, detail: str = ""):
        self.verdicts[name] = Verdict(status, witness, required, detail)

    def status_of(self, name: str) -> str:
        return self.verdicts[name].status

    @property
    def required_status(self) -> str:
        st = [v.status for v in self.verdicts.values() if v.required]
        if FAIL in st:
            return FAIL
        if UNKNOWN in st:
            return UNKNOWN
        return PASS

    @property
    def status(self) -> str:
        return self.required_status

    def as_dict(self) -> dict:
        d = {
            "theorem": self.theorem,
            "status": self.status,
            "verdicts": {k: v.as_dict() for k, v in self.verdicts.items()},
            "lifts": {k: str(v) for k, v in self.lift_table.items()},
            "frames": self.frames,
        }
        if self.reduced_bivector is not None:
            d["reduced_bivector"] = _bivector_dict(self.reduced_bivector)
        if self.descended_bivector is not None:
            d["descended_bivector"] = _bivector_dict(self.descended_bivector)
        if self.jacobi_defect is not None:
            d["jacobi_defect"] = str(self.jacobi_defect)
        if self.notes:
            d["notes"] = list(self.notes)
        return d


# -- shared helpers -------------------------------------------------------

def _merge_distribution(C: SubmanifoldSpec, E: DistributionSpec | None) -> SubmanifoldSpec:
    if E is None or not E.generators:
        return C
    return C.with_generators(E.generators)


def _dot(cov, vec, ctx) -> Polynomial:
    acc = Polynomial.zero(ctx)
    for a, b in zip(cov, vec):
        if a and b:
            acc = acc + a * b
    return acc


def _on(C: SubmanifoldSpec, vec) -> list:
    return [C.restrict_poly(p) for p in vec]


def _sharp_family(pi: PoissonBivector, C: SubmanifoldSpec, covs) -> list:
    return [_on(C, pi.sharp(c)) for c in covs]


def _first_outside(C: SubmanifoldSpec, vecs, inside) -> str:
    for v in vecs:
        if not inside(v):
            return format_vector(v, C.vars)
    return ""


def _f_checks(report: ReductionReport, C: SubmanifoldSpec, pts):
    fr = C.f_rank(pts)
    if fr.constant:
        report.add("F_constant_rank", PASS, detail=f"rank {fr.generic}")
    else:
        report.add("F_constant_rank", UNKNOWN, detail=f"generic rank {fr.generic}, sampled min {fr.sampled_min}")
    fields = C.f_fields()
    report.frames["F"] = [str(Y) for Y in fields]
    for i, Y in enumerate(fields):
        for Z in fields[i + 1:]:
            r = C.restrict(schouten_bracket(Y, Z))
            if r:
                report.add("F_involutive", FAIL, witness=str(r))
                return
    report.add("F_involutive", PASS)


def normalizer_frame(C: SubmanifoldSpec) -> tuple:
    """Frame of N(I)_1 cap I_1 modulo I * I_1.

    Elements have the form X = sum_k c_k Y_k + sum_{a,u} v_au g_a th_u with Y_k
    an F frame, g_a the even generators and th_u the unsolved odd
    coordinates.  Requiring {X, X_b} in I for every E generator X_b is a
    linear system over the function field of C; its polynomial kernel is the
    frame.  Returns (frame, ok) where ok is False if a frame element fails
    the normalizer test on re-verification.
    """
    ctx = C.vars
    Ys = C.f_fields()
    gens = C.odd_generators()
    evens = C.even_generators()
    U = C.unsolved_odd
    cols = [("Y", k, None) for k in range(len(Ys))] + [("g", a, u) for a in range(len(evens)) for u in U]
    if not cols:
        return [], True
    pieces = []
    for kind, k, u in cols:
        if kind == "Y":
            pieces.append(Ys[k])
        else:
            pieces.append(evens[k] * GradedFunction.odd(ctx, u))
    rows = []
    for Xb in gens:
        brs = [C.restrict(schouten_bracket(P, Xb)) for P in pieces]
        for u in U:
            rows.append([b.component((u,)) for b in brs])
    if rows:
        kern = nullspace(rows, len(cols), ctx)
    else:
        kern = [[Polynomial.constant(ctx, 1 if i == j else 0) for i in range(len(cols))] for j in range(len(cols))]
    frame = []
    for vec in kern:
        X = GradedFunction.zero(ctx)
        for coef, P in zip(vec, pieces):
            if coef:
                X = X + P * coef
        if X:
            frame.append(X)
    ok = all(not C.restrict(schouten_bracket(X, Xb)) for X in frame for Xb in gens)
    return frame, ok


def _condi1(report: ReductionReport, C: SubmanifoldSpec, pi: PoissonBivector, pts, required=True):
    sharpE = _sharp_family(pi, C, C.e_annihilator())
    st, det = span_contains(C.e_frame() + C.tc_frame(), sharpE, pts)
    report.add("condi1", st, witness=det if st != PASS else "", required=required)


def _condi2(report: ReductionReport, C: SubmanifoldSpec, S: GradedFunction, required=True, name="condi2"):
    frame, ok = normalizer_frame(C)
    report.frames["normalizer_I1"] = [str(X) for X in frame]
    if not ok:
        report.add(name, UNKNOWN, required=required, detail="normalizer frame failed re-verification")
        return
    for X in frame:
        r = C.restrict(schouten_bracket(S, X))
        if r:
            report.add(name, FAIL, witness=f"{{S, {X}}} = {r} mod I", required=required)
            return
    report.add(name, PASS, required=required, detail=f"frame of {len(frame)} fields")


def _halfnorm(report: ReductionReport, C: SubmanifoldSpec, pi: PoissonBivector):
    vecs = _sharp_family(pi, C, C.conormal())
    bad = _first_outside(C, vecs, C.vector_in_e)
    report.add("halfnorm", FAIL if bad else PASS, witness=bad, required=False)


def _descend(report: ReductionReport, C, pi, degree_bound, emit_reduced: bool):
    """Compute the bracket on the quotient and its Jacobi defect."""
    try:
        P, lifts = reduce_bivector(C, pi, degree_bound=degree_bound)
    except (LiftError, BasicnessError) as exc:
        report.notes.append(f"bivector not computed: {exc}")
        if emit_reduced:
            report.add("lift", FAIL, witness=str(exc))
        return
    report.lift_table = lifts
    defect = jacobi_defect(P)
    report.jacobi_defect = defect
    report.descended_bivector = P
    report.add("jacobi", PASS if defect.is_zero() else FAIL, witness=str(defect) if defect else "")
    if emit_reduced and report.required_status == PASS:
        report.reduced_bivector = P


# -- coisotropic ----------------------------------------------------------

def check_coisotropic(
    C: SubmanifoldSpec,
    pi: PoissonBivector,
    E: DistributionSpec | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    degree_bound: int | None = None,
) -> ReductionReport:
    C = _merge_distribution(C, E)
    S = pi.to_function()
    pts = C.samples(samples, seed)
    rep = ReductionReport("COISO")
    bad = _first_outside(C, C.e_frame(), C.vector_in_tc)
    rep.add("E_in_TC", FAIL if bad else PASS, witness=bad)
    gens = C.odd_generators()
    wit = ""
    for i, X in enumerate(gens):
        for Y in gens[i + 1:]:
            r = C.restrict(schouten_bracket(X, Y))
            if r:
                wit = f"[{X}, {Y}] = {r} mod I"
                break
        if wit:
            break
    rep.add("E_involutive", FAIL if wit else PASS, witness=wit)
    er = rank_info(C.e_frame(), pts) if C.e_frame() else None
    if er is not None and not er.constant:
        rep.add("E_constant_rank", UNKNOWN, detail="rank drop at a sample")
    vecs = _sharp_family(pi, C, C.conormal())
    bad = _first_outside(C, vecs, C.vector_in_e)
    rep.add("sharp_NC_in_E", FAIL if bad else PASS, witness=bad)
    wit = ""
    for X in gens:
        r = C.restrict(schouten_bracket(S, X))
        if r:
            wit = f"{{S, {X}}} = {r} mod I"
            break
    rep.add("closure", FAIL if wit else PASS, witness=wit)
    rep.frames["E"] = [str(X) for X in gens]
    if rep.required_status == PASS:
        _descend(rep, C, pi, degree_bound, emit_reduced=True)
    return rep


# -- Marsden-Ratiu --------------------------------------------------------

def check_marsden_ratiu(
    C: SubmanifoldSpec,
    pi: PoissonBivector,
    E: DistributionSpec | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    degree_bound: int | None = None,
) -> ReductionReport:
    C = _merge_distribution(C, E)
    S = pi.to_function()
    pts = C.samples(samples, seed)
    rep = ReductionReport("MARSDEN_RATIU")
    _f_checks(rep, C, pts)
    sharpE = _sharp_family(pi, C, C.e_annihilator())
    bad = _first_outside(C, sharpE, C.vector_in_tc)
    rep.add("sharp_Eann_in_TC", FAIL if bad else PASS, witness=bad)
    _condi1(rep, C, pi, pts, required=False)
    _condi2(rep, C, S)
    _halfnorm(rep, C, pi)
    if rep.status_of("condi1") == PASS and rep.status_of("condi2") == PASS:
        _descend(rep, C, pi, degree_bound, emit_reduced=True)
    return rep


# -- reduction in stages --------------------------------------------------

def _d_on_c(C: SubmanifoldSpec, A: SubmanifoldSpec) -> list:
    return [_on(C, v) for v in A.e_frame()]


def _stage_common(rep, C, A, pi, pts):
    bad = ""
    for g in A.even_generators():
        r = C.restrict(g)
        if r:
            bad = f"{g} restricts to {r}"
            break
    rep.add("C_in_A", FAIL if bad else PASS, witness=bad)
    Dc = _d_on_c(C, A)
    bad = _first_outside(C, Dc, C.vector_in_e)
    rep.add("Dc_in_E", FAIL if bad else PASS, witness=bad)
    bad = _first_outside(A, A.e_frame(), A.vector_in_tc)
    wit = f"D not tangent to A: {bad}" if bad else ""
    if not wit:
        gens = A.odd_generators()
        for i, X in enumerate(gens):
            for Y in gens[i + 1:]:
                r = A.restrict(schouten_bracket(X, Y))
                if r:
                    wit = f"[{X}, {Y}] = {r} mod I_A"
                    break
            if wit:
                break
    rep.add("D_integrable", FAIL if wit else PASS, witness=wit)
    rep.frames["D"] = [str(X) for X in A.odd_generators()]
    return Dc


def _liederiv_on_d(rep, C, A, S, name):
    wit = ""
    for X in A.odd_generators():
        r = C.restrict(schouten_bracket(S, X))
        if r:
            wit = f"{{S, {X}}} = {r} mod I"
            break
    rep.add(name, FAIL if wit else PASS, witness=wit)


def _etcd(rep, C, pi, Dc, pts, name):
    sharpE = _sharp_family(pi, C, C.e_annihilator())
    st, det = span_contains(C.tc_frame() + Dc, sharpE, pts)
    rep.add(name, st, witness=det if st != PASS else "")


def _conormal_matrix(C: SubmanifoldSpec, covs, vecs) -> list:
    return [[C.restrict_poly(_dot(cov, v, C.vars)) for v in vecs] for cov in covs]


def _kernel_fields(C, covs, vec_fields_graded, vecs) -> list:
    """Combinations of the given degree-1 fields whose values lie in ker(covs)."""
    ctx = C.vars
    k = len(vecs)
    if k == 0:
        return []
    M = _conormal_matrix(C, covs, vecs)
    M = [r for r in M if any(r)]
    basis = nullspace(M, k, ctx) if M else [
        [Polynomial.constant(ctx, 1 if i == j else 0) for i in range(k)] for j in range(k)
    ]
    out = []
    for c in basis:
        acc = GradedFunction.zero(ctx)
        for ca, Y in zip(c, vec_fields_graded):
            if ca:
                acc = acc + Y * ca
        out.append(acc)
    return out


def _rank_verdict(rep, name, C, covs, vecs, pts):
    if not covs or not vecs:
        rep.add(name, PASS, detail=f"rank {len(vecs)}")
        return
    info = rank_info(_conormal_matrix(C, covs, vecs), pts)
    rk = len(vecs) - info.generic
    if info.constant:
        rep.add(name, PASS, detail=f"rank {rk}")
    else:
        rep.add(name, UNKNOWN, detail=f"generic rank {rk}, drops at samples")


def check_stages_A1(
    C: SubmanifoldSpec,
    A: SubmanifoldSpec,
    pi: PoissonBivector,
    E: DistributionSpec | None = None,
    D: DistributionSpec | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    degree_bound: int | None = None,
) -> ReductionReport:
    """Audit reduction in stages through (A, D) with the first stages theorem."""
    C = _merge_distribution(C, E)
    A = _merge_distribution(A, D)
    S = pi.to_function()
    pts = C.samples(samples, seed)
    rep = ReductionReport("A1")
    Dc = _stage_common(rep, C, A, pi, pts)
    _f_checks(rep, C, pts)
    _rank_verdict(rep, "ctcrk", C, C.conormal(), Dc, pts)
    Ec = C.e_frame()
    _rank_verdict(rep, "etark", C, [_on(C, c) for c in A.conormal()], Ec, pts)

    # prcond: brackets of D-fields tangent to C with sections of E cap TA|_C
    Ys = _kernel_fields(C, C.conormal(), A.odd_generators(), Dc)
    Ws = _kernel_fields(C, [_on(C, c) for c in A.conormal()], C.odd_generators(), Ec)
    wit = ""
    for Y in Ys:
        for W in Ws:
            br = schouten_bracket(Y, W)
            if C.restrict(br):
                wit = f"[{Y}, {W}] not in E: {C.restrict(br)}"
            else:
                vec = br.as_vector() if br else [Polynomial.zero(C.vars)] * len(C.vars)
                for cov in A.conormal():
                    if C.restrict_poly(_dot(cov, vec, C.vars)):
                        wit = f"[{Y}, {W}] not tangent to A"
                        break
            if wit:
                break
        if wit:
            break
    rep.add("prcond", FAIL if wit else PASS, witness=wit)
    rep.frames["Dc_cap_TC"] = [str(Y) for Y in Ys]
    rep.frames["E_cap_TA"] = [str(W) for W in Ws]
    _condi2(rep, C, S, required=True, name="EEF")
    _liederiv_on_d(rep, C, A, S, "frameD")
    _etcd(rep, C, pi, Dc, pts, "ETCD")
    _condi1(rep, C, pi, pts, required=False)
    if rep.status_of("condi1") == PASS and rep.status_of("EEF") == PASS:
        _descend(rep, C, pi, degree_bound, emit_reduced=True)
    return rep


def check_stages_A2(
    C: SubmanifoldSpec,
    A: SubmanifoldSpec,
    pi: PoissonBivector,
    E: DistributionSpec | None = None,
    D: DistributionSpec | None = None,
    Dc: DistributionSpec | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    degree_bound: int | None = None,
) -> ReductionReport:
    """Audit the minimal-A stages theorem: F in D|_C in E and TA|_C = TC + D|_C."""
    C = _merge_distribution(C, E)
    A = _merge_distribution(A, D)
    S = pi.to_function()
    pts = C.samples(samples, seed)
    rep = ReductionReport("A2")
    Dcv = _stage_common(rep, C, A, pi, pts)
    if Dc is not None:
        given = [_on(C, v) for v in Dc.frame()]
        a, _ = span_contains(Dcv, given, pts)
        b, _ = span_contains(given, Dcv, pts)
        st = FAIL if FAIL in (a, b) else (UNKNOWN if UNKNOWN in (a, b) else PASS)
        rep.add("Dc_matches_D", st)
    _f_checks(rep, C, pts)
    st, det = span_contains(Dcv, C.f_frame(), pts)
    rep.add("F_in_Dc", st, witness=det if st != PASS else "")
    _etcd(rep, C, pi, Dcv, pts, "ETCDdois")
    ta = [_on(C, v) for v in A.tc_frame()]
    tcd = C.tc_frame() + Dcv
    s1, d1 = span_contains(ta, tcd, pts)
    s2, d2 = span_contains(tcd, ta, pts)
    if FAIL in (s1, s2):
        r_ta, r_tcd = generic_rank(ta) if ta else 0, generic_rank(tcd) if tcd else 0
        rep.add("minimality", FAIL, witness=f"dim TA|_C = {r_ta}, dim (TC + D|_C) = {r_tcd}")
    else:
        rep.add("minimality", UNKNOWN if UNKNOWN in (s1, s2) else PASS)
    _liederiv_on_d(rep, C, A, S, "Liedercon")
    _condi1(rep, C, pi, pts, required=False)
    _condi2(rep, C, S, required=False)
    if rep.status_of("condi1") == PASS and rep.status_of("condi2") == PASS:
        _descend(rep, C, pi, degree_bound, emit_reduced=True)
    elif rep.required_status == PASS:
        _descend(rep, C, pi, degree_bound, emit_reduced=True)
    return rep


# -- reduced bivectors ----------------------------------------------------

def _monomials(names: Sequence[str], ctx: tuple, degree: int) -> list:
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(names, d):
            p = Polynomial.constant(ctx, 1)
            for v in combo:
                p = p * Polynomial.var(ctx, v)
            out.append(p)
    return out


def default_degree_bound(C: SubmanifoldSpec, pi: PoissonBivector) -> int:
    dpi = max((p.degree() for _, _, p in pi.entries()), default=0)
    dcon = max((p.degree() for p in C.solved_even.values()), default=0)
    dA = max((g.poly_degree() for g in C.theta_images.values()), default=0)
    return max(dpi, 0) + max(dcon, dA, 0) + 2


def _slice_coords(C: SubmanifoldSpec) -> list:
    # retained coordinates outside Q; setting them to 0 cuts a slice of C
    return [v for v in C.retained if v not in set(C.quotient_coords)]


def solve_lift(C: SubmanifoldSpec, q: str, degree_bound: int) -> Polynomial:
    """Minimal-degree lift annihilated by E along C.

    The lift is q + sum lambda_a g_a + sum mu_b s_b where g_a are the even
    constraints and s_b the slice coordinates.  Multiplier coefficients are
    found by exact row reduction with free unknowns set to zero; constraint
    multipliers come first, so they are preferred.
    """
    ctx = C.vars
    qv = Polynomial.var(ctx, q)
    gs = [Polynomial.var(ctx, a) - C.solved_even[a] for a in C.solved_even]
    gs += [Polynomial.var(ctx, v) for v in _slice_coords(C)]
    frame = C.e_frame()
    base = [C.restrict_poly(_dot([qv.diff(v) for v in ctx], X, ctx)) for X in frame]
    B = [[C.restrict_poly(_dot([g.diff(v) for v in ctx], X, ctx)) for g in gs] for X in frame]
    if not gs:
        if any(base):
            raise LiftError(f"coordinate {q} is not E-basic along C and nothing can correct it")
        return qv
    for d in range(degree_bound + 1):
        monos = _monomials(C.retained, ctx, d)
        unknowns = [(a, m) for a in range(len(gs)) for m in monos]
        eqs: dict = {}
        for beta in range(len(frame)):
            for j, (a, m) in enumerate(unknowns):
                prod = B[beta][a] * m
                for exp, c in prod.terms.items():
                    eqs.setdefault((beta, exp), {})[j] = c
            for exp in base[beta].terms:
                eqs.setdefault((beta, exp), {})
        keys = sorted(eqs)
        if not keys:
            return qv
        A = [[eqs[k].get(j, 0) for j in range(len(unknowns))] for k in keys]
        rhs = [-base[b].terms.get(e, 0) for b, e in keys]
        sol = solve_rational(A, rhs)
        if sol is None:
            continue
        lift = qv
        for (a, m), c in zip(unknowns, sol):
            if c:
                lift = lift + gs[a] * m * c
        return lift
    raise LiftError(f"no lift of {q} with multipliers of degree <= {degree_bound}")


def reduce_bivector(
    C: SubmanifoldSpec,
    pi: PoissonBivector,
    report: ReductionReport | None = None,
    degree_bound: int | None = None,
    E: DistributionSpec | None = None,
) -> tuple:
    """Bracket on the quotient by lifting quotient coordinates.

    Returns (PoissonBivector on the quotient coordinates, {q: lift}).
    """
    C = _merge_distribution(C, E)
    if report is not None and "condi1" in report.verdicts and report.status_of("condi1") != PASS:
        raise ValueError("lift independence (condi1) does not hold; bracket would depend on lifts")
    bound = default_degree_bound(C, pi) if degree_bound is None else degree_bound
    Q = C.quotient_coords
    lifts = {q: solve_lift(C, q, bound) for q in Q}
    entries = {}
    allowed = set(Q)
    slice_vars = _slice_coords(C)
    for i, qi in enumerate(Q):
        for qj in Q[i + 1:]:
            val = C.restrict_poly(pi.contract(lifts[qi], lifts[qj]))
            if slice_vars and val.used_vars() & set(slice_vars):
                if any(C.restrict_poly(_dot([val.diff(v) for v in C.vars], X, C.vars)) for X in C.e_frame()):
                    raise BasicnessError(f"bracket {{{qi}, {qj}}} = {val} is not E-invariant along C")
                val = val.subst({v: 0 for v in slice_vars})
            extra = val.used_vars() - allowed
            if extra:
                raise BasicnessError(f"bracket {{{qi}, {qj}}} = {val} depends on {sorted(extra)}")
            entries[(qi, qj)] = val.in_context(Q)
    return PoissonBivector(Q, entries), lifts


def _inverse(M: list) -> list:
    """Inverse of a polynomial matrix with constant nonzero determinant."""
    n = len(M)
    det = determinant(M)
    if not det.is_constant() or not det:
        raise ValueError("basis change is not invertible over polynomials")
    c = det.constant_value()
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [[M[r][s] for s in range(n) if s != i] for r in range(n) if r != j]
            cof = determinant(minor) if minor else Polynomial.constant(M[0][0].vars, 1)
            row.append(cof * (Fraction(-1 if (i + j) % 2 else 1) / c))
        inv.append(row)
    return inv


def reduce_bivector_onC(S: GradedFunction | PoissonBivector, C: SubmanifoldSpec, E: DistributionSpec | None = None):
    """Read the quotient bivector directly off the restriction of S.

    Tangent odd coordinates of the quotient are the pullbacks
    th_r + sum_a d_r(phi_a) th_a; every other unsolved odd coordinate must be
    absent from the restriction.
    """
    C = _merge_distribution(C, E)
    if isinstance(S, PoissonBivector):
        S = S.to_function()
    ctx = C.vars
    U = list(C.unsolved_odd)
    Q = C.quotient_coords
    qidx = [ctx.index(q) for q in Q]
    if any(i not in U for i in qidx):
        raise ValueError("quotient coordinates must have unsolved odd partners")
    others = [u for u in U if u not in qidx]
    rows = []
    for q, i in zip(Q, qidx):
        vt = GradedFunction.odd(ctx, i)
        for a, phi in C.solved_even.items():
            d = phi.diff(q)
            if d:
                vt = vt + GradedFunction.odd(ctx, ctx.index(a)) * d
        vt = C.restrict(vt)
        rows.append([vt.component((u,)) for u in U])
    for u in others:
        rows.append([Polynomial.constant(ctx, 1 if v == u else 0) for v in U])
    slots = qidx + others
    inv = _inverse(rows) if rows else []
    # th_U = inv * (new basis); the new basis element k lives in slot slots[k]
    images = {}
    for ui, u in enumerate(U):
        g = GradedFunction.zero(ctx)
        for k, slot in enumerate(slots):
            if inv[ui][k]:
                g = g + GradedFunction.odd(ctx, slot) * inv[ui][k]
        images[u] = g
    R = C.restrict(S.require_degree(2, "S"))
    out = GradedFunction.zero(ctx)
    for mono, p in R.terms.items():
        term = GradedFunction.function(p)
        for i in mono:
            term = term * images[i]
        out = out + term
    entries = {}
    allowed = set(Q)
    for (i, j), p in out.terms.items():
        if i not in qidx or j not in qidx:
            raise ValueError(
                f"restriction involves non-tangent odd coordinate {odd_name(i if i not in qidx else j)}; use the lift route"
            )
        extra = p.used_vars() - allowed
        if extra:
            raise BasicnessError(f"coefficient {p} depends on {sorted(extra)}")
        entries[(ctx[i], ctx[j])] = p.in_context(Q)
    return PoissonBivector(Q, entries)
