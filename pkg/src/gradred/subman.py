"""Graded submanifolds of T*[1]M in adapted (graph) form.

A submanifold is presented by

* solved even constraints ``x_a = phi_a(x_R)`` over the retained coordinates R,
* solved odd relations ``th_a = sum_u c_au(x) th_u`` in the unsolved odd
  coordinates (these encode the distribution E along C),

so that restriction modulo the vanishing ideal I is plain substitution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .exactpoly import Polynomial, parse_polynomial
from .gradedalg import GradedFunction, odd_name, parse_graded, schouten_bracket
from .polylinalg import (
    DEFAULT_SAMPLES,
    RankInfo,
    nullspace,
    rank_info,
    sample_points,
)


def _odd_index(key, variables: tuple) -> int:
    if isinstance(key, int):
        return key
    if key in variables:
        return variables.index(key)
    if key.startswith("th") and key[2:].isdigit():
        i = int(key[2:]) - 1
        if 0 <= i < len(variables):
            return i
    raise KeyError(f"unknown odd coordinate {key!r}")


class SubmanifoldSpec:
    """Adapted presentation of a graded submanifold E°[1] over C."""

    def __init__(
        self,
        variables: Sequence[str],
        solved_even: Mapping[str, object] | None = None,
        theta_solved: Mapping[object, object] | None = None,
        extra_degree1_generators: Iterable[object] = (),
        quotient_coords: Sequence[str] | None = None,
        name: str = "",
    ):
        self.vars = tuple(variables)
        self.name = name
        self._factor_cache: dict = {}
        n = len(self.vars)
        even = {}
        for v, img in (solved_even or {}).items():
            if v not in self.vars:
                raise KeyError(f"unknown coordinate {v!r}")
            even[v] = img if isinstance(img, Polynomial) else parse_polynomial(str(img), self.vars)
        self.solved_even = self._resolve_even(even)
        self.retained = tuple(v for v in self.vars if v not in self.solved_even)

        images = {}
        for key, img in (theta_solved or {}).items():
            i = _odd_index(key, self.vars)
            if not isinstance(img, GradedFunction):
                img = parse_graded(str(img), self.vars)
            img.require_degree(1, f"image of {odd_name(i)}")
            images[i] = img
        self.theta_images = {i: self._even_restrict(g) for i, g in self._resolve_odd(images).items()}

        self._requested_q = tuple(quotient_coords) if quotient_coords is not None else None
        for gen in extra_degree1_generators:
            if not isinstance(gen, GradedFunction):
                gen = parse_graded(str(gen), self.vars)
            self._absorb_generator(gen.require_degree(1, "extra generator"))

        self.solved_odd = tuple(sorted(self.theta_images))
        self.unsolved_odd = tuple(i for i in range(n) if i not in self.theta_images)
        if self._requested_q is None:
            self.quotient_coords = tuple(
                v for v in self.retained if self.vars.index(v) not in self.theta_images
            )
        else:
            bad = [q for q in self._requested_q if q not in self.retained]
            if bad:
                raise ValueError(f"quotient coordinates {bad} are not retained coordinates")
            self.quotient_coords = self._requested_q
        self._factor_cache: dict = {}

    # -- construction helpers -----------------------------------------
    def _resolve_even(self, even: dict) -> dict:
        out = dict(even)
        for _ in range(len(out) + 1):
            changed = False
            for a, p in out.items():
                if a in p.used_vars():
                    raise ValueError(f"cyclic assignment: {a} appears in its own image")
                for b in sorted(p.used_vars() & set(out)):
                    p = p.subst({b: out[b]})
                    changed = True
                out[a] = p
            if not changed:
                return out
        raise ValueError("cyclic assignment among solved coordinates")

    def _resolve_odd(self, images: dict) -> dict:
        out = dict(images)
        for _ in range(len(out) + 1):
            changed = False
            for a, g in list(out.items()):
                if (a,) in g.terms:
                    raise ValueError(f"cyclic relation: {odd_name(a)} appears in its own image")
                hits = [m[0] for m in g.terms if m[0] in out]
                if hits:
                    acc = GradedFunction.zero(self.vars)
                    for (u,), c in g.terms.items():
                        acc = acc + (out[u] * c if u in out else GradedFunction._raw(self.vars, {(u,): c}))
                    out[a] = acc
                    changed = True
            if not changed:
                return out
        raise ValueError("cyclic relation among solved odd coordinates")

    def _absorb_generator(self, gen: GradedFunction):
        r = self.restrict(gen)
        if not r:
            return
        cands = [u for (u,), c in sorted(r.terms.items()) if c.is_constant()]
        if self._requested_q is not None:
            qidx = {self.vars.index(q) for q in self._requested_q}
            cands = sorted(cands, key=lambda u: (u in qidx, u))
        if not cands:
            raise ValueError(
                f"generator {gen} has no constant-coefficient pivot; supply it as a solved odd relation"
            )
        p = cands[0]
        c = r.terms[(p,)].constant_value()
        image = (r - GradedFunction._raw(self.vars, {(p,): r.terms[(p,)]})) * (-1 / c)
        new = {}
        for a, g in self.theta_images.items():
            cp = g.component((p,))
            if cp:
                g = g - GradedFunction._raw(self.vars, {(p,): cp}) + image * cp
            new[a] = g
        new[p] = image
        self.theta_images = new
        self._factor_cache = {}

    # -- restriction ----------------------------------------------------
    def _even_subst(self, p: Polynomial) -> Polynomial:
        if not self.solved_even or not (p.used_vars() & set(self.solved_even)):
            return p
        return p.subst({a: q for a, q in self.solved_even.items() if a in p.used_vars()})

    def _even_restrict(self, F: GradedFunction) -> GradedFunction:
        return F.map_coefficients(self._even_subst)

    def restrict_poly(self, p: Polynomial) -> Polynomial:
        return self._even_subst(p)

    def _factor(self, mono: tuple) -> GradedFunction:
        if mono not in self._factor_cache:
            acc = GradedFunction.constant(self.vars, 1)
            for i in mono:
                acc = acc * (self.theta_images[i] if i in self.theta_images else GradedFunction.odd(self.vars, i))
            self._factor_cache[mono] = acc
        return self._factor_cache[mono]

    def restrict(self, F: GradedFunction) -> GradedFunction:
        """Normal form of F modulo the ideal: even substitution, then odd."""
        if F.vars != self.vars:
            raise ValueError("context mismatch")
        acc = GradedFunction.zero(self.vars)
        for mono, p in F.terms.items():
            p = self._even_subst(p)
            if not p:
                continue
            if any(i in self.theta_images for i in mono):
                acc = acc + self._factor(mono) * p
            else:
                acc = acc + GradedFunction._raw(self.vars, {mono: p})
        return acc

    def in_ideal(self, F: GradedFunction) -> bool:
        return restrict(F, self).is_zero()

    # -- generators -----------------------------------------------------
    def even_generators(self) -> list:
        return [
            GradedFunction.function(Polynomial.var(self.vars, a) - p) for a, p in self.solved_even.items()
        ]

    def odd_generators(self) -> list:
        return [GradedFunction.odd(self.vars, a) - self.theta_images[a] for a in self.solved_odd]

    def generators(self) -> list:
        return self.even_generators() + self.odd_generators()

    def with_generators(self, gens: Iterable[GradedFunction], quotient_coords=None) -> "SubmanifoldSpec":
        """Same C with E enlarged by further degree-1 generators."""
        return SubmanifoldSpec(
            self.vars,
            self.solved_even,
            self.theta_images,
            list(gens),
            quotient_coords if quotient_coords is not None else self._requested_q,
            self.name,
        )

    def samples(self, count: int = DEFAULT_SAMPLES, seed: int = 0) -> list:
        return sample_points(self.retained, count, seed)

    # -- frames along C (component lists of restricted polynomials) ------
    def e_frame(self) -> list:
        out = []
        for a in self.solved_odd:
            vec = [Polynomial.zero(self.vars) for _ in self.vars]
            vec[a] = Polynomial.constant(self.vars, 1)
            for (u,), c in self.theta_images[a].terms.items():
                vec[u] = vec[u] - c
            out.append(vec)
        return out

    def tc_frame(self) -> list:
        out = []
        for r in self.retained:
            vec = [Polynomial.zero(self.vars) for _ in self.vars]
            vec[self.vars.index(r)] = Polynomial.constant(self.vars, 1)
            for a, phi in self.solved_even.items():
                vec[self.vars.index(a)] = phi.diff(r)
            out.append(vec)
        return out

    def e_annihilator(self) -> list:
        out = []
        for u in self.unsolved_odd:
            cov = [Polynomial.zero(self.vars) for _ in self.vars]
            cov[u] = Polynomial.constant(self.vars, 1)
            for a in self.solved_odd:
                cov[a] = self.theta_images[a].component((u,))
            out.append(cov)
        return out

    def conormal(self) -> list:
        out = []
        for a, phi in self.solved_even.items():
            cov = [-phi.diff(v) if v in self.retained else Polynomial.zero(self.vars) for v in self.vars]
            cov[self.vars.index(a)] = Polynomial.constant(self.vars, 1)
            out.append(cov)
        return out

    def tangency_matrix(self) -> list:
        """K[b][a] = dg_b(X_a) along C; its kernel gives F = TC cap E."""
        E = self.e_frame()
        return [
            [self._even_subst(sum((c * x for c, x in zip(cov, X)), Polynomial.zero(self.vars))) for X in E]
            for cov in self.conormal()
        ]

    def f_coefficients(self) -> list:
        """Coefficient vectors c with sum_a c_a X_a spanning F over the function field."""
        k = len(self.solved_odd)
        if k == 0:
            return []
        K = self.tangency_matrix()
        if not K:
            return [[Polynomial.constant(self.vars, 1 if i == j else 0) for i in range(k)] for j in range(k)]
        return nullspace(K, k, self.vars)

    def f_frame(self) -> list:
        E = self.e_frame()
        out = []
        for c in self.f_coefficients():
            vec = [Polynomial.zero(self.vars) for _ in self.vars]
            for ca, X in zip(c, E):
                vec = [v + ca * x for v, x in zip(vec, X)]
            out.append(vec)
        return out

    def f_fields(self) -> list:
        """F frame as degree-1 graded functions (extended off C by the chart)."""
        gens = self.odd_generators()
        out = []
        for c in self.f_coefficients():
            acc = GradedFunction.zero(self.vars)
            for ca, Y in zip(c, gens):
                acc = acc + Y * ca
            out.append(acc)
        return out

    def f_rank(self, points) -> RankInfo:
        k = len(self.solved_odd)
        K = self.tangency_matrix()
        info = rank_info(K, points) if K and k else RankInfo(0, [0 for _ in points])
        return RankInfo(k - info.generic, [k - r for r in info.sampled])

    def vector_in_e(self, vec: Sequence[Polynomial]) -> bool:
        return self.restrict(GradedFunction.vector_field(list(vec), self.vars)).is_zero()

    def vector_in_tc(self, vec: Sequence[Polynomial]) -> bool:
        return all(
            not self._even_subst(sum((c * x for c, x in zip(cov, vec)), Polynomial.zero(self.vars)))
            for cov in self.conormal()
        )

    def __repr__(self):
        return f"SubmanifoldSpec({self.name or 'unnamed'}: retained={self.retained}, solved_odd={self.solved_odd})"


@dataclass
class DistributionSpec:
    """A distribution given by degree-1 generators (vector fields)."""

    variables: tuple
    generators: list = field(default_factory=list)

    @classmethod
    def parse(cls, variables, texts: Iterable[str]) -> "DistributionSpec":
        variables = tuple(variables)
        return cls(variables, [parse_graded(t, variables).require_degree(1, "generator") for t in texts])

    def frame(self) -> list:
        return [g.as_vector() for g in self.generators]

    def rank(self, points) -> RankInfo:
        return rank_info(self.frame(), points)


def restrict(F: GradedFunction, C: SubmanifoldSpec) -> GradedFunction:
    return C.restrict(F)


def in_ideal(F: GradedFunction, C: SubmanifoldSpec) -> bool:
    return C.restrict(F).is_zero()


@dataclass
class RankProbe:
    matrix: list
    degree0: RankInfo
    f_rank: RankInfo
    gamma_in_ideal: bool
    gamma_witness: str
    verdict: str

    def as_dict(self) -> dict:
        return {
            "matrix": [[str(e) for e in row] for row in self.matrix],
            "degree0_rank_generic": self.degree0.generic,
            "degree0_rank_sampled_min": self.degree0.sampled_min,
            "F_rank_generic": self.f_rank.generic,
            "gamma_in_ideal": self.gamma_in_ideal,
            "gamma_witness": self.gamma_witness,
            "verdict": self.verdict,
        }


def bracket_matrix_rank_probe(C: SubmanifoldSpec, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> RankProbe:
    """Constant-rank probe of the constraint bracket matrix {phi_I, phi_J} mod I.

    The degree-0 block is ranked over the fraction field and at samples; the
    degree-1 block is probed through brackets of F frame fields, which must
    land back in I.
    """
    gens = C.generators()
    M = [[C.restrict(schouten_bracket(a, b)) for b in gens] for a in gens]
    pts = C.samples(samples, seed)
    deg0 = [[e.component(()) for e in row] for row in M]
    d0 = rank_info(deg0, pts) if gens else RankInfo(0, [0 for _ in pts])
    fr = C.f_rank(pts)
    witness = ""
    ok = True
    fields = C.f_fields()
    for i, Y in enumerate(fields):
        for Z in fields[i + 1:]:
            r = C.restrict(schouten_bracket(Y, Z))
            if r:
                ok, witness = False, str(r)
                break
        if not ok:
            break
    if not d0.constant or not fr.constant:
        verdict = "UNKNOWN"
    elif not ok:
        verdict = "NOT_CONSTANT"
    else:
        verdict = "CONSTANT"
    return RankProbe(M, d0, fr, ok, witness, verdict)


def geometric_objects(C: SubmanifoldSpec, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> dict:
    """Generator families along C for TC, E, F, E° and N*C, plus rank flags."""
    pts = C.samples(samples, seed)
    fr = C.f_rank(pts)
    return {
        "TC": C.tc_frame(),
        "E": C.e_frame(),
        "F": C.f_frame(),
        "E_ann": C.e_annihilator(),
        "NC": C.conormal(),
        "F_rank": fr.generic,
        "F_rank_constant": fr.constant,
    }


def _pick_linear(p: Polynomial, taken: set):
    # a variable entering only linearly with a constant coefficient
    for v in p.vars:
        if v in taken:
            continue
        d = p.diff(v)
        if d and d.is_constant():
            rest = p - Polynomial.var(p.vars, v) * d.constant_value()
            if v not in rest.used_vars():
                return v, rest * (-1 / d.constant_value())
    return None


def graph_form(constraints: Iterable[Polynomial]) -> dict:
    """Solve ``p = 0`` for one variable per constraint, in order.

    Raises ValueError when some constraint cannot be put in graph form;
    constraints that become 0 after substitution are dropped.
    """
    solved: dict = {}
    for p in constraints:
        used = p.used_vars() & set(solved)
        if used:
            p = p.subst({a: solved[a] for a in used})
        if not p:
            continue
        hit = _pick_linear(p, set(solved))
        if hit is None:
            raise ValueError(f"cannot put constraint {p} = 0 in graph form")
        v, img = hit
        solved = {a: (q.subst({v: img}) if v in q.used_vars() else q) for a, q in solved.items()}
        solved[v] = img
    return solved


def format_vector(vec: Sequence[Polynomial], variables: Sequence[str]) -> str:
    return str(GradedFunction.vector_field(list(vec), tuple(variables)))
