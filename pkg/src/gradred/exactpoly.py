"""Exact multivariate polynomials with rational coefficients.

A ``Polynomial`` lives in a *variable context*: an ordered tuple of names.
Terms are stored as ``{exponent tuple: Fraction}`` with zero coefficients
dropped, so two polynomials in the same context are equal iff their term
maps are equal.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exprparse import ParseError, parse_with

Rational = Fraction


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


def grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


class Polynomial:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.vars = tuple(variables)
        n = len(self.vars)
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match {n} variables")
                c = _coerce(c)
                if c:
                    clean[exp] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.vars = variables
        p.terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, variables) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables, c) -> "Polynomial":
        variables = tuple(variables)
        c = _coerce(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables, name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(name)
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exp: Fraction(1)})

    # -- queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def used_vars(self) -> set:
        used = set()
        for exp in self.terms:
            for v, k in zip(self.vars, exp):
                if k:
                    used.add(v)
        return used

    def leading(self):
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    # -- context --------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.vars is not self.vars and other.vars != self.vars:
            raise ValueError(f"variable context mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.vars, other)

    def in_context(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express in another context; every used variable must survive."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        idx = {v: i for i, v in enumerate(variables)}
        missing = self.used_vars() - set(idx)
        if missing:
            raise ValueError(f"variables {sorted(missing)} not in target context")
        out = {}
        for exp, c in self.terms.items():
            new = [0] * len(variables)
            for v, k in zip(self.vars, exp):
                if k:
                    new[idx[v]] = k
            out[tuple(new)] = c
        return Polynomial._raw(variables, out)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _coerce(other)
            if not c:
                return Polynomial.zero(self.vars)
            return Polynomial._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.vars)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution --------------------------------------
    def diff(self, name: str) -> "Polynomial":
        try:
            i = self.vars.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None
        return self.diff_index(i)

    def diff_index(self, i: int) -> "Polynomial":
        out = {}
        for exp, c in self.terms.items():
            k = exp[i]
            if k:
                e = list(exp)
                e[i] = k - 1
                out[tuple(e)] = c * k
        return Polynomial._raw(self.vars, out)

    def subst(self, assignments: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Simultaneous substitution ``v -> assignments[v]``.

        Images must share one context (which becomes the result's context)
        and may not mention any substituted variable.
        """
        if not assignments:
            return self
        images = dict(assignments)
        for v in images:
            if v not in self.vars:
                raise KeyError(f"unknown variable {v!r}")
        ctxs = {p.vars for p in images.values() if isinstance(p, Polynomial)}
        if len(ctxs) > 1:
            raise ValueError("substitution images live in different contexts")
        target = ctxs.pop() if ctxs else self.vars
        for v, p in list(images.items()):
            if not isinstance(p, Polynomial):
                images[v] = p = Polynomial.constant(target, p)
            bad = p.used_vars() & set(images)
            if bad:
                raise ValueError(f"cyclic assignment: image of {v} uses {sorted(bad)}")
        kept = [v for v in self.vars if v not in images]
        missing = set(kept) - set(target)
        # kept variables must exist in the target context when they occur
        pos = {v: i for i, v in enumerate(target)}
        powcache: dict = {}

        def power(v, k):
            key = (v, k)
            if key not in powcache:
                powcache[key] = images[v] ** k
            return powcache[key]

        acc: dict = {}
        one = Polynomial.constant(target, 1)
        for exp, c in self.terms.items():
            mono_exp = [0] * len(target)
            factor = one
            for v, k in zip(self.vars, exp):
                if not k:
                    continue
                if v in images:
                    factor = factor * power(v, k)
                else:
                    if v in missing:
                        raise ValueError(f"variable {v!r} absent from the image context")
                    mono_exp[pos[v]] += k
            me = tuple(mono_exp)
            for e, d in factor.terms.items():
                e2 = tuple(a + b for a, b in zip(e, me))
                acc[e2] = acc.get(e2, 0) + c * d
        return Polynomial._raw(target, {e: c for e, c in acc.items() if c})

    def evaluate(self, point):
        """Evaluate at a mapping name->value or a sequence aligned with ``vars``."""
        if isinstance(point, Mapping):
            vals = [point[v] if v in point else 0 for v in self.vars]
        else:
            vals = list(point)
        total = 0
        for exp, c in self.terms.items():
            t = c
            for x, k in zip(vals, exp):
                if k:
                    t = t * x ** k
            total = total + t
        return total

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises ArithmeticError on a remainder."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        lead_e, lead_c = other.leading()
        rem = self
        quot: dict = {}
        while rem.terms:
            e, c = rem.leading()
            diff = tuple(a - b for a, b in zip(e, lead_e))
            if any(d < 0 for d in diff):
                raise ArithmeticError("division is not exact")
            q = c / lead_c
            quot[diff] = quot.get(diff, 0) + q
            rem = rem - Polynomial._raw(self.vars, {diff: q}) * other
        return Polynomial._raw(self.vars, {e: c for e, c in quot.items() if c})

    # -- printing -------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def monomial_str(self, exp) -> str:
        parts = []
        for v, k in zip(self.vars, exp):
            if k == 1:
                parts.append(v)
            elif k:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for exp, c in self.sorted_terms():
            mono = self.monomial_str(exp)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({str(self)!r}, vars={self.vars})"


# -- functional API -----------------------------------------------------

def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def poly_diff(p: Polynomial, v: str) -> Polynomial:
    return p.diff(v)


def poly_subst(p: Polynomial, assignments: Mapping[str, Polynomial]) -> Polynomial:
    return p.subst(assignments)


class _PolyAlgebra:
    def __init__(self, variables):
        self.vars = tuple(variables)

    def const(self, c):
        return Polynomial.constant(self.vars, c)

    def symbol(self, name):
        return Polynomial.var(self.vars, name)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, k):
        return a ** k


def parse_polynomial(text: str, variables: Iterable[str]) -> Polynomial:
    """Parse ``text`` (e.g. ``"1/2 * x1^2*x3 - x2"``) in the given context."""
    return parse_with(text, _PolyAlgebra(variables))


__all__ = [
    "Rational",
    "Polynomial",
    "ParseError",
    "poly_mul",
    "poly_diff",
    "poly_subst",
    "parse_polynomial",
]
