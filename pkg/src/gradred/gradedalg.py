"""The graded commutative algebra of functions on T*[1]R^n.

Even coordinates are the polynomial variables x_1..x_n, odd coordinates
th_1..th_n are the fibre coordinates conjugate to them.  A degree-k element
is a k-vector field; th_i stands for the coordinate field d/dx_i.

Bracket convention
------------------
For homogeneous F, G of degrees a, b::

    {F, G} = (-1)^((a+1)(b+1)) * sum_i [ (F <d/dth_i)(d/dx_i G) - (d/dx_i F)(d/dth_i> G) ]

i.e. the canonical bracket (right odd derivative on F, left on G) with the
sign flipped when both degrees are even.  This is the canonical bracket
transported along the reversion map th_I -> (-1)^(k(k-1)/2) th_I, so graded
skew-symmetry and graded Jacobi keep their usual shifted form, while
{a, .} acts as a derivation from the right:

    {a, bc} = b{a, c} + (-1)^((|a|-1)|c|) {a, b} c

The signs are pinned by the calibration anchors {th_1, x_1} = 1,
{X, Y} = [X, Y], {S, f} = sharp(df) with sharp(xi) = pi(xi, .) and
S = 1/2 pi^{ij} th_i th_j, and {{S, f}, g} = pi(df, dg).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactpoly import Polynomial, _coerce
from .exprparse import parse_with


def odd_name(i: int) -> str:
    """Name of the odd coordinate with 0-based index ``i``."""
    return f"th{i + 1}"


def _merge(I: tuple, J: tuple):
    """Sign and sorted union of two odd monomials, or (0, None) on overlap."""
    if not I:
        return 1, J
    if not J:
        return 1, I
    sI = set(I)
    if sI.intersection(J):
        return 0, None
    inv = 0
    for j in J:
        for i in I:
            if i > j:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(I + J))


class GradedFunction:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Polynomial] | None = None):
        self.vars = tuple(variables)
        clean = {}
        for mono, p in (terms or {}).items():
            mono = tuple(mono)
            if list(mono) != sorted(set(mono)):
                raise ValueError(f"odd monomial {mono} is not strictly increasing")
            if any(i < 0 or i >= len(self.vars) for i in mono):
                raise ValueError(f"odd index out of range in {mono}")
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(self.vars, p)
            elif p.vars != self.vars:
                raise ValueError("coefficient context mismatch")
            if p:
                clean[mono] = p
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms):
        g = object.__new__(cls)
        g.vars = variables
        g.terms = terms
        return g

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls._raw(tuple(variables), {})

    @classmethod
    def function(cls, p: Polynomial):
        return cls._raw(p.vars, {(): p} if p else {})

    @classmethod
    def constant(cls, variables, c):
        return cls.function(Polynomial.constant(variables, c))

    @classmethod
    def coordinate(cls, variables, name: str):
        return cls.function(Polynomial.var(variables, name))

    @classmethod
    def odd(cls, variables, i: int):
        variables = tuple(variables)
        return cls._raw(variables, {(i,): Polynomial.constant(variables, 1)})

    @classmethod
    def vector_field(cls, components: Sequence[Polynomial], variables=None):
        """Degree-1 element sum_i components[i] * th_i."""
        if variables is None:
            variables = components[0].vars
        variables = tuple(variables)
        terms = {}
        for i, c in enumerate(components):
            if not isinstance(c, Polynomial):
                c = Polynomial.constant(variables, c)
            if c:
                terms[(i,)] = c
        return cls._raw(variables, terms)

    # -- queries --------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {len(m) for m in self.terms}

    def homogeneous_degree(self):
        """The common degree of all terms, or None if inhomogeneous (0 for zero)."""
        ds = self.degrees()
        if not ds:
            return 0
        if len(ds) == 1:
            return ds.pop()
        return None

    def require_degree(self, k: int, what: str = "argument"):
        d = self.homogeneous_degree()
        if self.terms and d != k:
            raise ValueError(f"{what} must be homogeneous of degree {k}, got degrees {sorted(self.degrees())}")
        return self

    def component(self, mono) -> Polynomial:
        return self.terms.get(tuple(mono), Polynomial.zero(self.vars))

    def as_function(self) -> Polynomial:
        self.require_degree(0)
        return self.component(())

    def as_vector(self) -> list:
        self.require_degree(1)
        return [self.component((i,)) for i in range(self.n)]

    def poly_degree(self) -> int:
        return max((p.degree() for p in self.terms.values()), default=-1)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "GradedFunction"):
        if other.vars is not self.vars and other.vars != self.vars:
            raise ValueError(f"context mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other):
        if isinstance(other, GradedFunction):
            self._check(other)
            return other
        if isinstance(other, Polynomial):
            return GradedFunction.function(other)
        return GradedFunction.constant(self.vars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, p in other.terms.items():
            s = out[m] + p if m in out else p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GradedFunction._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedFunction._raw(self.vars, {m: -p for m, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            if not c:
                return GradedFunction.zero(self.vars)
            return GradedFunction._raw(self.vars, {m: p * c for m, p in self.terms.items()})
        other = self._lift(other)
        out: dict = {}
        for I, p in self.terms.items():
            for J, q in other.terms.items():
                sign, K = _merge(I, J)
                if not sign:
                    continue
                pq = p * q
                if sign < 0:
                    pq = -pq
                out[K] = out[K] + pq if K in out else pq
        return GradedFunction._raw(self.vars, {k: v for k, v in out.items() if v})

    def __rmul__(self, other):
        # scalars and Polynomials are even, hence central
        return self.__mul__(other)

    def __eq__(self, other):
        if isinstance(other, GradedFunction):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return set(self.terms) == {()} and self.terms[()] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def map_coefficients(self, fn) -> "GradedFunction":
        out = {}
        for m, p in self.terms.items():
            q = fn(p)
            if q:
                out[m] = q
        variables = next(iter(out.values())).vars if out else self.vars
        return GradedFunction._raw(variables, out)

    # -- derivatives ----------------------------------------------------
    def dx(self, i: int) -> "GradedFunction":
        out = {}
        for m, p in self.terms.items():
            q = p.diff_index(i)
            if q:
                out[m] = q
        return GradedFunction._raw(self.vars, out)

    def dtheta_left(self, i: int) -> "GradedFunction":
        out = {}
        for m, p in self.terms.items():
            if i in m:
                pos = m.index(i)
                rest = m[:pos] + m[pos + 1:]
                out[rest] = -p if pos & 1 else p
        return GradedFunction._raw(self.vars, out)

    def dtheta_right(self, i: int) -> "GradedFunction":
        out = {}
        for m, p in self.terms.items():
            if i in m:
                pos = m.index(i)
                rest = m[:pos] + m[pos + 1:]
                out[rest] = -p if (len(m) - 1 - pos) & 1 else p
        return GradedFunction._raw(self.vars, out)

    # -- printing -------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m, p in self.sorted_terms():
            odd = "*".join(odd_name(i) for i in m)
            if not m:
                body, neg = str(p), False
                if len(p.terms) == 1 and body.startswith("-"):
                    body, neg = body[1:], True
            elif len(p.terms) == 1:
                (exp, c), = p.terms.items()
                mono = p.monomial_str(exp)
                neg = c < 0
                mag = abs(c)
                coef = mono if mag == 1 else (f"{mag}*{mono}" if mono else str(mag))
                body = odd if coef == "" or (mag == 1 and not mono) else f"{coef}*{odd}"
            else:
                body, neg = f"({p})*{odd}", False
            pieces.append(("-" if neg else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for s, b in pieces[1:]:
            text += f" {s} {b}"
        return text

    def __repr__(self):
        return f"GradedFunction({str(self)!r})"


# -- bracket and friends ------------------------------------------------

def graded_mul(a: GradedFunction, b: GradedFunction) -> GradedFunction:
    return a * b


def schouten_bracket(F: GradedFunction, G: GradedFunction) -> GradedFunction:
    """Degree -1 Poisson bracket on C(T*[1]R^n); see the module docstring."""
    F._check(G)
    out: dict = {}

    def put(K, val):
        if K in out:
            out[K] = out[K] + val
        else:
            out[K] = val

    for I, p in F.terms.items():
        a = len(I)
        dp = {}
        for J, q in G.terms.items():
            b = len(J)
            eps = -1 if (a % 2 == 0 and b % 2 == 0) else 1
            # (F d/dth_i)(d/dx_i G)
            for pos, i in enumerate(I):
                dq = q.diff_index(i)
                if not dq:
                    continue
                rest = I[:pos] + I[pos + 1:]
                sign, K = _merge(rest, J)
                if not sign:
                    continue
                if (a - 1 - pos) & 1:
                    sign = -sign
                val = p * dq
                put(K, val if sign * eps > 0 else -val)
            # -(d/dx_i F)(d/dth_i G)
            for pos, i in enumerate(J):
                if i not in dp:
                    dp[i] = p.diff_index(i)
                if not dp[i]:
                    continue
                rest = J[:pos] + J[pos + 1:]
                sign, K = _merge(I, rest)
                if not sign:
                    continue
                if pos & 1:
                    sign = -sign
                val = dp[i] * q
                put(K, -val if sign * eps > 0 else val)
    return GradedFunction._raw(F.vars, {k: v for k, v in out.items() if v})


bracket = schouten_bracket


def derived_bracket(S: GradedFunction, f: GradedFunction, g: GradedFunction) -> Polynomial:
    """{{S, f}, g}, the Poisson bracket of two functions on the body."""
    S.require_degree(2, "S")
    f.require_degree(0, "f")
    g.require_degree(0, "g")
    return schouten_bracket(schouten_bracket(S, f), g).component(())


class PoissonBivector:
    """Antisymmetric matrix pi^{ij} of polynomials, stored as its upper triangle."""

    __slots__ = ("vars", "upper")

    def __init__(self, variables: Sequence[str], entries: Mapping[tuple, object] | None = None):
        self.vars = tuple(variables)
        n = len(self.vars)
        up = {}
        for (i, j), p in (entries or {}).items():
            if isinstance(i, str):
                i = self.vars.index(i)
            if isinstance(j, str):
                j = self.vars.index(j)
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(self.vars, p)
            if i == j:
                if p:
                    raise ValueError("diagonal bivector entries must vanish")
                continue
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError("bivector index out of range")
            if i > j:
                i, j, p = j, i, -p
            q = up.get((i, j), Polynomial.zero(self.vars)) + p
            if q:
                up[(i, j)] = q
            else:
                up.pop((i, j), None)
        self.upper = up

    @property
    def n(self):
        return len(self.vars)

    def __call__(self, i: int, j: int) -> Polynomial:
        if i == j:
            return Polynomial.zero(self.vars)
        if i < j:
            return self.upper.get((i, j), Polynomial.zero(self.vars))
        return -self.upper.get((j, i), Polynomial.zero(self.vars))

    def matrix(self):
        return [[self(i, j) for j in range(self.n)] for i in range(self.n)]

    def to_function(self) -> GradedFunction:
        """S = 1/2 pi^{ij} th_i th_j = sum_{i<j} pi^{ij} th_i th_j."""
        return GradedFunction._raw(self.vars, {k: p for k, p in self.upper.items()})

    @classmethod
    def from_function(cls, S: GradedFunction) -> "PoissonBivector":
        S.require_degree(2, "S")
        return cls(S.vars, {m: p for m, p in S.terms.items()})

    def contract(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """pi(df, dg) = pi^{ij} d_i f d_j g."""
        acc = Polynomial.zero(self.vars)
        df = [f.diff_index(i) for i in range(self.n)]
        dg = [g.diff_index(i) for i in range(self.n)]
        for (i, j), p in self.upper.items():
            acc = acc + p * (df[i] * dg[j] - df[j] * dg[i])
        return acc

    def sharp(self, xi: Sequence[Polynomial]) -> list:
        """Components of pi(xi, .): (sharp xi)^j = xi_i pi^{ij}."""
        out = [Polynomial.zero(self.vars) for _ in range(self.n)]
        for (i, j), p in self.upper.items():
            out[j] = out[j] + xi[i] * p
            out[i] = out[i] - xi[j] * p
        return out

    def jacobiator(self, i: int, j: int, k: int) -> Polynomial:
        """Cyclic sum of {{x_i, x_j}, x_k} for the bracket {f, g} = pi(df, dg)."""
        def br(p, idx):
            # {p, x_idx} = sum_l d_l p * pi^{l idx}
            acc = Polynomial.zero(self.vars)
            for l in range(self.n):
                d = p.diff_index(l)
                if d:
                    acc = acc + d * self(l, idx)
            return acc
        return br(self(i, j), k) + br(self(j, k), i) + br(self(k, i), j)

    def is_zero(self):
        return not self.upper

    def __eq__(self, other):
        if not isinstance(other, PoissonBivector):
            return NotImplemented
        return self.vars == other.vars and self.upper == other.upper

    def __hash__(self):
        return hash((self.vars, frozenset(self.upper.items())))

    def __str__(self):
        if not self.upper:
            return "0"
        parts = []
        for (i, j), p in sorted(self.upper.items()):
            parts.append(f"({p}) d{self.vars[i]}^d{self.vars[j]}")
        return " + ".join(parts)

    def __repr__(self):
        return f"PoissonBivector({self})"

    def entries(self):
        """Sorted list of (name_i, name_j, Polynomial) with i < j."""
        return [(self.vars[i], self.vars[j], p) for (i, j), p in sorted(self.upper.items())]


def jacobi_defect(pi) -> GradedFunction:
    """{S, S}; zero iff pi is Poisson."""
    S = pi.to_function() if isinstance(pi, PoissonBivector) else pi.require_degree(2, "S")
    return schouten_bracket(S, S)


def lie_derivative_bivector(X: GradedFunction, pi: PoissonBivector) -> GradedFunction:
    """Degree-2 function of L_X pi, computed as -{S, X}."""
    X.require_degree(1, "X")
    return -schouten_bracket(pi.to_function(), X)


def hamiltonian_vector_field(pi: PoissonBivector, f: Polynomial) -> GradedFunction:
    """{S, f}: the vector field pi(df, .)."""
    return schouten_bracket(pi.to_function(), GradedFunction.function(f))


def apply_vector_field(X: GradedFunction, f: Polynomial) -> Polynomial:
    """X(f) = {X, f}."""
    return schouten_bracket(X, GradedFunction.function(f)).component(())


class _GradedAlgebra:
    def __init__(self, variables):
        self.vars = tuple(variables)
        self.odd = {odd_name(i): i for i in range(len(self.vars))}

    def const(self, c):
        return GradedFunction.constant(self.vars, c)

    def symbol(self, name):
        if name in self.odd:
            return GradedFunction.odd(self.vars, self.odd[name])
        return GradedFunction.coordinate(self.vars, name)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, k):
        out = GradedFunction.constant(self.vars, 1)
        for _ in range(k):
            out = out * a
        return out


def parse_graded(text: str, variables: Iterable[str]) -> GradedFunction:
    """Parse an expression in even names and odd symbols th1..thn."""
    return parse_with(text, _GradedAlgebra(variables))


__all__ = [
    "GradedFunction",
    "PoissonBivector",
    "graded_mul",
    "schouten_bracket",
    "bracket",
    "derived_bracket",
    "jacobi_defect",
    "lie_derivative_bivector",
    "hamiltonian_vector_field",
    "apply_vector_field",
    "parse_graded",
    "odd_name",
]
