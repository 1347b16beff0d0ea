"""Crossed modules of Lie groups acting on pair groupoids.

Realizes at desk scale: group realizations, the semidirect product
H x| G, the transformation groupoid H x G => G of a crossed module, the pair
groupoid Gamma = M x M of a symplectic vector space, the lifted action of
H x| G on Gamma and its Marsden-Weinstein quotients.

Coordinates on Gamma: a point is (target, source).  If M has coordinates
v_1..v_m, the target copy is named x1..xm and the source copy y1..ym.
Composition (a, b) o (b, c) = (a, c).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm, logm

from . import _kernels
from .dgla import ActionData
from .exactpoly import Polynomial
from .gradedalg import GradedFunction, PoissonBivector, hamiltonian_vector_field
from .polylinalg import sample_points
from .reduction import PASS, UNKNOWN, FAIL, ReductionReport, check_coisotropic
from .subman import SubmanifoldSpec, graph_form

GROUP_TOL = 1e-10


class NotComposable(ValueError):
    """Raised when two arrows do not compose."""


# -- groups ---------------------------------------------------------------

@dataclass(frozen=True)
class GroupRealization:
    dim: int
    mul: Callable
    inv: Callable
    identity: np.ndarray
    exp: Callable
    log: Callable
    name: str = "G"

    def distance(self, a, b) -> float:
        a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        return float(np.max(np.abs(a - b))) if a.size else 0.0

    def sample(self, rng: np.random.Generator, scale: float = 1.0):
        return self.exp(rng.normal(scale=scale, size=self.dim))


def vector_group(k: int, name: str = "R^k") -> GroupRealization:
    """(R^k, +) with exp = log = identity."""
    return GroupRealization(
        dim=k,
        mul=lambda a, b: np.asarray(a, dtype=float) + np.asarray(b, dtype=float),
        inv=lambda a: -np.asarray(a, dtype=float),
        identity=np.zeros(k),
        exp=lambda v: np.asarray(v, dtype=float).copy(),
        log=lambda a: np.asarray(a, dtype=float).copy(),
        name=name,
    )


def matrix_group(basis: Sequence, name: str = "matrix group", exp=None, log=None) -> GroupRealization:
    """Matrix group with Lie algebra spanned by ``basis``.

    ``exp`` and ``log`` default to scipy's expm/logm; log returns the
    coordinates in ``basis`` by least squares.
    """
    B = [np.asarray(b, dtype=float) for b in basis]
    n = B[0].shape[0]
    flat = np.array([b.ravel() for b in B]).T
    exp = exp or (lambda v: expm(sum((c * b for c, b in zip(v, B)), np.zeros((n, n)))))

    def default_log(g):
        L = np.real(logm(g))
        return np.linalg.lstsq(flat, L.ravel(), rcond=None)[0]

    return GroupRealization(
        dim=len(B),
        mul=lambda a, b: a @ b,
        inv=np.linalg.inv,
        identity=np.eye(n),
        exp=exp,
        log=log or default_log,
        name=name,
    )


def check_group_axioms(G: GroupRealization, samples: int = 20, seed: int = 0, tol: float = GROUP_TOL) -> dict:
    rng = np.random.default_rng(seed)
    dev = {"associativity": 0.0, "identity": 0.0, "inverse": 0.0, "exp_zero": G.distance(G.exp(np.zeros(G.dim)), G.identity)}
    for _ in range(samples):
        a, b, c = (G.sample(rng, 0.5) for _ in range(3))
        dev["associativity"] = max(dev["associativity"], G.distance(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c))))
        dev["identity"] = max(dev["identity"], G.distance(G.mul(a, G.identity), a), G.distance(G.mul(G.identity, a), a))
        dev["inverse"] = max(dev["inverse"], G.distance(G.mul(a, G.inv(a)), G.identity))
    return {"deviations": dev, "ok": all(v <= tol for v in dev.values())}


@dataclass(frozen=True)
class CrossedModuleGroups:
    H: GroupRealization
    G: GroupRealization
    partial: Callable
    phi: Callable

    def check_axioms(self, samples: int = 20, seed: int = 0, tol: float = GROUP_TOL) -> dict:
        rng = np.random.default_rng(seed)
        H, G = self.H, self.G
        peiffer = equiv = 0.0
        for _ in range(samples):
            h1, h2, g = H.sample(rng, 0.5), H.sample(rng, 0.5), G.sample(rng, 0.5)
            peiffer = max(peiffer, H.distance(self.phi(self.partial(h1), h2), H.mul(H.mul(h1, h2), H.inv(h1))))
            equiv = max(equiv, G.distance(self.partial(self.phi(g, h1)), G.mul(G.mul(g, self.partial(h1)), G.inv(g))))
        dev = {"peiffer": peiffer, "equivariance": equiv}
        return {"deviations": dev, "ok": all(v <= tol for v in dev.values())}


def identity_crossed_module(G: GroupRealization) -> CrossedModuleGroups:
    """H = G, partial = id, phi = conjugation."""
    return CrossedModuleGroups(G, G, lambda h: h, lambda g, h: G.mul(G.mul(g, h), G.inv(g)))


def vector_crossed_module(delta, lam=None) -> CrossedModuleGroups:
    """Abelian H = R^m, G = R^n, partial = delta, phi(g) = expm(sum g_i lam_i).

    ``delta`` is n x m, ``lam`` a list of n matrices m x m (default zero).
    """
    D = np.array(delta, dtype=float)
    if D.ndim != 2:
        raise ValueError("delta must be an n x m matrix")
    n, m = D.shape
    L = [np.array(l, dtype=float) for l in lam] if lam is not None else [np.zeros((m, m)) for _ in range(n)]
    H, G = vector_group(m, "H"), vector_group(n, "G")

    def phi(g, h):
        A = sum((gi * Li for gi, Li in zip(g, L)), np.zeros((m, m)))
        return expm(A) @ np.asarray(h, dtype=float) if m else np.zeros(0)

    return CrossedModuleGroups(H, G, lambda h: D @ np.asarray(h, dtype=float), phi)


def semidirect_mul(k1, k2, cm: CrossedModuleGroups):
    """(h1, g1)(h2, g2) = (h1 phi(g1) h2, g1 g2)."""
    (h1, g1), (h2, g2) = k1, k2
    return cm.H.mul(h1, cm.phi(g1, h2)), cm.G.mul(g1, g2)


def semidirect_inv(k, cm: CrossedModuleGroups):
    h, g = k
    gi = cm.G.inv(g)
    return cm.phi(gi, cm.H.inv(h)), gi


def semidirect_identity(cm: CrossedModuleGroups):
    return cm.H.identity, cm.G.identity


def two_group_compose(k1, k2, cm: CrossedModuleGroups, tol: float = GROUP_TOL):
    """(h1, g1) o (h2, g2) = (h1 h2, g2), defined iff g1 = (partial h2) g2."""
    (h1, g1), (h2, g2) = k1, k2
    if cm.G.distance(g1, cm.G.mul(cm.partial(h2), g2)) > tol:
        raise NotComposable("source of the first arrow differs from the target of the second")
    return cm.H.mul(h1, h2), g2


def two_group_source(k, cm):
    return k[1]


def two_group_target(k, cm):
    return cm.G.mul(cm.partial(k[0]), k[1])


# -- numeric vector fields -------------------------------------------------

class NumericField:
    """A polynomial vector field packed for the numeric kernels."""

    def __init__(self, components: Sequence[Polynomial]):
        comps = list(components)
        self.dim = len(comps)
        rows, coefs, exps = [], [], []
        self.affine = all(p.degree() <= 1 for p in comps if p)
        for k, p in enumerate(comps):
            for e, c in p.terms.items():
                rows.append(k)
                coefs.append(float(c))
                exps.append(e)
        self.comp = np.array(rows, dtype=np.int64)
        self.coef = np.array(coefs, dtype=np.float64)
        self.exps = np.array(exps, dtype=np.int64).reshape(len(rows), self.dim)
        if self.affine:
            A = np.zeros((self.dim, self.dim))
            b = np.zeros(self.dim)
            for k, p in enumerate(comps):
                for e, c in p.terms.items():
                    if sum(e) == 0:
                        b[k] += float(c)
                    else:
                        A[k, e.index(1)] += float(c)
            self.A, self.b = A, b

    @classmethod
    def combine(cls, fields: Sequence["NumericField"], coeffs) -> "NumericField":
        """sum_i coeffs[i] * fields[i], done on the packed arrays."""
        out = cls.__new__(cls)
        out.dim = fields[0].dim
        pairs = [(float(c), F) for c, F in zip(coeffs, fields) if c]
        out.comp = np.concatenate([F.comp for _, F in pairs] or [np.zeros(0, np.int64)])
        out.coef = np.concatenate([c * F.coef for c, F in pairs] or [np.zeros(0)])
        out.exps = np.concatenate([F.exps for _, F in pairs] or [np.zeros((0, out.dim), np.int64)])
        out.affine = all(F.affine for _, F in pairs)
        if out.affine:
            out.A = sum((c * F.A for c, F in pairs), np.zeros((out.dim, out.dim)))
            out.b = sum((c * F.b for c, F in pairs), np.zeros(out.dim))
        return out

    def __call__(self, z) -> np.ndarray:
        return _kernels.eval_field(np.asarray(z, dtype=float), self.comp, self.coef, self.exps)

    def flow_exact(self, z, t: float = 1.0) -> np.ndarray:
        """Closed-form flow of an affine field."""
        if not self.affine:
            raise ValueError("closed-form flow needs an affine field")
        n = self.dim
        aug = np.zeros((n + 1, n + 1))
        aug[:n, :n] = self.A
        aug[:n, n] = self.b
        return (expm(t * aug) @ np.append(np.asarray(z, dtype=float), 1.0))[:n]

    def flow_rk4(self, z, t: float = 1.0, tol: float = 1e-12) -> np.ndarray:
        return _kernels.integrate(np.asarray(z, dtype=float), t, self.comp, self.coef, self.exps, tol)[0]

    def flow(self, z, t: float = 1.0, method: str = "auto") -> np.ndarray:
        if not len(self.coef):
            return np.asarray(z, dtype=float).copy()
        if method == "exact" or (method == "auto" and self.affine):
            return self.flow_exact(z, t)
        return self.flow_rk4(z, t)


# -- pair groupoid --------------------------------------------------------

@dataclass(frozen=True)
class PairGroupoidPoint:
    target: np.ndarray
    source: np.ndarray

    @classmethod
    def from_vector(cls, z) -> "PairGroupoidPoint":
        z = np.asarray(z, dtype=float)
        m = len(z) // 2
        return cls(z[:m].copy(), z[m:].copy())

    def vector(self) -> np.ndarray:
        return np.concatenate([self.target, self.source])

    def composable_with(self, other: "PairGroupoidPoint", tol: float = 1e-8) -> bool:
        return float(np.max(np.abs(self.source - other.target))) <= tol * max(1.0, float(np.max(np.abs(self.source))))

    def compose(self, other: "PairGroupoidPoint", tol: float = 1e-8) -> "PairGroupoidPoint":
        if not self.composable_with(other, tol):
            raise NotComposable("s(x) != t(y)")
        return PairGroupoidPoint(self.target, other.source)

    def distance(self, other: "PairGroupoidPoint") -> float:
        return float(np.max(np.abs(self.vector() - other.vector())))


def gamma_names(variables: Sequence[str]) -> tuple:
    m = len(variables)
    return tuple(f"x{i + 1}" for i in range(m)) + tuple(f"y{i + 1}" for i in range(m))


def _pull(p: Polynomial, ctx: tuple, side: str) -> Polynomial:
    m = len(p.vars)
    pad = (0,) * m
    terms = {(e + pad if side == "t" else pad + e): c for e, c in p.terms.items()}
    return Polynomial(ctx, terms)


def pair_bivector(pi: PoissonBivector, sign: int = 1) -> PoissonBivector:
    """sign * (-pi on the target copy + pi on the source copy)."""
    ctx = gamma_names(pi.vars)
    m = len(pi.vars)
    entries = {}
    for (i, j), p in pi.upper.items():
        entries[(i, j)] = _pull(p, ctx, "t") * (-sign)
        entries[(m + i, m + j)] = _pull(p, ctx, "s") * sign
    return PoissonBivector(ctx, entries)


def _constant_matrix(pi: PoissonBivector) -> list:
    n = len(pi.vars)
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            p = pi(i, j)
            if not p.is_constant():
                raise ValueError("this construction needs a constant bivector")
            M[i][j] = Fraction(p.constant_value()) if p else Fraction(0)
    return M


def _invert(M: list) -> list:
    n = len(M)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise ValueError("bivector is not invertible")
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [a / pv for a in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [r[n:] for r in aug]


def hamiltonian_function(pi: PoissonBivector, X: GradedFunction) -> Polynomial:
    """f with {S, f} = X, vanishing at the origin (constant invertible pi)."""
    ctx = pi.vars
    Pinv = _invert(_constant_matrix(pi))
    comps = X.as_vector()
    n = len(ctx)
    f = Polynomial.zero(ctx)
    for i in range(n):
        alpha = Polynomial.zero(ctx)
        for j in range(n):
            if Pinv[j][i] and comps[j]:
                alpha = alpha + comps[j] * Pinv[j][i]
        xi = Polynomial.var(ctx, ctx[i])
        for e, c in alpha.terms.items():
            f = f + Polynomial(ctx, {e: c / (sum(e) + 1)}) * xi
    if hamiltonian_vector_field(pi, f) != X:
        raise ValueError(f"{X} is not hamiltonian")
    return f


class PairGroupoidAction:
    """The action of H x| G on Gamma = M x M lifted from action data on M.

    g = exp(v) acts diagonally by the time-1 flow of J1 v on both copies;
    h = exp(w) acts by the time-1 flow of the hamiltonian field of
    -t^*(J0 w) on Gamma.  (h, g) acts as (h, e)(e, g).
    """

    def __init__(self, data: ActionData, cm: CrossedModuleGroups, sign: int | None = None):
        if cm.H.dim != len(data.J0) or cm.G.dim != len(data.J1):
            raise ValueError("group dimensions do not match the action data")
        self.data = data
        self.cm = cm
        self.pi = data.pi
        _invert(_constant_matrix(self.pi))
        self.m = len(self.pi.vars)
        self.ctx = gamma_names(self.pi.vars)
        self.calibration: dict = {}
        self.sign = sign if sign is not None else self.calibrate()["sign"]
        self.pi_gamma = pair_bivector(self.pi, self.sign)
        self._hfields = [self._h_components(_exact_unit(cm.H.dim, a)) for a in range(cm.H.dim)]
        self._gfields = [self._g_components(_exact_unit(cm.G.dim, i)) for i in range(cm.G.dim)]
        self._hnum = [NumericField(c) for c in self._hfields]
        self._gnum = [NumericField(c) for c in self._gfields]
        self._mnum = [NumericField(X.as_vector()) for X in data.J1]

    # symbolic pieces
    def t_pull(self, p: Polynomial) -> Polynomial:
        return _pull(p, self.ctx, "t")

    def s_pull(self, p: Polynomial) -> Polynomial:
        return _pull(p, self.ctx, "s")

    def _h_components(self, w) -> list:
        f = -self.t_pull(self.data.j0(w))
        return hamiltonian_vector_field(pair_bivector(self.pi, self.sign), f).as_vector()

    def _g_components(self, v) -> list:
        comps = self.data.j1(v).as_vector()
        return [self.t_pull(p) for p in comps] + [self.s_pull(p) for p in comps]

    def generator_fields(self) -> list:
        """Hamiltonian generators on Gamma: h basis first, then g basis."""
        gens = [GradedFunction.vector_field(c, self.ctx) for c in self._hfields + self._gfields]
        return [X for X in gens if X]

    def moment_map(self) -> list:
        """Components (-t^*J0 w_a, s^*f_i - t^*f_i) with {S, f_i} = J1 v_i."""
        out = [-self.t_pull(p) for p in self.data.J0]
        for X in self.data.J1:
            f = hamiltonian_function(self.pi, X)
            out.append(self.s_pull(f) - self.t_pull(f))
        return out

    # numerics
    def act(self, k, x: PairGroupoidPoint) -> PairGroupoidPoint:
        h, g = k
        z = x.vector()
        if self.cm.G.dim:
            z = NumericField.combine(self._gnum, self.cm.G.log(g)).flow(z)
        if self.cm.H.dim:
            z = NumericField.combine(self._hnum, self.cm.H.log(h)).flow(z)
        return PairGroupoidPoint.from_vector(z)

    def act_M(self, g, p) -> np.ndarray:
        """Action of G on M by the time-1 flow of J1(log g)."""
        if not self.cm.G.dim:
            return np.asarray(p, dtype=float).copy()
        return NumericField.combine(self._mnum, self.cm.G.log(g)).flow(np.asarray(p, dtype=float))

    def calibrate(self, samples: int = 5, seed: int = 0) -> dict:
        """Fix the sign of Omega by the identity (X_f)^Gamma = X_{s*f} - X_{t*f}.

        The left side (diagonal lift) uses closed-form affine flows; the right
        side is integrated with RK4.  Sampled f are quadratic.
        """
        rng = random.Random(seed)
        nrng = np.random.default_rng(seed)
        ctx = self.pi.vars
        devs = {1: 0.0, -1: 0.0}
        for _ in range(samples):
            f = Polynomial.zero(ctx)
            for i in range(self.m):
                f = f + Polynomial.var(ctx, ctx[i]) * Fraction(rng.randint(-3, 3), 2)
                for j in range(i, self.m):
                    f = f + Polynomial.var(ctx, ctx[i]) * Polynomial.var(ctx, ctx[j]) * Fraction(rng.randint(-3, 3), 4)
            Xf = hamiltonian_vector_field(self.pi, f).as_vector()
            lift = NumericField([_pull(p, self.ctx, "t") for p in Xf] + [_pull(p, self.ctx, "s") for p in Xf])
            z = nrng.normal(size=2 * self.m)
            exact = lift.flow_exact(z, 0.5)
            for sgn in (1, -1):
                H = _pull(f, self.ctx, "s") - _pull(f, self.ctx, "t")
                rhs = NumericField(hamiltonian_vector_field(pair_bivector(self.pi, sgn), H).as_vector())
                devs[sgn] = max(devs[sgn], float(np.max(np.abs(rhs.flow_rk4(z, 0.5) - exact))))
        sign = min(devs, key=devs.get)
        self.calibration = {"sign": sign, "deviation": devs[sign], "deviations": devs, "samples": samples, "seed": seed}
        return self.calibration

    def check_moment_map(self, points: int = 5, seed: int = 0, eps: float = 1e-5) -> float:
        """Max gap between the action's generators (by central differences)
        and the hamiltonian fields of the moment map components."""
        rng = np.random.default_rng(seed)
        mom = [NumericField(hamiltonian_vector_field(self.pi_gamma, f).as_vector()) for f in self.moment_map()]
        H, G = self.cm.H, self.cm.G
        dirs = [("h", a) for a in range(H.dim)] + [("g", i) for i in range(G.dim)]
        worst = 0.0
        for _ in range(points):
            x = PairGroupoidPoint.from_vector(rng.normal(size=2 * self.m))
            for field_, (kind, a) in zip(mom, dirs):
                def at(t):
                    if kind == "h":
                        k = (H.exp(t * _unit(H.dim, a)), G.identity)
                    else:
                        k = (H.identity, G.exp(t * _unit(G.dim, a)))
                    return self.act(k, x).vector()

                fd = (at(eps) - at(-eps)) / (2 * eps)
                worst = max(worst, float(np.max(np.abs(fd - field_(x.vector())))))
        return worst


def _exact_unit(n, i):
    return [Fraction(int(k == i)) for k in range(n)]


def _unit(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e


def _pair_sample(rng, m, scale=1.0):
    a, b, c = (rng.normal(scale=scale, size=m) for _ in range(3))
    return PairGroupoidPoint(a, b), PairGroupoidPoint(b, c)


def verify_kxky(action: PairGroupoidAction, samples: int = 100, seed: int = 0, tol: float = 1e-8) -> dict:
    """Sampled check of the composability criterion and composition law.

    Half of the samples satisfy g1 = (partial h2) g2, half violate it.
    """
    cm = action.cm
    H, G = cm.H, cm.G
    rng = np.random.default_rng(seed)
    errors = 0
    dev = src_dev = tgt_dev = kxy_dev = interchange = 0.0
    composable = 0
    for s in range(samples):
        x, y = _pair_sample(rng, action.m)
        h1, h2, g2 = H.sample(rng), H.sample(rng), G.sample(rng)
        if s % 2 == 0:
            g1 = G.mul(cm.partial(h2), g2)
        else:
            g1 = G.mul(G.mul(cm.partial(h2), g2), G.exp(rng.choice([-1.0, 1.0], size=G.dim) * rng.uniform(0.5, 2.0, size=G.dim)))
        predicted = G.distance(g1, G.mul(cm.partial(h2), g2)) <= GROUP_TOL
        k1, k2 = (h1, g1), (h2, g2)
        kx, ky = action.act(k1, x), action.act(k2, y)
        actual = kx.composable_with(ky, tol)
        if actual != predicted:
            errors += 1
        # source and target intertwining
        src_dev = max(src_dev, float(np.max(np.abs(kx.source - action.act_M(g1, x.source)))))
        tgt = action.act_M(G.mul(cm.partial(h1), g1), x.target)
        tgt_dev = max(tgt_dev, float(np.max(np.abs(kx.target - tgt))))
        if predicted:
            composable += 1
            lhs = PairGroupoidPoint(kx.target, ky.source)
            rhs = action.act((H.mul(h1, h2), g2), x.compose(y))
            dev = max(dev, lhs.distance(rhs))
            # k = (h, e) case: kx o y = k(x o y) whenever kx, y compose
            kk = (h1, G.identity)
            kx0 = action.act(kk, x)
            kxy_dev = max(kxy_dev, PairGroupoidPoint(kx0.target, y.source).distance(action.act(kk, x.compose(y))))
            # interchange law of the group object
            k1p = (H.sample(rng), None)
            h2p, g2p = H.sample(rng), G.sample(rng)
            k1p = (k1p[0], G.mul(cm.partial(h2p), g2p))
            k2p = (h2p, g2p)
            left = two_group_compose(semidirect_mul(k1, k1p, cm), semidirect_mul(k2, k2p, cm), cm, 1e-8)
            right = semidirect_mul(two_group_compose(k1, k2, cm), two_group_compose(k1p, k2p, cm), cm)
            interchange = max(interchange, H.distance(left[0], right[0]), G.distance(left[1], right[1]))
    return {
        "samples": samples,
        "seed": seed,
        "composable_samples": composable,
        "classification_errors": errors,
        "max_deviation": dev,
        "source_deviation": src_dev,
        "target_deviation": tgt_dev,
        "kxy_deviation": kxy_dev,
        "interchange_deviation": interchange,
        "calibration": dict(action.calibration),
        "numba": _kernels.using_numba(),
    }


def check_flow_agreement(action: PairGroupoidAction, samples: int = 10, seed: int = 0) -> float:
    """Max gap between closed-form and RK4 flows of the action generators."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    basis = action._hnum + action._gnum
    for _ in range(samples):
        F = NumericField.combine(basis, rng.normal(size=len(basis)))
        if not F.affine or not len(F.coef):
            continue
        z = rng.normal(size=2 * action.m)
        worst = max(worst, float(np.max(np.abs(F.flow_exact(z) - F.flow_rk4(z)))))
    return worst


# -- Marsden-Weinstein quotients --------------------------------------------

@dataclass
class QuotientResult:
    constraints: dict
    quotient_coords: tuple
    bivector: PoissonBivector | None
    report: ReductionReport
    multiplicative: str = UNKNOWN
    multiplicative_detail: str = ""

    def as_dict(self) -> dict:
        return {
            "constraints": {k: str(v) for k, v in sorted(self.constraints.items())},
            "quotient_coords": list(self.quotient_coords),
            "bivector": str(self.bivector) if self.bivector is not None else None,
            "status": self.report.status,
            "multiplicative": self.multiplicative,
            "multiplicative_detail": self.multiplicative_detail,
            "report": self.report.as_dict(),
        }


def _multiplicativity(P: PoissonBivector, samples: int, seed: int) -> tuple:
    """Is the graph of pair-groupoid multiplication coisotropic for P (+) P (+) -P?

    P lives on coordinates (x_I, y_I); checked exactly at rational samples.
    """
    names = P.vars
    xs = [n for n in names if n.startswith("x")]
    ys = [n for n in names if n.startswith("y")]
    if sorted(n[1:] for n in xs) != sorted(n[1:] for n in ys) or len(xs) + len(ys) != len(names):
        return UNKNOWN, "quotient is not a coordinate pair groupoid"
    idx = {n: i for i, n in enumerate(names)}
    base = [n[1:] for n in xs]
    # constraint coefficient vectors on three copies: b - b', a - a'', c - c''
    cons = []
    for j in base:
        cons.append({(0, idx["y" + j]): 1, (1, idx["x" + j]): -1})
    for j in base:
        cons.append({(0, idx["x" + j]): 1, (2, idx["x" + j]): -1})
    for j in base:
        cons.append({(1, idx["y" + j]): 1, (2, idx["y" + j]): -1})
    sigma = (1, 1, -1)
    for pt in sample_points([f"{s}{j}" for s in "abc" for j in base], samples, seed):
        a = [pt[f"a{j}"] for j in base]
        b = [pt[f"b{j}"] for j in base]
        c = [pt[f"c{j}"] for j in base]
        copies = []
        for tv, sv in ((a, b), (b, c), (a, c)):
            point = {}
            for j, u, v in zip(base, tv, sv):
                point["x" + j], point["y" + j] = u, v
            copies.append([[P(i, l).evaluate(point) for l in range(len(names))] for i in range(len(names))])
        for p in range(len(cons)):
            for q in range(p + 1, len(cons)):
                val = 0
                for (cp, i), u in cons[p].items():
                    for (cq, l), v in cons[q].items():
                        if cp == cq:
                            val += sigma[cp] * u * v * copies[cp][i][l]
                if val:
                    return FAIL, f"constraint bracket {val} at a sample"
    return PASS, ""


def _check_affine(action: PairGroupoidAction):
    if any(p.degree() > 1 for p in action.data.J0 if p):
        raise ValueError("mw_quotient_pair supports affine J0 only")
    if any(X.poly_degree() > 1 for X in action.data.J1 if X):
        raise ValueError("mw_quotient_pair supports affine J1 only")


def mw_quotient_pair(action: PairGroupoidAction, samples: int = 8, seed: int = 0) -> dict:
    """Quotients of Gamma by the lifted H x| G action.

    ``global`` divides all of Gamma by the action orbits; ``mw`` first
    restricts to the zero level of the moment map (-t^*J0, J1^Gamma).
    """
    _check_affine(action)
    gens = action.generator_fields()
    out = {}
    for label, constraints in (("global", []), ("mw", action.moment_map())):
        solved = graph_form(constraints)
        C = SubmanifoldSpec(action.ctx, solved, {}, gens, name=f"{label} quotient")
        rep = check_coisotropic(C, action.pi_gamma)
        P = rep.reduced_bivector
        res = QuotientResult(solved, tuple(C.quotient_coords), P, rep)
        if P is not None:
            res.multiplicative, res.multiplicative_detail = _multiplicativity(P, samples, seed)
        out[label] = res
    return out
