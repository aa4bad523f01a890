"""Kernel pairs, relation vectors, and the complexity-descent step.

The twisted ring acts on pairs (U, V) through the map

    f(U, V) = (1 - t*y_0) U - (1 - t*y_1) V,      y_i = 1 - x_i,

whose kernel is spanned by an explicit family of pairs W_n = (U_n, V_n),
one per n >= 0.  Relation vectors record right-module relations among the
W_i; the pairwise relations X(p, q) are the universal examples.  A single
descent step rewrites a relation vector against the X(j, gamma) family so
that its complexity (a triple built from t-valuations) strictly drops in
a well-order, which is the engine behind the non-finite-generation
certificates exposed by collapse_certificate.

Everything is exact; any failed internal assertion raises InvariantError
because the identities involved are theorems, not runtime conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from random import Random
from typing import Optional, Sequence

from .errors import InvariantError, LimitExceeded
from .laurent import LaurentPoly, one_minus_x, x_diff
from .report import CheckItem, item
from .skewpoly import SkewLaurent, format_skew

Pair = tuple[SkewLaurent, SkewLaurent]


def y_run(top: int, bottom: int) -> LaurentPoly:
    """Product y_top * y_{top-1} * ... * y_bottom; one when top < bottom."""
    out = LaurentPoly.one()
    for i in range(top, bottom - 1, -1):
        out = out * one_minus_x(i)
    return out


def defining_map(U: SkewLaurent, V: SkewLaurent) -> SkewLaurent:
    """f(U, V) = (1 - t*y_0) U - (1 - t*y_1) V."""
    one = SkewLaurent.one()
    left = (one - SkewLaurent.t(1, one_minus_x(0))) * U
    right = (one - SkewLaurent.t(1, one_minus_x(1))) * V
    got = left - right
    # Same map, written with bare x conjugates: the factor in front of V is
    # 1 - t + t^2 x t^{-1}; both spellings must collapse to one element.
    x = SkewLaurent.from_poly(LaurentPoly.x(0))
    t = SkewLaurent.t(1)
    tinv = SkewLaurent.t(-1)
    lit_left = (one - t + t * x) * U
    lit_right = (one - t + t * t * x * tinv) * V
    if got != lit_left - lit_right:
        raise InvariantError("two spellings of the defining map disagree")
    return got


@lru_cache(maxsize=None)
def kernel_pair(n: int) -> Pair:
    """The pair W_n = (U_n, V_n); constructor proves f(W_n) = 0.

    U_n = z_{-n} - t^{n+1} z_1 y_0 y_{-1} ... y_{-n}
    V_n = z_{-n} + sum_{0<i<=n} t^i z_{-n} z_1 y_0 ... y_{2-i}
                 - t^{n+1} z_1 y_0 ... y_{1-n} y_{-1-n}

    The descending y-product in the sum is empty at i = 1, and the last
    factor of the tail term skips y_{-n}.
    """
    if n < 0:
        raise ValueError(f"kernel pairs are indexed by n >= 0, got {n}")
    z1 = x_diff(1)
    zmn = x_diff(-n)
    U = SkewLaurent.from_poly(zmn) - SkewLaurent.t(n + 1, z1 * y_run(0, -n))
    V = SkewLaurent.from_poly(zmn)
    for i in range(1, n + 1):
        V = V + SkewLaurent.t(i, zmn * z1 * y_run(0, 2 - i))
    V = V - SkewLaurent.t(n + 1, z1 * y_run(0, 1 - n) * one_minus_x(-1 - n))
    if not defining_map(U, V).is_zero():
        raise InvariantError(f"kernel pair {n} is not killed by the defining map")
    return (U, V)


def bounded_kernel_check(U: SkewLaurent, V: SkewLaurent, n: int) -> bool:
    """Is (U, V) in the kernel with both t-supports inside [0, n]?

    When the support bounds hold, kernel membership is equivalent to the
    triangular layer recurrences

        v_k = u_k + sum_{0<=i<k} z_{1-i} y_{-i} ... y_{2-k} u_i

    together with the closing relation

        0 = sum_{0<=i<=n} z_{1-i} y_{-i} ... y_{1-n} u_i

    and this function verifies the equivalence on every call.
    """
    nu_u, deg_u = U.val_deg()
    nu_v, deg_v = V.val_deg()
    if nu_u < 0 or deg_u > n or nu_v < 0 or deg_v > n:
        return False
    in_kernel = defining_map(U, V).is_zero()

    u = [U.coeff(i) for i in range(n + 1)]
    v = [V.coeff(i) for i in range(n + 1)]
    layered = True
    for k in range(n + 1):
        rhs = u[k]
        for i in range(k):
            rhs = rhs + x_diff(1 - i) * y_run(-i, 2 - k) * u[i]
        if v[k] != rhs:
            layered = False
            break
    if layered:
        closing = LaurentPoly.zero()
        for i in range(n + 1):
            closing = closing + x_diff(1 - i) * y_run(-i, 1 - n) * u[i]
        layered = closing.is_zero()
    if layered != in_kernel:
        raise InvariantError("layer recurrences disagree with kernel membership")
    return in_kernel


@dataclass(frozen=True)
class Complexity:
    """Valuation profile (alpha, beta, gamma) of a relation vector.

    alpha is the valuation of the last component (inf when it vanishes),
    beta the least valuation over all components, gamma the largest
    position attaining beta.  The order makes descent well-founded:
    smaller means larger alpha, then larger beta, then smaller gamma.
    """

    alpha: float
    beta: float
    gamma: int

    def __post_init__(self):
        if self.beta > self.alpha:
            raise InvariantError("beta must not exceed alpha")

    def __lt__(self, other: "Complexity") -> bool:
        if self.alpha != other.alpha:
            return self.alpha > other.alpha
        if self.beta != other.beta:
            return self.beta > other.beta
        return self.gamma < other.gamma

    def as_tuple(self) -> tuple[float, float, int]:
        return (self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class RelationVector:
    """Element (c_0, ..., c_{n-1}) with sum W_i c_i = (0, 0), validated."""

    n: int
    c: tuple[SkewLaurent, ...]
    terminal: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.n < 1 or len(self.c) != self.n:
            raise ValueError(f"expected {self.n} components, got {len(self.c)}")
        first = SkewLaurent.zero()
        second = SkewLaurent.zero()
        for i, ci in enumerate(self.c):
            Ui, Vi = kernel_pair(i)
            first = first + Ui * ci
            second = second + Vi * ci
        if not (first.is_zero() and second.is_zero()):
            raise ValueError("not a relation: sum W_i c_i is nonzero")

    def is_zero(self) -> bool:
        return all(ci.is_zero() for ci in self.c)

    def last_component(self) -> SkewLaurent:
        return self.c[-1]

    def __sub__(self, other: "RelationVector") -> "RelationVector":
        if self.n != other.n:
            raise ValueError("arity mismatch")
        return RelationVector(self.n, tuple(a - b for a, b in zip(self.c, other.c)))

    def __add__(self, other: "RelationVector") -> "RelationVector":
        if self.n != other.n:
            raise ValueError("arity mismatch")
        return RelationVector(self.n, tuple(a + b for a, b in zip(self.c, other.c)))

    def scaled(self, w: SkewLaurent | LaurentPoly | int) -> "RelationVector":
        """Right-module action: multiply every component by w on the right."""
        return RelationVector(self.n, tuple(ci * w for ci in self.c))


@lru_cache(maxsize=None)
def pairwise_relation(p: int, q: int, n: int) -> RelationVector:
    """The relation W_q z_{-p} - W_p z_{-q} - W_{q-p-1} t^{p+1} z_1 y_0 ... y_{-p} = 0.

    Components: c_p gets -z_{-q}, c_q gets z_{-p}, and c_{q-p-1} gets the
    twisted correction (added, since q - p - 1 may collide with p).
    """
    if not 0 <= p < q < n:
        raise ValueError(f"need 0 <= p < q < n, got p={p}, q={q}, n={n}")
    c = [SkewLaurent.zero() for _ in range(n)]
    c[p] = c[p] - SkewLaurent.from_poly(x_diff(-q))
    c[q] = c[q] + SkewLaurent.from_poly(x_diff(-p))
    c[q - p - 1] = c[q - p - 1] - SkewLaurent.t(p + 1, x_diff(1) * y_run(0, -p))
    return RelationVector(n, tuple(c))


def _split_by_index(p: LaurentPoly, index: int) -> dict[int, LaurentPoly]:
    """Write p = sum_e (coefficient free of x_index) * x_index^e."""
    out: dict[int, dict] = {}
    for mono, coef in p.coeffs.items():
        e = 0
        rest = []
        for i, exp in mono:
            if i == index:
                e = exp
            else:
                rest.append((i, exp))
        out.setdefault(e, {})[tuple(rest)] = coef
    return {e: LaurentPoly(d) for e, d in out.items()}


def _power_diff_quotient(e: int, u_index: int, v_index: int) -> LaurentPoly:
    """g with x_u^e - x_v^e = (x_u - x_v) * g, for any integer e."""
    if e == 0:
        return LaurentPoly.zero()
    if e > 0:
        out = LaurentPoly.zero()
        for m in range(e):
            out = out + LaurentPoly.x(u_index, m) * LaurentPoly.x(v_index, e - 1 - m)
        return out
    pos = _power_diff_quotient(-e, u_index, v_index)
    return -(LaurentPoly.x(u_index, e) * LaurentPoly.x(v_index, e) * pos)


def ideal_decompose(a: LaurentPoly, n: int) -> Optional[list[LaurentPoly]]:
    """Write a = sum_{0<=j<n} z_{-j} a_j if a lies in (z_0, ..., z_{1-n}).

    Strategy: substitute x_{-j} = x_{1-j} + z_{1-j} for j = n down to 1,
    harvesting the z-coefficient at each stage.  Membership holds exactly
    when the fully substituted residue (every x_{-j} pushed to x_0) is zero.
    """
    if n < 1:
        raise ValueError(f"the ideal needs at least one generator, got n={n}")
    coeffs = [LaurentPoly.zero() for _ in range(n)]
    b = a
    for j in range(n, 0, -1):
        parts = _split_by_index(b, -j)
        harvested = LaurentPoly.zero()
        substituted = LaurentPoly.zero()
        for e, be in parts.items():
            harvested = harvested + be * _power_diff_quotient(e, -j, 1 - j)
            substituted = substituted + be * LaurentPoly.x(1 - j, e)
        coeffs[j - 1] = coeffs[j - 1] + harvested
        b = substituted
    if not b.is_zero():
        return None
    recombined = LaurentPoly.zero()
    for j in range(n):
        recombined = recombined + x_diff(-j) * coeffs[j]
    if recombined != a:
        raise InvariantError("ideal decomposition fails to recombine")
    return coeffs


def complexity(X: "RelationVector | Sequence[SkewLaurent]") -> Complexity:
    comps = X.c if isinstance(X, RelationVector) else tuple(X)
    if all(ci.is_zero() for ci in comps):
        raise ValueError("the zero vector has no complexity")
    nus = [ci.valuation() for ci in comps]
    beta = min(nus)
    gamma = max(k for k, nu in enumerate(nus) if nu == beta)
    return Complexity(alpha=nus[-1], beta=beta, gamma=gamma)


def reduce_step(X: RelationVector) -> RelationVector:
    """One descent step: cancel the lowest t-layer at position gamma.

    Subtracts sum_j X(j, gamma, n) * a_j t^beta where the a_j decompose the
    left layer coefficient of c_gamma at t-degree beta over the ideal
    (z_0, ..., z_{1-gamma}).  The result is a validated relation vector
    which is either zero or of strictly smaller complexity.

    A gamma = 0 input comes back unchanged but flagged terminal; the layer
    identity makes that state unreachable from validated nonzero vectors,
    so hitting it still returns rather than raising.
    """
    if X.terminal:
        return X
    if X.is_zero():
        raise ValueError("cannot reduce the zero vector")
    chi = complexity(X)
    beta, gamma = chi.beta, chi.gamma
    assert isinstance(beta, int)

    # Left layer coefficients at t-degree beta: c_k = ... + layer_k t^beta + ...
    layer = [X.c[k].coeff(beta).shift(beta) for k in range(X.n)]
    identity = LaurentPoly.zero()
    for k in range(gamma + 1):
        identity = identity + x_diff(-k) * layer[k]
    if not identity.is_zero():
        raise InvariantError("lowest-layer identity violated")

    if gamma == 0:
        return replace(X, terminal=True)

    parts = ideal_decompose(layer[gamma], gamma)
    if parts is None:
        raise InvariantError("layer coefficient escapes the expected ideal")

    comps = list(X.c)
    for j, aj in enumerate(parts):
        if aj.is_zero():
            continue
        w = SkewLaurent.from_poly(aj) * SkewLaurent.t(beta)
        correction = pairwise_relation(j, gamma, X.n)
        comps = [a - b * w for a, b in zip(comps, correction.c)]
    out = RelationVector(X.n, tuple(comps))
    if not out.is_zero() and not complexity(out) < chi:
        raise InvariantError("descent step failed to lower the complexity")
    return out


def reduce_chain(
    X: RelationVector, max_steps: int = 10_000
) -> list[RelationVector]:
    """Iterate reduce_step to zero or a terminal flag; returns the full trace."""
    trace = [X]
    for _ in range(max_steps):
        cur = trace[-1]
        if cur.is_zero() or cur.terminal:
            return trace
        trace.append(reduce_step(cur))
    raise LimitExceeded(f"reduction did not terminate within {max_steps} steps")


def last_projection_generator(p: int, n: int) -> LaurentPoly:
    """The witness z_{-p} produced as the last component of X(p, n-1, n)."""
    X = pairwise_relation(p, n - 1, n)
    got = X.last_component()
    want = SkewLaurent.from_poly(x_diff(-p))
    if got != want:
        raise InvariantError("last projection of the pairwise relation is off")
    return x_diff(-p)


# Report-producing verifiers shared by the test suite and the CLI.

def verify_kernel_pairs(max_n: int) -> list[CheckItem]:
    items = []
    for n in range(max_n + 1):
        U, V = kernel_pair(n)
        items.append(item(f"defining map kills pair {n}", "0", format_skew(defining_map(U, V))))
        ok = bounded_kernel_check(U, V, n + 1)
        items.append(item(f"pair {n} satisfies the layer recurrences", True, ok))
    return items


def verify_relations(max_q: int) -> list[CheckItem]:
    items = []
    for q in range(1, max_q + 1):
        n = q + 1
        for p in range(q):
            try:
                pairwise_relation(p, q, n)
                items.append(item(f"relation ({p},{q}) validates", True, True))
            except ValueError:
                items.append(item(f"relation ({p},{q}) validates", True, False))
    for n in range(2, max_q + 2):
        for p in range(n - 1):
            got = pairwise_relation(p, n - 1, n).last_component()
            want = SkewLaurent.from_poly(x_diff(-p))
            items.append(
                item(
                    f"last projection of ({p},{n - 1}) at arity {n}",
                    format_skew(want),
                    format_skew(got),
                )
            )
    return items


def random_relation(n: int, rng: Random, spread: int = 2) -> RelationVector:
    """Random right-combination of pairwise relations at arity n."""
    out = RelationVector(n, tuple(SkewLaurent.zero() for _ in range(n)))
    pairs = [(p, q) for q in range(1, n) for p in range(q)]
    rng.shuffle(pairs)
    used = 0
    for p, q in pairs:
        if used >= 2 and rng.random() < 0.5:
            break
        mono = LaurentPoly.x(rng.randint(-spread, spread), rng.randint(-1, 1))
        coef = rng.choice([-2, -1, 1, 2]) * mono
        w = SkewLaurent.t(rng.randint(0, spread), coef)
        out = out + pairwise_relation(p, q, n).scaled(w)
        used += 1
    return out


def verify_reduction(arity: int, count: int, seed: int) -> list[CheckItem]:
    rng = Random(seed)
    items = []
    for trial in range(count):
        n = rng.randint(2, arity)
        X = random_relation(n, rng)
        if X.is_zero():
            items.append(item(f"trial {trial}: combination already zero", True, True))
            continue
        trace = reduce_chain(X)
        chis = [complexity(v) for v in trace if not v.is_zero() and not v.terminal]
        decreasing = all(b < a for a, b in zip(chis, chis[1:]))
        ended = trace[-1].is_zero() or trace[-1].terminal
        items.append(
            item(
                f"trial {trial}: arity {n} chain of {len(trace) - 1} steps",
                "strictly decreasing to an end state",
                "ok" if (decreasing and ended) else "violation",
                ok=decreasing and ended,
            )
        )
    return items


def collapse_certificate(n: int, samples: int = 20, seed: int = 7) -> list[CheckItem]:
    """Certify 1 is outside the right ideal generated by z_0..z_{1-n}.

    The collapse map x_i -> x is a ring morphism killing every generator,
    hence the whole right ideal, while collapse(1) = 1 survives.  Checked
    on the generators, on random right multiples, and on the unit.
    """
    rng = Random(seed)
    items = []
    for j in range(n):
        got = SkewLaurent.from_poly(x_diff(-j)).collapse()
        items.append(item(f"generator z_{-j} collapses to zero", True, got.is_zero()))
    dead = 0
    for _ in range(samples):
        j = rng.randrange(n)
        w = SkewLaurent.t(
            rng.randint(-2, 2),
            LaurentPoly.x(rng.randint(-2, 2), rng.randint(-2, 2))
            + LaurentPoly.const(rng.randint(-2, 2)),
        )
        prod = SkewLaurent.from_poly(x_diff(-j)) * w
        if prod.collapse().is_zero():
            dead += 1
    items.append(item("random right multiples collapse to zero", samples, dead))
    one = SkewLaurent.one().collapse()
    items.append(item("the unit survives the collapse", "1", "1" if one == one * one and not one.is_zero() else "0"))
    witnesses = all(
        not SkewLaurent.from_poly(last_projection_generator(p, n)).is_zero()
        for p in range(n - 1)
    ) if n >= 2 else True
    items.append(item("projection witnesses are nonzero", True, witnesses))
    return items
