"""Chern character and higher discriminants in a truncated graded ring.

Classes live in Q[g_1, ..., g_k] / (degree > n), the free graded-commutative
ring on named even generators with weights.  For a rank-r datum with Chern
classes c_1..c_n the Chern character is computed through Newton's identities,
and the higher discriminants Delta_i are defined degreewise by

    log(ch E) = log r + sum_{i>=1} (-1)^(i+1) Delta_i(E) / (i! r^i),

so Delta_1 = c_1 and Delta_2 = 2 r c_2 - (r-1) c_1^2 is the classical
discriminant.  For i >= 2 the Delta_i are invariant under twisting by a line
bundle, which is what makes them usable on Jordan-Hoelder graded pieces.

Everything is exact (fractions.Fraction); no floats anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial


class GradedRing:
    """Q[generators]/(weighted degree > truncation), generators all of even
    cohomological degree so the ring is honestly commutative."""

    def __init__(self, generators: list[tuple[str, int]], truncation: int):
        if truncation < 1:
            raise ValueError("truncation must be >= 1")
        names = [g for g, _ in generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        for g, d in generators:
            if d < 1:
                raise ValueError(f"generator {g} must have positive degree")
        self.gens = list(generators)
        self.names = names
        self.degrees = [d for _, d in generators]
        self.truncation = truncation

    def __eq__(self, other):
        return (isinstance(other, GradedRing) and self.gens == other.gens
                and self.truncation == other.truncation)

    def weight(self, mono: tuple[int, ...]) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def const(self, a) -> "GradedClass":
        a = Fraction(a)
        if a == 0:
            return self.zero()
        return GradedClass(self, {tuple([0] * len(self.gens)): a})

    def gen(self, name: str) -> "GradedClass":
        i = self.names.index(name)
        mono = [0] * len(self.gens)
        mono[i] = 1
        return GradedClass(self, {tuple(mono): Fraction(1)})

    def from_terms(self, terms: dict[tuple[int, ...], Fraction]) -> "GradedClass":
        return GradedClass(self, terms)


class GradedClass:
    """Element of a GradedRing; terms beyond the truncation are dropped."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms: dict):
        self.ring = ring
        t = {}
        for mono, c in terms.items():
            c = Fraction(c)
            if c != 0 and ring.weight(mono) <= ring.truncation:
                t[tuple(mono)] = t.get(tuple(mono), Fraction(0)) + c
        self.terms = {m: c for m, c in t.items() if c != 0}

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return (isinstance(other, GradedClass) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def _coerce(self, other):
        if isinstance(other, GradedClass):
            if other.ring != self.ring:
                raise ValueError("mixed rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t = dict(self.terms)
        for m, c in o.terms.items():
            t[m] = t.get(m, Fraction(0)) + c
        return GradedClass(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ring = self.ring
        t: dict = {}
        for m1, c1 in self.terms.items():
            w1 = ring.weight(m1)
            for m2, c2 in o.terms.items():
                if w1 + ring.weight(m2) > ring.truncation:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, Fraction(0)) + c1 * c2
        return GradedClass(ring, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        r = self.ring.const(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def component(self, degree: int) -> "GradedClass":
        return GradedClass(self.ring, {m: c for m, c in self.terms.items()
                                       if self.ring.weight(m) == degree})

    def max_degree(self) -> int:
        return max((self.ring.weight(m) for m in self.terms), default=0)

    def scalar_part(self) -> Fraction:
        return self.terms.get(tuple([0] * len(self.ring.gens)), Fraction(0))

    def __repr__(self):
        from .serialize import qpoly_str
        return f"GradedClass({qpoly_str(self.terms, self.ring.names)})"


@dataclass(frozen=True)
class ChernData:
    """Rank r datum with Chern classes c_1..c_n (c[i] in degree i + 1... index
    i holds c_{i+1}); c_0 = 1 implicit."""

    rank: int
    classes: tuple
    ring: GradedRing

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if len(self.classes) != self.ring.truncation:
            raise ValueError("need exactly one class per degree 1..truncation")
        for i, ci in enumerate(self.classes, start=1):
            if ci.ring != self.ring:
                raise ValueError("class in the wrong ring")
            if any(ci.ring.weight(m) != i for m in ci.terms):
                raise ValueError(f"c_{i} is not homogeneous of degree {i}")

    def c(self, i: int) -> GradedClass:
        if i == 0:
            return self.ring.const(1)
        if 1 <= i <= len(self.classes):
            return self.classes[i - 1]
        return self.ring.zero()


def chern_character(d: ChernData) -> GradedClass:
    """ch(E) = r + sum p_k / k!, power sums from Newton's identities

    p_k = c_1 p_{k-1} - c_2 p_{k-2} + ... + (-1)^k c_{k-1} p_1 + (-1)^(k-1) k c_k.
    """
    n = d.ring.truncation
    ch = d.ring.const(d.rank)
    pows: list[GradedClass] = [d.ring.zero()]  # p_0 unused slot
    for k in range(1, n + 1):
        pk = d.ring.zero()
        for j in range(1, k):
            term = d.c(j) * pows[k - j]
            pk = pk + term if j % 2 == 1 else pk - term
        lead = d.ring.const(k) * d.c(k)
        pk = pk + lead if (k - 1) % 2 == 0 else pk - lead
        pows.append(pk)
        ch = ch + d.ring.const(Fraction(1, factorial(k))) * pk
    return ch


def _log1p(u: GradedClass) -> GradedClass:
    """log(1 + u) for u with zero scalar part, exact up to the truncation."""
    if u.scalar_part() != 0:
        raise ValueError("log argument must be 1 + (positive degree)")
    n = u.ring.truncation
    out = u.ring.zero()
    uk = u.ring.const(1)
    for k in range(1, n + 1):
        uk = uk * u
        if uk.is_zero():
            break
        c = Fraction((-1) ** (k + 1), k)
        out = out + u.ring.const(c) * uk
    return out


def higher_discriminants(d: ChernData) -> list[GradedClass]:
    """[Delta_1, ..., Delta_n] from the degree parts of log(ch/r):

    Delta_i = (-1)^(i+1) * i! * r^i * (log(ch E) - log r)_i.
    """
    r = d.rank
    ch = chern_character(d)
    u = d.ring.const(Fraction(1, r)) * ch - 1
    L = _log1p(u)
    out = []
    for i in range(1, d.ring.truncation + 1):
        coef = Fraction((-1) ** (i + 1) * factorial(i) * r ** i)
        out.append(d.ring.const(coef) * L.component(i))
    return out


def twist(d: ChernData, c1L: GradedClass) -> ChernData:
    """Chern data of E tensor L for a line bundle with first Chern class c1L:

    c_i(E ox L) = sum_j binom(r - j, i - j) c1L^(i-j) c_j(E).
    """
    if any(d.ring.weight(m) != 1 for m in c1L.terms):
        raise ValueError("c1 of a line bundle must be homogeneous of degree 1")
    r = d.rank
    new = []
    for i in range(1, d.ring.truncation + 1):
        s = d.ring.zero()
        for j in range(0, i + 1):
            if r - j < i - j:
                continue
            s = s + d.ring.const(comb(r - j, i - j)) * (c1L ** (i - j)) * d.c(j)
        new.append(s)
    return ChernData(r, tuple(new), d.ring)


@dataclass(frozen=True)
class EquivalenceReport:
    chern_binomial: bool      # r^i c_i = binom(r, i) c_1^i for all i
    delta_vanishing: bool     # Delta_i = 0 for i >= 2
    log_linear: bool          # log ch = log r + c_1 / r

    @property
    def consistent(self) -> bool:
        return self.chern_binomial == self.delta_vanishing == self.log_linear


def check_equivalence(d: ChernData) -> EquivalenceReport:
    """The three faces of log-freeness, each computed independently."""
    r = d.rank
    ring = d.ring
    b1 = all((ring.const(r ** i) * d.c(i)) == (ring.const(comb(r, i)) * d.c(1) ** i)
             for i in range(1, ring.truncation + 1))
    deltas = higher_discriminants(d)
    b2 = all(deltas[i].is_zero() for i in range(1, ring.truncation))
    ch = chern_character(d)
    u = ring.const(Fraction(1, r)) * ch - 1
    L = _log1p(u)
    expect = ring.const(Fraction(1, r)) * d.c(1)
    b3 = all((L.component(i) == expect.component(i)) for i in range(1, ring.truncation + 1))
    return EquivalenceReport(b1, b2, b3)


def binomial_chern(rank: int, sub_rank: int, c1_over_r: GradedClass, m: int) -> GradedClass:
    """c_m for a piece of rank s with all classes pinned to the slope line:
    binom(s, m) * (c_1/r)^m."""
    return c1_over_r.ring.const(comb(sub_rank, m)) * c1_over_r ** m


def whitney_sum(parts: list[ChernData]) -> ChernData:
    """Chern data of a direct sum via the Whitney product c(E) = prod c(E_i)."""
    if not parts:
        raise ValueError("empty sum")
    ring = parts[0].ring
    total = ring.const(1)
    for part in parts:
        if part.ring != ring:
            raise ValueError("mixed rings")
        cE = ring.const(1)
        for i in range(1, ring.truncation + 1):
            cE = cE + part.c(i)
        total = total * cE
    classes = tuple(total.component(i) for i in range(1, ring.truncation + 1))
    return ChernData(sum(p.rank for p in parts), classes, ring)


def direct_sum_discriminant_residual(parts: list[ChernData]) -> GradedClass:
    """Residual of the degree-2 discriminant identity for a direct sum:

        Delta(E)/r - sum_i Delta(E_i)/r_i
                   + (1/r) sum_{i<j} r_i r_j (c_1 E_i/r_i - c_1 E_j/r_j)^2

    which vanishes identically (Delta = Delta_2).  Returned so callers can
    assert emptiness against a witness if it ever fails.
    """
    if len(parts) < 1:
        raise ValueError("empty sum")
    ring = parts[0].ring
    if ring.truncation < 2:
        raise ValueError("need truncation >= 2 for Delta_2")
    total = whitney_sum(parts)
    r = total.rank

    def delta2(d: ChernData) -> GradedClass:
        return higher_discriminants(d)[1]

    res = ring.const(Fraction(1, r)) * delta2(total)
    for part in parts:
        res = res - ring.const(Fraction(1, part.rank)) * delta2(part)
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            ri, rj = parts[i].rank, parts[j].rank
            mui = ring.const(Fraction(1, ri)) * parts[i].c(1)
            muj = ring.const(Fraction(1, rj)) * parts[j].c(1)
            diff = mui - muj
            res = res + ring.const(Fraction(ri * rj, r)) * diff * diff
    return res
