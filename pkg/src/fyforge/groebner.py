"""Exact multivariate polynomial arithmetic and Buchberger completion.

Monomials are exponent tuples over a fixed variable space; coefficients are
rationals.  The only monomial order used is degree-lexicographic over a
configurable variable significance, which is total, multiplicative and
degree-compatible.  No floating point anywhere.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Monomial = tuple[int, ...]


def m_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def m_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def m_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def m_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def m_deg(a: Monomial) -> int:
    return sum(a)


def m_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def m_one(nvars: int) -> Monomial:
    return (0,) * nvars


def m_var(nvars: int, i: int, power: int = 1) -> Monomial:
    return tuple(power if k == i else 0 for k in range(nvars))


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-lexicographic order; `significance[i]` ranks variable i, and a
    larger rank means a larger variable."""

    significance: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "_by_significance",
            tuple(sorted(range(len(self.significance)), key=lambda i: -self.significance[i])),
        )

    @property
    def nvars(self) -> int:
        return len(self.significance)

    def key(self, m: Monomial):
        order: tuple[int, ...] = self._by_significance  # type: ignore[attr-defined]
        return (m_deg(m), tuple(m[i] for i in order))

    def max_monomial(self, monos: Iterable[Monomial]) -> Monomial:
        return max(monos, key=self.key)


def identity_order(nvars: int) -> MonomialOrder:
    """Variable i+1 is larger than variable i."""
    return MonomialOrder(tuple(range(nvars)))


class Poly:
    """Polynomial with exact rational coefficients, zero terms absent."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict[Monomial, Fraction]] = None, normalize: bool = True):
        if terms is None:
            self.terms: dict[Monomial, Fraction] = {}
        elif normalize:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}
        else:
            self.terms = terms

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls({m_one(nvars): Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, i: int, c=1) -> "Poly":
        return cls({m_var(nvars, i): Fraction(c)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Poly") -> "Poly":
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m, Fraction(0)) + c
            if v:
                res[m] = v
            else:
                res.pop(m, None)
        return Poly(res, normalize=False)

    def __sub__(self, other: "Poly") -> "Poly":
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m, Fraction(0)) - c
            if v:
                res[m] = v
            else:
                res.pop(m, None)
        return Poly(res, normalize=False)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()}, normalize=False)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly()
        return Poly({m: c * v for m, v in self.terms.items()}, normalize=False)

    def mul_term(self, mono: Monomial, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly()
        return Poly({m_mul(m, mono): c * v for m, v in self.terms.items()}, normalize=False)

    def __mul__(self, other: "Poly") -> "Poly":
        res: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m_mul(m1, m2)
                v = res.get(m, Fraction(0)) + c1 * c2
                if v:
                    res[m] = v
                else:
                    res.pop(m, None)
        return Poly(res, normalize=False)

    def lead(self, order: MonomialOrder) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = order.max_monomial(self.terms.keys())
        return m, self.terms[m]

    def monic(self, order: MonomialOrder) -> "Poly":
        _, c = self.lead(order)
        if c == 1:
            return self
        return self.scale(Fraction(1) / c)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(m_deg(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {m_deg(m) for m in self.terms}
        return len(degs) <= 1

    def sorted_terms(self, order: MonomialOrder) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        bits = []
        for m, c in sorted(self.terms.items()):
            vs = "*".join(f"x{i}^{e}" for i, e in enumerate(m) if e)
            bits.append(f"{c}{'*' + vs if vs else ''}")
        return "Poly(" + " + ".join(bits) + ")"


def poly_product(polys: Sequence[Poly], nvars: int) -> Poly:
    out = Poly.constant(nvars, 1)
    for p in polys:
        out = out * p
    return out


def normal_form(p: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    """Fully reduce p: no monomial of the result is divisible by any basis
    leading monomial.

    Deterministic: always reduce the largest reducible monomial, by the
    basis element with the smallest leading monomial among the divisors.
    """
    if not basis:
        return p
    leads = [(b.lead(order)[0], b.lead(order)[1], b) for b in basis if b]
    leads.sort(key=lambda t: order.key(t[0]))
    rem: dict[Monomial, Fraction] = {}
    work = dict(p.terms)
    while work:
        m = order.max_monomial(work.keys())
        c = work.pop(m)
        for lm, lc, b in leads:
            if m_divides(lm, m):
                quot = m_div(m, lm)
                coeff = c / lc
                for bm, bc in b.terms.items():
                    mm = m_mul(bm, quot)
                    if mm == m:
                        continue
                    v = work.get(mm, Fraction(0)) - coeff * bc
                    if v:
                        work[mm] = v
                    else:
                        work.pop(mm, None)
                break
        else:
            rem[m] = c
    return Poly(rem, normalize=False)


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    fm, fc = f.lead(order)
    gm, gc = g.lead(order)
    lcm = m_lcm(fm, gm)
    return f.mul_term(m_div(lcm, fm), Fraction(1) / fc) - g.mul_term(
        m_div(lcm, gm), Fraction(1) / gc
    )


def _interreduce(basis: list[Poly], order: MonomialOrder) -> list[Poly]:
    """Reduced basis: monic, no leading monomial divides another, tails
    reduced, sorted by leading monomial."""
    polys = [p for p in basis if p]
    changed = True
    while changed:
        changed = False
        polys.sort(key=lambda p: order.key(p.lead(order)[0]))
        keep: list[Poly] = []
        for i, p in enumerate(polys):
            lm = p.lead(order)[0]
            if any(m_divides(q.lead(order)[0], lm) for q in keep):
                rest = keep + polys[i + 1 :]
                r = normal_form(p, rest, order)
                if r:
                    keep.append(r.monic(order))
                changed = True
            else:
                keep.append(p.monic(order))
        polys = keep
    out = []
    for i, p in enumerate(polys):
        others = polys[:i] + polys[i + 1 :]
        tail = normal_form(p, others, order)
        out.append(tail.monic(order) if tail else p)
    out = [p for p in out if p]
    out.sort(key=lambda p: order.key(p.lead(order)[0]))
    return out


def buchberger(
    gens: Sequence[Poly],
    order: MonomialOrder,
    degree_cap: Optional[int] = None,
) -> list[Poly]:
    """Reduced Groebner basis of the given generators.

    With `degree_cap` d (homogeneous input only) S-pairs above degree d are
    discarded; the result then determines the leading-term ideal up to
    degree d, which is all a Hilbert-function computation needs.

    S-pair management uses the coprimality criterion and the chain
    criterion over already-processed pairs.
    """
    basis = _interreduce(list(gens), order)
    if degree_cap is not None:
        for g in gens:
            if g and not g.is_homogeneous():
                raise ValueError("degree-capped completion requires homogeneous generators")
        basis = [p for p in basis if p.degree() <= degree_cap]
    leads = [p.lead(order)[0] for p in basis]
    done: set[tuple[int, int]] = set()
    heap: list[tuple[int, int, int]] = []

    def push_pairs(j: int) -> None:
        for i in range(j):
            deg = m_deg(m_lcm(leads[i], leads[j]))
            if degree_cap is not None and deg > degree_cap:
                continue
            heapq.heappush(heap, (deg, i, j))

    for j in range(len(basis)):
        push_pairs(j)

    while heap:
        _, i, j = heapq.heappop(heap)
        done.add((i, j))
        li, lj = leads[i], leads[j]
        if m_coprime(li, lj):
            continue
        lcm = m_lcm(li, lj)
        skip = False
        for k, lk in enumerate(leads):
            if k in (i, j) or not m_divides(lk, lcm):
                continue
            pik = (min(i, k), max(i, k))
            pjk = (min(j, k), max(j, k))
            if pik in done and pjk in done:
                skip = True
                break
        if skip:
            continue
        s = s_polynomial(basis[i], basis[j], order)
        r = normal_form(s, basis, order)
        if r:
            basis.append(r.monic(order))
            leads.append(r.lead(order)[0])
            push_pairs(len(basis) - 1)
    return _interreduce(basis, order)


def is_groebner(
    gens: Sequence[Poly],
    order: MonomialOrder,
    degree_cap: Optional[int] = None,
) -> tuple[bool, Optional[tuple[int, int, Poly]]]:
    """Check that every S-polynomial reduces to zero.

    Only the (unconditionally sound) coprimality criterion is used to skip
    pairs.  On failure returns the offending pair of generator indices and
    the nonzero normal form of its S-polynomial.
    """
    basis = [p for p in gens if p]
    leads = [p.lead(order)[0] for p in basis]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if m_coprime(leads[i], leads[j]):
                continue
            if degree_cap is not None and m_deg(m_lcm(leads[i], leads[j])) > degree_cap:
                continue
            r = normal_form(s_polynomial(basis[i], basis[j], order), basis, order)
            if r:
                return False, (i, j, r)
    return True, None


def normal_monomials(
    lead_monomials: Sequence[Monomial],
    nvars: int,
    up_to_degree: int,
) -> list[list[Monomial]]:
    """Monomials not divisible by any leading monomial, listed per degree."""
    by_degree: list[list[Monomial]] = [[] for _ in range(up_to_degree + 1)]
    leads = sorted(set(lead_monomials), key=m_deg)

    def divisible(m: Monomial) -> bool:
        return any(m_divides(lm, m) for lm in leads)

    # any divisor of a normal monomial is normal, so each degree level is
    # reachable from the previous one by multiplying with a single variable
    by_degree[0] = [] if divisible(m_one(nvars)) else [m_one(nvars)]
    level = list(by_degree[0])
    for d in range(1, up_to_degree + 1):
        seen: set[Monomial] = set()
        nxt: list[Monomial] = []
        for m in level:
            for i in range(nvars):
                mm = m_mul(m, m_var(nvars, i))
                if mm in seen:
                    continue
                seen.add(mm)
                if not divisible(mm):
                    nxt.append(mm)
        nxt.sort()
        by_degree[d] = nxt
        level = nxt
    return by_degree


def hilbert_from_gb(
    gb: Sequence[Poly], order: MonomialOrder, up_to_degree: int
) -> tuple[int, ...]:
    """Counts of normal monomials per degree for a (possibly truncated)
    Groebner basis."""
    nvars = order.nvars
    leads = [p.lead(order)[0] for p in gb if p]
    per_degree = normal_monomials(leads, nvars, up_to_degree)
    return tuple(len(level) for level in per_degree)
