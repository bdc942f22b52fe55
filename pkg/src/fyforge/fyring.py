"""Presentations of the Feichtner-Yuzvinsky ring of a built lattice.

Two presentations are supported: the defining (affine) one on x-generators,
with linear atom relations and monomial relations from non-nested sets, and
the wonderful one on h-generators, with atom relations and antichain-product
relations.  Generators carry weight 1; all coefficients are exact rationals
with unit leading coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .building import BuiltLattice, delta_chain, induced_building_set
from .groebner import (
    MonomialOrder,
    Poly,
    buchberger,
    hilbert_from_gb,
    m_one,
    normal_form,
)
from .matroid import FlatId, GeometricLattice, atoms_of


@dataclass(frozen=True)
class GeneratorOrder:
    """Total order on the generators of an interval's building set.

    `atoms` lists the interval atoms from smallest to largest; `gens` lists
    the building-set members ascending in the induced word order (the
    lexicographic order on sorted atom words).  Positions in `gens` are the
    variable indices of every presentation built from this order.
    """

    bottom: FlatId
    top: FlatId
    atoms: tuple[FlatId, ...]
    gens: tuple[FlatId, ...]
    words: dict

    @property
    def nvars(self) -> int:
        return len(self.gens)

    def position(self, g: FlatId) -> int:
        return self.gens.index(g)

    def monomial_order(self) -> MonomialOrder:
        # later in the word order means a larger variable
        return MonomialOrder(tuple(range(len(self.gens))))


def generator_order(
    bl: BuiltLattice,
    bottom: Optional[FlatId] = None,
    top: Optional[FlatId] = None,
) -> GeneratorOrder:
    """Word-lexicographic generator order for an interval of a built lattice.

    With a supersolvable witness, interval atoms are sorted by the rank at
    which they enter the induced modular chain (ties by canonical id), and
    the resulting order on generators provably puts every initial segment
    of a generator before it, and every generator before the smaller
    generators that are not initial segments of it.  That containment is
    re-verified here and a violation raises.  Without a witness the atoms
    keep their canonical order and no containment is claimed.
    """
    lattice = bl.lattice
    if bottom is None:
        bottom = lattice.bottom
    if top is None:
        top = lattice.top
    if bottom == lattice.bottom and top == lattice.top:
        members = bl.building
    else:
        members = induced_building_set(bl, bottom, top)
    iatoms = [c for c in lattice.covers_up[bottom] if lattice.leq(c, top)]
    if bl.witness is not None:
        chain = delta_chain(bl, bottom, top)

        def entry(a: FlatId) -> int:
            for i, c in enumerate(chain):
                if lattice.leq(a, c):
                    return i
            raise AssertionError("interval atom missing from the induced chain top")

        iatoms.sort(key=lambda a: (entry(a), a))
    else:
        iatoms.sort()
    apos = {a: i for i, a in enumerate(iatoms)}

    def word(g: FlatId) -> tuple[int, ...]:
        gm = lattice.flats[g]
        return tuple(sorted(apos[a] for a in iatoms if lattice.flats[a] & ~gm == 0))

    words = {g: word(g) for g in members}
    gens = tuple(sorted(members, key=lambda g: words[g]))
    if len(set(words.values())) != len(gens):
        raise AssertionError("atom words do not separate the generators")
    order = GeneratorOrder(bottom, top, tuple(iatoms), gens, words)
    if bl.witness is not None:
        _verify_order_containment(bl, order)
    return order


def _verify_order_containment(bl: BuiltLattice, order: GeneratorOrder) -> None:
    lattice = bl.lattice
    pos = {g: i for i, g in enumerate(order.gens)}
    for g in order.gens:
        chain = delta_chain(bl, order.bottom, g)
        segs = set(chain[:-1]) - {order.bottom}
        for d in segs:
            if pos[d] >= pos[g]:
                raise AssertionError(
                    "generator order violation: an initial segment does not precede its generator"
                )
        for gp in order.gens:
            if gp != g and lattice.lt(gp, g) and gp not in segs:
                if pos[g] >= pos[gp]:
                    raise AssertionError(
                        "generator order violation: a non-initial-segment below a generator precedes it"
                    )


@dataclass
class FYPresentation:
    """One presentation of the ring: generators, relations, monomial order."""

    flavor: str  # "wonderful" (h) or "affine" (x)
    lattice: GeometricLattice
    gens: tuple[FlatId, ...]
    order: MonomialOrder
    relations: list[Poly]

    @property
    def nvars(self) -> int:
        return len(self.gens)


def _h_generator(order: GeneratorOrder, g: FlatId) -> Poly:
    return Poly.variable(len(order.gens), order.gens.index(g))


def antichain_pairs_in(
    lattice: GeometricLattice, members: Sequence[FlatId]
) -> list[tuple[FlatId, FlatId, FlatId]]:
    """Antichain pairs of members whose join is again a member."""
    mem = set(members)
    out = []
    for g1, g2 in combinations(sorted(members), 2):
        if lattice.leq(g1, g2) or lattice.leq(g2, g1):
            continue
        j = lattice.join(g1, g2)
        if j in mem:
            out.append((g1, g2, j))
    return out


def quadratic_relations(bl: BuiltLattice, order: Optional[GeneratorOrder] = None) -> tuple[GeneratorOrder, list[Poly]]:
    """Weight-at-most-2 generating set of the wonderful-presentation ideal:
    one linear relation per interval atom, and (h_G - h_{G1})(h_G - h_{G2})
    for every antichain pair {G1, G2} joining to a member G."""
    if order is None:
        order = generator_order(bl)
    lattice = bl.lattice
    n = len(order.gens)
    rels: list[Poly] = []
    for a in order.atoms:
        rels.append(Poly.variable(n, order.gens.index(a)))
    for g1, g2, j in antichain_pairs_in(lattice, order.gens):
        hj = Poly.variable(n, order.gens.index(j))
        rels.append((hj - _h_generator(order, g1)) * (hj - _h_generator(order, g2)))
    return order, rels


def _antichains_joining_into(
    lattice: GeometricLattice, members: Sequence[FlatId], max_size: int
) -> list[tuple[tuple[FlatId, ...], FlatId]]:
    mem = set(members)
    sorted_members = sorted(members)
    out: list[tuple[tuple[FlatId, ...], FlatId]] = []

    def rec(start: int, chosen: list[FlatId], join_so_far: FlatId):
        if len(chosen) >= 2 and join_so_far in mem:
            out.append((tuple(chosen), join_so_far))
        if len(chosen) >= max_size:
            return
        for k in range(start, len(sorted_members)):
            g = sorted_members[k]
            if any(lattice.leq(g, c) or lattice.leq(c, g) for c in chosen):
                continue
            j = lattice.join(join_so_far, g) if chosen else g
            rec(k + 1, chosen + [g], j)

    rec(0, [], lattice.bottom)
    return out


def presentation_h(bl: BuiltLattice, order: Optional[GeneratorOrder] = None) -> FYPresentation:
    """Wonderful presentation: atom relations plus antichain products
    prod_{G' in A} (h_G - h_{G'}) over antichains with join G in the
    building set, enumerated up to size rank."""
    if order is None:
        order = generator_order(bl)
    lattice = bl.lattice
    n = len(order.gens)
    rels: list[Poly] = [Poly.variable(n, order.gens.index(a)) for a in order.atoms]
    rank = lattice.rank[order.top] - lattice.rank[order.bottom]
    for chain_members, j in _antichains_joining_into(lattice, order.gens, rank):
        hj = _h_generator(order, j)
        poly = Poly.constant(n, 1)
        for g in chain_members:
            poly = poly * (hj - _h_generator(order, g))
        rels.append(poly)
    return FYPresentation("wonderful", lattice, order.gens, order.monomial_order(), rels)


def minimal_non_nested(bl: BuiltLattice) -> list[tuple[FlatId, ...]]:
    """All minimal non-nested sets: antichains joining into the building set
    none of whose proper subsets of size >= 2 does."""
    lattice = bl.lattice
    mem = bl._member_set
    members = list(bl.building)
    out: list[tuple[FlatId, ...]] = []

    def rec(start: int, chosen: list[FlatId]):
        for k in range(start, len(members)):
            g = members[k]
            if any(lattice.leq(g, c) or lattice.leq(c, g) for c in chosen):
                continue
            clean = True
            for smask in range(1, (1 << len(chosen)) - 1):
                sel = [chosen[i] for i in range(len(chosen)) if (smask >> i) & 1]
                if lattice.join_set(sel + [g]) in mem:
                    clean = False
                    break
            if not clean:
                continue
            if chosen and lattice.join_set(chosen + [g]) in mem:
                out.append(tuple(chosen + [g]))
                continue
            rec(k + 1, chosen + [g])

    rec(0, [])
    return out


def x_order(bl: BuiltLattice) -> tuple[tuple[FlatId, ...], MonomialOrder]:
    """Affine generators in canonical flat order with a monomial order
    refining the reversed lattice order (smaller flats are larger
    variables)."""
    gens = tuple(sorted(bl.building))
    n = len(gens)
    return gens, MonomialOrder(tuple(n - 1 - i for i in range(n)))


def presentation_x(bl: BuiltLattice) -> FYPresentation:
    """Affine presentation: one linear relation per atom of the lattice and
    one squarefree monomial per minimal non-nested set."""
    lattice = bl.lattice
    gens, order = x_order(bl)
    pos = {g: i for i, g in enumerate(gens)}
    n = len(gens)
    rels: list[Poly] = []
    for a in lattice.atom_ids:
        terms = {}
        for g in gens:
            if lattice.leq(a, g):
                terms[tuple(1 if i == pos[g] else 0 for i in range(n))] = Fraction(1)
        rels.append(Poly(terms))
    for nn in minimal_non_nested(bl):
        poly = Poly.constant(n, 1)
        for g in nn:
            poly = poly * Poly.variable(n, pos[g])
        rels.append(poly)
    return FYPresentation("affine", lattice, gens, order, rels)


def change_vars_h_to_x(bl: BuiltLattice, horder: GeneratorOrder, p: Poly) -> Poly:
    """Substitute h_G = sum of x_{G'} over members G' >= G."""
    lattice = bl.lattice
    xgens, _ = x_order(bl)
    xpos = {g: i for i, g in enumerate(xgens)}
    n = len(xgens)
    images = []
    for g in horder.gens:
        terms = {}
        for gp in xgens:
            if lattice.leq(g, gp):
                terms[tuple(1 if i == xpos[gp] else 0 for i in range(n))] = Fraction(1)
        images.append(Poly(terms))
    return _substitute(p, images, n)


def change_vars_x_to_h(bl: BuiltLattice, horder: GeneratorOrder, p: Poly) -> Poly:
    """Inverse substitution, solved triangularly from the top of the lattice
    downward."""
    lattice = bl.lattice
    xgens, _ = x_order(bl)
    hpos = {g: i for i, g in enumerate(horder.gens)}
    nh = len(horder.gens)
    image_of: dict[FlatId, Poly] = {}
    for g in sorted(xgens, key=lambda f: -lattice.rank[f]):
        expr = Poly.variable(nh, hpos[g])
        for gp in xgens:
            if gp != g and lattice.lt(g, gp):
                expr = expr - image_of[gp]
        image_of[g] = expr
    images = [image_of[g] for g in xgens]
    return _substitute(p, images, nh)


def _substitute(p: Poly, images: Sequence[Poly], n_out: int) -> Poly:
    out = Poly()
    for mono, coeff in p.terms.items():
        term = Poly.constant(n_out, coeff)
        for i, e in enumerate(mono):
            for _ in range(e):
                term = term * images[i]
        out = out + term
    return out


def classical_groebner_basis(bl: BuiltLattice) -> FYPresentation:
    """The classical Groebner basis of the affine presentation.

    Elements are (prod_{G in S} x_G) * h_{G'}^(rank gap) over nested sets S
    and members G' strictly above the join of S, together with the minimal
    non-nested monomials; h_{G'} is written in the x-generators.
    """
    from .building import enumerate_nested_sets

    lattice = bl.lattice
    gens, order = x_order(bl)
    pos = {g: i for i, g in enumerate(gens)}
    n = len(gens)

    def h_in_x(g: FlatId) -> Poly:
        terms = {}
        for gp in gens:
            if lattice.leq(g, gp):
                terms[tuple(1 if i == pos[gp] else 0 for i in range(n))] = Fraction(1)
        return Poly(terms)

    rels: list[Poly] = []
    for nested in enumerate_nested_sets(bl):
        js = lattice.join_set(nested)
        base = Poly.constant(n, 1)
        for g in nested:
            base = base * Poly.variable(n, pos[g])
        for gp in gens:
            if lattice.lt(js, gp):
                power = lattice.rank[gp] - lattice.rank[js]
                h = h_in_x(gp)
                poly = base
                for _ in range(power):
                    poly = poly * h
                rels.append(poly)
    for nn in minimal_non_nested(bl):
        poly = Poly.constant(n, 1)
        for g in nn:
            poly = poly * Poly.variable(n, pos[g])
        rels.append(poly)
    return FYPresentation("affine", lattice, gens, order, rels)


def classical_normal_monomial_counts(bl: BuiltLattice, up_to_weight: int) -> tuple[int, ...]:
    """Per-weight counts of the classical normal monomials: supports are
    nested sets and each exponent is bounded by the rank gap to the join of
    the smaller support members."""
    from .building import enumerate_nested_sets

    lattice = bl.lattice
    counts = [0] * (up_to_weight + 1)
    for nested in enumerate_nested_sets(bl):
        gaps = []
        ok = True
        for g in nested:
            below = [c for c in nested if lattice.lt(c, g)]
            tau = lattice.join_set(below)
            gap = lattice.rank[g] - lattice.rank[tau]
            if gap < 2:
                ok = False
                break
            gaps.append(gap)
        if not ok:
            continue
        weights = [0]
        for gap in gaps:
            weights = [w + e for w in weights for e in range(1, gap)]
        for w in weights:
            if w <= up_to_weight:
                counts[w] += 1
    return tuple(counts)


def hilbert_function(pres: FYPresentation, max_weight: int) -> tuple[int, ...]:
    """Normal-monomial counts per weight from a degree-capped completion."""
    gb = buchberger(pres.relations, pres.order, degree_cap=max_weight)
    return hilbert_from_gb(gb, pres.order, max_weight)


def is_quadratic(bl: BuiltLattice) -> bool:
    """The quotient by the full ideal matches the quotient by its
    weight-at-most-2 part up to the lattice rank."""
    rank = bl.lattice.rank[bl.lattice.top]
    full = hilbert_function(presentation_x(bl), rank)
    order, quad = quadratic_relations(bl)
    pres = FYPresentation("wonderful", bl.lattice, order.gens, order.monomial_order(), quad)
    return full == hilbert_function(pres, rank)


def eliminate_atom_generators(
    bl: BuiltLattice, order: GeneratorOrder, relations: Sequence[Poly]
) -> tuple[tuple[FlatId, ...], list[Poly]]:
    """Set the atom generators to zero and drop trivial or duplicate
    relations; a display form, not used by any computation."""
    lattice = bl.lattice
    keep = [i for i, g in enumerate(order.gens) if lattice.rank[g] >= 2]
    out: list[Poly] = []
    seen = set()
    for p in relations:
        terms = {}
        for mono, c in p.terms.items():
            if any(e and i not in keep for i, e in enumerate(mono)):
                continue
            terms[tuple(mono[i] for i in keep)] = c
        q = Poly(terms)
        if q and q not in seen:
            seen.add(q)
            out.append(q)

    def term_multiple_of(p: Poly, q: Poly) -> bool:
        if len(p.terms) != len(q.terms):
            return False
        pm, pc = min(p.terms.items())
        qm, qc = min(q.terms.items())
        shift = tuple(a - b for a, b in zip(pm, qm))
        if any(s < 0 for s in shift):
            return False
        return q.mul_term(shift, pc / qc) == p

    reduced = [
        p for p in out if not any(q is not p and term_multiple_of(p, q) for q in out)
    ]
    return tuple(order.gens[i] for i in keep), reduced


def poly_text(p: Poly, gens: Sequence[FlatId], lattice: GeometricLattice, order: MonomialOrder, prefix: str = "h") -> str:
    """Stable text form: terms in descending monomial order, one
    `c * h{a,b}^e * ...` chunk per term, flats printed as sorted atom
    lists."""
    if not p:
        return "0"
    chunks = []
    for mono, coeff in p.sorted_terms(order):
        bits = [str(coeff)]
        for i, e in enumerate(mono):
            if not e:
                continue
            name = prefix + "{" + ",".join(str(a) for a in atoms_of(lattice.flats[gens[i]])) + "}"
            bits.append(name if e == 1 else f"{name}^{e}")
        chunks.append(" * ".join(bits))
    return " + ".join(chunks)
