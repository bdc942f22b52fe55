"""Building sets, nested sets, and supersolvable built lattices.

A building set of a geometric lattice L is a subset G of L minus the bottom
such that every lower interval [0, X] factors, through joins, as the product
of the intervals below the maximal members of G under X.  A built lattice is
such a pair; a supersolvable built lattice additionally carries a maximal
chain of modular elements inside G whose members meet every element of G
back into G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .matroid import FlatId, GeometricLattice, atoms_of, bits, induced_chain, mask_of, supersolvable_witness


def is_building_set(
    lattice: GeometricLattice, members: Iterable[FlatId]
) -> tuple[bool, Optional[FlatId]]:
    """Check the interval-factorisation property at every flat.

    For each X the factors (maximal members below X) must satisfy three
    conditions: their ranks add up to the rank of X, the product of the
    interval sizes equals the size of [0, X], and every element of [0, X]
    is the join of its meets with the factors.  Together these make the
    join map an order isomorphism.  Returns (ok, first failing X).
    """
    mset = set(members)
    if lattice.bottom in mset:
        return False, lattice.bottom
    for x in range(len(lattice.flats)):
        below = [g for g in mset if lattice.leq(g, x)]
        factors = [g for g in below if not any(h != g and lattice.leq(g, h) for h in below)]
        if sum(lattice.rank[f] for f in factors) != lattice.rank[x]:
            return False, x
        cell = lattice.flats_leq(x)
        size = 1
        for f in factors:
            size *= len(lattice.flats_leq(f))
        if size != len(cell):
            return False, x
        for y in cell:
            if lattice.join_set(lattice.meet(y, f) for f in factors) != y:
                return False, x
    return True, None


@dataclass(frozen=True)
class BuiltLattice:
    """A geometric lattice with a building set and an optional witness chain.

    `building` is the sorted tuple of member FlatIds; `witness`, when
    present, is a maximal chain of modular elements (bottom included) lying
    in the building set and closed under meets against it.
    """

    lattice: GeometricLattice
    building: tuple[FlatId, ...]
    witness: Optional[tuple[FlatId, ...]] = None

    @classmethod
    def create(
        cls,
        lattice: GeometricLattice,
        members: Iterable[FlatId],
        find_witness: bool = True,
        validate: bool = True,
    ) -> "BuiltLattice":
        building = tuple(sorted(set(members)))
        if validate:
            ok, bad = is_building_set(lattice, building)
            if not ok:
                raise ValueError(f"not a building set (fails at flat {bad})")
        witness = supersolvable_built_witness(lattice, building) if find_witness else None
        return cls(lattice, building, witness)

    def __post_init__(self):
        object.__setattr__(self, "_member_set", frozenset(self.building))

    def with_witness(self, witness: Optional[tuple[FlatId, ...]]) -> "BuiltLattice":
        return BuiltLattice(self.lattice, self.building, witness)

    def contains(self, g: FlatId) -> bool:
        return g in self._member_set

    def building_json(self) -> list:
        return [list(atoms_of(self.lattice.flats[g])) for g in self.building]

    def witness_json(self) -> Optional[list]:
        if self.witness is None:
            return None
        return [list(atoms_of(self.lattice.flats[g])) for g in self.witness]


def factors(bl: BuiltLattice, x: FlatId) -> tuple[FlatId, ...]:
    """Maximal building-set members below x; their join is x."""
    lattice = bl.lattice
    below = [g for g in bl.building if lattice.leq(g, x)]
    return tuple(
        g for g in below if not any(h != g and lattice.leq(g, h) for h in below)
    )


def maximal_building_set(lattice: GeometricLattice) -> tuple[FlatId, ...]:
    return tuple(i for i in range(len(lattice.flats)) if i != lattice.bottom)


def is_irreducible(lattice: GeometricLattice, g: FlatId) -> bool:
    """True when [0, g] is not a product, i.e. the atoms below g are
    connected by circuits lying below g."""
    atoms = lattice.atoms_below(g)
    if len(atoms) <= 1:
        return True
    pos = {a: k for k, a in enumerate(atoms)}
    gmask = lattice.flats[g]
    parent = list(range(len(atoms)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for circuit in lattice.circuits():
        member_atoms = [lattice.atom_ids[b] for b in bits(circuit)]
        if any(lattice.flats[a] & ~gmask for a in member_atoms):
            continue
        first = pos[member_atoms[0]]
        for a in member_atoms[1:]:
            ra, rb = find(first), find(pos[a])
            if ra != rb:
                parent[ra] = rb
    return len({find(k) for k in range(len(atoms))}) == 1


def minimal_building_set(lattice: GeometricLattice) -> tuple[FlatId, ...]:
    """The irreducible elements of the lattice."""
    return tuple(
        g
        for g in range(len(lattice.flats))
        if g != lattice.bottom and is_irreducible(lattice, g)
    )


def induced_building_set(bl: BuiltLattice, g1: FlatId, g2: FlatId) -> tuple[FlatId, ...]:
    """Members of the induced building set on [g1, g2], as parent FlatIds.

    These are the joins g1 v G landing strictly inside the interval.
    """
    lattice = bl.lattice
    if not lattice.leq(g1, g2):
        raise ValueError("interval endpoints are not comparable")
    out = set()
    for g in bl.building:
        j = lattice.join(g1, g)
        if j != g1 and lattice.leq(j, g2):
            out.add(j)
    return tuple(sorted(out))


def interval_built_lattice(bl: BuiltLattice, g1: FlatId, g2: FlatId) -> tuple[BuiltLattice, tuple[FlatId, ...]]:
    """The interval [g1, g2] with its induced building set, as a standalone
    built lattice plus the back-map to parent FlatIds."""
    sub, backmap = bl.lattice.interval(g1, g2)
    to_local = {p: i for i, p in enumerate(backmap)}
    members = tuple(sorted(to_local[p] for p in induced_building_set(bl, g1, g2)))
    built = BuiltLattice.create(sub, members, find_witness=False, validate=False)
    return built, backmap


def is_nested(bl: BuiltLattice, ids: Iterable[FlatId]) -> bool:
    """A subset of the building set is nested when no antichain of two or
    more members joins back into the building set."""
    lattice = bl.lattice
    mem = bl._member_set
    sel = sorted(set(ids))
    if any(s not in mem for s in sel):
        raise ValueError("nested-set candidates must lie in the building set")

    def antichains(start: int, chosen: list[FlatId], join_so_far: FlatId) -> bool:
        # returns True when every antichain extension keeps joins outside G
        for k in range(start, len(sel)):
            g = sel[k]
            if any(lattice.leq(g, c) or lattice.leq(c, g) for c in chosen):
                continue
            j = lattice.join(join_so_far, g) if chosen else g
            if len(chosen) >= 1 and j in mem:
                return False
            if not antichains(k + 1, chosen + [g], j):
                return False
        return True

    return antichains(0, [], bl.lattice.bottom)


def enumerate_nested_sets(bl: BuiltLattice, irreducible_only: bool = False) -> Iterator[tuple[FlatId, ...]]:
    """All nested sets, in depth-first canonical order, the empty set first.

    With `irreducible_only`, only sets containing every maximal member of
    the building set are produced.
    """
    lattice = bl.lattice
    mem = bl._member_set
    members = list(bl.building)
    maximal = {
        g for g in members if not any(h != g and lattice.leq(g, h) for h in members)
    }

    def ok_with(s: list[FlatId], g: FlatId) -> bool:
        # check every antichain of s + g that contains g
        incomparable = [c for c in s if not (lattice.leq(c, g) or lattice.leq(g, c))]
        chosen: list[FlatId] = []

        def rec(start: int, join_so_far: FlatId) -> bool:
            for k in range(start, len(incomparable)):
                c = incomparable[k]
                if any(lattice.leq(c, d) or lattice.leq(d, c) for d in chosen):
                    continue
                j = lattice.join(join_so_far, c)
                if j in mem:
                    return False
                chosen.append(c)
                ok = rec(k + 1, j)
                chosen.pop()
                if not ok:
                    return False
            return True

        return rec(0, g)

    def walk(start: int, current: list[FlatId]) -> Iterator[tuple[FlatId, ...]]:
        if not irreducible_only or maximal.issubset(current):
            yield tuple(current)
        for k in range(start, len(members)):
            g = members[k]
            if ok_with(current, g):
                current.append(g)
                yield from walk(k + 1, current)
                current.pop()

    yield from walk(0, [])


def is_flag(bl: BuiltLattice) -> tuple[bool, Optional[tuple[FlatId, ...]]]:
    """True when every minimal non-nested set has size two.

    On failure returns a witness antichain of size >= 3 whose join lies in
    the building set while every proper subset is nested.
    """
    lattice = bl.lattice
    mem = bl._member_set
    members = list(bl.building)

    def rec(start: int, chosen: list[FlatId]) -> Optional[tuple[FlatId, ...]]:
        # invariant: chosen is an antichain none of whose subsets of size
        # >= 2 joins into the building set
        for k in range(start, len(members)):
            g = members[k]
            if any(lattice.leq(g, c) or lattice.leq(c, g) for c in chosen):
                continue
            # proper subsets containing g must stay outside G
            clean = True
            for smask in range(1, (1 << len(chosen)) - 1):
                sel = [chosen[i] for i in range(len(chosen)) if (smask >> i) & 1]
                if lattice.join_set(sel + [g]) in mem:
                    clean = False
                    break
            if not clean:
                continue
            if chosen and lattice.join_set(chosen + [g]) in mem:
                if len(chosen) + 1 >= 3:
                    # all proper subsets are now known clean: minimal witness
                    return tuple(chosen + [g])
                continue  # a non-nested pair; supersets cannot be minimal
            got = rec(k + 1, chosen + [g])
            if got is not None:
                return got
        return None

    witness = rec(0, [])
    return (witness is None), witness


def member_meets_stay_inside(
    lattice: GeometricLattice, building: tuple[FlatId, ...], member: FlatId
) -> bool:
    bottom = lattice.bottom
    mem = set(building)
    return all(
        lattice.meet(member, g) in mem or lattice.meet(member, g) == bottom
        for g in building
    )


def supersolvable_built_witness(
    lattice: GeometricLattice, building: tuple[FlatId, ...]
) -> Optional[tuple[FlatId, ...]]:
    """Maximal chain of modular elements inside the building set whose
    members meet every member back into the building set (or the bottom).

    Returns the lexicographically least such chain under the canonical flat
    order, bottom included, or None.
    """
    mem = set(building)
    if lattice.top not in mem:
        return None
    ok_cache: dict[FlatId, bool] = {}

    def member_ok(f: FlatId) -> bool:
        got = ok_cache.get(f)
        if got is None:
            got = (
                f in mem
                and lattice.is_modular_element(f)
                and member_meets_stay_inside(lattice, building, f)
            )
            ok_cache[f] = got
        return got

    def extend(chain: list[FlatId]) -> Optional[list[FlatId]]:
        last = chain[-1]
        if last == lattice.top:
            return chain
        for c in lattice.covers_up[last]:
            if member_ok(c):
                got = extend(chain + [c])
                if got is not None:
                    return got
        return None

    got = extend([lattice.bottom])
    return tuple(got) if got is not None else None


def check_built_witness(bl: BuiltLattice) -> None:
    """Assert the witness invariants of a supersolvable built lattice."""
    if bl.witness is None:
        raise AssertionError("no witness attached")
    lattice = bl.lattice
    chain = bl.witness
    if chain[0] != lattice.bottom or chain[-1] != lattice.top:
        raise AssertionError("witness chain must run from bottom to top")
    for a, b in zip(chain, chain[1:]):
        if lattice.rank[b] != lattice.rank[a] + 1 or not lattice.lt(a, b):
            raise AssertionError("witness chain is not a maximal chain")
    for f in chain[1:]:
        if f not in bl._member_set:
            raise AssertionError("witness member outside the building set")
        if not lattice.is_modular_element(f):
            raise AssertionError("witness member is not modular")
        if not member_meets_stay_inside(lattice, bl.building, f):
            raise AssertionError("witness member meets outside the building set")


def delta_chain(bl: BuiltLattice, bottom: FlatId, g: FlatId) -> tuple[FlatId, ...]:
    """Induced modular chain on [bottom, g], ascending."""
    if bl.witness is None:
        raise ValueError("initial segments require a supersolvable witness")
    return induced_chain(bl.lattice, bl.witness, bottom, g)


def initial_segment(bl: BuiltLattice, g: FlatId, gprime: FlatId, k: int) -> FlatId:
    """The element k rank-steps below gprime on the induced modular chain of
    [g, gprime]; step 0 is gprime itself."""
    chain = delta_chain(bl, g, gprime)
    if not 0 <= k < len(chain):
        raise ValueError(f"initial-segment depth {k} out of range for a chain of length {len(chain)}")
    return chain[len(chain) - 1 - k]
