"""Exact matroids and geometric lattices over machine-word atom sets.

Atoms are indexed 0..n-1 and every subset of atoms is a bitmask, so meet,
subset and union are single-word operations.  The supported ground-set size
is capped at 64 atoms (lower it with the FYFORGE_ATOM_CAP environment
variable).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Iterator, Optional

AtomSet = int
FlatId = int

HARD_ATOM_CAP = 64


def atom_cap() -> int:
    """Active atom cap: 64, or lower when FYFORGE_ATOM_CAP is set."""
    env = os.environ.get("FYFORGE_ATOM_CAP")
    if env:
        return min(HARD_ATOM_CAP, int(env))
    return HARD_ATOM_CAP


def check_atom_cap(n: int) -> None:
    if n < 0:
        raise ValueError("atom count must be non-negative")
    cap = atom_cap()
    if n > cap:
        raise ValueError(f"{n} atoms exceed the supported cap of {cap}")


def bits(mask: AtomSet) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(atoms: Iterable[int]) -> AtomSet:
    m = 0
    for a in atoms:
        m |= 1 << a
    return m


def atoms_of(mask: AtomSet) -> tuple[int, ...]:
    return tuple(bits(mask))


def canonical_circuits(circuits: Iterable[AtomSet]) -> tuple[AtomSet, ...]:
    """Sort circuits by size, then by bitmask value."""
    return tuple(sorted(set(circuits), key=lambda c: (c.bit_count(), c)))


@dataclass(frozen=True)
class CircuitViolation:
    """First failing circuit axiom, with the witnessing data."""

    axiom: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.axiom} violated (witness {self.witness})"


def validate_circuits(circuits: Iterable[AtomSet], n: int) -> Optional[CircuitViolation]:
    """Check the circuit axioms plus the simple-loopless convention.

    Returns None when the family is a valid circuit set of a simple loopless
    matroid, otherwise the first violated axiom.  The strengthened exchange
    axiom (a circuit through a prescribed element of C1 minus C2) is spot
    checked for ground sets of at most 12 atoms.
    """
    check_atom_cap(n)
    cs = canonical_circuits(circuits)
    ground = (1 << n) - 1
    for c in cs:
        if c == 0:
            return CircuitViolation("empty-circuit", (c,))
        if c & ~ground:
            return CircuitViolation("atom-range", (c,))
    for c1, c2 in combinations(cs, 2):
        if c1 & ~c2 == 0 or c2 & ~c1 == 0:
            return CircuitViolation("containment", (min(c1, c2, key=int.bit_count), max(c1, c2, key=int.bit_count)))
    for c1, c2 in combinations(cs, 2):
        inter = c1 & c2
        for e in bits(inter):
            allowed = (c1 | c2) & ~(1 << e)
            if not any(c & ~allowed == 0 for c in cs):
                return CircuitViolation("exchange", (c1, c2, e))
    for c in cs:
        if c.bit_count() <= 2:
            return CircuitViolation("simple-loopless", (c,))
    if n <= 12:
        for c1, c2 in combinations(cs, 2):
            for e in bits(c1 & c2):
                allowed = (c1 | c2) & ~(1 << e)
                for f in bits(c1 & ~c2):
                    fb = 1 << f
                    if not any(c & ~allowed == 0 and c & fb for c in cs):
                        return CircuitViolation("strong-exchange", (c1, c2, e, f))
    return None


class Matroid:
    """A simple loopless matroid given by its list of circuits."""

    def __init__(self, n_atoms: int, circuits: Iterable[AtomSet], validate: bool = True):
        check_atom_cap(n_atoms)
        self.n_atoms = n_atoms
        self.circuits = canonical_circuits(circuits)
        if validate:
            bad = validate_circuits(self.circuits, n_atoms)
            if bad is not None:
                raise ValueError(f"invalid circuits: {bad}")
        self.ground: AtomSet = (1 << n_atoms) - 1
        self._lattice: Optional[GeometricLattice] = None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matroid)
            and self.n_atoms == other.n_atoms
            and self.circuits == other.circuits
        )

    def __hash__(self) -> int:
        return hash((self.n_atoms, self.circuits))

    def __repr__(self) -> str:
        return f"Matroid(n_atoms={self.n_atoms}, circuits={[atoms_of(c) for c in self.circuits]})"

    def closure(self, x: AtomSet) -> AtomSet:
        """Least fixed point of the one-step rule: adjoin any atom a with a
        circuit C satisfying C <= X + a and a in C."""
        if x & ~self.ground:
            raise ValueError("subset leaves the ground set")
        cur = x
        changed = True
        while changed:
            changed = False
            for c in self.circuits:
                d = c & ~cur
                if d and d.bit_count() == 1:
                    cur |= d
                    changed = True
        return cur

    def is_independent(self, x: AtomSet) -> bool:
        return not any(c & ~x == 0 for c in self.circuits)

    def rank_of(self, x: AtomSet) -> int:
        """Rank of a subset, by greedy extension of an independent basis."""
        basis = 0
        for a in bits(x):
            cand = basis | (1 << a)
            if self.is_independent(cand):
                basis = cand
        return basis.bit_count()

    def lattice(self) -> "GeometricLattice":
        if self._lattice is None:
            self._lattice = lattice_of_flats(self)
        return self._lattice

    def to_json_dict(self) -> dict:
        return {
            "n_atoms": self.n_atoms,
            "circuits": [list(atoms_of(c)) for c in self.circuits],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Matroid":
        return cls(int(data["n_atoms"]), [mask_of(c) for c in data["circuits"]])


def circuits_from_independents(n: int, independent: Callable[[AtomSet], bool]) -> tuple[AtomSet, ...]:
    """Minimal dependent subsets of an independence oracle.

    The oracle's axioms (empty set independent, hereditary, augmentation)
    are verified exhaustively for n <= 10 before enumeration.
    """
    check_atom_cap(n)
    if n > 16:
        raise ValueError("independence-oracle enumeration is capped at 16 atoms")
    full = 1 << n
    indep = [bool(independent(m)) for m in range(full)]
    if n <= 10:
        if not indep[0]:
            raise ValueError("independence axiom violated: empty set dependent")
        for m in range(full):
            if indep[m]:
                for a in bits(m):
                    if not indep[m & ~(1 << a)]:
                        raise ValueError(f"independence axiom violated: not hereditary at {atoms_of(m)}")
        by_size: dict[int, list[int]] = {}
        for m in range(full):
            if indep[m]:
                by_size.setdefault(m.bit_count(), []).append(m)
        for k, smaller in sorted(by_size.items()):
            for bigger in by_size.get(k + 1, ()):
                for small in smaller:
                    if not any(indep[small | (1 << a)] for a in bits(bigger & ~small)):
                        raise ValueError(
                            f"independence axiom violated: no augmentation of {atoms_of(small)} from {atoms_of(bigger)}"
                        )
    out = []
    for m in sorted(range(full), key=lambda v: (v.bit_count(), v)):
        if not indep[m] and all(indep[m & ~(1 << a)] for a in bits(m)):
            out.append(m)
    return canonical_circuits(out)


class GeometricLattice:
    """The lattice of flats of a simple loopless matroid.

    Flats are stored as atom bitmasks in canonical order (size, then mask),
    and referred to by their index in that table.  Meets are intersections;
    joins go through the closure operator.  Instances are immutable after
    construction apart from internal memo tables.
    """

    def __init__(self, n_atoms: int, flat_masks: Iterable[AtomSet], matroid: Optional[Matroid] = None):
        self.n_atoms = n_atoms
        self.flats: tuple[AtomSet, ...] = tuple(sorted(set(flat_masks), key=lambda f: (f.bit_count(), f)))
        self.index: dict[AtomSet, FlatId] = {f: i for i, f in enumerate(self.flats)}
        if 0 not in self.index:
            raise ValueError("lattice must contain the empty flat")
        self.bottom: FlatId = self.index[0]
        self.top: FlatId = len(self.flats) - 1
        if any(f & ~self.flats[self.top] for f in self.flats):
            raise ValueError("lattice has no maximum flat")
        self._matroid = matroid
        self.atom_ids: tuple[FlatId, ...] = tuple(
            i for i, f in enumerate(self.flats) if f.bit_count() == 1
        )
        # rank by breadth-first search over the covering relation
        self.covers_up: tuple[tuple[FlatId, ...], ...] = self._compute_covers()
        self.rank: tuple[int, ...] = self._compute_ranks()
        self._join_cache: dict[tuple[FlatId, FlatId], FlatId] = {}
        self._closure_cache: dict[AtomSet, FlatId] = {}
        self._modular_cache: dict[FlatId, bool] = {}
        self._circuits: Optional[tuple[AtomSet, ...]] = None

    @staticmethod
    def _submask(a: AtomSet, b: AtomSet) -> bool:
        return a & ~b == 0

    def _compute_covers(self) -> tuple[tuple[FlatId, ...], ...]:
        if self._matroid is not None:
            m = self._matroid
            out = []
            for f in self.flats:
                seen = set()
                for a in bits(m.ground & ~f):
                    seen.add(m.closure(f | (1 << a)))
                out.append(tuple(sorted(self.index[c] for c in seen)))
            return tuple(out)
        # generic: covers are the minimal proper superflats
        out = []
        for i, f in enumerate(self.flats):
            ups = [j for j, g in enumerate(self.flats) if g != f and self._submask(f, g)]
            covers = [
                j
                for j in ups
                if not any(k != j and self._submask(self.flats[k], self.flats[j]) for k in ups)
            ]
            out.append(tuple(sorted(covers)))
        return tuple(out)

    def _compute_ranks(self) -> tuple[int, ...]:
        rank = [-1] * len(self.flats)
        rank[self.bottom] = 0
        frontier = [self.bottom]
        while frontier:
            nxt = []
            for i in frontier:
                for j in self.covers_up[i]:
                    if rank[j] == -1:
                        rank[j] = rank[i] + 1
                        nxt.append(j)
            frontier = nxt
        if any(r < 0 for r in rank):
            raise ValueError("flat table is not connected from the bottom")
        return tuple(rank)

    # basic order operations -------------------------------------------------

    def __len__(self) -> int:
        return len(self.flats)

    def matroid(self) -> Matroid:
        if self._matroid is None:
            raise ValueError("lattice carries no matroid (interval lattices do not)")
        return self._matroid

    def leq(self, a: FlatId, b: FlatId) -> bool:
        return self.flats[a] & ~self.flats[b] == 0

    def lt(self, a: FlatId, b: FlatId) -> bool:
        return a != b and self.leq(a, b)

    def meet(self, a: FlatId, b: FlatId) -> FlatId:
        return self.closure_id(self.flats[a] & self.flats[b])

    def closure_id(self, mask: AtomSet) -> FlatId:
        """FlatId of the smallest flat containing the given atom mask."""
        hit = self._closure_cache.get(mask)
        if hit is not None:
            return hit
        got = self.index.get(mask)
        if got is None:
            best = self.flats[self.top]
            for f in self.flats:
                if mask & ~f == 0:
                    best &= f
            got = self.index[best]
        self._closure_cache[mask] = got
        return got

    def join(self, a: FlatId, b: FlatId) -> FlatId:
        if a > b:
            a, b = b, a
        hit = self._join_cache.get((a, b))
        if hit is None:
            hit = self.closure_id(self.flats[a] | self.flats[b])
            self._join_cache[(a, b)] = hit
        return hit

    def join_set(self, ids: Iterable[FlatId]) -> FlatId:
        cur = self.bottom
        for i in ids:
            cur = self.join(cur, i)
        return cur

    def atoms_below(self, a: FlatId) -> tuple[FlatId, ...]:
        f = self.flats[a]
        return tuple(i for i in self.atom_ids if self.flats[i] & ~f == 0)

    def flats_leq(self, b: FlatId) -> tuple[FlatId, ...]:
        g = self.flats[b]
        return tuple(i for i, f in enumerate(self.flats) if f & ~g == 0)

    def flats_between(self, a: FlatId, b: FlatId) -> tuple[FlatId, ...]:
        fa, fb = self.flats[a], self.flats[b]
        return tuple(
            i for i, f in enumerate(self.flats) if fa & ~f == 0 and f & ~fb == 0
        )

    def covers_of(self, a: FlatId) -> tuple[FlatId, ...]:
        return self.covers_up[a]

    # modularity --------------------------------------------------------------

    def is_modular_pair(self, x: FlatId, y: FlatId) -> bool:
        """(x, y) is modular when z v (x ^ y) = (z v x) ^ y for all z <= y."""
        xy = self.meet(x, y)
        for z in self.flats_leq(y):
            if self.join(z, xy) != self.meet(self.join(z, x), y):
                return False
        return True

    def is_modular_element(self, x: FlatId) -> bool:
        hit = self._modular_cache.get(x)
        if hit is not None:
            return hit
        ok = all(
            self.is_modular_pair(x, y) and self.is_modular_pair(y, x)
            for y in range(len(self.flats))
        )
        self._modular_cache[x] = ok
        return ok

    # intervals ---------------------------------------------------------------

    def interval(self, a: FlatId, b: FlatId) -> tuple["GeometricLattice", tuple[FlatId, ...]]:
        """The interval [a, b] as a geometric lattice in its own right.

        Atoms of the result are the covers of `a` below `b`.  Returns the
        sublattice together with the back-map from its FlatIds to parent
        FlatIds.
        """
        if not self.leq(a, b):
            raise ValueError("interval endpoints are not comparable")
        sub_atoms = [c for c in self.covers_up[a] if self.leq(c, b)]
        members = self.flats_between(a, b)
        local_masks = []
        mask_to_parent = {}
        for i in members:
            f = self.flats[i]
            lm = mask_of(k for k, c in enumerate(sub_atoms) if self.flats[c] & ~f == 0)
            local_masks.append(lm)
            mask_to_parent[lm] = i
        sub = GeometricLattice(len(sub_atoms), local_masks)
        backmap = tuple(mask_to_parent[f] for f in sub.flats)
        return sub, backmap

    # derived circuits (used for irreducibility of interval lattices) ---------

    def circuits(self) -> tuple[AtomSet, ...]:
        """Circuits of the underlying matroid, over this lattice's own atoms.

        For lattices built from a matroid this re-expresses the stored
        circuits; for interval lattices it enumerates minimal dependent
        atom sets through the rank oracle.
        """
        if self._circuits is None:
            n = len(self.atom_ids)
            if n > 20:
                raise ValueError("circuit enumeration capped at 20 lattice atoms")
            deps = {}
            out = []
            for m in sorted(range(1 << n), key=lambda v: (v.bit_count(), v)):
                size = m.bit_count()
                if size < 2:
                    deps[m] = False
                    continue
                if any(deps.get(m & ~(1 << a), False) for a in bits(m)):
                    deps[m] = True
                    continue
                j = self.join_set(self.atom_ids[a] for a in bits(m))
                dependent = self.rank[j] < size
                deps[m] = dependent
                if dependent:
                    out.append(m)
            self._circuits = canonical_circuits(out)
        return self._circuits


def lattice_of_flats(m: Matroid) -> GeometricLattice:
    """All closed sets of a matroid, found by breadth-first cover search."""
    bottom = m.closure(0)
    if bottom != 0:
        raise ValueError("matroid has loops: closure of the empty set is non-empty")
    seen = {bottom}
    frontier = [bottom]
    while frontier:
        nxt = []
        for f in frontier:
            for a in bits(m.ground & ~f):
                c = m.closure(f | (1 << a))
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return GeometricLattice(m.n_atoms, seen, matroid=m)


# chains of modular elements -------------------------------------------------


def supersolvable_witness(lattice: GeometricLattice) -> Optional[tuple[FlatId, ...]]:
    """Maximal chain of modular elements from bottom to top, or None.

    Depth-first search over modular covers, exploring flats in canonical
    order, so the first chain found is the lexicographically least witness.
    """
    target = lattice.rank[lattice.top]

    def extend(chain: list[FlatId]) -> Optional[list[FlatId]]:
        last = chain[-1]
        if last == lattice.top:
            return chain
        for c in lattice.covers_up[last]:
            if lattice.is_modular_element(c):
                got = extend(chain + [c])
                if got is not None:
                    return got
        return None

    got = extend([lattice.bottom])
    if got is None:
        return None
    assert len(got) == target + 1
    return tuple(got)


def induced_chain(
    lattice: GeometricLattice,
    chain: tuple[FlatId, ...],
    g1: FlatId,
    g2: FlatId,
) -> tuple[FlatId, ...]:
    """Image of a modular chain in the interval [g1, g2], deduplicated."""
    if not lattice.leq(g1, g2):
        raise ValueError("interval endpoints are not comparable")
    out: list[FlatId] = []
    for mchain in chain:
        v = lattice.meet(lattice.join(mchain, g1), g2)
        if not out or out[-1] != v:
            out.append(v)
    assert out[0] == g1 and out[-1] == g2
    return tuple(out)


def modular_circuit_witness(m: Matroid, g: AtomSet, c: AtomSet):
    """Resolve a circuit against a modular flat.

    Returns "contained", "disjoint", or a circuit C' whose intersection with
    g is a single atom and whose remainder lies inside c minus g.
    """
    lattice = m.lattice()
    gid = lattice.index.get(g)
    if gid is None:
        raise ValueError("g is not a flat")
    if not lattice.is_modular_element(gid):
        raise ValueError("g is not a modular flat")
    if c not in m.circuits:
        raise ValueError("c is not a circuit")
    if c & ~g == 0:
        return "contained"
    if c & g == 0:
        return "disjoint"
    outside = c & ~g
    for cp in m.circuits:
        if (cp & g).bit_count() == 1 and (cp & ~g) & ~outside == 0:
            return cp
    raise AssertionError("no witness circuit found against a modular flat")


# standard families ------------------------------------------------------------


def boolean_matroid(n: int) -> Matroid:
    if n > 16:
        raise ValueError("boolean lattices are capped at 16 atoms")
    return Matroid(n, [])


def boolean_lattice(n: int) -> GeometricLattice:
    return boolean_matroid(n).lattice()


def simple_cycles_edge_masks(n_vertices: int, edges: list[tuple[int, int]]) -> tuple[AtomSet, ...]:
    """Edge sets of the simple cycles of a graph, as bitmasks over edge indices."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n_vertices)}
    for idx, (u, v) in enumerate(edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    cycles = set()

    def walk(start: int, current: int, visited: int, emask: AtomSet, first_step: int):
        for (w, eidx) in adj[current]:
            if w == start and current != start:
                # close the cycle; avoid the reversed duplicate
                if emask.bit_count() >= 2 and first_step < current:
                    cycles.add(emask | (1 << eidx))
                continue
            if w <= start or (visited >> w) & 1:
                continue
            walk(start, w, visited | (1 << w), emask | (1 << eidx), first_step if current != start else w)

    for s in range(n_vertices):
        walk(s, s, 1 << s, 0, n_vertices)
    return canonical_circuits(cycles)


def graphical_matroid(n_vertices: int, edges: list[tuple[int, int]]) -> Matroid:
    """Cycle matroid of a simple graph; atom i is the i-th edge of the list."""
    norm = [tuple(sorted(e)) for e in edges]
    if any(u == v for u, v in norm):
        raise ValueError("graph has a loop")
    if len(set(norm)) != len(norm):
        raise ValueError("graph has parallel edges")
    check_atom_cap(len(norm))
    return Matroid(len(norm), simple_cycles_edge_masks(n_vertices, norm))


def partition_matroid(n: int) -> Matroid:
    """Cycle matroid of the complete graph on n vertices."""
    if n > 7:
        raise ValueError("partition lattices are capped at 7 blocks")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return graphical_matroid(n, edges)


def partition_lattice(n: int) -> GeometricLattice:
    return partition_matroid(n).lattice()


# validation helpers (exercised by the test suite) -----------------------------


def check_geometric(lattice: GeometricLattice) -> None:
    """Assert the geometric-lattice invariants on a concrete lattice."""
    n = len(lattice.flats)
    for i in range(n):
        for j in range(i + 1, n):
            mask = lattice.flats[i] & lattice.flats[j]
            if mask not in lattice.index:
                raise AssertionError("flats are not closed under intersection")
    for i in range(n):
        for j in range(i, n):
            mi = lattice.meet(i, j)
            jo = lattice.join(i, j)
            if lattice.rank[mi] + lattice.rank[jo] > lattice.rank[i] + lattice.rank[j]:
                raise AssertionError(f"submodularity fails at ({i}, {j})")
    for i in range(n):
        if lattice.join_set(lattice.atoms_below(i)) != i:
            raise AssertionError(f"flat {i} is not a join of atoms")
    for i in range(n):
        for j in lattice.covers_up[i]:
            if lattice.rank[j] != lattice.rank[i] + 1:
                raise AssertionError("covers do not raise rank by one")
