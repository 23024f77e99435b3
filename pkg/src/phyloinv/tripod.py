"""Generators of the admissible-matrix lattice for tripod trees.

An *admissible* matrix for a group G is a |G| x |G| integer matrix, rows
and columns indexed by the element enumeration order, satisfying three
linear conditions: every row sums to zero, every column sums to zero, and
for every k in G the entries over {(i, j) : i + j = k} sum to zero.  These
are exactly the integer relations among the flows [i, j, -i-j] of a tripod,
so a generating set of the admissible lattice gives the tripod's defining
binomials on the dense torus orbit.

For cyclic Z_g the basis is indexed by K = {(i, j) : i != 0, j not in
{0, 1}} and built from sums of exchange matrices; each basis matrix has a
single 1 inside K (at its own index) and zeros at the other K positions,
which is what makes the set a lattice basis.  For products G x H the basis
consists of degree-3 matrices from eight families (six built from a fixed
six-entry pattern and its transposes, plus the two embedded factor bases).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import Error
from .flows import Binomial, binomial_from_multisets, flow_from_leaves
from .groups import Element, GroupSpec, prime_power_refinement
from .trees import RootedTree, canonical_rooting, parse_newick


class AdmissibilityError(Error, ValueError):
    pass


@lru_cache(maxsize=None)
def tripod_tree() -> RootedTree:
    return canonical_rooting(parse_newick("(1,2,3);"))


def admissibility_failure(entries, spec: GroupSpec) -> str | None:
    """None when admissible, else a description of the first failing condition."""
    els = spec.elements
    n = len(els)
    if len(entries) != n or any(len(row) != n for row in entries):
        return f"matrix must be {n}x{n} for group {spec}"
    for i, row in enumerate(entries):
        s = sum(row)
        if s:
            return f"row {els[i]} sums to {s}"
    for j in range(n):
        s = sum(row[j] for row in entries)
        if s:
            return f"column {els[j]} sums to {s}"
    class_sum: dict[Element, int] = {e: 0 for e in els}
    for i, row in enumerate(entries):
        for j, v in enumerate(row):
            if v:
                class_sum[spec.add(els[i], els[j])] += v
    for k, s in class_sum.items():
        if s:
            return f"antidiagonal class i+j={k} sums to {s}"
    return None


def is_admissible(entries, spec: GroupSpec) -> tuple[bool, str | None]:
    failure = admissibility_failure(entries, spec)
    return failure is None, failure


@dataclass(frozen=True)
class AdmissibleMatrix:
    """An admissible matrix; the constructor enforces admissibility."""

    group: GroupSpec
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in row)
                                                  for row in self.entries))
        failure = admissibility_failure(self.entries, self.group)
        if failure is not None:
            raise AdmissibilityError(f"not admissible: {failure}")

    @cached_property
    def degree(self) -> int:
        return sum(x for row in self.entries for x in row if x > 0)

    def entry(self, a: Element, b: Element) -> int:
        return self.entries[self.group.index(a)][self.group.index(b)]

    def transpose(self) -> "AdmissibleMatrix":
        n = len(self.entries)
        return AdmissibleMatrix(self.group, tuple(
            tuple(self.entries[i][j] for i in range(n)) for j in range(n)))

    def flat(self) -> tuple[int, ...]:
        return tuple(x for row in self.entries for x in row)

    def to_json(self) -> dict:
        return {"group": str(self.group),
                "entries": [list(row) for row in self.entries],
                "degree": self.degree}


def exchange_matrix(g: int, r1: int, r2: int, c1: int, c2: int) -> list[list[int]]:
    """The g x g matrix +1 at (r1,c1),(r2,c2) and -1 at (r1,c2),(r2,c1).

    This is the elementary admissible move exchanging two rows across two
    columns; it degenerates to zero when r1 = r2 or c1 = c2, which callers
    must exclude.
    """
    r1 %= g; r2 %= g; c1 %= g; c2 %= g
    if r1 == r2 or c1 == c2:
        raise ValueError("exchange matrix needs distinct rows and distinct columns")
    M = [[0] * g for _ in range(g)]
    M[r1][c1] += 1
    M[r2][c2] += 1
    M[r1][c2] -= 1
    M[r2][c1] -= 1
    return M


def cyclic_basis_matrix(g: int, i: int, j: int) -> AdmissibleMatrix:
    """The admissible basis matrix for index (i, j) in K over Z_g.

    Built as the exchange matrix at (i,0,j,0) plus a telescoping chain of
    exchange matrices with column pair (1, 0); the chain runs over
    s = 1..i when i <= g/2 and over s = 1..g-i (with the row roles of i and
    j exchanged) otherwise.  Chain terms whose two rows coincide are zero
    and simply dropped.  The result has a lone 1 at (i, j) within K and is
    admissible of degree <= g.
    """
    if not (0 < i < g and 1 < j < g):
        raise ValueError(f"(i, j) = ({i}, {j}) is not in K for Z_{g}")
    M = [[0] * g for _ in range(g)]

    def add_exchange(r1, r2, c1, c2):
        r1 %= g; r2 %= g; c1 %= g; c2 %= g
        if r1 == r2 or c1 == c2:
            return
        M[r1][c1] += 1
        M[r2][c2] += 1
        M[r1][c2] -= 1
        M[r2][c1] -= 1

    add_exchange(i, 0, j, 0)
    if i <= g // 2:
        for s in range(1, i + 1):
            add_exchange(i - s, j + s - 1, 1, 0)
    else:
        for s in range(1, g - i + 1):
            add_exchange(j - s, i + s - 1, 1, 0)
    out = AdmissibleMatrix(GroupSpec((g,)), tuple(tuple(row) for row in M))
    assert out.entries[i][j] == 1
    assert all(out.entries[a][b] == 0 for a in range(1, g) for b in range(2, g)
               if (a, b) != (i, j))
    assert out.degree <= g, f"degree {out.degree} exceeds {g} at ({i}, {j})"
    return out


def cyclic_basis(g: int) -> list[AdmissibleMatrix]:
    """The (g-1)(g-2) basis matrices of the admissible lattice of Z_g."""
    return [cyclic_basis_matrix(g, i, j)
            for i in range(1, g) for j in range(2, g)]


def product_cubic(gs: GroupSpec, hs: GroupSpec, i: Element, j: Element,
                  k: Element, l: Element) -> AdmissibleMatrix:
    """The degree-3 admissible matrix B(i,j,k,l) over G x H (j, k nonzero).

    Six entries on the rows (i,0), (i,k), (i+j,0) and columns (0,l),
    (0,k+l), (j,l): +1 at ((i,k),(j,l)), ((i+j,0),(0,l)), ((i,0),(0,k+l))
    and -1 at ((i+j,0),(0,k+l)), ((i,k),(0,l)), ((i,0),(j,l)).
    """
    if j == gs.zero():
        raise ValueError("j must be a nonzero element of G")
    if k == hs.zero():
        raise ValueError("k must be a nonzero element of H")
    combined = GroupSpec(gs.factors + hs.factors)
    h = hs.order
    n = combined.order

    def idx(a: Element, b: Element) -> int:
        return gs.index(a) * h + hs.index(b)

    z_g, z_h = gs.zero(), hs.zero()
    ij = gs.add(i, j)
    kl = hs.add(k, l)
    M = [[0] * n for _ in range(n)]
    M[idx(i, k)][idx(j, l)] += 1
    M[idx(ij, z_h)][idx(z_g, l)] += 1
    M[idx(i, z_h)][idx(z_g, kl)] += 1
    M[idx(ij, z_h)][idx(z_g, kl)] -= 1
    M[idx(i, k)][idx(z_g, l)] -= 1
    M[idx(i, z_h)][idx(j, l)] -= 1
    return AdmissibleMatrix(combined, tuple(tuple(row) for row in M))


def product_basis(gs: GroupSpec, hs: GroupSpec,
                  basis_g: list[AdmissibleMatrix],
                  basis_h: list[AdmissibleMatrix]) -> list[AdmissibleMatrix]:
    """Basis of the admissible lattice of G x H from bases of the factors.

    Eight families: cubics B(i,j,k,l) with (1) all of i,j,k,l nonzero,
    (2) i = 0, (3) l = 0, (6) i = l = 0, the transposes (4) of family (2)
    and (5) of family (3), and the two embedded factor bases (7), (8).
    Family counts add up to (|G||H| - 1)(|G||H| - 2).
    """
    g_ord, h_ord = gs.order, hs.order
    if len(basis_g) != (g_ord - 1) * (g_ord - 2):
        raise ValueError(f"basis of G has {len(basis_g)} matrices, "
                         f"expected {(g_ord - 1) * (g_ord - 2)}")
    if len(basis_h) != (h_ord - 1) * (h_ord - 2):
        raise ValueError(f"basis of H has {len(basis_h)} matrices, "
                         f"expected {(h_ord - 1) * (h_ord - 2)}")
    combined = GroupSpec(gs.factors + hs.factors)
    G_nz = gs.elements[1:]
    H_nz = hs.elements[1:]
    z_g, z_h = gs.zero(), hs.zero()
    out: list[AdmissibleMatrix] = []
    for i in G_nz:
        for j in G_nz:
            for k in H_nz:
                for l in H_nz:
                    out.append(product_cubic(gs, hs, i, j, k, l))
    for j in G_nz:
        for k in H_nz:
            for l in H_nz:
                out.append(product_cubic(gs, hs, z_g, j, k, l))
    for i in G_nz:
        for j in G_nz:
            for k in H_nz:
                out.append(product_cubic(gs, hs, i, j, k, z_h))
    for j in G_nz:
        for k in H_nz:
            for l in H_nz:
                out.append(product_cubic(gs, hs, z_g, j, k, l).transpose())
    for i in G_nz:
        for j in G_nz:
            for k in H_nz:
                out.append(product_cubic(gs, hs, i, j, k, z_h).transpose())
    for j in G_nz:
        for k in H_nz:
            out.append(product_cubic(gs, hs, z_g, j, k, z_h))

    def embed_first(m: AdmissibleMatrix) -> AdmissibleMatrix:
        M = [[0] * combined.order for _ in range(combined.order)]
        for a in gs.elements:
            for b in gs.elements:
                v = m.entry(a, b)
                if v:
                    M[gs.index(a) * h_ord][gs.index(b) * h_ord] = v
        return AdmissibleMatrix(combined, tuple(tuple(r) for r in M))

    def embed_second(m: AdmissibleMatrix) -> AdmissibleMatrix:
        M = [[0] * combined.order for _ in range(combined.order)]
        for a in hs.elements:
            for b in hs.elements:
                v = m.entry(a, b)
                if v:
                    M[hs.index(a)][hs.index(b)] = v
        return AdmissibleMatrix(combined, tuple(tuple(r) for r in M))

    out.extend(embed_first(m) for m in basis_g)
    out.extend(embed_second(m) for m in basis_h)

    expected = (combined.order - 1) * (combined.order - 2)
    assert len(out) == expected, f"{len(out)} matrices, expected {expected}"
    return out


def relabel_matrix(m: AdmissibleMatrix, phi, target: GroupSpec) -> AdmissibleMatrix:
    """Transport an admissible matrix through a group isomorphism ``phi``."""
    n = target.order
    M = [[0] * n for _ in range(n)]
    src = m.group
    for a in src.elements:
        for b in src.elements:
            v = m.entry(a, b)
            if v:
                M[target.index(phi(a))][target.index(phi(b))] = v
    return AdmissibleMatrix(target, tuple(tuple(row) for row in M))


def adm_basis(spec: GroupSpec, mode: str = "direct-cyclic") -> list[AdmissibleMatrix]:
    """Generating matrices of the admissible lattice for any presentation.

    ``direct-cyclic`` folds the written factors left to right with
    :func:`product_basis`, seeding each factor with :func:`cyclic_basis`
    (degree can reach the factor order).  ``factored`` first refines every
    factor into prime powers, builds the basis there (degree <= max(3,
    prime-power orders)) and transports it back through the CRT isomorphism.
    """
    if mode == "factored":
        refined, back = prime_power_refinement(spec)
        if refined == spec:
            mode = "direct-cyclic"
        else:
            basis = adm_basis(refined, "direct-cyclic")
            return [relabel_matrix(m, back, spec) for m in basis]
    if mode != "direct-cyclic":
        raise ValueError(f"unknown mode {mode!r}; use 'direct-cyclic' or 'factored'")
    cur_spec = GroupSpec(spec.factors[:1])
    cur = cyclic_basis(spec.factors[0])
    for a in spec.factors[1:]:
        nxt = GroupSpec((a,))
        cur = product_basis(cur_spec, nxt, cur, cyclic_basis(a))
        cur_spec = GroupSpec(cur_spec.factors + (a,))
    return cur


def admissible_condition_matrix(spec: GroupSpec) -> list[list[int]]:
    """The 3|G| x |G|^2 matrix of the three admissibility conditions applied
    to a flattened (row-major) matrix; its integer kernel is the admissible
    lattice.  Used as the independent oracle in tests."""
    els = spec.elements
    n = len(els)
    rows: list[list[int]] = []
    for i in range(n):
        row = [0] * (n * n)
        for j in range(n):
            row[i * n + j] = 1
        rows.append(row)
    for j in range(n):
        row = [0] * (n * n)
        for i in range(n):
            row[i * n + j] = 1
        rows.append(row)
    for k in els:
        row = [0] * (n * n)
        for i, a in enumerate(els):
            for j, b in enumerate(els):
                if spec.add(a, b) == k:
                    row[i * n + j] = 1
        rows.append(row)
    return rows


def matrix_to_binomial(m: AdmissibleMatrix) -> Binomial:
    """The tripod binomial of an admissible matrix: entry (a, b) with value
    v contributes |v| copies of the flow with leaf values (a, b, -a-b) to
    the positive side when v > 0, negative side when v < 0."""
    spec = m.group
    rt = tripod_tree()
    lhs: list = []
    rhs: list = []
    for a in spec.elements:
        for b in spec.elements:
            v = m.entry(a, b)
            if v:
                f = flow_from_leaves(rt, spec, (a, b, spec.neg(spec.add(a, b))))
                (lhs if v > 0 else rhs).extend([f] * abs(v))
    return binomial_from_multisets(rt, spec, lhs, rhs)


def tripod_invariants(group: GroupSpec, mode: str = "direct-cyclic") -> list[Binomial]:
    """The defining binomials of the tripod variety for ``group``."""
    return [matrix_to_binomial(m) for m in adm_basis(group, mode)]
