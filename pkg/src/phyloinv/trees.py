"""Leaf-labelled trees with a deterministic rooted form.

Leaves are the nodes ``1..leaf_count`` (the node id is the label); interior
nodes use ids above ``leaf_count``.  Interior nodes must have valency >= 3
and a tree needs at least three leaves.  The rooted form orients every edge
away from the root and fixes the canonical edge order: pendant edges sorted
by leaf label, then interior edges in breadth-first discovery order (BFS
explores neighbours in ascending node id).  Flows and all invariant
constructions rely on exactly this order.

Newick subset accepted by the parser::

    tree    := subtree ";"
    subtree := label | "(" subtree ("," subtree)+ ")"
    label   := positive integer

with leaf labels exactly 1..leaf_count.  An optional ":<number>" branch
length after any subtree is accepted and discarded.  A root written with
exactly two children is suppressed (its two edges merge into one).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidTreeError, NewickParseError

Edge = tuple[int, int]


class Tree:
    """An unrooted leaf-labelled tree."""

    __slots__ = ("leaf_count", "edges", "_adj", "_canon")

    def __init__(self, leaf_count: int, edges: Iterable[Edge]):
        if leaf_count < 3:
            raise InvalidTreeError(f"fewer than 3 leaves (got {leaf_count})")
        norm = []
        seen = set()
        for u, v in edges:
            if u == v:
                raise InvalidTreeError(f"self-loop at node {u}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise InvalidTreeError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        self.leaf_count = leaf_count
        self.edges: tuple[Edge, ...] = tuple(norm)

        nodes = {u for e in self.edges for u in e}
        n = len(nodes)
        if nodes != set(range(1, n + 1)):
            raise InvalidTreeError(f"node ids must be contiguous 1..{n}, got {sorted(nodes)}")
        if not set(range(1, leaf_count + 1)) <= nodes:
            raise InvalidTreeError("every leaf label 1..leaf_count must appear as a node")
        if len(self.edges) != n - 1:
            raise InvalidTreeError(f"a tree on {n} nodes needs {n - 1} edges, got {len(self.edges)}")

        adj: dict[int, list[int]] = {u: [] for u in nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {u: tuple(sorted(vs)) for u, vs in adj.items()}

        for u in nodes:
            d = len(self._adj[u])
            if u <= leaf_count and d != 1:
                raise InvalidTreeError(f"leaf {u} has valency {d}, expected 1")
            if u > leaf_count and d < 3:
                raise InvalidTreeError(f"interior node {u} has valency {d} < 3")

        # connectivity (|E| = |V|-1 plus connected <=> tree)
        stack = [1]
        seen_nodes = {1}
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if v not in seen_nodes:
                    seen_nodes.add(v)
                    stack.append(v)
        if seen_nodes != nodes:
            raise InvalidTreeError("tree is not connected")

        self._canon: str | None = None

    # -- shape queries -------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def interior_nodes(self) -> tuple[int, ...]:
        return tuple(range(self.leaf_count + 1, self.n_nodes + 1))

    @property
    def interior_node_count(self) -> int:
        return self.n_nodes - self.leaf_count

    @property
    def is_claw(self) -> bool:
        return self.interior_node_count == 1

    @property
    def is_trivalent(self) -> bool:
        return all(len(self._adj[u]) == 3 for u in self.interior_nodes)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def shortest_path(self, a: int, b: int) -> tuple[Edge, ...]:
        """The unique path from a to b as a sequence of edges."""
        prev = {a: None}
        queue = [a]
        while queue:
            nxt = []
            for u in queue:
                for v in self._adj[u]:
                    if v not in prev:
                        prev[v] = u
                        nxt.append(v)
            if b in prev:
                break
            queue = nxt
        path = []
        u = b
        while prev[u] is not None:
            path.append((prev[u], u))
            u = prev[u]
        return tuple(reversed(path))

    def canonical_root(self) -> int:
        """The interior node adjacent to leaf 1."""
        return self._adj[1][0]

    def splits(self) -> frozenset[frozenset[int]]:
        """For each edge, the leaf set on the side not containing leaf 1."""
        rt = root_at(self, self.canonical_root())
        return frozenset(frozenset(rt.leaves_below[child]) for _, child in rt.edges)

    def canonical_newick(self) -> str:
        """Deterministic Newick form: rooted next to leaf 1, children by min leaf."""
        if self._canon is None:
            rt = root_at(self, self.canonical_root())

            def render(u: int) -> tuple[int, str]:
                if u <= self.leaf_count:
                    return u, str(u)
                parts = sorted(render(c) for c in rt.children[u])
                return parts[0][0], "(" + ",".join(p[1] for p in parts) + ")"

            parts = sorted(render(c) for c in rt.children[rt.root])
            self._canon = "(" + ",".join(p[1] for p in parts) + ");"
        return self._canon

    # interior node numbers carry no meaning, so equality goes through the
    # canonical form: equal iff the same leaf-labelled shape
    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return (self.leaf_count == other.leaf_count
                and self.canonical_newick() == other.canonical_newick())

    def __hash__(self):
        return hash((self.leaf_count, self.canonical_newick()))

    def __repr__(self):
        return f"Tree({self.canonical_newick()!r})"


class RootedTree:
    """A tree with a distinguished interior root and the canonical edge order."""

    __slots__ = ("tree", "root", "parent", "children", "edges", "edge_index",
                 "leaves_below", "interior_discovery")

    def __init__(self, tree: Tree, root: int):
        if root <= tree.leaf_count:
            raise InvalidTreeError(f"cannot root at leaf {root}")
        self.tree = tree
        self.root = root
        parent: dict[int, int | None] = {root: None}
        children: dict[int, list[int]] = {u: [] for u in range(1, tree.n_nodes + 1)}
        interior_edges: list[Edge] = []
        discovery: list[int] = [root]
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                for v in tree.neighbors(u):
                    if v not in parent:
                        parent[v] = u
                        children[u].append(v)
                        nxt.append(v)
                        if v > tree.leaf_count:
                            interior_edges.append((u, v))
                            discovery.append(v)
            queue = nxt
        self.parent = parent
        self.children = {u: tuple(cs) for u, cs in children.items()}
        pendant = [(parent[leaf], leaf) for leaf in range(1, tree.leaf_count + 1)]
        self.edges: tuple[Edge, ...] = tuple(pendant) + tuple(interior_edges)
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.interior_discovery = tuple(discovery)

        below: dict[int, tuple[int, ...]] = {}

        def fill(u: int) -> tuple[int, ...]:
            if u <= tree.leaf_count:
                below[u] = (u,)
            else:
                acc: list[int] = []
                for c in self.children[u]:
                    acc.extend(fill(c))
                below[u] = tuple(sorted(acc))
            return below[u]

        fill(root)
        self.leaves_below = below

    @property
    def leaf_count(self) -> int:
        return self.tree.leaf_count

    @property
    def edge_count(self) -> int:
        return self.tree.edge_count

    def interior_edges(self) -> tuple[Edge, ...]:
        return self.edges[self.leaf_count:]

    def __repr__(self):
        return f"RootedTree({self.tree.canonical_newick()!r}, root={self.root})"


def root_at(tree: Tree, root: int) -> RootedTree:
    return RootedTree(tree, root)


def canonical_rooting(tree: Tree) -> RootedTree:
    return RootedTree(tree, tree.canonical_root())


# -- Newick parsing ----------------------------------------------------

_NUMBER_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_LABEL_RE = re.compile(r"\d+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def fail(self, msg: str):
        raise NewickParseError(f"{msg} at position {self.i}", position=self.i)

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.i += 1

    def length_opt(self):
        self.skip_ws()
        if self.peek() == ":":
            self.i += 1
            self.skip_ws()
            m = _NUMBER_RE.match(self.text, self.i)
            if m is None:
                self.fail("expected a branch length after ':'")
            self.i = m.end()

    def subtree(self):
        self.skip_ws()
        if self.peek() == "(":
            self.i += 1
            children = [self.subtree()]
            self.skip_ws()
            if self.peek() != ",":
                self.fail("expected ',' (interior nodes need at least two children)")
            while self.peek() == ",":
                self.i += 1
                children.append(self.subtree())
                self.skip_ws()
            self.expect(")")
            self.length_opt()
            return children
        m = _LABEL_RE.match(self.text, self.i)
        if m is None:
            self.fail("expected a leaf label or '('")
        label = int(m.group())
        if label == 0:
            self.fail("leaf labels are positive integers")
        self.i = m.end()
        self.length_opt()
        return label

    def parse(self):
        node = self.subtree()
        self.skip_ws()
        self.expect(";")
        self.skip_ws()
        if self.i != len(self.text):
            self.fail("trailing characters after ';'")
        return node


def parse_newick(text: str) -> Tree:
    """Parse a Newick string into a Tree; see the module docstring for the subset."""
    nested = _Parser(text).parse()

    labels: list[int] = []

    def collect(node):
        if isinstance(node, int):
            labels.append(node)
        else:
            for c in node:
                collect(c)

    collect(nested)
    ell = len(labels)
    dupes = {x for x in labels if labels.count(x) > 1}
    if dupes:
        raise InvalidTreeError(f"duplicate leaf label {min(dupes)}")
    if ell < 3:
        raise InvalidTreeError(f"fewer than 3 leaves (got {ell})")
    if set(labels) != set(range(1, ell + 1)):
        missing = sorted(set(range(1, ell + 1)) - set(labels))
        raise InvalidTreeError(
            f"leaf labels must be exactly 1..{ell}; missing {missing}, got {sorted(set(labels))}"
        )

    edges: list[Edge] = []
    counter = ell

    def build(node) -> int:
        nonlocal counter
        if isinstance(node, int):
            return node
        counter += 1
        my = counter
        for c in node:
            edges.append((my, build(c)))
        return my

    if isinstance(nested, int):
        raise InvalidTreeError("fewer than 3 leaves (got 1)")
    if len(nested) == 2:
        # suppress the degree-2 root: its two edges merge into one
        a, b = nested
        edges.append((build(a), build(b)))
    else:
        build(nested)
    return Tree(ell, edges)


def to_newick(tree: Tree) -> str:
    return tree.canonical_newick()


def tree_to_json(rt: RootedTree) -> dict:
    """JSON tree dump: nodes renumbered with leaves 1..leaf_count first, then
    interior nodes in BFS discovery order starting from the root."""
    ell = rt.leaf_count
    renum = {leaf: leaf for leaf in range(1, ell + 1)}
    for k, u in enumerate(rt.interior_discovery):
        renum[u] = ell + 1 + k
    return {
        "leaves": ell,
        "edges": [[renum[u], renum[v]] for u, v in rt.edges],
    }


# -- join / decompose / contract ---------------------------------------


@dataclass
class JoinContext:
    """Bookkeeping for T = T1 * T2 obtained by identifying leaf v1 with leaf v2.

    ``leaf_map1``/``leaf_map2`` send the surviving leaves of each part to
    their labels in the joined tree; ``eps`` is the shared edge (as a node
    pair of T).  ``rooted`` is the canonical rooted form of T, and ``t1``,
    ``t2`` are the canonical rooted forms of the parts.
    """

    rooted: RootedTree
    t1: RootedTree
    v1: int
    leaf_map1: dict[int, int]
    t2: RootedTree
    v2: int
    leaf_map2: dict[int, int]
    eps: Edge

    @property
    def tree(self) -> Tree:
        return self.rooted.tree

    def side1_labels(self) -> tuple[int, ...]:
        return tuple(sorted(self.leaf_map1.values()))

    def side2_labels(self) -> tuple[int, ...]:
        return tuple(sorted(self.leaf_map2.values()))


def join(t1: Tree, v1: int, t2: Tree, v2: int) -> JoinContext:
    """Join two trees by identifying leaf v1 of t1 with leaf v2 of t2.

    The identified pendant edges merge into one shared edge between their
    interior endpoints.  Surviving t1 leaves are relabelled 1..(l1-1) in
    ascending order, surviving t2 leaves continue l1..(l1+l2-2).
    """
    for t, v in ((t1, v1), (t2, v2)):
        if not 1 <= v <= t.leaf_count:
            raise InvalidTreeError(f"{v} is not a leaf of the tree (1..{t.leaf_count})")
    ell = t1.leaf_count + t2.leaf_count - 2

    keep1 = [x for x in range(1, t1.leaf_count + 1) if x != v1]
    keep2 = [x for x in range(1, t2.leaf_count + 1) if x != v2]
    map1 = {old: i + 1 for i, old in enumerate(keep1)}
    map2 = {old: len(keep1) + i + 1 for i, old in enumerate(keep2)}

    node1 = dict(map1)
    nxt = ell
    for u in t1.interior_nodes:
        nxt += 1
        node1[u] = nxt
    node2 = dict(map2)
    for u in t2.interior_nodes:
        nxt += 1
        node2[u] = nxt

    edges: list[Edge] = []
    for u, v in t1.edges:
        if v1 in (u, v):
            continue
        edges.append((node1[u], node1[v]))
    for u, v in t2.edges:
        if v2 in (u, v):
            continue
        edges.append((node2[u], node2[v]))
    n1 = t1.neighbors(v1)[0]
    n2 = t2.neighbors(v2)[0]
    eps = (node1[n1], node2[n2])
    edges.append(eps)

    tree = Tree(ell, edges)
    return JoinContext(
        rooted=canonical_rooting(tree),
        t1=canonical_rooting(t1),
        v1=v1,
        leaf_map1=map1,
        t2=canonical_rooting(t2),
        v2=v2,
        leaf_map2=map2,
        eps=(min(eps), max(eps)),
    )


def decompose_at_edge(rt: RootedTree, edge: Edge) -> JoinContext:
    """Split a rooted tree at an interior edge into the two joined parts.

    Inverse of :func:`join` up to relabelling: each part keeps its original
    leaves (relabelled 1..k ascending) and gains a fresh leaf (labelled last)
    in place of the removed side.  The returned context refers to the
    original tree, so flows built through it live on ``rt`` itself.
    """
    tree = rt.tree
    u, v = edge
    if (u, v) not in rt.edge_index:
        if (v, u) in rt.edge_index:
            u, v = v, u
        else:
            raise InvalidTreeError(f"{edge} is not an edge of the tree")
    if u <= tree.leaf_count or v <= tree.leaf_count:
        raise InvalidTreeError(f"cannot decompose at pendant edge {edge}")

    side2_leaves = set(rt.leaves_below[v])
    side1_leaves = [x for x in range(1, tree.leaf_count + 1) if x not in side2_leaves]
    side2_sorted = sorted(side2_leaves)

    def build_part(side_leaves, attach_node, other_side_nodes):
        k = len(side_leaves)
        lab = {old: i + 1 for i, old in enumerate(side_leaves)}
        fresh = k + 1
        node_map = dict(lab)
        nxt = fresh
        for w in tree.interior_nodes:
            if w not in other_side_nodes:
                nxt += 1
                node_map[w] = nxt
        part_edges = []
        for a, b in tree.edges:
            if a in node_map and b in node_map and (a, b) != (min(u, v), max(u, v)):
                part_edges.append((node_map[a], node_map[b]))
        part_edges.append((node_map[attach_node], fresh))
        part = Tree(k + 1, part_edges)
        inv = {new: old for old, new in lab.items()}
        return part, fresh, {new: inv[new] for new in inv}

    below_nodes = set()
    stack = [v]
    while stack:
        w = stack.pop()
        below_nodes.add(w)
        for c in rt.children[w]:
            stack.append(c)

    t1, v1, map1 = build_part(side1_leaves, u, below_nodes)
    t2, v2, map2 = build_part(side2_sorted, v, set(tree._adj) - below_nodes)

    return JoinContext(
        rooted=rt,
        t1=canonical_rooting(t1),
        v1=v1,
        leaf_map1=map1,
        t2=canonical_rooting(t2),
        v2=v2,
        leaf_map2=map2,
        eps=(min(u, v), max(u, v)),
    )


def contract_interior_edge(tree: Tree, edge: Edge) -> Tree:
    """Contract an interior edge, identifying its endpoints; leaves unchanged."""
    u, v = min(edge), max(edge)
    if (u, v) not in {(min(a, b), max(a, b)) for a, b in tree.edges}:
        raise InvalidTreeError(f"{edge} is not an edge of the tree")
    if u <= tree.leaf_count or v <= tree.leaf_count:
        raise InvalidTreeError(f"cannot contract pendant edge {edge}")
    survivors = [w for w in tree.interior_nodes if w != v]
    node_map = {w: w for w in range(1, tree.leaf_count + 1)}
    for i, w in enumerate(survivors):
        node_map[w] = tree.leaf_count + 1 + i
    node_map[v] = node_map[u]
    edges = []
    for a, b in tree.edges:
        if (min(a, b), max(a, b)) == (u, v):
            continue
        edges.append((node_map[a], node_map[b]))
    return Tree(tree.leaf_count, edges)


def is_contraction(small: Tree, big: Tree) -> bool:
    """True iff ``small`` arises from ``big`` by contracting interior edges."""
    if small.leaf_count != big.leaf_count:
        return False
    return small.splits() <= big.splits()
