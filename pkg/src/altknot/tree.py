"""Structure trees of canonical decompositions.

A diagram's structure tree has one vertex per complementary piece of the
canonical circle family and one edge per circle, joining the two pieces the
circle borders.  Vertices carry their piece classification: a twisted band
diagram prints as ``B`` with its signed total weight, a jewel as ``J``.
The tree is abstract — no planar embedding is kept.

Mirror symmetries of a diagram act on its tree as label-compatible
automorphisms that negate every band weight; every such automorphism of a
finite tree fixes a vertex or inverts an edge, and that fixed locus drives
the downstream symmetry synthesis.
"""

from dataclasses import dataclass
from typing import Optional

from .decompose import canonical_family, classify_piece, split
from .diagram import Diagram
from .errors import InvariantBandViolation

__all__ = [
    "FixedLocus",
    "StructureTree",
    "TreeAut",
    "build_tree",
    "fixed_locus",
    "mirror_automorphisms",
    "serialize",
]


@dataclass(frozen=True)
class StructureTree:
    """An abstract labeled tree.

    ``classes[i]`` is the classification of piece ``i``; ``edges[e]`` is the
    pair of piece indices the e-th circle borders.  ``pieces`` and ``curves``
    keep the underlying geometry when the tree was built from a diagram
    (entries align with ``classes`` and ``edges``); synthetic trees may leave
    them ``None``.
    """

    classes: tuple
    edges: tuple
    pieces: Optional[tuple] = None
    curves: Optional[tuple] = None

    def __post_init__(self):
        n = len(self.classes)
        if len(self.edges) != n - 1:
            raise ValueError("a tree on n vertices has n - 1 edges")
        seen = {0}
        frontier = [0]
        adj = self.adjacency()
        while frontier:
            v = frontier.pop()
            for w, _ in adj[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if len(seen) != n:
            raise ValueError("tree is not connected")

    def adjacency(self):
        adj = {v: [] for v in range(len(self.classes))}
        for e, (u, v) in enumerate(self.edges):
            adj[u].append((v, e))
            adj[v].append((u, e))
        return adj

    @property
    def arborescent(self) -> bool:
        return all(c.kind == "band" for c in self.classes)

    @property
    def polyhedral(self) -> bool:
        return all(c.kind == "jewel" for c in self.classes)


@dataclass(frozen=True)
class TreeAut:
    """A tree automorphism: image of each vertex, the induced image of each
    edge, and whether it was checked to negate every band weight."""

    vertices: tuple
    edges: tuple
    negates_weights: bool = True


@dataclass(frozen=True)
class FixedLocus:
    """The unique element a weight-negating automorphism leaves in place:
    case ``"A"`` — a jewel vertex; case ``"B"`` — an inverted edge between
    two jewels; case ``"C"`` — an inverted edge between two bands."""

    case: str
    vertex: Optional[int] = None
    edge: Optional[int] = None


def build_tree(d: Diagram) -> StructureTree:
    """The structure tree of the diagram's canonical decomposition."""
    family = canonical_family(d)
    pieces = split(d, family)
    classes = tuple(classify_piece(p) for p in pieces)
    edges = []
    for curve in family:
        ends = tuple(i for i, p in enumerate(pieces)
                     if any(cv == curve for _, cv, _ in p.boundary))
        if len(ends) != 2:
            raise ValueError("a circle must border exactly two pieces")
        edges.append(ends)
    return StructureTree(classes, tuple(edges), tuple(pieces),
                         tuple(family.curves))


def _label(cls, negate: bool) -> str:
    if cls.kind == "jewel":
        return "J"
    a = -cls.weight if negate else cls.weight
    return f"B{a:+d}"


def _center(tree: StructureTree):
    """The tree's center: a single vertex or a single edge, found by peeling
    leaves."""
    n = len(tree.classes)
    adj = tree.adjacency()
    degree = {v: len(adj[v]) for v in range(n)}
    alive = set(range(n))
    while len(alive) > 2:
        leaves = [v for v in alive if degree[v] <= 1]
        for v in leaves:
            alive.discard(v)
            for w, _ in adj[v]:
                if w in alive:
                    degree[w] -= 1
    if len(alive) == 1:
        return ("vertex", alive.pop())
    u, v = sorted(alive)
    for e, ends in enumerate(tree.edges):
        if set(ends) == {u, v}:
            return ("edge", e)
    raise ValueError("center vertices are not adjacent")  # pragma: no cover


def serialize(tree: StructureTree, negate: bool = False) -> str:
    """Canonical nested-term form, e.g. ``(B+2)-(B-2)`` for two bands joined
    by one circle.  Children are sorted, so equal strings certify
    label-preserving tree isomorphism; ``negate`` prints every band weight
    with the opposite sign."""
    adj = tree.adjacency()

    def term(v, parent):
        children = sorted(term(w, v) for w, _ in adj[v] if w != parent)
        return "(" + " ".join([_label(tree.classes[v], negate)] + children) + ")"

    kind, center = _center(tree)
    if kind == "vertex":
        return term(center, None)
    u, v = tree.edges[center]
    return "-".join(sorted((term(u, v), term(v, u))))


def _compatible(tree: StructureTree, i: int, j: int, degree) -> bool:
    ci, cj = tree.classes[i], tree.classes[j]
    if ci.kind != cj.kind or degree[i] != degree[j]:
        return False
    if ci.kind == "band":
        return ci.v == cj.v and ci.weight == -cj.weight
    return True


def mirror_automorphisms(tree: StructureTree):
    """All adjacency-preserving vertex bijections sending every band of
    weight a to one of weight -a and jewels to jewels.  An empty list proves
    no mirror symmetry can exist at tree level."""
    n = len(tree.classes)
    adj = tree.adjacency()
    degree = [len(adj[v]) for v in range(n)]
    edge_index = {frozenset(ends): e for e, ends in enumerate(tree.edges)}
    img = [None] * n
    used = [False] * n
    results = []

    def backtrack(k):
        if k == n:
            edges = tuple(edge_index[frozenset((img[u], img[v]))]
                          for u, v in tree.edges)
            results.append(TreeAut(tuple(img), edges, True))
            return
        for j in range(n):
            if used[j] or not _compatible(tree, k, j, degree):
                continue
            if any(img[w] is not None
                   and frozenset((j, img[w])) not in edge_index
                   for w, _ in adj[k]):
                continue
            img[k], used[j] = j, True
            backtrack(k + 1)
            img[k], used[j] = None, False

    backtrack(0)
    return sorted(results, key=lambda a: a.vertices)


def fixed_locus(tree: StructureTree, aut: TreeAut) -> FixedLocus:
    """Classify the fixed locus of a weight-negating automorphism.

    The locus must be a single jewel vertex (case A) or a single inverted
    edge whose endpoints are both jewels (case B) or both bands (case C);
    anything else — a fixed band vertex, a mixed edge, or several fixed
    elements — raises InvariantBandViolation, which marks the automorphism
    as unusable for symmetry synthesis (or an upstream bug if the symmetry
    was already verified on the diagram)."""
    fixed_vertices = [v for v in range(len(tree.classes))
                      if aut.vertices[v] == v]
    inverted = [e for e, (u, v) in enumerate(tree.edges)
                if aut.vertices[u] == v and aut.vertices[v] == u]
    if len(fixed_vertices) + len(inverted) != 1:
        raise InvariantBandViolation(
            f"fixed locus has {len(fixed_vertices)} vertices and "
            f"{len(inverted)} inverted edges; need exactly one element")
    if fixed_vertices:
        v = fixed_vertices[0]
        if tree.classes[v].kind != "jewel":
            raise InvariantBandViolation(
                "a band piece cannot be carried to itself")
        return FixedLocus("A", vertex=v)
    e = inverted[0]
    kinds = {tree.classes[u].kind for u in tree.edges[e]}
    if kinds == {"jewel"}:
        return FixedLocus("B", edge=e)
    if kinds == {"band"}:
        return FixedLocus("C", edge=e)
    raise InvariantBandViolation(
        "an inverted circle cannot separate a band from a jewel")
