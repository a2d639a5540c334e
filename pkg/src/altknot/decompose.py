"""Decomposition of projections along Haseman circles.

A Haseman circle is a simple closed curve on the projection sphere meeting
the underlying graph transversally in four points, each interior to a
distinct edge and away from the crossings.  Combinatorially it is the cyclic
alternating sequence of the four edges it crosses and the four faces it runs
through.  Cutting the sphere along such a circle and capping both banks with
a four-valent placeholder vertex (a "cap") produces two smaller diagrams;
cutting along a family of pairwise disjoint circles decomposes the projection
into pieces, each classified as a singleton, a twisted band diagram, or a
jewel.

Face chains determine curves completely: crossing edge ``e`` from one of its
two flanking faces lands in the other, so a curve is fixed by its edge
sequence plus one initial side.  All curves here cross four pairwise distinct
edges; a circle meeting one edge twice either compresses or can be isotoped
off the second intersection, so nothing essential is lost.
"""

from dataclasses import dataclass

from .diagram import Diagram, vertex_of
from .errors import (
    InconsistentPartition,
    NotAKnot,
    NotAlternating,
    UnclassifiablePiece,
)


def _edge_rep(d: Diagram, h: int) -> int:
    """Minimal dart of the edge containing ``h``."""
    return min(h, d.theta[h])


def _face_rep(d: Diagram, h: int) -> int:
    """Minimal dart of the face to the left of ``h``."""
    return d.faces()[d.face_of()[h]][0]


def _other_flank(d: Diagram, edge: int, face: int):
    """The face across ``edge`` from ``face``, or None when ``face`` does not
    flank ``edge``."""
    a, b = _face_rep(d, edge), _face_rep(d, d.theta[edge])
    if face == a:
        return b
    if face == b:
        return a
    return None


@dataclass(frozen=True, order=True)
class HasemanCurve:
    """A four-point circle.

    ``edges[i]`` (edge minimal darts) are crossed in traversal order and
    ``faces[i]`` (face minimal darts) is traversed between ``edges[i]`` and
    ``edges[(i + 1) % 4]``.  Instances are stored in a canonical rotation and
    direction, so equal curves compare equal.
    """

    edges: tuple
    faces: tuple


def _make_curve(edges, faces) -> HasemanCurve:
    e, f = list(edges), list(faces)
    best = None
    for _ in range(2):
        for r in range(4):
            cand = (tuple(e[r:] + e[:r]), tuple(f[r:] + f[:r]))
            if best is None or cand < best:
                best = cand
        # the reversed traversal crosses e1,e4,e3,e2 through f4,f3,f2,f1
        e = [e[0], e[3], e[2], e[1]]
        f = [f[3], f[2], f[1], f[0]]
    return HasemanCurve(*best)


def _traversal(d: Diagram, curve: HasemanCurve):
    """Darts ``g_i`` realizing the traversal: ``g_i`` lies on ``edges[i]``
    with ``faces[i]`` on its left, i.e. the curve crosses ``edges[i]``
    heading into ``faces[i]``."""
    gs = []
    for i in range(4):
        h = curve.edges[i]
        if _face_rep(d, h) == curve.faces[i]:
            gs.append(h)
        elif _face_rep(d, d.theta[h]) == curve.faces[i]:
            gs.append(d.theta[h])
        else:
            raise ValueError("curve incidences do not match this diagram")
    return gs


def _chain(d: Diagram, edges):
    """Face chain closing the ordered edge quadruple into a curve, or None.
    Only one traversal direction is derived; canonical forms collapse the
    other."""
    e1, e2, e3, e4 = edges
    for f1 in (_face_rep(d, e1), _face_rep(d, d.theta[e1])):
        f2 = _other_flank(d, e2, f1)
        if f2 is None:
            continue
        f3 = _other_flank(d, e3, f2)
        if f3 is None:
            continue
        f4 = _other_flank(d, e4, f3)
        if f4 is None:
            continue
        if _other_flank(d, e1, f4) == f1:
            return (f1, f2, f3, f4)
    return None


def enumerate_haseman(d: Diagram):
    """All incompressible Haseman circles of the diagram, one representative
    per combinatorial position (circles cutting off single vertices included;
    see :func:`bounds_singleton`).

    A circle visiting one face twice admits a compression in that face, so
    incompressibility is exactly distinctness of the opposite visited faces.
    """
    fo = d.face_of()
    faces = d.faces()
    edges_of_face = []
    for f in faces:
        seen = []
        for h in f:
            e = _edge_rep(d, h)
            if e not in seen:
                seen.append(e)
        edges_of_face.append(seen)
    out = set()
    all_edges = sorted({_edge_rep(d, h) for h in range(d.num_darts)})
    for e1 in all_edges:
        for f1 in {_face_rep(d, e1), _face_rep(d, d.theta[e1])}:
            for e2 in edges_of_face[fo[f1]]:
                if e2 == e1:
                    continue
                f2 = _other_flank(d, e2, f1)
                for e3 in edges_of_face[fo[f2]]:
                    if e3 in (e1, e2):
                        continue
                    f3 = _other_flank(d, e3, f2)
                    if f3 == f1:
                        continue
                    for e4 in edges_of_face[fo[f3]]:
                        if e4 in (e1, e2, e3):
                            continue
                        f4 = _other_flank(d, e4, f3)
                        if f4 == f2:
                            continue
                        if _other_flank(d, e1, f4) == f1:
                            out.add(_make_curve((e1, e2, e3, e4),
                                                (f1, f2, f3, f4)))
    return out


# ------------------------------------------------------------------ cutting


def _stub_orders(d: Diagram, gs):
    """Stub darts in cap slot order for the two banks.

    The left bank contains the tail vertex of each traversal dart (crossing
    ``edges[i]`` into ``faces[i]`` means heading left-ward over ``g_i``, so
    the tail of ``g_i`` sits on the traveller's left).  Around the collapsed
    far bank the curve winds with the remaining bank on its left, i.e.
    clockwise, so the left cap sees the stubs in reversed traversal order and
    the right cap in forward order.
    """
    left = [gs[0], gs[3], gs[2], gs[1]]
    right = [d.theta[gs[0]], d.theta[gs[1]], d.theta[gs[2]], d.theta[gs[3]]]
    return left, right


def _cut(d: Diagram, curve: HasemanCurve):
    """Cut the sphere along the circle and cap both banks.

    Returns ``(left, right)``; each side is a dict with keys ``diagram``,
    ``dartmap`` (dart of ``d`` -> piece dart, for darts on that bank) and
    ``cap`` (piece vertex index of the new cap).
    """
    gs = _traversal(d, curve)
    n = d.n
    theta = list(d.theta) + [0] * 8
    left_order, right_order = _stub_orders(d, gs)
    for s in range(4):
        theta[4 * n + s] = left_order[s]
        theta[left_order[s]] = 4 * n + s
        theta[4 * n + 4 + s] = right_order[s]
        theta[right_order[s]] = 4 * n + 4 + s
    over = d.over + (None, None)
    out = None
    if d.out is not None:
        out = list(d.out) + [0] * 8
        for s in range(4):
            out[4 * n + s] = 1 - out[left_order[s]]
            out[4 * n + 4 + s] = 1 - out[right_order[s]]
        out = tuple(out)
    caps = frozenset(d.caps) | {n, n + 1}
    combined = Diagram(tuple(theta), over, out, caps)
    comps = combined.vertex_components()
    if len(comps) != 2 or not combined.is_spherical():
        raise InconsistentPartition(
            "cutting along the circle does not separate the sphere")
    sides = []
    for cap_vertex in (n, n + 1):
        verts = next(c for c in comps if cap_vertex in c)
        vmap = {v: i for i, v in enumerate(sorted(verts))}
        k = len(verts)
        th = [0] * (4 * k)
        ov = [None] * k
        ou = None if out is None else [0] * (4 * k)
        dartmap = {}
        for v in verts:
            for s in range(4):
                dartmap[4 * v + s] = 4 * vmap[v] + s
        for v in verts:
            ov[vmap[v]] = over[v]
            for s in range(4):
                h = 4 * v + s
                th[dartmap[h]] = dartmap[theta[h]]
                if ou is not None:
                    ou[dartmap[h]] = out[h]
        piece = Diagram(tuple(th), tuple(ov), None if ou is None else tuple(ou),
                        frozenset(vmap[c] for c in caps if c in vmap))
        sides.append({"diagram": piece, "dartmap": dartmap,
                      "cap": vmap[cap_vertex]})
    return sides[0], sides[1]


@dataclass(frozen=True)
class Piece:
    """A complementary piece of a family of disjoint Haseman circles.

    ``origin[h]`` is the dart of the split diagram at the same position as
    piece dart ``h``.  Every piece edge descends from one original edge, and
    its two end darts carry that edge's two original darts as origins (a cap
    dart stands for the far stretch of the severed edge, so it inherits the
    dart at the far endpoint).  ``boundary`` lists
    ``(cap_vertex, curve, stub_edges)`` per boundary circle, where
    ``stub_edges[s]`` is the original crossed edge attached at cap slot ``s``.
    """

    diagram: Diagram
    origin: tuple
    boundary: tuple

    @property
    def interior_crossings(self) -> int:
        return self.diagram.n - len(self.diagram.caps)

    def curve_of(self, cap_vertex: int) -> HasemanCurve:
        for cap, curve, _ in self.boundary:
            if cap == cap_vertex:
                return curve
        raise KeyError(cap_vertex)


def _whole_piece(d: Diagram) -> Piece:
    return Piece(d, tuple(range(d.num_darts)), ())


def _translate_curve(d0: Diagram, piece: Piece, curve: HasemanCurve):
    """Re-express an original-coordinate curve inside a piece, or None if the
    piece does not contain it.  Each original edge has at most one descendant
    edge per piece; the face chain plus face provenance pins the rest."""
    pd = piece.diagram
    by_origin = {}
    for h in range(pd.num_darts):
        by_origin.setdefault(_edge_rep(d0, piece.origin[h]), set()).add(
            _edge_rep(pd, h))
    new_edges = []
    for e in curve.edges:
        cands = by_origin.get(e, set())
        if len(cands) != 1:
            if len(cands) > 1:
                raise InconsistentPartition(
                    "edge has several descendants in one piece")
            return None
        new_edges.append(next(iter(cands)))
    chain = _chain(pd, new_edges)
    if chain is None:
        return None
    # provenance: every derived face must descend from a crossed face
    wanted = set(curve.faces)
    for fr in chain:
        votes = {
            _face_rep(d0, piece.origin[h])
            for h in pd.faces()[pd.face_of()[fr]]
            if vertex_of(h) not in pd.caps
        }
        if len(votes) > 1 or (votes and not votes <= wanted):
            return None
    return _make_curve(tuple(new_edges), chain)


def _cut_piece(d0: Diagram, piece: Piece, curve: HasemanCurve,
               local: HasemanCurve):
    """Cut a piece along a circle (``local``: the circle in piece
    coordinates, ``curve``: the same circle in original coordinates) and
    return the two child pieces."""
    pd = piece.diagram
    gs = _traversal(pd, local)
    orders = _stub_orders(pd, gs)
    children = []
    for side, stub_order in zip(_cut(pd, local), orders):
        sub = side["diagram"]
        inv = {v: k for k, v in side["dartmap"].items()}
        origin = [0] * sub.num_darts
        for h in range(sub.num_darts):
            old = inv[h]
            if old < pd.num_darts:
                origin[h] = piece.origin[old]
            else:
                stub = stub_order[old & 3]
                origin[h] = piece.origin[pd.theta[stub]]
        stub_edges = tuple(
            _edge_rep(d0, piece.origin[stub]) for stub in stub_order)
        boundary = [(side["cap"], curve, stub_edges)]
        for cap, cv, se in piece.boundary:
            if 4 * cap in side["dartmap"]:
                boundary.append(
                    (vertex_of(side["dartmap"][4 * cap]), cv, se))
        children.append(Piece(sub, tuple(origin),
                              tuple(sorted(boundary, key=lambda b: b[0]))))
    return children


def split(d: Diagram, family):
    """Cut the diagram along every circle of the family; the pieces partition
    the sphere, one more piece than there are circles."""
    curves = list(family.curves if isinstance(family, HasemanFamily)
                  else family)
    pieces = [_whole_piece(d)]
    for curve in curves:
        placements = []
        for i, p in enumerate(pieces):
            local = _translate_curve(d, p, curve)
            if local is not None:
                placements.append((i, local))
        if len(placements) != 1:
            raise InconsistentPartition(
                f"circle fits {len(placements)} pieces; the family is not "
                "realizable by disjoint circles")
        i, local = placements[0]
        pieces[i:i + 1] = _cut_piece(d, pieces[i], curve, local)
    return pieces


# ------------------------------------------------------- curve relations


def bounds_singleton(d: Diagram, curve: HasemanCurve) -> bool:
    """True iff one bank of the circle holds exactly one vertex: a lone
    crossing, or a lone cap (the circle is parallel to a boundary circle of
    a capped piece)."""
    left, right = _cut(d, curve)
    return left["diagram"].n == 2 or right["diagram"].n == 2


def curves_disjoint(d: Diagram, a: HasemanCurve, b: HasemanCurve) -> bool:
    """True iff the two distinct circles admit disjoint representatives."""
    if a == b:
        return False
    try:
        return len(split(d, [a, b])) == 3
    except InconsistentPartition:
        return False


def curves_parallel(d: Diagram, a: HasemanCurve, b: HasemanCurve) -> bool:
    """True iff the circles are disjoint and cobound an annulus the two
    strands of the diagram run straight through (no crossings between)."""
    if a == b:
        return False
    try:
        pieces = split(d, [a, b])
    except InconsistentPartition:
        return False
    if len(pieces) != 3:
        return False
    for p in pieces:
        circles = {cv for _, cv, _ in p.boundary}
        if circles == {a, b} and p.diagram.n == 2:
            return True
    return False


# ------------------------------------------------------------ the family


@dataclass(frozen=True)
class HasemanFamily:
    """A family of pairwise disjoint, pairwise non-parallel circles.

    ``edge_orders`` is the joint planar realization: for every crossed edge,
    the order of the circles' crossing points along it, read from the
    endpoint holding the edge's minimal dart.
    """

    curves: tuple
    edge_orders: tuple

    def __iter__(self):
        return iter(self.curves)

    def __len__(self):
        return len(self.curves)


def _cap_slot_on_edge(piece: Piece, curve: HasemanCurve, e: int):
    for cap, cv, se in piece.boundary:
        if cv == curve and e in se:
            return 4 * cap + se.index(e)
    return None


def _edge_orders(d: Diagram, curves, pieces):
    """Recover, for each crossed edge, the order of the circles along it by
    chaining its descendant segments from piece to piece."""
    crossed = {}
    for curve in curves:
        for e in curve.edges:
            crossed.setdefault(e, []).append(curve)
    orders = []
    for e in sorted(crossed):
        piece = dart = None
        for p in pieces:
            for h in range(p.diagram.num_darts):
                if p.origin[h] == e and vertex_of(h) not in p.diagram.caps:
                    piece, dart = p, h
                    break
            if piece is not None:
                break
        order = []
        while True:
            far = vertex_of(piece.diagram.theta[dart])
            if far not in piece.diagram.caps:
                break
            curve = next((cv for cap, cv, _ in piece.boundary if cap == far),
                         None)
            if curve is None:
                break  # a boundary cap of the input itself ends the edge
            order.append(curve)
            for q in pieces:
                if q is piece:
                    continue
                pos = _cap_slot_on_edge(q, curve, e)
                if pos is not None:
                    piece, dart = q, pos
                    break
        orders.append((e, tuple(order)))
    return tuple(orders)


def _classify_kind(piece: Piece) -> str:
    try:
        return classify_piece(piece).kind
    except UnclassifiablePiece:
        return "unclassifiable"


def canonical_family(d: Diagram, rng=None) -> HasemanFamily:
    """The minimal admissible family of the projection: every complementary
    piece is a twisted band diagram or a jewel, and no circle can be deleted
    without breaking that.  The result is independent of the construction
    order (tests re-run this under shuffles); ``rng`` shuffles the candidate
    order to exercise exactly that.
    """
    candidates = sorted(c for c in enumerate_haseman(d)
                        if not bounds_singleton(d, c))
    if rng is not None:
        rng.shuffle(candidates)
    chosen = []
    for cand in candidates:
        if all(curves_disjoint(d, cand, c) and not curves_parallel(d, cand, c)
               for c in chosen):
            chosen.append(cand)

    def admissible(curves):
        try:
            pieces = split(d, curves)
        except InconsistentPartition:
            return False
        return all(_classify_kind(p) in ("band", "jewel") for p in pieces)

    while True:
        for c in list(chosen):
            rest = [x for x in chosen if x != c]
            if admissible(rest):
                chosen = rest
                break
        else:
            break
    curves = tuple(sorted(chosen))
    return HasemanFamily(curves, _edge_orders(d, curves, split(d, curves)))


# ------------------------------------------------------- classification


@dataclass(frozen=True)
class PieceClass:
    """Classification of a piece: ``singleton``, ``band`` (twisted band
    diagram, carrying the signed intermediate weights between consecutive
    boundary circles; a closed band with no boundary carries its single run)
    or ``jewel``."""

    kind: str
    v: int
    weights: tuple = ()

    @property
    def weight(self) -> int:
        return sum(self.weights)


def _band_structure(d: Diagram):
    """The necklace underlying a twisted band diagram: the cyclic vertex
    order in which consecutive vertices share exactly two edges bounding a
    bigon face.  None if the diagram is no such necklace."""
    n = d.n
    if n < 2:
        return None
    fo = d.face_of()
    faces = d.faces()
    if n == 2:
        # on the sphere, two 4-valent vertices joined by all four edges
        # always cobound four bigons; anything with loops is not a necklace
        if len(faces) == 4 and all(len(f) == 2 for f in faces):
            return [0, 1]
        return None

    def bigon_partners(v):
        out = []
        for s in range(4):
            h = 4 * v + s
            if len(faces[fo[h]]) == 2:
                w = vertex_of(d.theta[h])
                if w != v and w not in out:
                    out.append(w)
        return out

    partners = [bigon_partners(v) for v in range(n)]
    if any(len(p) != 2 for p in partners):
        return None
    cycle = [0, partners[0][0]]
    while True:
        nxt = [w for w in partners[cycle[-1]] if w != cycle[-2]]
        if len(nxt) != 1:
            return None
        if nxt[0] == cycle[0]:
            break
        cycle.append(nxt[0])
        if len(cycle) > n:
            return None
    if len(cycle) != n:
        return None
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if len([s for s in range(4)
                if vertex_of(d.theta[4 * a + s]) == b]) != 2:
            return None
    return cycle


def _pair_sign(d: Diagram, x: int, slots) -> int:
    """Handedness of a band crossing: +1 when the overstrand holds the first
    slot of the cyclically adjacent slot pair pointing to the next necklace
    vertex.  The pair pointing backwards is the opposite pair, whose first
    slot has the same parity, so the sign does not depend on the necklace
    direction; mirroring flips every sign."""
    s0, s1 = sorted(slots)
    if (s1 - s0) % 4 not in (1, 3):
        raise UnclassifiablePiece("band strands do not run in parallel")
    first = s1 if (s0, s1) == (0, 3) else s0
    return 1 if d.over[x] == first % 2 else -1


def _run_sign(d: Diagram, x: int, nxt: int) -> int:
    slots = [s for s in range(4) if vertex_of(d.theta[4 * x + s]) == nxt]
    if len(slots) != 2:
        raise UnclassifiablePiece("band crossing without a double edge")
    return _pair_sign(d, x, slots)


def _closed_pair_sign(d: Diagram) -> int:
    """Sign of a two-crossing closed band, read off one bigon per vertex."""
    faces = d.faces()
    fo = d.face_of()
    signs = set()
    for x in range(2):
        h = next(4 * x + s for s in range(4)
                 if len(faces[fo[4 * x + s]]) == 2)
        f = faces[fo[h]]
        slots = sorted({dd & 3 for dd in (f[0], d.theta[f[0]],
                                          f[1], d.theta[f[1]])
                        if dd >> 2 == x})
        signs.add(_pair_sign(d, x, slots))
    if len(signs) != 1:
        raise UnclassifiablePiece("mixed band signs in a closed band")
    return signs.pop()


def classify_piece(piece: Piece) -> PieceClass:
    """Classify a complementary piece; raises UnclassifiablePiece when it is
    none of singleton / twisted band diagram / jewel, or when a band violates
    the weight hypotheses (each twist run uniform; all nonzero weights of one
    sign; a lone boundary circle needs |a| >= 2; two boundary circles must
    not both have weight 0)."""
    d = piece.diagram
    v = len(d.caps)
    ncross = d.n - v
    if v == 1 and ncross == 1:
        return PieceClass("singleton", 1)
    cycle = _band_structure(d)
    if cycle is not None:
        if v == 0:
            if d.n == 2:
                return PieceClass("band", 0, (_closed_pair_sign(d) * 2,))
            signs = {_run_sign(d, x, nx)
                     for x, nx in zip(cycle, cycle[1:] + cycle[:1])}
            if len(signs) != 1:
                raise UnclassifiablePiece("mixed band signs in a closed band")
            return PieceClass("band", 0, (signs.pop() * ncross,))
        k = len(cycle)
        cap_pos = [i for i, x in enumerate(cycle) if x in d.caps]
        weights = []
        for j, p in enumerate(cap_pos):
            q = cap_pos[(j + 1) % len(cap_pos)]
            i = (p + 1) % k
            signs = set()
            count = 0
            while i != q:
                signs.add(_run_sign(d, cycle[i], cycle[(i + 1) % k]))
                count += 1
                i = (i + 1) % k
            if count == 0:
                weights.append(0)
                continue
            if len(signs) != 1:
                raise UnclassifiablePiece("twist run with mixed signs")
            weights.append(signs.pop() * count)
        nonzero = {1 if w > 0 else -1 for w in weights if w != 0}
        if len(nonzero) > 1:
            raise UnclassifiablePiece("bands of both signs in one piece")
        if v == 1 and abs(weights[0]) < 2:
            raise UnclassifiablePiece("lone boundary circle with |a| < 2")
        if v == 2 and all(w == 0 for w in weights):
            raise UnclassifiablePiece("two boundary circles with zero weight")
        best = None
        w = list(weights)
        for _ in range(2):
            for r in range(len(w)):
                cand = tuple(w[r:] + w[:r])
                if best is None or cand < best:
                    best = cand
            w.reverse()
        return PieceClass("band", v, best)
    if _is_jewel(d):
        return PieceClass("jewel", v)
    raise UnclassifiablePiece(
        f"piece with {v} boundary circles and {ncross} crossings is neither "
        "a twisted band diagram nor a jewel")


def _is_jewel(d: Diagram) -> bool:
    """True iff every incompressible Haseman circle of the capped piece cuts
    off a single vertex: a lone crossing, or a lone cap (the
    boundary-parallel case)."""
    return all(bounds_singleton(d, c) for c in enumerate_haseman(d))


# ------------------------------------------------------ labels / extension


def thread_labels(d: Diagram, curve: HasemanCurve, side: str = "left"):
    """The four thread labels along the circle on the chosen bank: '+' when
    the thread passes over at the first crossing it meets on that bank, '-'
    when it passes under.  Opposite threads carry equal labels on alternating
    diagrams, and the two banks carry swapped labels."""
    if not d.is_alternating():
        raise NotAlternating("thread labels need an alternating diagram")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    gs = _traversal(d, curve)
    labels = []
    for g in gs:
        cur = g if side == "left" else d.theta[g]
        for _ in range(d.num_darts):
            if vertex_of(cur) not in d.caps:
                break
            cur = d.theta[cur ^ 2]
        else:
            raise ValueError("thread never reaches a crossing")
        labels.append("+" if d.passage_is_over(cur) else "-")
    return tuple(labels)


def alternating_extension(piece: Piece) -> Diagram:
    """Replace every cap by the unique crossing keeping the piece
    alternating.  The result is unoriented: strand directions would not in
    general survive the strands reconnecting straight through the new
    crossings."""
    d = piece.diagram
    if not d.caps:
        return d.replace(out=None)
    rel = {d.over[x] ^ d.black_parity(x) for x in range(d.n)
           if x not in d.caps}
    if len(rel) > 1:
        raise NotAlternating("piece does not extend to an alternating diagram")
    const = rel.pop() if rel else 0
    over = list(d.over)
    for c in d.caps:
        over[c] = d.black_parity(c) ^ const
    result = Diagram(d.theta, tuple(over), None, frozenset())
    if not result.is_alternating():
        raise NotAlternating("capping did not produce an alternating diagram")
    return result


# ------------------------------------------------------------- filling


def _far_pairing(d: Diagram, far_darts):
    """How the strands beyond a circle pair its four points (cap slots).

    ``far_darts[s]`` is the dart of the s-th crossed edge at its endpoint
    beyond the circle; following the strand inward from there, the first
    crossed edge met names the partner point.
    """
    edge_to_slot = {_edge_rep(d, f): s for s, f in enumerate(far_darts)}
    pairing = {}
    for s, f in enumerate(far_darts):
        cur = f
        for _ in range(2 * d.num_darts):
            cur = cur ^ 2  # continue straight through the vertex
            e = _edge_rep(d, cur)
            if e in edge_to_slot:
                pairing[s] = edge_to_slot[e]
                break
            cur = d.theta[cur]
        else:
            raise InconsistentPartition("strand never re-crosses the circle")
    if (sorted(pairing) != [0, 1, 2, 3]
            or any(pairing[pairing[s]] != s or pairing[s] == s
                   for s in pairing)):
        raise InconsistentPartition("strands do not pair the circle's points")
    return pairing


def filling(d: Diagram, jewel: Piece) -> Diagram:
    """Fill every boundary disc of a jewel piece of a knot projection with
    the least tangle realizing the same strand pairing: a single crossing
    when the disc joins opposite points, a two-crossing clasp when it joins
    adjacent ones.  Over/under assignments extend the jewel's shading rule,
    so the result is a reduced alternating knot projection."""
    if not d.is_knot():
        raise NotAKnot("filling is defined for knot projections")
    pd = jewel.diagram
    theta = list(pd.theta)
    over = list(pd.over)
    new_vertices = set()
    retired = set()
    for cap, curve, stub_edges in jewel.boundary:
        far = [jewel.origin[4 * cap + s] for s in range(4)]
        pairing = _far_pairing(d, far)
        over[cap] = 0
        new_vertices.add(cap)
        if pairing[0] == 2:
            continue  # opposite points: the cap itself becomes the crossing
        b = 0 if pairing[0] == 1 else 1
        stubs = [theta[4 * cap + ((b + i) % 4)] for i in range(4)]
        x = len(over)
        y = x + 1
        over.extend([0, 0])
        theta.extend([0] * 8)
        new_vertices.update({x, y})
        # strand A runs stub0-x-y-stub1, strand B runs stub2-y-x-stub3;
        # rotations: x sees (stub0, B's middle, A's middle, stub3) and
        # y sees (A's middle, B's middle, stub1, stub2), counterclockwise
        for a, bb in ((4 * x + 0, stubs[0]), (4 * x + 1, 4 * y + 1),
                      (4 * x + 2, 4 * y + 0), (4 * x + 3, stubs[3]),
                      (4 * y + 2, stubs[1]), (4 * y + 3, stubs[2])):
            theta[a], theta[bb] = bb, a
        # retire the cap's darts by pairing them off among themselves
        theta[4 * cap + 0], theta[4 * cap + 1] = 4 * cap + 1, 4 * cap + 0
        theta[4 * cap + 2], theta[4 * cap + 3] = 4 * cap + 3, 4 * cap + 2
        new_vertices.discard(cap)
        retired.add(cap)

    interim = Diagram(tuple(theta), tuple(over), None, frozenset())
    keep = [v for v in range(interim.n) if v not in retired]
    vmap = {v: i for i, v in enumerate(keep)}
    th = [0] * (4 * len(keep))
    ov = [0] * len(keep)
    for v in keep:
        ov[vmap[v]] = interim.over[v]
        for s in range(4):
            ph = interim.theta[4 * v + s]
            th[4 * vmap[v] + s] = 4 * vmap[vertex_of(ph)] + (ph & 3)
    result = Diagram(tuple(th), tuple(ov), None, frozenset())
    anchors = [v for v in keep if v not in new_vertices and v not in pd.caps]
    if anchors:
        const = (result.over[vmap[anchors[0]]]
                 ^ result.black_parity(vmap[anchors[0]]))
    else:
        # a crossing-free jewel constrains nothing; either mirror extends it,
        # so pick the shading-aligned one
        const = 0
    ov = list(result.over)
    for v in new_vertices:
        ov[vmap[v]] = result.black_parity(vmap[v]) ^ const
    result = result.replace(over=tuple(ov))
    if not (result.is_knot() and result.is_alternating()
            and result.is_spherical()):
        raise InconsistentPartition("filling failed to stay alternating")
    return result
