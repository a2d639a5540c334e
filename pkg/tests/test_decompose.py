"""Tests for the decomposition layer: four-point circles, canonical
families, splitting, piece classification, alternating extension, and
filling.

The heavy assertions run against two independent oracles implemented here
from first principles:

* a brute-force enumerator that closes every ordered edge quadruple into a
  circle by walking face flanks, paired with an explicit compressing-arc
  search in the two discs a circle bounds;
* an exhaustive search over all admissible families (pairwise disjoint,
  non-parallel circle sets whose pieces all classify) that checks the
  canonical family is the unique minimal one.
"""

import itertools
import random

import pytest

from altknot.decompose import (
    HasemanCurve,
    alternating_extension,
    bounds_singleton,
    canonical_family,
    classify_piece,
    curves_disjoint,
    curves_parallel,
    enumerate_haseman,
    filling,
    split,
    thread_labels,
)
from altknot.diagram import Diagram, map_isomorphic, mirror, parse_pd
from altknot.errors import (
    EmptyDiagram,
    InconsistentPartition,
    NotAKnot,
    NotAlternating,
    UnclassifiablePiece,
)
from altknot.generate import inflate, octahedron, pretzel, square_antiprism, torus

TREFOIL_PD = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"
FIGURE_EIGHT_PD = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"


def _double_inflated_octahedron():
    return inflate(inflate(octahedron(), 0, 2), 1, 2)


DIAGRAMS = {
    "trefoil_pd": parse_pd(TREFOIL_PD),
    "figure_eight": parse_pd(FIGURE_EIGHT_PD),
    "torus2": torus(2),
    "torus3": torus(3),
    "torus4": torus(4),
    "torus5": torus(5),
    "pretzel222": pretzel(2, 2, 2),
    "pretzel233": pretzel(2, 3, 3),
    "octahedron": octahedron(),
    "antiprism": square_antiprism(),
    "octa22": _double_inflated_octahedron(),
    "octa223": inflate(_double_inflated_octahedron(), 2, 3),
}

# crossings, circle count, singleton-bounding count, canonical family size,
# sorted piece classes (kind, boundary circles, intermediate weights)
FROZEN = {
    "trefoil_pd": (3, 3, 3, 0, [("band", 0, (-3,))]),
    "figure_eight": (4, 5, 4, 1, [("band", 1, (-2,)), ("band", 1, (2,))]),
    "torus2": (2, 1, 1, 0, [("band", 0, (-2,))]),
    "torus3": (3, 3, 3, 0, [("band", 0, (3,))]),
    "torus4": (4, 6, 4, 0, [("band", 0, (4,))]),
    "torus5": (5, 10, 5, 0, [("band", 0, (5,))]),
    "pretzel222": (6, 9, 6, 3,
                   [("band", 1, (2,))] * 3 + [("band", 3, (0, 0, 0))]),
    "pretzel233": (8, 15, 8, 3,
                   [("band", 1, (2,)), ("band", 1, (3,)), ("band", 1, (3,)),
                    ("band", 3, (0, 0, 0))]),
    "octahedron": (6, 6, 6, 0, [("jewel", 0, ())]),
    "antiprism": (8, 8, 8, 0, [("jewel", 0, ())]),
    "octa22": (8, 10, 8, 2, [("band", 1, (2,))] * 2 + [("jewel", 2, ())]),
    "octa223": (10, 15, 10, 3,
                [("band", 1, (2,)), ("band", 1, (2,)), ("band", 1, (3,)),
                 ("jewel", 3, ())]),
}

NAMES = sorted(DIAGRAMS)
SMALL = [n for n in NAMES if DIAGRAMS[n].n <= 8]


# --------------------------------------------------------------- helpers


def canon_curve(edges, faces):
    """Canonical form over the four rotations and the reversed traversal,
    mirroring how the library normalizes circles."""
    e, f = list(edges), list(faces)
    best = None
    for _ in range(2):
        for r in range(4):
            cand = (tuple(e[r:] + e[:r]), tuple(f[r:] + f[:r]))
            if best is None or cand < best:
                best = cand
        e = [e[0], e[3], e[2], e[1]]
        f = [f[3], f[2], f[1], f[0]]
    return HasemanCurve(*best)


def brute_candidates(d):
    """Every closed 4-walk alternating between edges and bordering faces,
    built from scratch: cross an edge, follow the face on the new side to
    the next edge, and require the walk to close up.  No incompressibility
    filtering."""
    fo = d.face_of()
    theta = d.theta
    frep = {h: f[0] for f in d.faces() for h in f}
    erep = lambda h: min(h, theta[h])
    flank = {}
    for h in range(d.num_darts):
        flank[(erep(h), fo[h])] = h
    edges = sorted({erep(h) for h in range(d.num_darts)})
    out = set()
    for quad in itertools.combinations(edges, 4):
        for tail in itertools.permutations(quad[1:]):
            seq = (quad[0],) + tail
            for s_init in (seq[0], theta[seq[0]]):
                s, fseq, ok = s_init, [], True
                for i in range(4):
                    fseq.append(frep[s])
                    u = flank.get((seq[(i + 1) % 4], fo[s]))
                    if u is None:
                        ok = False
                        break
                    s = theta[u]
                if ok and s == s_init:
                    out.add(canon_curve(seq, fseq))
    return out


def banks_of(d, curve):
    """The two capped pieces a circle bounds, or None when the incidence
    data is not realizable as an embedded circle."""
    try:
        pieces = split(d, [curve])
    except (InconsistentPartition, ValueError, KeyError):
        return None
    if len(pieces) != 2:
        return None
    return pieces


def has_compressing_arc(piece):
    """Explicit compressing-arc search in the disc the piece fills: an
    essential arc from the boundary circle to itself avoiding the graph
    exists exactly when one face touches the circle's collapsed side at two
    opposite corners."""
    pd = piece.diagram
    (cap,) = pd.caps
    fo = pd.face_of()
    corner = [fo[4 * cap + s] for s in range(4)]
    return corner[0] == corner[2] or corner[1] == corner[3]


def oracle_curves(d):
    out = set()
    for cand in brute_candidates(d):
        banks = banks_of(d, cand)
        if banks is not None and not any(has_compressing_arc(p) for p in banks):
            out.add(cand)
    return out


def classify_or_none(piece):
    try:
        return classify_piece(piece)
    except UnclassifiablePiece:
        return None


def admissible(d, curves):
    try:
        pieces = split(d, list(curves))
    except InconsistentPartition:
        return False
    classes = [classify_or_none(p) for p in pieces]
    return all(c is not None and c.kind in ("band", "jewel") for c in classes)


def minimal_admissible_families(d):
    """Exhaustive search: all subsets of non-singleton-bounding circles that
    are pairwise disjoint, pairwise non-parallel, and admissible; return the
    inclusion-minimal ones."""
    cands = sorted(c for c in enumerate_haseman(d)
                   if not bounds_singleton(d, c))
    admissibles = []
    for r in range(len(cands) + 1):
        for sub in itertools.combinations(cands, r):
            if all(curves_disjoint(d, a, b) and not curves_parallel(d, a, b)
                   for a, b in itertools.combinations(sub, 2)):
                if admissible(d, sub):
                    admissibles.append(frozenset(sub))
    return [s for s in admissibles if not any(t < s for t in admissibles)]


def relabel(d, perm):
    theta = [0] * (4 * d.n)
    over = [0] * d.n
    for v in range(d.n):
        for s in range(4):
            w, t = d.theta[4 * v + s] >> 2, d.theta[4 * v + s] & 3
            theta[4 * perm[v] + s] = 4 * perm[w] + t
        over[perm[v]] = d.over[v]
    return Diagram(tuple(theta), tuple(over))


def pieces_of(name):
    d = DIAGRAMS[name]
    return split(d, canonical_family(d))


def jewel_piece(name):
    for p in pieces_of(name):
        if classify_piece(p).kind == "jewel":
            return p
    raise AssertionError(f"{name} has no jewel piece")


def class_table(d):
    return sorted((c.kind, c.v, c.weights)
                  for c in map(classify_piece, split(d, canonical_family(d))))


# ----------------------------------------------------------- enumeration


@pytest.mark.parametrize("name", NAMES)
def test_enumeration_matches_brute_force_oracle(name):
    d = DIAGRAMS[name]
    assert enumerate_haseman(d) == oracle_curves(d)


@pytest.mark.parametrize("name", NAMES)
def test_enumeration_counts(name):
    d = DIAGRAMS[name]
    crossings, n_curves, n_singleton, _, _ = FROZEN[name]
    curves = enumerate_haseman(d)
    assert d.n == crossings
    assert len(curves) == n_curves
    assert sum(bounds_singleton(d, c) for c in curves) == n_singleton


@pytest.mark.parametrize("name", NAMES)
def test_curves_have_four_distinct_edges_bordering_their_faces(name):
    d = DIAGRAMS[name]
    face_edges = {f[0]: {min(h, d.theta[h]) for h in f} for f in d.faces()}
    for c in enumerate_haseman(d):
        assert len(set(c.edges)) == 4
        assert c.faces[0] != c.faces[2] and c.faces[1] != c.faces[3]
        for i in range(4):
            assert c.edges[i] in face_edges[c.faces[i]]
            assert c.edges[(i + 1) % 4] in face_edges[c.faces[i]]


def test_trefoil_curves_bound_singletons_or_two_consecutive_crossings():
    d = DIAGRAMS["trefoil_pd"]
    for c in enumerate_haseman(d):
        sizes = sorted(p.interior_crossings for p in split(d, [c]))
        assert sizes == [1, 2]
        # the two crossings are consecutive: that side is a twist chain
        two = next(p for p in split(d, [c]) if p.interior_crossings == 2)
        cls = classify_piece(two)
        assert cls.kind == "band" and abs(cls.weights[0]) == 2


def test_figure_eight_has_circle_separating_the_twist_regions():
    d = DIAGRAMS["figure_eight"]
    separating = [c for c in enumerate_haseman(d)
                  if sorted(p.interior_crossings for p in split(d, [c]))
                  == [2, 2]]
    assert len(separating) == 1
    assert tuple(separating) == canonical_family(d).curves


def test_no_two_enumerated_curves_are_parallel():
    for name in ("figure_eight", "pretzel233", "octa22"):
        d = DIAGRAMS[name]
        curves = sorted(enumerate_haseman(d))
        assert not any(curves_parallel(d, a, b)
                       for a, b in itertools.combinations(curves, 2))


def test_figure_eight_curves_pairwise_disjoint():
    d = DIAGRAMS["figure_eight"]
    curves = sorted(enumerate_haseman(d))
    pairs = list(itertools.combinations(curves, 2))
    assert len(pairs) == 10
    assert all(curves_disjoint(d, a, b) for a, b in pairs)


def test_empty_diagram_rejected_upstream():
    with pytest.raises(EmptyDiagram):
        Diagram((), ())
    with pytest.raises(EmptyDiagram):
        parse_pd("")


# ---------------------------------------------------------- thread labels


def test_trefoil_thread_labels_alternate():
    d = DIAGRAMS["torus3"]
    patterns = {thread_labels(d, c) for c in enumerate_haseman(d)}
    assert patterns <= {("+", "-", "+", "-"), ("-", "+", "-", "+")}


@pytest.mark.parametrize("name", NAMES)
def test_opposite_threads_share_labels_and_banks_swap(name):
    d = DIAGRAMS[name]
    flip = {"+": "-", "-": "+"}
    for c in enumerate_haseman(d):
        left = thread_labels(d, c, "left")
        right = thread_labels(d, c, "right")
        assert left[0] == left[2] and left[1] == left[3]
        assert right == tuple(flip[x] for x in left)


def test_thread_labels_require_alternating():
    d = DIAGRAMS["figure_eight"]
    over = list(d.over)
    over[0] ^= 1
    bad = d.replace(over=tuple(over), out=None)
    assert not bad.is_alternating()
    curve = min(enumerate_haseman(bad))
    with pytest.raises(NotAlternating):
        thread_labels(bad, curve)
    with pytest.raises(ValueError):
        thread_labels(d, min(enumerate_haseman(d)), side="up")


# ------------------------------------------------------- canonical family


@pytest.mark.parametrize("m", range(2, 7))
def test_torus_diagrams_have_empty_family(m):
    d = torus(m)
    fam = canonical_family(d)
    assert len(fam) == 0
    cls = classify_piece(split(d, fam)[0])
    assert cls.kind == "band" and cls.v == 0 and abs(cls.weight) == m


@pytest.mark.parametrize("name", SMALL)
def test_canonical_family_is_the_unique_minimal_admissible_family(name):
    d = DIAGRAMS[name]
    minimal = minimal_admissible_families(d)
    assert len(minimal) == 1
    assert minimal[0] == frozenset(canonical_family(d).curves)


@pytest.mark.parametrize("name", ["figure_eight", "pretzel233", "octa223"])
def test_canonical_family_is_order_independent(name):
    d = DIAGRAMS[name]
    reference = canonical_family(d).curves
    for seed in range(100):
        assert canonical_family(d, random.Random(seed)).curves == reference


@pytest.mark.parametrize("name", NAMES)
def test_family_members_never_bound_singletons(name):
    d = DIAGRAMS[name]
    for c in canonical_family(d):
        assert not bounds_singleton(d, c)


@pytest.mark.parametrize("name", NAMES)
def test_deleting_any_circle_breaks_admissibility(name):
    d = DIAGRAMS[name]
    fam = canonical_family(d)
    for c in fam:
        rest = [x for x in fam if x != c]
        assert not admissible(d, rest)


@pytest.mark.parametrize("name", NAMES)
def test_edge_order_certificate_covers_each_circle_four_times(name):
    d = DIAGRAMS[name]
    fam = canonical_family(d)
    crossed = {}
    for entry, order in fam.edge_orders:
        for c in order:
            crossed[c] = crossed.get(c, 0) + 1
        assert all(entry in c.edges for c in order)
    assert crossed == {c: 4 for c in fam}


# ------------------------------------------------------------- splitting


def test_split_with_empty_family_returns_the_whole_diagram():
    d = DIAGRAMS["trefoil_pd"]
    pieces = split(d, [])
    assert len(pieces) == 1
    assert pieces[0].diagram.n == d.n and not pieces[0].diagram.caps


@pytest.mark.parametrize("name", NAMES)
def test_split_partitions_crossings_one_piece_per_region(name):
    d = DIAGRAMS[name]
    fam = canonical_family(d)
    pieces = split(d, fam)
    assert len(pieces) == len(fam) + 1
    assert sum(p.interior_crossings for p in pieces) == d.n
    seen = {}
    for p in pieces:
        for cap, curve, stub_edges in p.boundary:
            assert set(stub_edges) == set(curve.edges)
            seen[curve] = seen.get(curve, 0) + 1
    assert seen == {c: 2 for c in fam}


def test_figure_eight_splits_into_two_crossing_pairs():
    pieces = pieces_of("figure_eight")
    assert sorted(p.interior_crossings for p in pieces) == [2, 2]
    for p in pieces:
        cls = classify_piece(p)
        assert cls.kind == "band" and cls.v == 1 and abs(cls.weight) == 2


def test_split_rejects_circles_without_disjoint_representatives():
    d = DIAGRAMS["torus4"]
    curves = sorted(enumerate_haseman(d))
    crossing = [(a, b) for a, b in itertools.combinations(curves, 2)
                if not curves_disjoint(d, a, b)]
    assert len(crossing) == 1
    with pytest.raises(InconsistentPartition):
        split(d, list(crossing[0]))


# --------------------------------------------------------- classification


@pytest.mark.parametrize("name", NAMES)
def test_piece_classification_frozen(name):
    d = DIAGRAMS[name]
    assert class_table(d) == sorted(FROZEN[name][4])


def test_mirror_negates_band_weights():
    for name in ("torus3", "pretzel233", "octa22"):
        mirrored = class_table(mirror(DIAGRAMS[name]))
        expected = sorted((k, v, tuple(-w for w in ws))
                          for k, v, ws in FROZEN[name][4])
        assert mirrored == expected


def test_cutting_off_one_crossing_yields_a_singleton_piece():
    d = DIAGRAMS["torus3"]
    curve = min(enumerate_haseman(d))
    small = next(p for p in split(d, [curve]) if p.interior_crossings == 1)
    cls = classify_piece(small)
    assert cls.kind == "singleton" and cls.v == 1 and cls.weights == ()


def test_whole_figure_eight_is_unclassifiable():
    with pytest.raises(UnclassifiablePiece):
        classify_piece(split(DIAGRAMS["figure_eight"], [])[0])


def test_basic_polyhedra_are_jewels_every_curve_bounds_a_singleton():
    for name in ("octahedron", "antiprism"):
        d = DIAGRAMS[name]
        assert all(bounds_singleton(d, c) for c in enumerate_haseman(d))
        cls = classify_piece(split(d, [])[0])
        assert cls.kind == "jewel" and cls.v == 0


@pytest.mark.parametrize("seed", range(3))
def test_decomposition_is_label_invariant(seed):
    d = DIAGRAMS["pretzel233"]
    perm = list(range(d.n))
    random.Random(seed).shuffle(perm)
    rd = relabel(d, perm)
    assert len(enumerate_haseman(rd)) == FROZEN["pretzel233"][1]
    assert class_table(rd) == sorted(FROZEN["pretzel233"][4])


# ------------------------------------------------- alternating extension


def test_extension_of_capless_piece_is_unchanged():
    d = DIAGRAMS["torus3"]
    ext = alternating_extension(split(d, [])[0])
    assert ext.theta == d.theta and ext.over == d.over


def test_figure_eight_piece_extensions_are_three_crossing_knots():
    shadow3 = Diagram(DIAGRAMS["torus3"].theta, (0, 0, 0))
    closures = []
    for p in pieces_of("figure_eight"):
        ext = alternating_extension(p)
        assert ext.n == 3 and not ext.caps
        assert ext.is_alternating() and ext.is_knot()
        shadow = Diagram(ext.theta, (0,) * ext.n)
        closures.append(map_isomorphic(shadow, shadow3) is not None)
        # the capping crossing is forced: the flipped choice breaks
        # alternation
        (cap,) = p.diagram.caps
        over = list(ext.over)
        over[cap] ^= 1
        assert not Diagram(ext.theta, tuple(over)).is_alternating()
    assert sorted(closures) == [False, True]


def test_crossing_free_center_extension_closes_into_the_three_necklace():
    # the pretzel's center piece has three boundary circles and no crossings;
    # capping all three must still find a consistent alternating assignment
    center = next(p for p in pieces_of("pretzel222")
                  if classify_piece(p).v == 3)
    ext = alternating_extension(center)
    assert ext.n == 3 and ext.is_alternating()
    shadow3 = Diagram(DIAGRAMS["torus3"].theta, (0, 0, 0))
    assert map_isomorphic(Diagram(ext.theta, (0,) * 3), shadow3) is not None


def test_extension_of_inconsistent_piece_is_rejected():
    d = DIAGRAMS["figure_eight"]
    over = list(d.over)
    over[0] ^= 1
    bad = d.replace(over=tuple(over), out=None)
    outcomes = []
    for p in split(bad, canonical_family(bad)):
        try:
            alternating_extension(p)
            outcomes.append("extends")
        except NotAlternating:
            outcomes.append("rejected")
    assert sorted(outcomes) == ["extends", "rejected"]


# ---------------------------------------------------------------- filling


def test_filling_contracts_twist_chains_to_clasps_and_singletons():
    # two 2-chains become clasps, the 3-chain becomes a single crossing
    d = DIAGRAMS["octa223"]
    filled = filling(d, jewel_piece("octa223"))
    assert filled.n == 8
    assert filled.is_alternating() and filled.is_knot()
    assert map_isomorphic(filled, DIAGRAMS["octa22"]) is not None


def test_filling_fixes_minimal_twist_diagrams():
    d = DIAGRAMS["octa22"]
    filled = filling(d, jewel_piece("octa22"))
    assert map_isomorphic(filled, d) is not None


def test_filling_whole_jewel_knot_equals_its_extension():
    d = DIAGRAMS["antiprism"]
    (whole,) = split(d, [])
    assert filling(d, whole) == alternating_extension(whole)
    assert filling(d, whole) == d.replace(out=None)


def test_filling_requires_a_knot():
    d = DIAGRAMS["octahedron"]
    with pytest.raises(NotAKnot):
        filling(d, split(d, [])[0])
