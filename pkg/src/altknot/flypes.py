"""Flype moves on reduced alternating diagrams.

A flype carries one crossing across an adjacent sub-tangle: the crossing is
withdrawn on one side, the tangle between it and a gap further along is
turned over (a half-turn about the travel axis), and the crossing reappears
in that gap.  On a reduced alternating diagram every flype happens inside a
single twisted band diagram of the canonical decomposition: the active
crossing sits in one twist of the band and can only land in another gap of
the same band.  That confinement makes the moves enumerable: sites, orbits
and the full set of diagrams reachable by flypes all come out of the
decomposition.

The surgery (`apply_flype`) is purely combinatorial.  With the active
crossing ``x`` and the turned-over tangle ``T``:

* the two edges joining ``x`` to ``T`` and the two edges flanking the
  destination gap are cut; ``T`` is the piece so freed that contains the
  tangle-side neighbours of ``x`` (the cut must separate it from ``x``);
* every vertex of ``T`` has its rotation reversed (slot ``s`` to ``-s``) and
  its over/under bits swapped -- the combinatorial shadow of turning the
  tangle over in space;
* on the withdrawal side the two strands through ``x`` are straightened, and
  ``x`` is re-inserted across the destination gap so that each gap edge runs
  through it.

`Tangle` marks a one-cap diagram with the four compass points of its
boundary circle; `tangle_transform` realizes the half-turns of the disc and
the mirror, and `flype_equivalent_tangles` decides whether flypes that leave
the boundary circle alone carry one marked tangle onto another.
"""

from collections import deque
from dataclasses import dataclass

from .decompose import _band_structure, canonical_family, split
from .diagram import Diagram, make_alternating, sigma, vertex_of
from .errors import ClosureBudgetExceeded, InvalidSite

__all__ = [
    "FlypeOrbit",
    "FlypeSite",
    "Tangle",
    "apply_flype",
    "flype_closure",
    "flype_equivalent_tangles",
    "flype_orbits",
    "flype_sites",
    "tangle_transform",
]


@dataclass(frozen=True, order=True)
class FlypeSite:
    """One executable flype.

    ``crossing`` is the active crossing; the darts ``4*crossing + side`` and
    ``4*crossing + side + 1`` enter the tangle that the move turns over.
    ``far`` holds the two darts of the destination gap's own face, one on
    each of the two edges flanking the gap.  ``destination`` lists the
    crossings of the twist the active crossing joins (empty for a bare gap
    between two boundary circles); the move is ``efficient`` when that twist
    is not the one the crossing already belongs to.
    """

    crossing: int
    side: int
    far: tuple
    efficient: bool
    destination: tuple


@dataclass(frozen=True)
class FlypeOrbit:
    """The set of crossings flypes can move around one twisted band."""

    crossings: frozenset

    def __contains__(self, crossing: int) -> bool:
        return crossing in self.crossings

    def __len__(self) -> int:
        return len(self.crossings)


# ------------------------------------------------------------ enumeration


def _band_geometry(piece):
    """The necklace of a band piece together with its gaps.

    Returns ``(cycle, gaps)`` where ``cycle`` is the cyclic vertex order of
    the piece's necklace and ``gaps[j]`` holds the two darts of the bigon
    face between ``cycle[j]`` and ``cycle[j+1]`` -- or None when the piece is
    no band (or too small to flype in).
    """
    pd = piece.diagram
    if pd.n == 2:
        return None
    cycle = _band_structure(pd)
    if cycle is None:
        return None
    faces = pd.faces()
    fo = pd.face_of()
    k = len(cycle)
    gaps = []
    for j in range(k):
        a, b = cycle[j], cycle[(j + 1) % k]
        found = set()
        for s in range(4):
            h = 4 * a + s
            if vertex_of(pd.theta[h]) == b:
                for g in (h, pd.theta[h]):
                    f = faces[fo[g]]
                    if len(f) == 2:
                        found.add(tuple(f))
        if len(found) != 1:
            return None
        gaps.append(found.pop())
    return cycle, gaps


def _position_twists(pd, cycle):
    """Assign each necklace position its twist: the tuple of positions of
    the maximal cap-free stretch around it (the whole cycle when the band is
    closed)."""
    k = len(cycle)
    cap_pos = [i for i, v in enumerate(cycle) if v in pd.caps]
    if not cap_pos:
        whole = tuple(range(k))
        return {i: whole for i in range(k)}
    twists = {}
    for idx, p in enumerate(cap_pos):
        q = cap_pos[(idx + 1) % len(cap_pos)]
        stretch = []
        i = (p + 1) % k
        while i != q:
            stretch.append(i)
            i = (i + 1) % k
        for i in stretch:
            twists[i] = tuple(stretch)
    return twists


def _band_sites(d, piece):
    """Every fine flype variant inside one band piece: active crossing x
    destination gap x travel direction."""
    geometry = _band_geometry(piece)
    if geometry is None:
        return []
    pd = piece.diagram
    cycle, gaps = geometry
    k = len(cycle)
    twists = _position_twists(pd, cycle)

    def d_crossing(pos):
        return vertex_of(piece.origin[4 * cycle[pos]])

    def gap_twist(j):
        a, b = j, (j + 1) % k
        if cycle[a] not in pd.caps:
            return twists[a]
        if cycle[b] not in pd.caps:
            return twists[b]
        return ("bare", j)

    sites = []
    for i in range(k):
        if cycle[i] in pd.caps:
            continue
        x = cycle[i]
        own = twists[i]
        for j in range(k):
            if j == i or j == (i - 1) % k:
                continue  # the gap's edges touch the active crossing
            dest = gap_twist(j)
            destination = (() if isinstance(dest, tuple) and dest
                           and dest[0] == "bare"
                           else tuple(sorted(d_crossing(p) for p in dest)))
            efficient = dest != own
            far = tuple(sorted(piece.origin[g] for g in gaps[j]))
            for neighbour in (cycle[(i + 1) % k], cycle[(i - 1) % k]):
                slots = sorted(s for s in range(4)
                               if vertex_of(pd.theta[4 * x + s]) == neighbour)
                s0, s1 = slots
                side = s0 if (s0 + 1) % 4 == s1 else s1
                sites.append(FlypeSite(vertex_of(piece.origin[4 * x]), side,
                                       far, efficient, destination))
    return sites


def _fine_sites(d):
    """All flype variants of the diagram, inefficient ones included."""
    sites = []
    for piece in split(d, canonical_family(d)):
        sites.extend(_band_sites(d, piece))
    return sorted(set(sites))


def _edge_key(d, h):
    return min(h, d.theta[h])


def flype_sites(d: Diagram):
    """The efficient flype sites of the diagram, one representative per
    (active crossing, destination twist) pair."""
    groups = {}
    for site in _fine_sites(d):
        if not site.efficient:
            continue
        key = (site.crossing, site.destination,
               tuple(sorted(_edge_key(d, h) for h in site.far))
               if not site.destination else ())
        groups.setdefault(key, []).append(site)
    return tuple(sorted(min(group) for group in groups.values()))


def flype_orbits(d: Diagram):
    """The partition of the crossings flypes can move at all: one orbit per
    twisted band diagram of the canonical decomposition that has interior
    crossings.  Crossings of jewels belong to no orbit."""
    orbits = []
    for piece in split(d, canonical_family(d)):
        pd = piece.diagram
        if pd.n != 2 and _band_structure(pd) is None:
            continue
        crossings = frozenset(vertex_of(piece.origin[4 * v])
                              for v in range(pd.n) if v not in pd.caps)
        if crossings:
            orbits.append(FlypeOrbit(crossings))
    return tuple(sorted(orbits, key=lambda o: min(o.crossings)))


# ---------------------------------------------------------------- surgery


def _surgery(d: Diagram, site: FlypeSite):
    """Perform the flype; returns (result, turned-over vertex set)."""
    n = d.n
    x = site.crossing
    if not isinstance(x, int) or not 0 <= x < n or x in d.caps:
        raise InvalidSite("the active crossing is not a crossing of the "
                          "diagram")
    if site.side not in (0, 1, 2, 3):
        raise InvalidSite("side must name a slot of the active crossing")
    far = tuple(site.far)
    if (len(far) != 2
            or not all(isinstance(h, int) and 0 <= h < 4 * n for h in far)):
        raise InvalidSite("far must hold two darts of the diagram")
    theta = d.theta
    u = 4 * x + site.side
    up = 4 * x + (site.side + 1) % 4
    da = 4 * x + (site.side + 2) % 4
    db = 4 * x + (site.side + 3) % 4
    if any(vertex_of(theta[h]) == x for h in (u, up, da, db)):
        raise InvalidSite("the active crossing carries a loop edge")
    f1, f2 = far
    for h in (f1, f2):
        if x in (vertex_of(h), vertex_of(theta[h])):
            raise InvalidSite("the destination gap touches the active "
                              "crossing")
    if {f1, theta[f1]} & {f2, theta[f2]}:
        raise InvalidSite("the destination gap needs two distinct edges")

    cutset = {u, theta[u], up, theta[up], f1, theta[f1], f2, theta[f2]}
    if {u, up} & {f1, theta[f1], f2, theta[f2]}:
        raise InvalidSite("the destination gap touches the active crossing")
    start = vertex_of(theta[u])
    comp = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for s in range(4):
            h = 4 * v + s
            if h in cutset:
                continue
            w = vertex_of(theta[h])
            if w not in comp:
                comp.add(w)
                stack.append(w)
    if x in comp:
        raise InvalidSite("the cut does not separate a tangle from the "
                          "active crossing")
    if vertex_of(theta[up]) not in comp:
        raise InvalidSite("the two tangle-side strands of the crossing do "
                          "not enter the same piece")
    for h in (f1, f2):
        if (vertex_of(h) in comp) == (vertex_of(theta[h]) in comp):
            raise InvalidSite("each destination edge must run from the "
                              "tangle to the rest of the diagram")
    if (vertex_of(f1) in comp) == (vertex_of(f2) in comp):
        raise InvalidSite("the far darts must approach the gap from "
                          "opposite sides")

    def relabel(h):
        if vertex_of(h) in comp:
            return (h & ~3) | ((-h) & 3)
        return h

    new_theta = [None] * (4 * n)
    for h in range(4 * n):
        if h not in cutset:
            new_theta[relabel(h)] = relabel(theta[h])

    def join(a, b):
        new_theta[a] = b
        new_theta[b] = a

    # withdrawal side: straighten the two strands that ran through x
    join(theta[da], relabel(theta[u]))
    join(theta[db], relabel(theta[up]))
    # insertion side: both gap edges now run through x, whose rotation
    # matches the four gap ends in the order the turned-over tangle
    # presents them
    f_out, f_in = (f1, f2) if vertex_of(f1) not in comp else (f2, f1)
    ends = (f_out, relabel(f_in), relabel(theta[f_out]), theta[f_in])
    for slot, end in enumerate(ends):
        join(4 * x + slot, end)
    assert all(g is not None for g in new_theta), "surgery left loose darts"

    out = None
    if d.out is not None:
        # every strand keeps its direction: darts away from the active
        # crossing carry their bit to their new position, and the crossing's
        # own darts point against their new partners
        bits = [None] * (4 * n)
        for h in range(4 * n):
            if vertex_of(h) != x:
                bits[relabel(h)] = d.out[h]
        for s in range(4):
            bits[4 * x + s] = 1 - bits[new_theta[4 * x + s]]
        out = tuple(bits)
    base = Diagram(tuple(new_theta),
                   tuple(None if v in d.caps else 0 for v in range(n)),
                   out, d.caps)
    if not (base.is_connected() and base.is_spherical()):
        raise InvalidSite("the far darts do not flank one gap face")
    result = make_alternating(base)
    expected = {v: d.over[v] ^ (1 if v in comp else 0)
                for v in range(n) if v != x and v not in d.caps}
    if not all(result.over[v] == bit for v, bit in expected.items()):
        result = result.mirror()
        assert all(result.over[v] == bit for v, bit in expected.items()), \
            "flype surgery scrambled the over/under pattern"
    return result, frozenset(comp)


def apply_flype(d: Diagram, site: FlypeSite) -> Diagram:
    """The diagram after performing the flype at ``site``.

    Vertex indices are preserved: the active crossing keeps its index in the
    result, and so does every other vertex.  Inefficient sites (destination
    inside the active crossing's own twist) are legal and return a diagram
    with the same canonical code.  Raises InvalidSite when the data does not
    describe a flype of this diagram.
    """
    result, _ = _surgery(d, site)
    return result


# ---------------------------------------------------------------- closure


def _closure(d: Diagram, budget: int, oriented: bool = False):
    """Every diagram reachable from ``d`` by flypes, keyed by canonical
    code.  Only efficient variants are walked: an inefficient flype never
    changes the code.  With ``oriented`` the keys distinguish strand
    directions (``d`` must carry them), so a diagram reachable with both
    orientations appears twice."""
    seen = {d.canonical_code(1, oriented): d}
    queue = deque(seen.values())
    while queue:
        current = queue.popleft()
        for site in _fine_sites(current):
            if not site.efficient:
                continue
            successor, _ = _surgery(current, site)
            code = successor.canonical_code(1, oriented)
            if code not in seen:
                if len(seen) >= budget:
                    raise ClosureBudgetExceeded(budget, len(seen))
                seen[code] = successor
                queue.append(successor)
    return seen


def flype_closure(d: Diagram, budget: int = 10 ** 6) -> frozenset:
    """The canonical codes of every diagram reachable from ``d`` by flypes
    (``d`` itself included).  Raises ClosureBudgetExceeded when more than
    ``budget`` distinct diagrams appear."""
    return frozenset(_closure(d, budget))


# ---------------------------------------------------------------- tangles


def _strand_mate(d: Diagram, start: int) -> int:
    """The cap dart where the strand entering at cap dart ``start`` comes
    out again."""
    h = d.theta[start]
    while vertex_of(h) not in d.caps:
        h = d.theta[h ^ 2]
    return h


def _reflected_dart(h: int) -> int:
    return (h & ~3) | ((-h) & 3)


@dataclass(frozen=True)
class Tangle:
    """A marked 4-ended tangle: a diagram with exactly one cap, whose dart
    ``nw`` names the boundary end sitting at the north-west corner.  The
    remaining compass points follow the cap's rotation: NE, SE, SW are the
    successive slots after ``nw``."""

    diagram: Diagram
    nw: int

    def __post_init__(self):
        if len(self.diagram.caps) != 1:
            raise ValueError("a tangle is a diagram with exactly one cap")
        if vertex_of(self.nw) not in self.diagram.caps:
            raise ValueError("the NW mark must be a dart of the cap")

    @property
    def cap(self) -> int:
        return vertex_of(self.nw)

    @property
    def marks(self) -> dict:
        h = self.nw
        return {"NW": h, "NE": sigma(h), "SE": sigma(sigma(h)),
                "SW": sigma(sigma(sigma(h)))}

    @property
    def connection_path(self) -> str:
        """How the two strands join the four boundary ends: 'H' pairs NW-NE
        and SW-SE, 'V' pairs NW-SW and NE-SE, 'X' pairs the diagonals."""
        marks = self.marks
        mate = _strand_mate(self.diagram, marks["NW"])
        path = {marks["NE"]: "H", marks["SW"]: "V", marks["SE"]: "X"}[mate]
        partner = {"H": ("SW", "SE"), "V": ("NE", "SE"),
                   "X": ("NE", "SW")}[path]
        assert _strand_mate(self.diagram, marks[partner[0]]) == \
            marks[partner[1]], "boundary strands do not pair up"
        return path


def tangle_transform(t: Tangle, kind: str) -> Tangle:
    """The symmetries of the marked disc.

    ``star`` is the half-turn about the axis through the disc's centre,
    perpendicular to the projection plane: the diagram is untouched and the
    marks rotate two steps.  ``h`` and ``v`` are the half-turns about the
    horizontal and the vertical in-plane axes: the tangle is turned over,
    so every rotation reverses and every crossing changes over/under, while
    the marks swap NW-SW/NE-SE (for ``h``) or NW-NE/SW-SE (for ``v``).
    ``mirror`` swaps every crossing's over/under and keeps the marks.  Each
    transform is an involution, ``h`` after ``v`` equals ``star`` (in either
    order), and ``mirror`` commutes with the other three.
    """
    kind = kind.lower()
    if kind == "star":
        return Tangle(t.diagram, sigma(sigma(t.nw)))
    if kind == "mirror":
        return Tangle(t.diagram.mirror(), t.nw)
    if kind in ("h", "v"):
        turned = t.diagram.reflect().mirror()
        source = (sigma(sigma(sigma(t.nw))) if kind == "h"
                  else sigma(t.nw))
        return Tangle(turned, _reflected_dart(source))
    raise ValueError(f"unknown tangle transform {kind!r}")


def _marked_code(d: Diagram, nw: int):
    return d._rooted_code(nw, 1, False)[0]


def flype_equivalent_tangles(t1: Tangle, t2: Tangle,
                             budget: int = 10 ** 6) -> bool:
    """True iff flypes that leave the boundary circle alone carry the first
    marked tangle onto the second (same diagram, same compass marks)."""
    if t1.diagram.n != t2.diagram.n:
        return False
    target = _marked_code(t2.diagram, t2.nw)
    cap = t1.cap
    nw = t1.nw
    first = _marked_code(t1.diagram, nw)
    if first == target:
        return True
    seen = {first}
    queue = deque([t1.diagram])
    while queue:
        current = queue.popleft()
        for site in _fine_sites(current):
            if not site.efficient:
                continue
            successor, turned = _surgery(current, site)
            if cap in turned:
                continue  # that flype would move the boundary circle
            code = _marked_code(successor, nw)
            if code in seen:
                continue
            if code == target:
                return True
            if len(seen) >= budget:
                raise ClosureBudgetExceeded(budget, len(seen))
            seen.add(code)
            queue.append(successor)
    return False
