"""Knot and link projections as combinatorial maps on the oriented 2-sphere.

Encoding
--------
A projection with ``n`` four-valent vertices is stored as a fixed-point-free
involution on the set of *darts* ``0 .. 4n-1``.  Dart ``h`` sits at vertex
``h >> 2`` in rotational slot ``h & 3``; the slots of a vertex are numbered in
counterclockwise order, so ``sigma(h)`` is the next dart counterclockwise
around the same vertex.  ``theta[h]`` is the other dart of the edge containing
``h``.  Faces are the orbits of ``h -> sigma_inv(theta[h])``; the orbit
through ``h`` is the face to the left of ``h`` (pointing away from its
vertex), and the corner between ``h`` and ``sigma(h)`` lies in that face.  A
connected map built this way lives on a closed oriented surface; it describes
a projection exactly when that surface is the sphere, ``V - E + F = 2``.

Decorations
-----------
``over[v]`` is the slot parity (0 or 1) of the opposite slot pair carrying
the overpassing strand at vertex ``v``.  It is ``None`` exactly on *cap*
vertices: placeholders standing for a collapsed boundary circle of a piece
cut out of a larger projection (a cap has 4 incident edge ends, one per
intersection point of the boundary circle with the strands).

``out[h]`` is 1 when the strand direction at dart ``h`` points away from the
vertex, 0 when it points in, and ``out`` is ``None`` as a whole when the
diagram is unoriented.  At a crossing the two strands run through opposite
slots, so ``out[h] != out[h ^ 2]`` there, and ``out[h] != out[theta[h]]``
everywhere.

The same class models full projections (no caps), pieces of a decomposition
(some caps), and tangles (a distinguished cap, handled in the flype module).
Diagrams are immutable; every operation returns a new object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import EmptyDiagram, MalformedCode, NotAKnot

# ------------------------------------------------------------------ darts


def sigma(h: int) -> int:
    """Next dart counterclockwise around the vertex of ``h``."""
    return (h & ~3) | ((h + 1) & 3)


def sigma_inv(h: int) -> int:
    """Previous dart counterclockwise (= next clockwise)."""
    return (h & ~3) | ((h - 1) & 3)


def vertex_of(h: int) -> int:
    return h >> 2


def slot_of(h: int) -> int:
    return h & 3


def opposite(h: int) -> int:
    """The dart at the same vertex through which the strand of ``h`` leaves."""
    return h ^ 2


# ------------------------------------------------------------------ diagram


class Diagram:
    """Immutable 4-regular map with over/under and orientation decorations."""

    __slots__ = ("n", "theta", "over", "out", "caps", "_cache")

    def __init__(self, theta, over, out=None, caps=frozenset()):
        theta = tuple(theta)
        over = tuple(over)
        caps = frozenset(caps)
        n = len(over)
        if n == 0:
            raise EmptyDiagram("a diagram needs at least one vertex")
        if len(theta) != 4 * n:
            raise ValueError("theta must list 4 darts per vertex")
        for h, t in enumerate(theta):
            if not 0 <= t < 4 * n or t == h or theta[t] != h:
                raise ValueError(f"theta is not a fixed-point-free involution at dart {h}")
        for v in range(n):
            if v in caps:
                if over[v] is not None:
                    raise ValueError(f"cap vertex {v} must have over=None")
            elif over[v] not in (0, 1):
                raise ValueError(f"vertex {v} needs over in  {{0,1}}")
        if not all(0 <= c < n for c in caps):
            raise ValueError("caps must be vertex indices")
        if out is not None:
            out = tuple(int(b) for b in out)
            if len(out) != 4 * n:
                raise ValueError("out must assign a direction to every dart")
            for h in range(4 * n):
                if out[h] == out[theta[h]]:
                    raise ValueError(f"edge {h}-{theta[h]} oriented inconsistently")
                if (h >> 2) not in caps and out[h] == out[h ^ 2]:
                    raise ValueError(f"strand through vertex {h >> 2} has two heads")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "over", over)
        object.__setattr__(self, "out", out)
        object.__setattr__(self, "caps", caps)
        object.__setattr__(self, "_cache", {})

    # Diagrams are value objects: equality is structural.
    def __setattr__(self, name, value):
        raise AttributeError("Diagram is immutable")

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (self.theta == other.theta and self.over == other.over
                and self.out == other.out and self.caps == other.caps)

    def __hash__(self):
        return hash((self.theta, self.over, self.out, self.caps))

    def __repr__(self):
        kind = f", caps={sorted(self.caps)}" if self.caps else ""
        arrows = ", oriented" if self.out is not None else ""
        return f"<Diagram n={self.n}{kind}{arrows}>"

    def replace(self, **kw) -> "Diagram":
        args = {"theta": self.theta, "over": self.over,
                "out": self.out, "caps": self.caps}
        args.update(kw)
        return Diagram(**args)

    # ------------------------------------------------------------ structure

    @property
    def num_darts(self) -> int:
        return 4 * self.n

    @property
    def num_edges(self) -> int:
        return 2 * self.n

    @property
    def crossings(self):
        """Vertex indices that are genuine crossings (not caps)."""
        return [v for v in range(self.n) if v not in self.caps]

    def edges(self):
        """Each edge as (h, theta[h]) with h < theta[h]."""
        return [(h, self.theta[h]) for h in range(4 * self.n) if h < self.theta[h]]

    def face_next(self, h: int) -> int:
        return sigma_inv(self.theta[h])

    def faces(self):
        """Faces as tuples of darts, each face starting at its minimal dart.

        The face containing dart ``h`` is the face to the left of ``h``.
        """
        cached = self._cache.get("faces")
        if cached is not None:
            return cached
        seen = [False] * (4 * self.n)
        faces = []
        for h0 in range(4 * self.n):
            if seen[h0]:
                continue
            cycle = []
            h = h0
            while not seen[h]:
                seen[h] = True
                cycle.append(h)
                h = self.face_next(h)
            faces.append(tuple(cycle))
        faces = tuple(faces)
        self._cache["faces"] = faces
        return faces

    def face_of(self):
        """Tuple mapping each dart to the index of its left face."""
        cached = self._cache.get("face_of")
        if cached is not None:
            return cached
        fo = [-1] * (4 * self.n)
        for i, f in enumerate(self.faces()):
            for h in f:
                fo[h] = i
        fo = tuple(fo)
        self._cache["face_of"] = fo
        return fo

    def vertex_components(self):
        """Connected components of the underlying graph, as vertex lists."""
        cached = self._cache.get("components")
        if cached is not None:
            return cached
        comp = [-1] * self.n
        comps = []
        for v0 in range(self.n):
            if comp[v0] >= 0:
                continue
            cid = len(comps)
            stack = [v0]
            comp[v0] = cid
            members = [v0]
            while stack:
                v = stack.pop()
                for s in range(4):
                    w = self.theta[4 * v + s] >> 2
                    if comp[w] < 0:
                        comp[w] = cid
                        stack.append(w)
                        members.append(w)
            comps.append(sorted(members))
        comps = tuple(tuple(m) for m in comps)
        self._cache["components"] = comps
        return comps

    def is_connected(self) -> bool:
        return len(self.vertex_components()) == 1

    def is_spherical(self) -> bool:
        """Euler check: every component of the map lies on a sphere."""
        k = len(self.vertex_components())
        return len(self.faces()) == self.n + 2 * k

    # ------------------------------------------------------------- strands

    def strand_next(self, h: int) -> int:
        """Follow the strand of ``h`` across its edge and through the next vertex."""
        t = self.theta[h]
        if (t >> 2) in self.caps:
            raise ValueError("strand continuation through a cap is undefined")
        return t ^ 2

    def strand_orbits(self):
        """Orbits of strand_next; each link component yields two (one per direction)."""
        if self.caps:
            raise ValueError("strand orbits need a cap-free diagram")
        seen = [False] * (4 * self.n)
        orbits = []
        for h0 in range(4 * self.n):
            if seen[h0]:
                continue
            orb = []
            h = h0
            while not seen[h]:
                seen[h] = True
                orb.append(h)
                h = self.strand_next(h)
            orbits.append(tuple(orb))
        return tuple(orbits)

    def num_strand_components(self) -> int:
        return len(self.strand_orbits()) // 2

    def is_knot(self) -> bool:
        return (not self.caps and self.is_connected()
                and self.num_strand_components() == 1)

    def orient(self) -> "Diagram":
        """Return an oriented copy (deterministic choice); no-op if oriented."""
        if self.out is not None:
            return self
        out = [-1] * (4 * self.n)
        for orb in self.strand_orbits():
            if out[orb[0]] >= 0:
                continue
            for h in orb:
                out[h] = 1
                out[self.theta[h]] = 0
        return self.replace(out=tuple(out))

    def passage_is_over(self, h: int) -> bool:
        """True when the strand holding dart ``h`` overpasses at h's vertex."""
        o = self.over[h >> 2]
        if o is None:
            raise ValueError("caps have no over/under")
        return (h & 1) == o

    # ------------------------------------------------------------- shading

    def shading(self):
        """2-coloring of faces, 0=white, 1=black; face of dart 0 is white.

        Exists for every map all of whose vertices have even degree on the
        sphere; raises MalformedCode otherwise.
        """
        cached = self._cache.get("shading")
        if cached is not None:
            return cached
        fo = self.face_of()
        nf = len(self.faces())
        color = [-1] * nf
        for h0 in range(4 * self.n):
            root = fo[h0]
            if color[root] >= 0:
                continue
            color[root] = 0
            stack = [root]
            while stack:
                f = stack.pop()
                for h in self.faces()[f]:
                    g = fo[self.theta[h]]
                    if color[g] < 0:
                        color[g] = 1 - color[f]
                        stack.append(g)
                    elif color[g] == color[f]:
                        raise MalformedCode("face structure is not 2-colorable")
        color = tuple(color)
        self._cache["shading"] = color
        return color

    def dart_is_black(self, h: int) -> bool:
        """Color of the face to the left of ``h``."""
        return self.shading()[self.face_of()[h]] == 1

    def black_parity(self, v: int) -> int:
        """Slot parity of the dart pair at ``v`` whose left faces are black."""
        return 1 if self.dart_is_black(4 * v + 1) else 0

    def is_alternating(self) -> bool:
        """Crossings relate over/under to the shading the same way everywhere.

        For cap-free diagrams this is equivalent to strand-walk alternation;
        stated through the shading it also covers pieces with caps.
        """
        rel = None
        for v in self.crossings:
            r = self.over[v] == self.black_parity(v)
            if rel is None:
                rel = r
            elif r != rel:
                return False
        return True

    def alternation_witness(self):
        """A pair of crossings whose shading relation disagrees, or None."""
        groups = {True: None, False: None}
        for v in self.crossings:
            r = self.over[v] == self.black_parity(v)
            if groups[r] is None:
                groups[r] = v
            if groups[True] is not None and groups[False] is not None:
                return (groups[True], groups[False])
        return None

    # ---------------------------------------------------------- operations

    def mirror(self) -> "Diagram":
        """Swap every over/under assignment; shadow and orientation unchanged."""
        return self.replace(over=tuple(None if o is None else 1 - o
                                       for o in self.over))

    def reverse(self) -> "Diagram":
        """Reverse the strand orientation of a knot."""
        if not self.is_knot():
            raise NotAKnot("reverse is defined for knot projections")
        d = self.orient()
        return d.replace(out=tuple(1 - b for b in d.out))

    def reflect(self) -> "Diagram":
        """Reverse every cyclic order (slot s -> -s mod 4): the image of the
        diagram under a reflection of the projection sphere, over/under kept."""
        m = [4 * (h >> 2) + ((-(h & 3)) % 4) for h in range(4 * self.n)]
        theta = [0] * (4 * self.n)
        for h in range(4 * self.n):
            theta[m[h]] = m[self.theta[h]]
        out = None
        if self.out is not None:
            out = [0] * (4 * self.n)
            for h in range(4 * self.n):
                out[m[h]] = self.out[h]
            out = tuple(out)
        return Diagram(tuple(theta), self.over, out, self.caps)

    def relabeled(self, vperm, slot_shifts) -> "Diagram":
        """Rename vertex v to vperm[v] and rotate its slots by slot_shifts[v].

        Produces a diagram isomorphic to this one by a degree +1 map; used to
        exercise canonical-code invariance.
        """
        n = self.n
        m = [0] * (4 * n)
        for h in range(4 * n):
            v, s = h >> 2, h & 3
            m[h] = 4 * vperm[v] + ((s + slot_shifts[v]) % 4)
        theta = [0] * (4 * n)
        for h in range(4 * n):
            theta[m[h]] = m[self.theta[h]]
        over = [None] * n
        for v in range(n):
            if self.over[v] is not None:
                over[vperm[v]] = (self.over[v] + slot_shifts[v]) % 2
        out = None
        if self.out is not None:
            out = [0] * (4 * n)
            for h in range(4 * n):
                out[m[h]] = self.out[h]
            out = tuple(out)
        caps = frozenset(vperm[c] for c in self.caps)
        return Diagram(tuple(theta), tuple(over), out, caps)

    # ------------------------------------------------------ canonical codes

    def _decoration(self, h: int, oriented: bool):
        v = h >> 2
        o = 2 if v in self.caps else (1 if (h & 1) == self.over[v] else 0)
        if not oriented:
            return (o,)
        return (o, 2 if self.out is None else self.out[h])

    def _rooted_code(self, root: int, degree: int, oriented: bool):
        """BFS labeling from ``root``; returns (code, labels).

        Discovery order: rotation successor first, then edge partner.  For
        degree -1 the reversed rotation is used, so codes of opposite degrees
        compare across a sphere reflection.
        """
        theta = self.theta
        rot = sigma if degree == 1 else sigma_inv
        label = [-1] * (4 * self.n)
        order = [root]
        label[root] = 0
        for h in order:
            a = rot(h)
            if label[a] < 0:
                label[a] = len(order)
                order.append(a)
            b = theta[h]
            if label[b] < 0:
                label[b] = len(order)
                order.append(b)
        if len(order) < 4 * self.n:
            raise ValueError("canonical code requires a connected diagram")
        code = tuple((label[rot(h)], label[theta[h]]) + self._decoration(h, oriented)
                     for h in order)
        return code, label

    def _canonical(self, degree: int, oriented: bool):
        """Minimal rooted code and every root achieving it."""
        key = ("canon", degree, oriented)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        best = None
        roots = []
        for r in range(4 * self.n):
            code, _ = self._rooted_code(r, degree, oriented)
            if best is None or code < best:
                best, roots = code, [r]
            elif code == best:
                roots.append(r)
        result = (best, tuple(roots))
        self._cache[key] = result
        return result

    def canonical_key(self, degree: int = 1, oriented: bool = False):
        """Hashable canonical form; equal keys = isomorphic maps (see module doc)."""
        return self._canonical(degree, oriented)[0]

    def canonical_code(self, degree: int = 1, oriented: bool = False) -> str:
        """String form of the canonical key.

        The degree is deliberately not part of the string: the degree -1 code
        of a diagram equals the degree +1 code of its rotation-reversed copy,
        so codes of opposite degrees compare across a sphere reflection.
        """
        code = self.canonical_key(degree, oriented)
        body = ";".join(",".join(str(x) for x in t) for t in code)
        return f"{self.n}|{body}"

    # --------------------------------------------------------------- export

    def pd_text(self) -> str:
        """PD code of an oriented knot diagram (slot 0 = incoming understrand).

        Reparsing yields a diagram isomorphic to this one by a degree +1 map
        (orientation kept).
        """
        if not self.is_knot():
            raise NotAKnot("PD export is defined for knot projections")
        d = self.orient()
        start = None
        for s in range(4):
            h = s  # dart of vertex 0
            if not d.passage_is_over(h) and d.out[h]:
                start = h
                break
        assert start is not None
        elabel = {}
        h = start
        for k in range(2 * d.n):
            elabel[h] = k + 1
            elabel[d.theta[h]] = k + 1
            h = d.strand_next(h)
        assert h == start
        terms = []
        for v in range(d.n):
            h_in = None
            for s in range(4):
                h = 4 * v + s
                if not d.passage_is_over(h) and not d.out[h]:
                    h_in = h
                    break
            labels = [elabel[h_in], elabel[sigma(h_in)],
                      elabel[sigma(sigma(h_in))], elabel[sigma_inv(h_in)]]
            terms.append("X[%d,%d,%d,%d]" % tuple(labels))
        return " ".join(terms)


# ------------------------------------------------------------------ parsing

_PD_TERM = re.compile(r"[Xx]\s*\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")
_GAUSS_TOKEN = re.compile(r"([OoUu])\s*(\d+)\s*([+-])")
_SEPARATORS = re.compile(r"[\s,;]+")


def _diagram_from_pd_tuples(tuples) -> Diagram:
    n = len(tuples)
    if n == 0:
        raise EmptyDiagram("no crossings in code")
    positions = {}
    for i, quad in enumerate(tuples):
        a, b, c, d = quad
        if b == d or a == c:
            raise MalformedCode(
                f"crossing {i + 1}: a strand cannot enter and leave through the same edge")
        for s, lab in enumerate(quad):
            positions.setdefault(lab, []).append(4 * i + s)
    for lab, ds in positions.items():
        if len(ds) != 2:
            raise MalformedCode(f"label {lab} appears {len(ds)} times (want 2)")
    if sorted(positions.keys()) != list(range(1, 2 * n + 1)):
        raise MalformedCode(f"edge labels must be 1..{2 * n}, each exactly twice")
    theta = [0] * (4 * n)
    for ds in positions.values():
        theta[ds[0]], theta[ds[1]] = ds[1], ds[0]
    # Slot 0 carries the incoming understrand, slot 2 the outgoing one; the
    # remaining directions follow by propagation along edges and straight
    # through crossings.  This also covers links, whose labels wrap per
    # component rather than modulo 2n.
    out = [-1] * (4 * n)
    work = []

    def assign(h, val):
        if out[h] == -1:
            out[h] = val
            work.append(h)
        elif out[h] != val:
            raise MalformedCode("strand directions cannot be made consistent")

    for i in range(n):
        assign(4 * i, 0)
        assign(4 * i + 2, 1)
    while True:
        while work:
            h = work.pop()
            assign(theta[h], 1 - out[h])
            assign(h ^ 2, 1 - out[h])
        loose = [h for h in range(4 * n) if out[h] == -1]
        if not loose:
            break
        assign(loose[0], 1)  # a component passing over everywhere
    diagram = Diagram(tuple(theta), (1,) * n, tuple(out))
    k = len(diagram.vertex_components())
    if len(diagram.faces()) != n + 2 * k:
        raise MalformedCode("rotation system is not planar (Euler count fails)")
    if diagram.num_strand_components() == 1:
        # for knots the labels trace the single strand, so successive labels
        # must agree with the propagated directions at every passage
        for i, (a, b, c, d) in enumerate(tuples):
            under_ok = c == a % (2 * n) + 1
            over_ok = (b == d % (2 * n) + 1) if out[4 * i + 1] else (d == b % (2 * n) + 1)
            if not (under_ok and over_ok):
                raise MalformedCode(
                    f"crossing {i + 1}: labels do not follow the strand walk")
    return diagram


def parse_pd(text: str) -> Diagram:
    """Parse whitespace-separated ``X[a,b,c,d]`` tuples, counterclockwise from
    the incoming understrand, 1-based edge labels."""
    tuples = []
    for m in _PD_TERM.finditer(text):
        tuples.append(tuple(int(g) for g in m.groups()))
    rest = _PD_TERM.sub("", text)
    if _SEPARATORS.sub("", rest):
        if not tuples and not rest.strip():
            raise EmptyDiagram("empty code")
        raise MalformedCode(f"unrecognized PD text: {rest.strip()[:40]!r}")
    if not tuples:
        raise EmptyDiagram("empty code")
    return _diagram_from_pd_tuples(tuples)


def parse_gauss(text: str) -> Diagram:
    """Parse a signed Gauss code like ``O1+U2+O3+U1+O2+U3+``.

    Position p of the walk contributes edge label p+1 (edge from visit p to
    visit p+1, cyclically); each crossing is rebuilt as a PD tuple.
    """
    tokens = [(m.group(1).upper(), int(m.group(2)), m.group(3))
              for m in _GAUSS_TOKEN.finditer(text)]
    rest = _GAUSS_TOKEN.sub("", text)
    if _SEPARATORS.sub("", rest):
        if not tokens and not rest.strip():
            raise EmptyDiagram("empty code")
        raise MalformedCode(f"unrecognized Gauss text: {rest.strip()[:40]!r}")
    if not tokens:
        raise EmptyDiagram("empty code")
    visits = {}
    order = []
    for pos, (ou, num, sign) in enumerate(tokens):
        if num not in visits:
            visits[num] = {}
            order.append(num)
        if ou in visits[num]:
            raise MalformedCode(f"crossing {num} visited twice as {ou}")
        visits[num][ou] = (pos, sign)
    m = len(tokens)
    if len(visits) * 2 != m:
        raise MalformedCode("every crossing needs exactly one O and one U visit")
    tuples = []
    for num in order:
        vis = visits[num]
        if "O" not in vis or "U" not in vis:
            raise MalformedCode(f"crossing {num} lacks an O or U visit")
        (p, s1), (q, s2) = vis["U"], vis["O"]
        if s1 != s2:
            raise MalformedCode(f"crossing {num} has inconsistent signs")
        lab = lambda pos: pos % m + 1
        a, c = lab(p - 1), lab(p)
        if s1 == "+":
            b, d = lab(q), lab(q - 1)
        else:
            b, d = lab(q - 1), lab(q)
        tuples.append((a, b, c, d))
    return _diagram_from_pd_tuples(tuples)


def parse(text: str, fmt: str = "pd") -> Diagram:
    """Parse a diagram from text; ``fmt`` is ``"pd"`` or ``"gauss"``."""
    if fmt == "pd":
        return parse_pd(text)
    if fmt == "gauss":
        return parse_gauss(text)
    raise ValueError(f"unknown format {fmt!r}")


# --------------------------------------------------------------- validation


@dataclass(frozen=True)
class ValidationReport:
    """Hypothesis flags with a witness for every failure."""

    connected: bool
    prime: bool
    reduced: bool
    alternating: bool
    is_knot: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.connected and self.prime and self.reduced
                and self.alternating and self.is_knot)

    def as_dict(self):
        return {
            "connected": self.connected,
            "prime": self.prime,
            "reduced": self.reduced,
            "alternating": self.alternating,
            "is_knot": self.is_knot,
            "witnesses": {k: v for k, v in sorted(self.witnesses.items())},
        }


def _prime_witness(d: Diagram):
    """A pair of edges forming a separating dual 2-cycle, or None.

    A projection is composite exactly when some circle meets it transversally
    in 2 points with crossings on both sides; combinatorially the circle
    crosses two distinct edges that share both of their flanking faces, and
    removing those edges disconnects the vertex set.
    """
    fo = d.face_of()
    by_pair = {}
    for h, t in d.edges():
        key = frozenset((fo[h], fo[t]))
        by_pair.setdefault(key, []).append((h, t))
    for group in by_pair.values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                cut = set(group[i]) | set(group[j])
                comp = [-1] * d.n
                comp[0] = 0
                stack = [0]
                while stack:
                    v = stack.pop()
                    for s in range(4):
                        h = 4 * v + s
                        if h in cut:
                            continue
                        w = d.theta[h] >> 2
                        if comp[w] < 0:
                            comp[w] = 0
                            stack.append(w)
                side = [v for v in range(d.n) if comp[v] < 0]
                if side:
                    return {"cut_edges": [group[i], group[j]],
                            "inside": side}
    return None


def _nugatory_witness(d: Diagram):
    fo = d.face_of()
    bad = [v for v in range(d.n)
           if fo[4 * v] == fo[4 * v + 2] or fo[4 * v + 1] == fo[4 * v + 3]]
    return bad or None


def _alternation_walk_witness(d: Diagram):
    """Two successive passages of equal type along some strand, or None."""
    seen = set()
    for orb in d.strand_orbits():
        if orb[0] in seen:
            continue
        seen.update(orb)
        seen.update(d.theta[h] for h in orb)
        types = [d.passage_is_over(h) for h in orb]
        for i in range(len(orb)):
            if types[i] == types[(i + 1) % len(orb)]:
                return (orb[i] >> 2, orb[(i + 1) % len(orb)] >> 2)
    return None


def validate(d: Diagram) -> ValidationReport:
    """Check the standing hypotheses on a projection, with witnesses."""
    witnesses = {}
    connected = d.is_connected()
    if not connected:
        witnesses["connected"] = [list(c) for c in d.vertex_components()]
    reduced = True
    nug = _nugatory_witness(d)
    if nug:
        reduced = False
        witnesses["reduced"] = nug
    prime = True
    if connected:
        pw = _prime_witness(d)
        if pw:
            prime = False
            witnesses["prime"] = pw
    alternating = True
    if not d.caps:
        aw = _alternation_walk_witness(d)
        if aw:
            alternating = False
            witnesses["alternating"] = aw
    else:
        alternating = d.is_alternating()
        if not alternating:
            witnesses["alternating"] = d.alternation_witness()
    is_knot = d.is_knot()
    if not is_knot:
        if d.caps:
            witnesses["is_knot"] = "has boundary caps"
        elif not connected:
            witnesses["is_knot"] = "disconnected"
        else:
            witnesses["is_knot"] = f"{d.num_strand_components()} components"
    return ValidationReport(connected, prime, reduced, alternating,
                            is_knot, witnesses)


# ------------------------------------------------------------- isomorphism


@dataclass(frozen=True)
class MapIso:
    """A sphere-map isomorphism between two diagrams, dart by dart.

    ``degree`` +1 preserves all cyclic orders, -1 reverses them.  The map
    respects edges and decorations of the *target* diagram.
    """

    source: Diagram
    target: Diagram
    degree: int
    dart_map: tuple
    knot_orientation_effect: Optional[int]

    def dart(self, h: int) -> int:
        return self.dart_map[h]

    def vertex(self, v: int) -> int:
        return self.dart_map[4 * v] >> 2

    @property
    def vertex_map(self):
        return tuple(self.dart_map[4 * v] >> 2 for v in range(self.source.n))

    def is_identity(self) -> bool:
        return all(self.dart_map[h] == h for h in range(len(self.dart_map)))

    def permutation_order(self) -> int:
        """Order of the dart permutation (meaningful for self-maps)."""
        n = len(self.dart_map)
        seen = [False] * n
        order = 1
        for h in range(n):
            if seen[h]:
                continue
            length = 0
            x = h
            while not seen[x]:
                seen[x] = True
                x = self.dart_map[x]
                length += 1
            order = _lcm(order, length)
        return order

    def is_involution(self) -> bool:
        m = self.dart_map
        return all(m[m[h]] == h for h in range(len(m)))

    def fixed_cells(self):
        """Fixed vertices, fixed (end-swapped) edges, and fixed faces of a
        self-map of the underlying map.  Fixed darts would force the identity.

        Requires source and target to share the same underlying map (theta),
        as they do for a symmetry realized on a single projection.
        """
        if self.source.theta != self.target.theta:
            raise ValueError("fixed cells are defined for self-maps of one map")
        m = self.dart_map
        d = self.source
        fixed_vertices = [v for v in range(d.n) if m[4 * v] >> 2 == v]
        fixed_edges = [(h, d.theta[h]) for h, t in d.edges() if m[h] == d.theta[h]]
        fo = d.face_of()
        face_img = {}
        for h in range(4 * d.n):
            face_img[fo[h]] = fo[m[h]]
        fixed_faces = [f for f, g in face_img.items() if f == g]
        return fixed_vertices, fixed_edges, fixed_faces


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


def _orientation_effect(d1: Diagram, d2: Diagram, dart_map) -> Optional[int]:
    if d1.out is None or d2.out is None:
        return None
    agree = {d2.out[dart_map[h]] == d1.out[h] for h in range(4 * d1.n)}
    if agree == {True}:
        return 1
    if agree == {False}:
        return -1
    return None


def _check_iso(d1: Diagram, d2: Diagram, degree: int, m, oriented: bool):
    rot2 = sigma if degree == 1 else sigma_inv
    for h in range(4 * d1.n):
        assert m[sigma(h)] == rot2(m[h]), "rotation not respected"
        assert m[d1.theta[h]] == d2.theta[m[h]], "edges not respected"
        assert d1._decoration(h, oriented) == d2._decoration(m[h], oriented), \
            "decorations not respected"


def enumerate_isomorphisms(d1: Diagram, d2: Diagram, degree: int = 1,
                           oriented: bool = False) -> Iterator[MapIso]:
    """All isomorphisms of the stated degree, as MapIso witnesses.

    Every isomorphism is the unique one sending a fixed minimal root of d1 to
    some minimal root of d2, so the enumeration is complete and duplicate-free.
    """
    if d1.n != d2.n:
        return
    code1, roots1 = d1._canonical(1, oriented)
    code2, roots2 = d2._canonical(degree, oriented)
    if code1 != code2:
        return
    r1 = roots1[0]
    _, label1 = d1._rooted_code(r1, 1, oriented)
    for r2 in roots2:
        _, label2 = d2._rooted_code(r2, degree, oriented)
        inv2 = [0] * (4 * d2.n)
        for h, lb in enumerate(label2):
            inv2[lb] = h
        m = tuple(inv2[label1[h]] for h in range(4 * d1.n))
        _check_iso(d1, d2, degree, m, oriented)
        yield MapIso(d1, d2, degree, m, _orientation_effect(d1, d2, m))


def map_isomorphic(d1: Diagram, d2: Diagram, degree: int = 1,
                   oriented: bool = False) -> Optional[MapIso]:
    """A witness isomorphism of the stated degree, or None."""
    for iso in enumerate_isomorphisms(d1, d2, degree, oriented):
        return iso
    return None


# ------------------------------------------------------------- constructors


def make_alternating(d: Diagram) -> Diagram:
    """Reassign over/under from the shading so the result is alternating.

    At every crossing the overpass gets the dart pair whose left faces are
    black (faces 2-colored with dart 0's face white).  One of the two
    alternating decorations of the shadow; the other is its mirror.
    """
    over = list(d.over)
    for v in range(d.n):
        if v not in d.caps:
            over[v] = d.black_parity(v)
    return d.replace(over=tuple(over))


# spec-level convenience wrappers -------------------------------------------


def mirror(d: Diagram) -> Diagram:
    return d.mirror()


def reverse(d: Diagram) -> Diagram:
    return d.reverse()


def canonical_code(d: Diagram, degree: int = 1, oriented: bool = False) -> str:
    return d.canonical_code(degree, oriented)
