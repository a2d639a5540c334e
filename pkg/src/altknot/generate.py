"""Constructors for alternating diagram families.

Everything here builds a rotation system directly (darts ``4*v + slot``,
slot counterclockwise) and then chooses alternating over/under bits from the
checkerboard shading, so the results are alternating by construction.
Crossings sit in vertical twist chains wired like beads: inside a chain,
crossing ``a`` joins the next bead ``b`` through ``theta[4a+0] = 4b+1`` and
``theta[4a+3] = 4b+2``, leaving slots 1,2 of the first bead and slots 0,3 of
the last as the chain's free ports.
"""

import math

from .diagram import Diagram, make_alternating


def _chain(theta, base: int, k: int):
    """Wire a k-crossing twist chain on vertices base..base+k-1; return
    ((top ports), (bottom ports))."""
    for i in range(k - 1):
        a, b = base + i, base + i + 1
        theta[4 * a + 0], theta[4 * b + 1] = 4 * b + 1, 4 * a + 0
        theta[4 * a + 3], theta[4 * b + 2] = 4 * b + 2, 4 * a + 3
    last = base + k - 1
    return (4 * base + 1, 4 * base + 2), (4 * last + 0, 4 * last + 3)


def _finish(theta, n: int) -> Diagram:
    d = Diagram(tuple(theta), (0,) * n)
    if not (d.is_connected() and d.is_spherical()):
        raise ValueError("constructed rotation system is not a planar diagram")
    return make_alternating(d)


def torus(m: int) -> Diagram:
    """The (2, m) torus diagram: m crossings in a closed necklace (a knot for
    odd m, a two-component link for even m >= 2)."""
    if m < 2:
        raise ValueError("need at least two crossings")
    theta = [0] * (4 * m)
    for i in range(m):
        j = (i + 1) % m
        theta[4 * i + 0], theta[4 * j + 1] = 4 * j + 1, 4 * i + 0
        theta[4 * i + 3], theta[4 * j + 2] = 4 * j + 2, 4 * i + 3
    return _finish(theta, m)


def pretzel(*ks: int) -> Diagram:
    """The pretzel diagram with vertical twist regions of the given sizes,
    joined through a top and a bottom hub face."""
    if len(ks) < 2 or any(k < 1 for k in ks):
        raise ValueError("need at least two regions of at least one crossing")
    n = sum(ks)
    theta = [0] * (4 * n)
    ports = []
    base = 0
    for k in ks:
        ports.append(_chain(theta, base, k))
        base += k
    m = len(ks)
    for j in range(m):
        (t1, t2), (b0, b3) = ports[j]
        (nt1, nt2), (nb0, nb3) = ports[(j + 1) % m]
        theta[t1], theta[nt2] = nt2, t1
        theta[b0], theta[nb3] = nb3, b0
    return _finish(theta, n)


def rational(p: int, q: int) -> Diagram:
    """The standard alternating diagram of the two-bridge knot with fraction
    p/q: the positive continued-fraction expansion laid out as twist regions,
    alternately horizontal and vertical, closed across the top and the
    bottom.  Fractions p/q and p/q' give the same knot exactly when q' = q
    or q*q' = 1 modulo p."""
    if not 0 < q < p or math.gcd(p, q) != 1:
        raise ValueError("a two-bridge fraction needs 0 < q < p coprime")
    if p % 2 == 0:
        raise ValueError("even fractions close up to two-component links")
    parts = []
    a, b = p, q
    while b:
        parts.append(a // b)
        a, b = b, a % b
    # The greedy expansion ends with a part >= 2, so when an even number of
    # regions would make the last one vertical (its closure arc would just
    # cancel a crossing), split that part as (a-1) + 1/1 to end horizontal.
    if len(parts) % 2 == 0:
        parts[-1] -= 1
        parts.append(1)
    n = sum(parts)
    theta = [0] * (4 * n)

    def join(h, g):
        theta[h], theta[g] = g, h

    # Compass slots of a crossing, counterclockwise: NW=0, SW=1, SE=2, NE=3.
    nw, sw, se, ne = 0, 1, 2, 3
    c = 1
    for region, size in enumerate(parts):
        horizontal = region % 2 == 0
        for i in range(size):
            if region == 0 and i == 0:
                continue  # crossing 0 seeds the ports
            if horizontal:
                join(4 * c + 0, ne)
                join(4 * c + 1, se)
                ne, se = 4 * c + 3, 4 * c + 2
            else:
                join(4 * c + 0, sw)
                join(4 * c + 3, se)
                sw, se = 4 * c + 1, 4 * c + 2
            c += 1
    join(nw, ne)
    join(sw, se)
    d = _finish(theta, n)
    if not d.is_knot():
        raise ValueError("fraction does not close to a knot")
    return d


def inflate(d: Diagram, v: int, k: int) -> Diagram:
    """Replace crossing ``v`` by a twist chain of ``k`` crossings (``v``
    keeps its index and becomes the top bead; new beads are appended).  Odd
    ``k`` preserves how the strands pair up around the site, even ``k``
    swaps one pair."""
    if d.caps:
        raise ValueError("inflation is defined for cap-free diagrams")
    if k == 1:
        return d
    n = d.n
    theta = list(d.theta) + [0] * (4 * (k - 1))
    p0, p3 = theta[4 * v + 0], theta[4 * v + 3]
    order = [v] + list(range(n, n + k - 1))
    for i in range(k - 1):
        a, b = order[i], order[i + 1]
        theta[4 * a + 0], theta[4 * b + 1] = 4 * b + 1, 4 * a + 0
        theta[4 * a + 3], theta[4 * b + 2] = 4 * b + 2, 4 * a + 3
    last = order[-1]
    theta[4 * last + 0], theta[p0] = p0, 4 * last + 0
    theta[4 * last + 3], theta[p3] = p3, 4 * last + 3
    return _finish(theta, n + k - 1)


def vertex_sum(d1: Diagram, v1: int, d2: Diagram, v2: int,
               twist: int = 0) -> Diagram:
    """Join two diagrams by deleting one crossing from each and splicing the
    four loose strand ends, counterclockwise ends of one to clockwise ends
    of the other (``twist`` rotates the matching).  The circle along the
    splice crosses the diagram in four points, so each summand becomes a
    one-boundary-circle piece of the result."""
    n1, n2 = d1.n, d2.n
    if d1.caps or d2.caps:
        raise ValueError("vertex sums are defined for cap-free diagrams")
    theta = [0] * (4 * (n1 + n2 - 2))

    def embed(d, skip, base):
        vmap = {}
        for v in range(d.n):
            if v != skip:
                vmap[v] = base + len(vmap)
        for h in range(d.num_darts):
            t = d.theta[h]
            if h >> 2 == skip or t >> 2 == skip:
                continue
            theta[4 * vmap[h >> 2] + (h & 3)] = 4 * vmap[t >> 2] + (t & 3)
        stubs = []
        for s in range(4):
            p = d.theta[4 * skip + s]
            stubs.append(4 * vmap[p >> 2] + (p & 3))
        return stubs

    p = embed(d1, v1, 0)
    q = embed(d2, v2, n1 - 1)
    for s in range(4):
        a, b = p[s], q[(twist - s) % 4]
        theta[a], theta[b] = b, a
    return _finish(theta, n1 + n2 - 2)


def _from_rotations(rot: dict) -> Diagram:
    """Diagram from a vertex -> counterclockwise neighbor list table of a
    simple 4-regular planar graph."""
    names = sorted(rot)
    idx = {v: i for i, v in enumerate(names)}
    theta = [None] * (4 * len(names))
    for v, nbrs in rot.items():
        if len(nbrs) != 4:
            raise ValueError(f"vertex {v!r} is not 4-valent")
        for s, w in enumerate(nbrs):
            h = 4 * idx[v] + s
            if theta[h] is None:
                t = 4 * idx[w] + rot[w].index(v)
                theta[h], theta[t] = t, h
    return _finish(theta, len(names))


def octahedron() -> Diagram:
    """The six-crossing alternating diagram on the octahedral graph, the
    smallest jewel (a three-component link)."""
    return _from_rotations({
        "A": ["C", "z", "y", "B"], "B": ["A", "y", "x", "C"],
        "C": ["B", "x", "z", "A"], "x": ["C", "B", "y", "z"],
        "y": ["x", "B", "A", "z"], "z": ["C", "x", "y", "A"],
    })


def square_antiprism() -> Diagram:
    """The eight-crossing alternating diagram on the square antiprism graph,
    the next jewel after the octahedron."""
    rot = {}
    for i in range(4):
        rot[f"t{i}"] = [f"t{(i + 1) % 4}", f"b{i}", f"b{(i - 1) % 4}",
                        f"t{(i - 1) % 4}"]
        rot[f"b{i}"] = [f"b{(i + 1) % 4}", f"b{(i - 1) % 4}", f"t{i}",
                        f"t{(i + 1) % 4}"]
    return _from_rotations(rot)
