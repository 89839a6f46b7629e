"""Edge-coloured ribbon graphs for CDT: validity, strips, Euler characteristic, topology.

A graph is stored as half-edge arrays: ``pair`` (edge involution), ``next``
(rotation at the vertex), ``color`` ('s' spacelike / 't' timelike) and ``flip``
(1 on twisted edges). Internally everything is computed on flags (h, side):

    s1: (h, s) <-> (h, 1-s)                      same vertex, same edge, other face side
    s2: (h, 1) <-> (next h, 0)                   same vertex, same face, other edge
    s0: (h, s) <-> (pair h, 1-s), or (pair h, s) if the edge is twisted

Vertices are <s1,s2>-orbits, edges <s0,s1>-orbits, faces <s0,s2>-orbits.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence


class TopologyClass(str, Enum):
    SPHERE = "Sphere"
    TORUS = "Torus"
    PROJECTIVE_PLANE = "ProjectivePlane"
    KLEIN_BOTTLE = "KleinBottle"


class StripKind(str, Enum):
    REGULAR = "Regular"
    SINGULAR = "Singular"
    MOEBIUS = "Moebius"


class InvalidGraph(ValueError):
    pass


def _orbits(n: int, gens: Sequence[list[int]]) -> list[list[int]]:
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        orbit, stack = [], [s]
        seen[s] = True
        while stack:
            x = stack.pop()
            orbit.append(x)
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        out.append(sorted(orbit))
    return out


@dataclass(frozen=True)
class RibbonGraph:
    pair: tuple[int, ...]
    next: tuple[int, ...]
    color: tuple[str, ...]
    flip: tuple[int, ...]

    def __post_init__(self):
        n = len(self.pair)
        if not (len(self.next) == len(self.color) == len(self.flip) == n):
            raise InvalidGraph("half-edge arrays have different lengths")
        for h in range(n):
            p = self.pair[h]
            if not 0 <= p < n or p == h or self.pair[p] != h:
                raise InvalidGraph(f"pair is not a fixed-point-free involution at half-edge {h}")
            if self.color[h] not in ("s", "t") or self.color[p] != self.color[h]:
                raise InvalidGraph(f"bad or inconsistent colour on half-edge {h}")
            if self.flip[h] not in (0, 1) or self.flip[p] != self.flip[h]:
                raise InvalidGraph(f"bad or inconsistent flip on half-edge {h}")
        if sorted(self.next) != list(range(n)):
            raise InvalidGraph("next is not a permutation")

    # --- flags ---
    @property
    def n_half_edges(self) -> int:
        return len(self.pair)

    @cached_property
    def _sigma(self) -> tuple[list[int], list[int], list[int]]:
        n = self.n_half_edges
        f = lambda h, s: 2 * h + s
        s0, s1, s2 = [0] * (2 * n), [0] * (2 * n), [0] * (2 * n)
        for h in range(n):
            for s in (0, 1):
                s1[f(h, s)] = f(h, 1 - s)
                p = self.pair[h]
                s0[f(h, s)] = f(p, s if self.flip[h] else 1 - s)
            s2[f(h, 1)] = f(self.next[h], 0)
            s2[f(self.next[h], 0)] = f(h, 1)
        return s0, s1, s2

    def flag_color(self, x: int) -> str:
        return self.color[x // 2]

    @cached_property
    def vertices(self) -> list[list[int]]:
        """Half-edge cycles of the rotation."""
        seen, out = set(), []
        for h in range(self.n_half_edges):
            if h in seen:
                continue
            cyc, x = [], h
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.next[x]
            out.append(cyc)
        return out

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(h, self.pair[h]) for h in range(self.n_half_edges) if h < self.pair[h]]

    @cached_property
    def faces(self) -> list[list[int]]:
        s0, _, s2 = self._sigma
        return _orbits(2 * self.n_half_edges, [s0, s2])

    @cached_property
    def face_of_flag(self) -> list[int]:
        out = [0] * (2 * self.n_half_edges)
        for i, fc in enumerate(self.faces):
            for x in fc:
                out[x] = i
        return out

    def face_timelike_count(self, i: int) -> int:
        # each edge side contributes two flags to the face
        return sum(1 for x in self.faces[i] if self.flag_color(x) == "t") // 2

    def is_connected(self) -> bool:
        return len(_orbits(2 * self.n_half_edges, list(self._sigma))) <= 1

    def is_orientable(self) -> bool:
        """The flag graph is bipartite."""
        gens = self._sigma
        n = 2 * self.n_half_edges
        side = [-1] * n
        for s in range(n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                x = stack.pop()
                for g in gens:
                    y = g[x]
                    if side[y] < 0:
                        side[y] = 1 - side[x]
                        stack.append(y)
                    elif side[y] == side[x]:
                        return False
        return True

    def counts(self) -> dict[str, int]:
        e_s = sum(1 for h, _ in self.edges if self.color[h] == "s")
        return {"V": len(self.vertices), "E": len(self.edges), "F": len(self.faces),
                "E_spacelike": e_s, "E_timelike": len(self.edges) - e_s}

    # --- serialisation ---
    def to_dict(self) -> dict:
        return {"pair": list(self.pair), "next": list(self.next),
                "color": list(self.color), "flip": list(self.flip)}

    @classmethod
    def from_dict(cls, d: dict) -> "RibbonGraph":
        try:
            return cls(tuple(d["pair"]), tuple(d["next"]), tuple(d["color"]), tuple(d["flip"]))
        except KeyError as exc:
            raise InvalidGraph(f"missing field {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RibbonGraph":
        return cls.from_dict(json.loads(text))


# --- validity ---------------------------------------------------------------------

@dataclass
class Violation:
    rule: str
    where: str
    index: int
    detail: str


@dataclass
class ValidityReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"valid": self.valid,
                "violations": [v.__dict__ for v in self.violations]}


def validate_cdt(g: RibbonGraph) -> ValidityReport:
    rep = ValidityReport()
    for i, cyc in enumerate(g.vertices):
        nt = sum(1 for h in cyc if g.color[h] == "t")
        if len(cyc) != 3 or nt != 1:
            rep.violations.append(Violation("vertex", "vertex", i,
                                            f"degree {len(cyc)} with {nt} timelike edges"))
    for i in range(len(g.faces)):
        nt = g.face_timelike_count(i)
        if nt not in (0, 2):
            rep.violations.append(Violation("face", "face", i, f"{nt} timelike edges"))
    if not g.is_connected():
        rep.violations.append(Violation("connected", "graph", 0, "graph is disconnected"))
    return rep


def _require_valid(g: RibbonGraph) -> None:
    rep = validate_cdt(g)
    if not rep.valid:
        v = rep.violations[0]
        raise InvalidGraph(f"not a valid CDT graph: {v.rule} rule at {v.where} {v.index} ({v.detail})")


# --- strips -------------------------------------------------------------------------

@dataclass(frozen=True)
class Strip:
    faces: tuple[int, ...]
    kind: StripKind
    boundaries: int


def _boundary_orbits(g: RibbonGraph) -> list[frozenset[int]]:
    """Boundary walks along spacelike edge sides, crossing timelike edges at vertices."""
    s0, s1, s2 = g._sigma
    n = 2 * g.n_half_edges

    def T(x: int) -> int:
        z = s2[s0[x]]
        for _ in range(4):
            if g.flag_color(z) == "s":
                return z
            z = s2[s1[z]]
        raise InvalidGraph("boundary walk did not reach a spacelike edge")

    seen = set()
    orbits = []
    for x in range(n):
        if g.flag_color(x) != "s" or x in seen:
            continue
        orb, y = [], x
        while y not in seen:
            seen.add(y)
            orb.append(y)
            y = T(y)
        orbits.append(frozenset(orb))
    # a walk and its reverse are the same boundary
    index = {x: i for i, o in enumerate(orbits) for x in o}
    parent = list(range(len(orbits)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, o in enumerate(orbits):
        j = index[s0[next(iter(o))]]
        parent[find(i)] = find(j)
    groups: dict[int, set] = {}
    for i, o in enumerate(orbits):
        groups.setdefault(find(i), set()).update(o)
    return [frozenset(v) for _, v in sorted(groups.items())]


def strip_decomposition(g: RibbonGraph) -> list[Strip]:
    _require_valid(g)
    _, s1, _ = g._sigma
    nf = len(g.faces)
    parent = list(range(nf))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    fof = g.face_of_flag
    for x in range(2 * g.n_half_edges):
        if g.flag_color(x) == "t":
            parent[find(fof[x])] = find(fof[s1[x]])
    comps: dict[int, list[int]] = {}
    for f in range(nf):
        comps.setdefault(find(f), []).append(f)
    bcount = Counter()
    for b in _boundary_orbits(g):
        for r in {find(fof[x]) for x in b}:
            bcount[r] += 1
    strips = []
    for root, fs in sorted(comps.items(), key=lambda kv: kv[1][0]):
        nb = bcount[root]
        if len(fs) == 1 and g.face_timelike_count(fs[0]) == 0:
            kind = StripKind.SINGULAR
        elif nb == 2:
            kind = StripKind.REGULAR
        elif nb == 1:
            kind = StripKind.MOEBIUS
        else:
            raise InvalidGraph(f"strip with {nb} boundaries")
        strips.append(Strip(tuple(fs), kind, nb))
    return strips


def spacelike_circles(g: RibbonGraph) -> list[list[int]]:
    """Cycles of spacelike edges (as sorted half-edge id lists of each edge's lower half)."""
    e_of = {}
    for h, p in g.edges:
        e_of[h] = e_of[p] = h
    vert = {}
    for i, cyc in enumerate(g.vertices):
        for h in cyc:
            vert[h] = i
    adj: dict[int, list[int]] = {}
    for h, p in g.edges:
        if g.color[h] == "s":
            adj.setdefault(vert[h], []).append(h)
            adj.setdefault(vert[p], []).append(h)
    seen, out = set(), []
    for h, p in g.edges:
        if g.color[h] != "s" or h in seen:
            continue
        comp, stack = [], [h]
        seen.add(h)
        while stack:
            e = stack.pop()
            comp.append(e)
            for v in (vert[e], vert[g.pair[e]]):
                for e2 in adj[v]:
                    if e2 not in seen:
                        seen.add(e2)
                        stack.append(e2)
        out.append(sorted(comp))
    return out


def circle_strip_incidence(g: RibbonGraph) -> list[int]:
    """Number of distinct strips bordering each spacelike circle."""
    strips = strip_decomposition(g)
    strip_of_face = {f: i for i, s in enumerate(strips) for f in s.faces}
    fof = g.face_of_flag
    out = []
    for circ in spacelike_circles(g):
        touched = {strip_of_face[fof[2 * h + s]] for e in circ for h in (e, g.pair[e]) for s in (0, 1)}
        out.append(len(touched))
    return out


def euler_characteristic(g: RibbonGraph) -> int:
    _require_valid(g)
    c = g.counts()
    return c["V"] - c["E"] + c["F"]


def boundary_euler(g: RibbonGraph) -> int:
    c = g.counts()
    return c["V"] - c["E_spacelike"]


def classify_topology(g: RibbonGraph) -> TopologyClass:
    strips = strip_decomposition(g)
    ns = sum(1 for s in strips if s.kind == StripKind.SINGULAR)
    chi = euler_characteristic(g)
    if chi != ns:
        raise InvalidGraph(f"Euler characteristic {chi} differs from singular strip count {ns}")
    if ns == 2:
        return TopologyClass.SPHERE
    if ns == 1:
        return TopologyClass.PROJECTIVE_PLANE
    if ns == 0:
        return TopologyClass.TORUS if g.is_orientable() else TopologyClass.KLEIN_BOTTLE
    raise InvalidGraph(f"{ns} singular strips cannot occur in a CDT graph")


# --- construction from a polygon schema ---------------------------------------------------

Side = tuple[object, int]          # (edge label, +1/-1)


def from_polygons(faces: Sequence[Sequence[Side]], timelike: Iterable = ()) -> RibbonGraph:
    """Glue polygons along labelled sides; each label must occur exactly twice.

    Labels whose first component is 's' are spacelike, all others timelike,
    unless listed in ``timelike``.
    """
    tl = set(timelike)
    flags = []                    # (face, side, end)
    idx = {}
    for fi, fc in enumerate(faces):
        for si in range(len(fc)):
            for e in (0, 1):
                idx[(fi, si, e)] = len(flags)
                flags.append((fi, si, e))
    n = len(flags)
    s0, s1, s2 = [0] * n, [0] * n, [0] * n
    occ: dict[object, list[tuple[int, int]]] = {}
    for fi, fc in enumerate(faces):
        L = len(fc)
        for si, (lab, d) in enumerate(fc):
            if d not in (1, -1):
                raise InvalidGraph("side direction must be +1 or -1")
            occ.setdefault(lab, []).append((fi, si))
            s0[idx[(fi, si, 0)]] = idx[(fi, si, 1)]
            s0[idx[(fi, si, 1)]] = idx[(fi, si, 0)]
            s2[idx[(fi, si, 1)]] = idx[(fi, (si + 1) % L, 0)]
            s2[idx[(fi, (si + 1) % L, 0)]] = idx[(fi, si, 1)]
    color_of = {}
    for lab, os in occ.items():
        if len(os) != 2:
            raise InvalidGraph(f"edge {lab!r} occurs {len(os)} times")
        (fa, sa), (fb, sb) = os
        da, db = faces[fa][sa][1], faces[fb][sb][1]
        for e in (0, 1):
            end = e if da == 1 else 1 - e          # 0 tail, 1 head
            eb = end if db == 1 else 1 - end
            x, y = idx[(fa, sa, e)], idx[(fb, sb, eb)]
            s1[x], s1[y] = y, x
        is_t = lab in tl or not (isinstance(lab, tuple) and lab and lab[0] == "s")
        color_of[lab] = "t" if is_t else "s"
    flag_color = [color_of[faces[f][s][0]] for f, s, _ in flags]
    return _flags_to_half_edges(n, s0, s1, s2, flag_color)


def _flags_to_half_edges(n, s0, s1, s2, flag_color) -> RibbonGraph:
    seen = [False] * n
    hid = {}                     # flag -> half-edge id
    canon = []                   # half-edge -> canonical flag (side 1)
    nxt = []
    for start in range(n):
        if seen[start]:
            continue
        # walk the vertex: c(h_{k+1}) = s1 s2 c(h_k)
        cyc, x = [], start
        while True:
            cyc.append(x)
            seen[x] = seen[s1[x]] = True
            x = s1[s2[x]]
            if x == start:
                break
            if seen[x]:
                raise InvalidGraph("flag system is not a surface")
        base = len(canon)
        for k, c in enumerate(cyc):
            hid[c] = hid[s1[c]] = base + k
            canon.append(c)
            nxt.append(base + (k + 1) % len(cyc))
    m = len(canon)
    pair, flip, color = [0] * m, [0] * m, [""] * m
    for h, c in enumerate(canon):
        y = s0[c]
        p = hid[y]
        pair[h] = p
        if y == canon[p]:
            flip[h] = 1
        elif y != s1[canon[p]]:
            raise InvalidGraph("inconsistent edge gluing")
        color[h] = flag_color[c]
    return RibbonGraph(tuple(pair), tuple(nxt), tuple(color), tuple(flip))


# --- layered builders ---------------------------------------------------------------------

class _View:
    """A walk around a spacelike circle: normal, reversed, or doubled (cross-cap)."""

    def __init__(self, circle: int, n: int, mode: str = "normal"):
        self.circle, self.n, self.mode = circle, n, mode
        self.length = 2 * n if mode == "double" else n

    def edge(self, p: int) -> Side:
        p %= self.length
        if self.mode == "reversed":
            return ("s", self.circle, (-p - 1) % self.n), -1
        return ("s", self.circle, p % self.n), 1

    def to_view(self, q: int) -> int:
        """View position of circle vertex q (first occurrence for doubled views)."""
        return (-q) % self.n if self.mode == "reversed" else q


def _run(view: _View, a: int, b: int, forward: bool, full: bool) -> list[Side]:
    """Sides from view position a to b (forward) or b down to a (backward)."""
    L = view.length
    steps = L if full else (b - a) % L
    ps = [(a + t) % L for t in range(steps)]
    if forward:
        return [view.edge(p) for p in ps]
    return [(view.edge(p)[0], -view.edge(p)[1]) for p in reversed(ps)]


def _regular_faces(j, bottom: _View, ups: list[int], top: _View, downs: list[int], off: int) -> list[list[Side]]:
    k = len(ups)
    if k < 1 or len(downs) != k:
        raise ValueError("a regular strip needs at least one rung and matching ends")
    ups, downs = sorted(ups), sorted(downs)
    faces = []
    for r in range(k):
        r1 = (r + 1) % k
        a, a1 = ups[r], ups[r1]
        b, b1 = downs[(r + off) % k], downs[(r1 + off) % k]
        face = _run(bottom, a, a1, True, k == 1)
        face.append((("t", j, r1), 1))
        face += _run(top, b, b1, False, k == 1)
        face.append((("t", j, r), -1))
        faces.append(face)
    return faces


def _moebius_faces(name, view: _View, P: list[int]) -> list[list[Side]]:
    M = view.length // 2
    d = sorted(P)
    k = len(d)
    if k < 1 or view.length % 2 or any(not 0 <= x < M for x in d):
        raise ValueError("bad Moebius rung set")
    faces = []
    for x in range(k - 1):
        face = _run(view, d[x], d[x + 1], True, False)
        face.append((("m", name, x + 1), 1))
        face += _run(view, d[x] + M, d[x + 1] + M, False, False)
        face.append((("m", name, x), -1))
        faces.append(face)
    # the face through the twist uses rung 0 against its orientation
    face = _run(view, d[k - 1], d[0] + M, True, False)
    face.append((("m", name, 0), -1))
    face += _run(view, d[k - 1] + M, d[0] + 2 * M, False, False)
    face.append((("m", name, k - 1), -1))
    faces.append(face)
    return faces


def _singular_face(view: _View, top: bool) -> list[Side]:
    return _run(view, 0, 0, top, True)


CAPS = ("singular", "moebius", "crosscap")


def _split(n: int, k_down: int, rng) -> tuple[list[int], list[int]]:
    pos = list(range(n))
    if rng is None:
        downs = pos[:k_down]
    else:
        downs = sorted(rng.sample(pos, k_down))
    ds = set(downs)
    return downs, [p for p in pos if p not in ds]


def _half_choice(M: int, rng) -> list[int]:
    """One of p, p+M for each p < M."""
    if rng is None:
        return list(range(M))
    return sorted(p + M * rng.randrange(2) for p in range(M))


def build_layers(ks: Sequence[int], bottom: str | None = "singular", top: str | None = "singular",
                 periodic: str | None = None, moebius_rungs: Sequence[int] = (1, 1),
                 rng: random.Random | None = None) -> RibbonGraph:
    """Stack of regular strips with rung counts ``ks`` between caps, or a periodic stack.

    periodic: None, 'shift' (orientation compatible) or 'reflect' (incompatible).
    """
    ks = [int(k) for k in ks]
    if any(k < 1 for k in ks):
        raise ValueError("strip sizes must be >= 1")
    L = len(ks)
    off = (lambda k: rng.randrange(k)) if rng is not None else (lambda k: 0)
    faces: list[list[Side]] = []
    if periodic is not None:
        if periodic not in ("shift", "reflect"):
            raise ValueError("periodic must be 'shift' or 'reflect'")
        if L < 1:
            raise ValueError("a periodic sequence needs at least one regular strip")
        split = [_split(ks[j - 1] + ks[j], ks[j - 1], rng) for j in range(L)]
        for j in range(L):
            jn = (j + 1) % L
            nb, nt = ks[j - 1] + ks[j], ks[j] + ks[jn]
            bottom_v = _View(j, nb)
            top_v = _View(jn, nt, "reversed" if (periodic == "reflect" and jn == 0) else "normal")
            downs = [top_v.to_view(q) for q in split[jn][0]]
            faces += _regular_faces(j, bottom_v, split[j][1], top_v, downs, off(ks[j]))
        return from_polygons(faces)

    if bottom not in CAPS or top not in CAPS:
        raise ValueError(f"caps must be among {CAPS}")
    if L == 0:
        return _no_regular(bottom, top, moebius_rungs, rng)

    # circle j sits below strip j; circle L is the top one
    views_up: list[tuple[_View, list[int]]] = []
    views_down: list[tuple[_View, list[int]]] = [(None, [])]
    m_bot, m_top = moebius_rungs
    for j in range(L + 1):
        k_below = ks[j - 1] if j > 0 else None
        k_above = ks[j] if j < L else None
        if 0 < j < L:
            downs, ups = _split(k_below + k_above, k_below, rng)
            v = _View(j, k_below + k_above)
            views_up.append((v, ups))
            views_down.append((v, downs))
            continue
        cap = bottom if j == 0 else top
        k_adj = k_above if j == 0 else k_below
        if cap == "singular":
            v = _View(j, k_adj)
            ends = list(range(k_adj))
            faces.append(_singular_face(v, top=(j == L)))
        elif cap == "moebius":
            if k_adj % 2:
                raise ValueError("a strip glued to a Moebius strip needs an even number of rungs")
            m = m_bot if j == 0 else m_top
            M = k_adj // 2 + m
            Q, P = _split(M, k_adj // 2, rng)
            v = _View(j, 2 * M)
            ends = sorted(Q + [q + M for q in Q])
            faces += _moebius_faces(j, v, P)
        else:
            v = _View(j, k_adj, "double")
            ends = _half_choice(k_adj, rng)
        if j == 0:
            views_up.append((v, ends))
        else:
            views_down.append((v, ends))
    for j in range(L):
        bv, ups = views_up[j]
        tv, downs = views_down[j + 1]
        faces += _regular_faces(j, bv, ups, tv, downs, off(ks[j]))
    return from_polygons(faces)


def _no_regular(bottom: str, top: str, moebius_rungs, rng) -> RibbonGraph:
    caps = sorted([bottom, top])
    if caps == ["moebius", "singular"]:
        M = max(moebius_rungs)
        v = _View(0, 2 * M)
        return from_polygons([_singular_face(v, top=False)] + _moebius_faces(0, v, list(range(M))))
    if caps == ["moebius", "moebius"]:
        m1, m2 = moebius_rungs
        M = m1 + m2
        P1, P2 = _split(M, m1, rng)
        v = _View(0, 2 * M)
        return from_polygons(_moebius_faces("a", v, P1) + _moebius_faces("b", v, P2))
    raise ValueError(f"caps {bottom}+{top} cannot be glued without regular strips: "
                     "their common circle would have vertices without a timelike edge")


def build_sphere(sizes: Sequence[int], rng=None) -> RibbonGraph:
    if not sizes:
        raise ValueError("a sphere needs at least one regular strip: two glued singular "
                         "faces leave every vertex without a timelike edge")
    return build_layers(sizes, "singular", "singular", rng=rng)


def build_torus(sizes: Sequence[int], rng=None) -> RibbonGraph:
    return build_layers(sizes, periodic="shift", rng=rng)


def build_projective(sizes: Sequence[int], variant: str = "i", moebius_rungs: int = 1, rng=None) -> RibbonGraph:
    if variant == "i":
        return build_layers(sizes, "singular", "moebius", moebius_rungs=(1, moebius_rungs), rng=rng)
    if variant == "ii":
        return build_layers(sizes, "singular", "crosscap", rng=rng)
    raise ValueError("projective variants are 'i' (Moebius) and 'ii' (cross-cap)")


def build_klein(sizes: Sequence[int], variant: str = "i", moebius_rungs: Sequence[int] = (1, 1),
                rng=None) -> RibbonGraph:
    caps = {"i": ("moebius", "moebius"), "ii": ("moebius", "crosscap"), "iii": ("crosscap", "crosscap")}
    if variant == "iv":
        return build_layers(sizes, periodic="reflect", rng=rng)
    if variant not in caps:
        raise ValueError("klein variants are 'i', 'ii', 'iii', 'iv'")
    b, t = caps[variant]
    return build_layers(sizes, b, t, moebius_rungs=tuple(moebius_rungs), rng=rng)


BUILDERS = {
    "sphere": (build_sphere, None),
    "torus": (build_torus, None),
    "projective": (build_projective, ("i", "ii")),
    "klein": (build_klein, ("i", "ii", "iii", "iv")),
}

FAMILIES = [("sphere", None), ("torus", None), ("projective", "i"), ("projective", "ii"),
            ("klein", "i"), ("klein", "ii"), ("klein", "iii"), ("klein", "iv")]

EXPECTED = {"sphere": TopologyClass.SPHERE, "torus": TopologyClass.TORUS,
            "projective": TopologyClass.PROJECTIVE_PLANE, "klein": TopologyClass.KLEIN_BOTTLE}


def build(topology: str, sizes: Sequence[int], variant: str | None = None, rng=None) -> RibbonGraph:
    if topology not in BUILDERS:
        raise ValueError(f"unknown topology {topology!r}")
    fn, variants = BUILDERS[topology]
    if variants is None:
        return fn(sizes, rng=rng)
    return fn(sizes, variant=variant or "i", rng=rng)


@dataclass(frozen=True)
class RandomGraph:
    graph: RibbonGraph
    family: str
    variant: str | None
    sizes: tuple[int, ...]


def random_cdt_graph(seed: int, max_strips: int = 4, max_size: int = 4) -> RandomGraph:
    """Deterministic per seed: random family, strip sizes, rung splits and offsets."""
    if max_strips < 1 or max_size < 1:
        raise ValueError("bounds must be >= 1")
    rng = random.Random(seed)
    family, variant = FAMILIES[rng.randrange(len(FAMILIES))]
    caps = {("projective", "i"): ("singular", "moebius"), ("projective", "ii"): ("singular", "crosscap"),
            ("klein", "i"): ("moebius", "moebius"),
            ("klein", "ii"): ("moebius", "crosscap"), ("klein", "iii"): ("crosscap", "crosscap")}
    lo = 0 if (family, variant) in (("projective", "i"), ("klein", "i")) else 1
    L = rng.randint(lo, max_strips)
    sizes = [rng.randint(1, max_size) for _ in range(L)]
    cap = caps.get((family, variant), ())
    if L and cap and cap[0] == "moebius":
        sizes[0] += sizes[0] % 2
    if L and cap and cap[1] == "moebius":
        sizes[-1] += sizes[-1] % 2
    mr = (rng.randint(1, 3), rng.randint(1, 3))
    if family == "sphere":
        g = build_layers(sizes, "singular", "singular", rng=rng)
    elif family == "torus":
        g = build_layers(sizes, periodic="shift", rng=rng)
    elif (family, variant) == ("klein", "iv"):
        g = build_layers(sizes, periodic="reflect", rng=rng)
    else:
        g = build_layers(sizes, cap[0], cap[1], moebius_rungs=mr, rng=rng)
    return RandomGraph(g, family, variant, tuple(sizes))


def graph_summary(g: RibbonGraph) -> dict:
    strips = strip_decomposition(g)
    return {
        **g.counts(),
        "chi": euler_characteristic(g),
        "chi_B": boundary_euler(g),
        "orientable": g.is_orientable(),
        "strips": dict(Counter(s.kind.value for s in strips)),
        "topology": classify_topology(g).value,
    }
