"""Component decomposition and topological type of simple multicurves.

Torus classes split as gcd copies of a primitive class; the type of a torus
multicurve is just that weight.  The genus-2 machinery is the real content:
a Dehn-Thurston coordinate (m, t) is realized as an explicit taut curve
diagram on a cell decomposition of the surface, components are traced, and
the surface is cut along the curve to read off the topological type.

The cell structure: each pair of pants is two hexagons (front and back)
glued along three seams; all arc endpoints sit in the front windows.  Arcs
between distinct boundaries are front-hexagon chords; a self arc (present
when one boundary weight exceeds the sum of the others) crosses the two
seams not adjacent to its boundary, with a connecting chord in the back
hexagon.  The two pants are joined along each curve c_i by an annulus whose
m_i strands realize the twist: strand k enters at slot k and leaves at slot
(k + t_i) mod m_i (in positions counted against the far pants' boundary
orientation, making the gluing orientation-reversing), winding
floor((k + t_i) / m_i) times around the annulus.  Windings sum to t_i, so
per-component twist coordinates add up to the input exactly.

All faces are disks, so cutting along the curve is combinatorial: pieces
are unions of faces glued across non-curve edges, Euler characteristic is
V - E + F after duplicating cells along the cut, and boundary circles are
traced along curve-edge sides.  An annulus piece whose two boundary
circles come from different components certifies those components isotopic
(parallel copies); collapsing such pieces yields the weighted component
classes and the decorated cut graph: vertices are complementary pieces
with (genus, boundary count), edges are curve classes with weights,
canonicalized by minimizing over vertex relabelings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .coords import DTCoord, TorusCoord, validate_dt
from .errors import TracingError
from .surfaces import SurfaceModel

# front hexagon sides, counterclockwise
_F_SIDES = ("win1", "e12", "win2", "e23", "win3", "e31")

# corner(i, j) is the endpoint of seam e_ij on boundary i; front window
# win_i runs from corner(i, PREV[i]) to corner(i, NEXT[i])
_PREV = {1: 3, 2: 1, 3: 2}
_NEXT = {1: 2, 2: 3, 3: 1}
_SEAM_ENDS = {"e12": (1, 2), "e23": (2, 3), "e31": (3, 1)}


@dataclass(frozen=True)
class ComponentDecomposition:
    """Primitive components with multiplicities; weighted sum is the input."""

    components: tuple  # ((coordinate, multiplicity), ...)


@dataclass(frozen=True, order=True)
class TypeKey:
    """Canonical mapping-class-group orbit invariant of a multicurve.

    The ``text`` is the stable serialization and the identity of the key:
    ``d=<weight>`` on the torus, and on genus 2 the decorated cut graph as
    ``pieces[(g<genus>,b<boundaries>),...]|edges[<i>-<j>:w<weight>,...]``
    with pieces and edges in canonical (relabeling-minimized) order.  The
    structured ``pieces``/``edges`` fields are redundant decorations and do
    not participate in comparison, so a key built from its text alone looks
    up histogram entries correctly.
    """

    model_name: str
    text: str
    pieces: tuple = field(default=(), compare=False)
    edges: tuple = field(default=(), compare=False)

    def __str__(self) -> str:
        return self.text

    def describe(self) -> str:
        """Coarse label; the two weight-1 single-curve shapes get names."""
        if self.model_name == "torus-1-1":
            return self.text
        if len(self.edges) == 1 and self.edges[0][2] == 1:
            if len(self.pieces) == 1:
                return "nonseparating-scc"
            if len(self.pieces) == 2:
                return "separating-scc"
        return self.text


def decompose_torus(coord: TorusCoord) -> ComponentDecomposition:
    """gcd copies of the primitive class."""
    d = coord.weight()
    return ComponentDecomposition(components=((coord.primitive(), d),))


def _arc_system(w1: int, w2: int, w3: int):
    """Arc multiplicities in a pants with boundary weights (w1, w2, w3).

    Returns (cross, self_index, x_self): cross maps index pairs {i, j} to
    arc counts, self_index is the boundary carrying self arcs (or None).
    """
    w = {1: w1, 2: w2, 3: w3}
    if (w1 + w2 + w3) % 2 != 0:
        raise TracingError("internal tracing inconsistency: odd boundary weight sum")
    for i in (1, 2, 3):
        j, k = [x for x in (1, 2, 3) if x != i]
        if w[i] > w[j] + w[k]:
            cross = {frozenset((i, j)): w[j], frozenset((i, k)): w[k], frozenset((j, k)): 0}
            return cross, i, (w[i] - w[j] - w[k]) // 2
    cross = {}
    for i, j, k in ((1, 2, 3), (1, 3, 2), (2, 3, 1)):
        cross[frozenset((i, j))] = (w[i] + w[j] - w[k]) // 2
    return cross, None, 0


def _self_seams(i: int):
    """Seams crossed by the self arc at boundary i, in traversal order.

    The arc leaves through the seam opposite boundary i, crosses the back
    hexagon around the next boundary's back window, and returns through the
    seam adjacent to both.
    """
    opposite = {1: "e23", 2: "e31", 3: "e12"}[i]
    wrap = {1: "e12", 2: "e23", 3: "e31"}[i]
    return opposite, wrap


def _window_layouts(cross, self_i, x_self, m):
    """Block sequence (family_id, count) along each front window.

    Chord families between hexagon sides nest without crossings when the
    blocks on each window are ordered by decreasing counterclockwise
    distance to the family's other side.
    """
    side_pos = {name: k for k, name in enumerate(_F_SIDES)}
    layouts = {}
    for i in (1, 2, 3):
        win = f"win{i}"
        entries = []
        for pair, count in cross.items():
            if i in pair and count > 0:
                j = next(x for x in pair if x != i)
                entries.append((("x", min(i, j), max(i, j)), f"win{j}", count))
        if self_i == i and x_self > 0:
            first, second = _self_seams(i)
            entries.append((("legsA", i), first, x_self))
            entries.append((("legsB", i), second, x_self))
        entries.sort(key=lambda e: (-((side_pos[e[1]] - side_pos[win]) % 6), str(e[0])))
        layouts[i] = [(fam, count) for fam, _side, count in entries]
    return layouts


class _Complex:
    """The glued cell complex of a genus-2 multicurve diagram."""

    def __init__(self, m, t):
        self.m = m
        self.t = t
        self.edges = []  # id -> dict(u, v, kind, curve)
        self._edge_lookup = {}
        self.faces = []  # tuples of directed edges (edge_id, forward)
        self.strand_winding = {}  # strand edge id -> (boundary index, winding)
        self._build()

    # -- edge plumbing -------------------------------------------------
    def add_edge(self, u, v, kind, curve=False, key=None):
        eid = len(self.edges)
        self.edges.append({"u": u, "v": v, "kind": kind, "curve": curve})
        if key is not None:
            self._edge_lookup[key] = eid
        return eid

    def lookup(self, key):
        return self._edge_lookup[key]

    def direct(self, eid, tail):
        e = self.edges[eid]
        if e["u"] == tail:
            return (eid, True)
        if e["v"] == tail:
            return (eid, False)
        raise TracingError("internal tracing inconsistency: bad edge direction")

    def head(self, de):
        e = self.edges[de[0]]
        return e["v"] if de[1] else e["u"]

    def tail(self, de):
        e = self.edges[de[0]]
        return e["u"] if de[1] else e["v"]

    # -- construction --------------------------------------------------
    def _build(self):
        cross, self_i, x_self = _arc_system(*self.m)
        layouts = _window_layouts(cross, self_i, x_self, self.m)
        for pants in (0, 1):
            self._build_pants(pants, self_i, x_self, layouts)
        for i in (1, 2, 3):
            self._build_annulus(i)
        self._check_closed()

    def _corner(self, pants, i, j):
        return ("corner", pants, i, j)

    def _build_pants(self, P, self_i, x_self, layouts):
        window_points = {
            i: [("slot", P, i, k) for k in range(self.m[i - 1])] for i in (1, 2, 3)
        }
        seam_points = {name: [] for name in ("e12", "e23", "e31")}
        if self_i is not None and x_self > 0:
            first, second = _self_seams(self_i)
            seam_points[first] = [("seamx", P, first, r) for r in range(x_self)]
            seam_points[second] = [("seamx", P, second, r) for r in range(x_self)]

        # ordered endpoint lists per family and hexagon side
        fam_sides = {}
        for i in (1, 2, 3):
            pos = 0
            for fam, count in layouts[i]:
                fam_sides.setdefault(fam, {})[f"win{i}"] = window_points[i][pos : pos + count]
                pos += count
            if pos != self.m[i - 1]:
                raise TracingError("internal tracing inconsistency: window layout mismatch")
        if self_i is not None and x_self > 0:
            first, second = _self_seams(self_i)
            fam_sides.setdefault(("legsA", self_i), {})[first] = list(seam_points[first])
            fam_sides.setdefault(("legsB", self_i), {})[second] = list(seam_points[second])

        f_chords = []
        for fam, sides in sorted(fam_sides.items(), key=lambda kv: str(kv[0])):
            names = sorted(sides.keys())
            if len(names) != 2:
                raise TracingError(f"internal tracing inconsistency: family {fam} sides {names}")
            A, B = sides[names[0]], sides[names[1]]
            if len(A) != len(B):
                raise TracingError("internal tracing inconsistency: family size mismatch")
            for r, a in enumerate(A):
                b = B[len(B) - 1 - r]
                f_chords.append((a, b, self.add_edge(a, b, "chord", curve=True)))

        k_chords = []
        if self_i is not None and x_self > 0:
            first, second = _self_seams(self_i)
            k_first = list(reversed(seam_points[first]))
            k_second = list(reversed(seam_points[second]))
            for r, a in enumerate(k_first):
                b = k_second[len(k_second) - 1 - r]
                k_chords.append((a, b, self.add_edge(a, b, "chord", curve=True)))

        self.faces.extend(
            _disk_faces(self, self._front_boundary(P, window_points, seam_points), f_chords)
        )
        self.faces.extend(_disk_faces(self, self._back_boundary(P, seam_points), k_chords))

    def _front_boundary(self, P, window_points, seam_points):
        seq = []
        for i, seam in ((1, "e12"), (2, "e23"), (3, "e31")):
            seq.append((self._corner(P, i, _PREV[i]), ("win", P, i)))
            for v in window_points[i]:
                seq.append((v, ("win", P, i)))
            a, b = _SEAM_ENDS[seam]
            seq.append((self._corner(P, a, b), ("seam", P, seam)))
            for v in seam_points[seam]:
                seq.append((v, ("seam", P, seam)))
        return seq

    def _back_boundary(self, P, seam_points):
        seq = [(self._corner(P, 1, 2), ("winb", P, 1))]
        for i, seam in ((1, "e31"), (3, "e23"), (2, "e12")):
            a, b = _SEAM_ENDS[seam]
            seq.append((self._corner(P, b, a), ("seam", P, seam)))
            for v in reversed(seam_points[seam]):
                seq.append((v, ("seam", P, seam)))
            nxt = {1: 3, 3: 2, 2: None}[i]
            if nxt is not None:
                seq.append((self._corner(P, nxt, _NEXT[nxt]), ("winb", P, nxt)))
        return seq

    def _circle_arc_backward(self, P, i, from_slot, to_slot, full=False):
        """Directed edges from one slot to another against the boundary
        orientation of pants P along curve c_i (through the corners and the
        back window when passing slot 0)."""
        mi = self.m[i - 1]
        A = self._corner(P, i, _PREV[i])
        B = self._corner(P, i, _NEXT[i])
        out = []
        cur = from_slot
        first = True
        while cur != to_slot or (full and first):
            first = False
            if cur == 0:
                out.append(self.direct(self.lookup(("win", P, i, 0)), ("slot", P, i, 0)))
                out.append(self.direct(self.lookup(("winb", P, i)), A))
                out.append(self.direct(self.lookup(("win", P, i, mi)), B))
                cur = mi - 1
            else:
                out.append(self.direct(self.lookup(("win", P, i, cur)), ("slot", P, i, cur)))
                cur -= 1
        return out

    def _build_annulus(self, i):
        mi = self.m[i - 1]
        ti = self.t[i - 1]
        if mi == 0:
            A0, B0 = self._corner(0, i, _PREV[i]), self._corner(0, i, _NEXT[i])
            A1, B1 = self._corner(1, i, _PREV[i]), self._corner(1, i, _NEXT[i])
            rung = self.add_edge(A0, A1, "rung")
            if ti > 0:
                # the component is t_i parallel copies of c_i itself,
                # realized as the pants-0 boundary circle
                for key in (("win", 0, i, 0), ("winb", 0, i)):
                    self.edges[self.lookup(key)]["curve"] = True
            face = [
                self.direct(self.lookup(("winb", 0, i)), A0),
                self.direct(self.lookup(("win", 0, i, 0)), B0),
                (rung, True),
                self.direct(self.lookup(("winb", 1, i)), A1),
                self.direct(self.lookup(("win", 1, i, 0)), B1),
                (rung, False),
            ]
            self.faces.append(tuple(face))
            return
        strands = []
        for k in range(mi):
            target = mi - 1 - ((k + ti) % mi)
            eid = self.add_edge(("slot", 0, i, k), ("slot", 1, i, target), "strand", curve=True)
            self.strand_winding[eid] = (i, (k + ti) // mi)
            strands.append((target, eid))
        for g in range(mi):
            tgt1, e1 = strands[g]
            tgt2, e2 = strands[(g + 1) % mi]
            face = []
            face.extend(self._circle_arc_backward(0, i, (g + 1) % mi, g, full=(mi == 1)))
            face.append((e1, True))
            face.extend(self._circle_arc_backward(1, i, tgt1, tgt2, full=(mi == 1)))
            face.append((e2, False))
            self.faces.append(tuple(face))

    def _check_closed(self):
        used = set()
        for face in self.faces:
            prev_head = self.head(face[-1])
            for de in face:
                if de in used:
                    raise TracingError("internal tracing inconsistency: edge side reused")
                used.add(de)
                if self.tail(de) != prev_head:
                    raise TracingError("internal tracing inconsistency: broken face cycle")
                prev_head = self.head(de)
        for eid in range(len(self.edges)):
            if (eid, True) not in used or (eid, False) not in used:
                raise TracingError("internal tracing inconsistency: unused edge side")
        verts = {e["u"] for e in self.edges} | {e["v"] for e in self.edges}
        euler = len(verts) - len(self.edges) + len(self.faces)
        if euler != -2:
            raise TracingError(f"internal tracing inconsistency: Euler characteristic {euler}")


def _disk_faces(cx: _Complex, boundary, chords):
    """Faces of a disk bounded by ``boundary`` and cut by interior chords.

    ``boundary`` lists (vertex, edge_group) counterclockwise; the edge from
    entry p to entry p+1 belongs to entry p's group.  Window edges get keys
    ("win", P, i, segment); seam and back-window edges are shared between
    the two hexagons and between pants and annuli, keyed by endpoints.
    Chords are (u, v, edge_id), pairwise non-crossing, at most one per
    vertex.  Returns the interior faces; the outer face is checked and
    dropped.
    """
    n = len(boundary)
    verts = [v for v, _ in boundary]
    index_of = {v: p for p, v in enumerate(verts)}
    if len(index_of) != n:
        raise TracingError("internal tracing inconsistency: repeated boundary vertex")

    edge_ids = []
    win_seg = {}
    for p in range(n):
        u, group = boundary[p]
        v = boundary[(p + 1) % n][0]
        kind = group[0]
        if kind == "win":
            _, P, i = group
            seg = win_seg.get((P, i), 0)
            win_seg[(P, i)] = seg + 1
            edge_ids.append(cx.add_edge(u, v, f"win{i}", key=("win", P, i, seg)))
        elif kind == "winb":
            _, P, i = group
            edge_ids.append(cx.add_edge(u, v, "winb", key=("winb", P, i)))
        else:
            _, P, seam = group
            key = ("seam", P, seam) + tuple(sorted((u, v)))
            existing = cx._edge_lookup.get(key)
            if existing is not None:
                edge_ids.append(existing)
            else:
                edge_ids.append(cx.add_edge(u, v, "seam", key=key))

    chord_at = {}
    for u, v, eid in chords:
        pu, pv = index_of[u], index_of[v]
        if pu in chord_at or pv in chord_at:
            raise TracingError("internal tracing inconsistency: two chords at one vertex")
        chord_at[pu] = (pv, eid)
        chord_at[pv] = (pu, eid)

    def local_next(e):
        # successor in the face = predecessor of the twin in the CCW
        # rotation [boundary-out, chord?, boundary-back] at the head vertex
        if e[0] == "b":
            p, fwd = e[1], e[2]
            if fwd:
                h = (p + 1) % n
                # twin is boundary-back at h
                chord = chord_at.get(h)
                return ("c", h, chord[0]) if chord else ("b", h, True)
            # twin is boundary-out at h = p
            return ("b", (p - 1) % n, False)
        # chord into h: twin is the chord at h; predecessor is boundary-out
        return ("b", e[2], True)

    all_edges = {("b", p, f) for p in range(n) for f in (True, False)}
    all_edges |= {("c", p, q) for p, (q, _) in chord_at.items()}
    faces = []
    outer_found = False
    while all_edges:
        e0 = next(iter(all_edges))
        all_edges.remove(e0)
        cycle = [e0]
        e = local_next(e0)
        while e != e0:
            all_edges.remove(e)
            cycle.append(e)
            e = local_next(e)
        if all(x[0] == "b" and not x[2] for x in cycle):
            if len(cycle) != n or outer_found:
                raise TracingError("internal tracing inconsistency: bad outer face")
            outer_found = True
            continue
        out = []
        for x in cycle:
            if x[0] == "b":
                tail = verts[x[1]] if x[2] else verts[(x[1] + 1) % n]
                out.append(cx.direct(edge_ids[x[1]], tail))
            else:
                out.append(cx.direct(chord_at[x[1]][1], verts[x[1]]))
        faces.append(tuple(out))
    if not outer_found:
        raise TracingError("internal tracing inconsistency: missing outer face")
    return faces


def _trace_curve_components(cx: _Complex, t):
    """Connected components of the curve subgraph with their coordinates.

    Each entry: m-vector, twist vector (strand winding sums), and for a
    pants-curve component the boundary index and its weight t_i.
    """
    curve_edges = [eid for eid, e in enumerate(cx.edges) if e["curve"]]
    incident = {}
    for eid in curve_edges:
        e = cx.edges[eid]
        incident.setdefault(e["u"], []).append(eid)
        incident.setdefault(e["v"], []).append(eid)
    for v, es in incident.items():
        if len(es) != 2:
            raise TracingError(f"internal tracing inconsistency: curve valence {len(es)} at {v}")
    seen = set()
    components = []
    for start in curve_edges:
        if start in seen:
            continue
        edges_here = set()
        stack = [start]
        while stack:
            eid = stack.pop()
            if eid in edges_here:
                continue
            edges_here.add(eid)
            for v in (cx.edges[eid]["u"], cx.edges[eid]["v"]):
                stack.extend(x for x in incident[v] if x not in edges_here)
        seen |= edges_here
        mvec, tvec = [0, 0, 0], [0, 0, 0]
        circle = None
        for eid in edges_here:
            if eid in cx.strand_winding:
                i, w = cx.strand_winding[eid]
                mvec[i - 1] += 1
                tvec[i - 1] += w
            else:
                kind = cx.edges[eid]["kind"]
                if kind.startswith("win") and kind != "winb":
                    circle = int(kind[3])
        if circle is not None and any(mvec):
            raise TracingError("internal tracing inconsistency: mixed circle component")
        components.append(
            {
                "edges": frozenset(edges_here),
                "m": tuple(mvec),
                "t": tuple(tvec),
                "circle": circle,
                "weight": t[circle - 1] if circle is not None else 1,
            }
        )
    return components


def _cut_pieces(cx: _Complex, components):
    """Cut along all curve edges: per piece Euler characteristic, genus,
    and boundary circuits labeled by component index."""
    comp_of_edge = {}
    for ci, comp in enumerate(components):
        for eid in comp["edges"]:
            comp_of_edge[eid] = ci

    face_of = {}
    next_in_face = {}
    for fi, face in enumerate(cx.faces):
        for k, de in enumerate(face):
            face_of[de] = fi
            next_in_face[de] = face[(k + 1) % len(face)]

    parent = list(range(len(cx.faces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid, e in enumerate(cx.edges):
        if not e["curve"]:
            a, b = find(face_of[(eid, True)]), find(face_of[(eid, False)])
            if a != b:
                parent[a] = b

    pieces = {}

    def piece(fi):
        r = find(fi)
        return pieces.setdefault(r, {"faces": 0, "edge_sides": 0, "verts": 0, "circuits": []})

    for fi in range(len(cx.faces)):
        piece(fi)["faces"] += 1
    for eid, e in enumerate(cx.edges):
        if e["curve"]:
            piece(face_of[(eid, True)])["edge_sides"] += 1
            piece(face_of[(eid, False)])["edge_sides"] += 1
        else:
            piece(face_of[(eid, True)])["edge_sides"] += 1

    # vertex copies: arcs of the corner cycle between curve-edge crossings
    in_edges = {}
    for eid, e in enumerate(cx.edges):
        in_edges.setdefault(e["v"], []).append((eid, True))
        in_edges.setdefault(e["u"], []).append((eid, False))
    for v, incoming in in_edges.items():
        remaining = set(incoming)
        e0 = next(iter(remaining))
        cyc = []
        e = e0
        while True:
            remaining.remove(e)
            cyc.append(e)
            nxt = next_in_face[e]
            e = (nxt[0], not nxt[1])
            if e == e0:
                break
        if remaining:
            raise TracingError("internal tracing inconsistency: disconnected vertex link")
        crossings = [k for k, e_in in enumerate(cyc) if cx.edges[next_in_face[e_in][0]]["curve"]]
        if not crossings:
            piece(face_of[cyc[0]])["verts"] += 1
            continue
        for idx, k in enumerate(crossings):
            start = (k + 1) % len(cyc)
            end = crossings[(idx + 1) % len(crossings)]
            owners = set()
            p = start
            while True:
                owners.add(find(face_of[cyc[p]]))
                if p == end:
                    break
                p = (p + 1) % len(cyc)
            if len(owners) != 1:
                raise TracingError("internal tracing inconsistency: vertex arc spans pieces")
            pieces[owners.pop()]["verts"] += 1

    # boundary circuits along curve-edge sides
    def next_boundary(de):
        g = next_in_face[de]
        while not cx.edges[g[0]]["curve"]:
            g = next_in_face[(g[0], not g[1])]
        return g

    remaining_sides = {de for de in face_of if cx.edges[de[0]]["curve"]}
    while remaining_sides:
        de0 = next(iter(remaining_sides))
        circuit = []
        de = de0
        while True:
            remaining_sides.remove(de)
            circuit.append(de)
            de = next_boundary(de)
            if de == de0:
                break
        comps = {comp_of_edge[d[0]] for d in circuit}
        if len(comps) != 1:
            raise TracingError("internal tracing inconsistency: mixed-component circuit")
        piece(face_of[circuit[0]])["circuits"].append(comps.pop())

    result = []
    for data in pieces.values():
        chi = data["verts"] - data["edge_sides"] + data["faces"]
        b = len(data["circuits"])
        genus2 = 2 - chi - b
        if genus2 % 2 != 0 or genus2 < 0:
            raise TracingError(
                f"internal tracing inconsistency: piece chi={chi} b={b} is not a surface"
            )
        result.append({"chi": chi, "genus": genus2 // 2, "circuits": data["circuits"]})
    if sum(p["chi"] for p in result) != -2:
        raise TracingError("internal tracing inconsistency: piece Euler characteristics")
    return result


def _group_parallel(n_components, pieces):
    """Union components joined by an annulus piece with two distinct labels."""
    parent = list(range(n_components))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    artifacts = set()
    for pi, piece in enumerate(pieces):
        cs = piece["circuits"]
        if piece["chi"] == 0 and piece["genus"] == 0 and len(cs) == 2 and cs[0] != cs[1]:
            a, b = find(cs[0]), find(cs[1])
            if a != b:
                parent[a] = b
            artifacts.add(pi)
    classes = {}
    for ci in range(n_components):
        classes.setdefault(find(ci), []).append(ci)
    return classes, artifacts


@lru_cache(maxsize=None)
def _trace_full(m, t):
    """(decomposition, graph vertices, graph edges) for a genus-2 coordinate."""
    cx = _Complex(m, t)
    components = _trace_curve_components(cx, t)
    pieces = _cut_pieces(cx, components)
    classes, artifacts = _group_parallel(len(components), pieces)

    class_labels = {}
    decomposition = []
    class_weight = {}
    for label, (_root, members) in enumerate(sorted(classes.items())):
        for ci in members:
            class_labels[ci] = label
        first = components[members[0]]
        if first["circle"] is not None:
            if len(members) != 1:
                raise TracingError("internal tracing inconsistency: merged pants-curve class")
            weight = first["weight"]
            prim = DTCoord((0, 0, 0), tuple(1 if k == first["circle"] - 1 else 0 for k in range(3)))
        else:
            weight = len(members)
            tot_m = tuple(sum(components[ci]["m"][k] for ci in members) for k in range(3))
            tot_t = tuple(sum(components[ci]["t"][k] for ci in members) for k in range(3))
            if any(x % weight != 0 for x in tot_m + tot_t):
                raise TracingError(
                    f"internal tracing inconsistency: class total {tot_m},{tot_t} "
                    f"not divisible by multiplicity {weight}"
                )
            prim = DTCoord(
                tuple(x // weight for x in tot_m), tuple(x // weight for x in tot_t)
            )
        class_weight[label] = weight
        decomposition.append((prim, weight))
    order = sorted(range(len(decomposition)), key=lambda k: decomposition[k][0].as_tuple())
    decomposition = tuple(decomposition[k] for k in order)
    if len({pm[0] for pm in decomposition}) != len(decomposition):
        raise TracingError("internal tracing inconsistency: repeated primitive component")

    graph_pieces = []
    piece_index = {}
    for pi, piece in enumerate(pieces):
        if pi not in artifacts:
            piece_index[pi] = len(graph_pieces)
            graph_pieces.append(piece)
    incidences = {}
    for pi, piece in enumerate(pieces):
        if pi in artifacts:
            continue
        for ci in piece["circuits"]:
            incidences.setdefault(class_labels[ci], []).append(piece_index[pi])
    edges = []
    for label in sorted(incidences):
        ends = incidences[label]
        if len(ends) != 2:
            raise TracingError(
                f"internal tracing inconsistency: curve class with {len(ends)} free sides"
            )
        i, j = sorted(ends)
        edges.append((i, j, class_weight[label]))
    if len(edges) != len(class_weight):
        raise TracingError("internal tracing inconsistency: missing curve class incidence")
    vertices = tuple((p["genus"], len(p["circuits"])) for p in graph_pieces)
    if sum(b for _g, b in vertices) != 2 * len(edges):
        raise TracingError("internal tracing inconsistency: boundary/edge count mismatch")
    return decomposition, vertices, tuple(edges)


def trace_components_dt(model: SurfaceModel, coord: DTCoord) -> ComponentDecomposition:
    """Primitive components with multiplicities from the explicit diagram."""
    coord = validate_dt(coord.m, coord.t)
    decomposition, _vertices, _edges = _trace_full(coord.m, coord.t)
    total_m = [0, 0, 0]
    total_t = [0, 0, 0]
    for prim, mult in decomposition:
        for k in range(3):
            total_m[k] += mult * prim.m[k]
            total_t[k] += mult * prim.t[k]
    if tuple(total_m) != coord.m or tuple(total_t) != coord.t:
        raise TracingError(
            f"internal tracing inconsistency: reassembly {total_m},{total_t} != {coord}"
        )
    return ComponentDecomposition(components=decomposition)


def _canonical_graph(vertices, edges):
    best = None
    for perm in permutations(range(len(vertices))):
        inv = [0] * len(perm)
        for i, p in enumerate(perm):
            inv[p] = i
        vs = tuple(vertices[k] for k in inv)
        es = tuple(sorted((min(perm[i], perm[j]), max(perm[i], perm[j]), w) for i, j, w in edges))
        cand = (vs, es)
        if best is None or cand < best:
            best = cand
    return best


@lru_cache(maxsize=None)
def _type_key_reduced(model_name, m, t) -> TypeKey:
    _decomposition, vertices, edges = _trace_full(m, t)
    vs, es = _canonical_graph(vertices, edges)
    pieces_txt = ",".join(f"(g{g},b{b})" for g, b in vs)
    edges_txt = ",".join(f"{i}-{j}:w{w}" for i, j, w in es)
    return TypeKey(
        model_name=model_name,
        text=f"pieces[{pieces_txt}]|edges[{edges_txt}]",
        pieces=vs,
        edges=es,
    )


def reduced_type_tuple(coord: DTCoord):
    """Cheap hashable data the type only depends on: (m, t mod m).

    Twisting by a full turn along c_i is a mapping class, so the key only
    depends on t_i mod m_i (and on the bare t_i = parallel-copy weight
    where m_i = 0).
    """
    m, t = coord.m, coord.t
    return m, (
        t[0] % m[0] if m[0] else t[0],
        t[1] % m[1] if m[1] else t[1],
        t[2] % m[2] if m[2] else t[2],
    )


def type_key(model: SurfaceModel, coord) -> TypeKey:
    """Canonical orbit invariant: the weight d on the torus, the decorated
    cut graph on genus 2 (memoized on the twist reduction)."""
    if isinstance(coord, TorusCoord):
        return TypeKey(model_name=model.name, text=f"d={coord.weight()}")
    coord = validate_dt(coord.m, coord.t)
    m, reduced = reduced_type_tuple(coord)
    return _type_key_reduced(model.name, m, reduced)
