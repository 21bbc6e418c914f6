"""Plane-strain triangle meshes of the two-chamber wing section.

A :class:`Mesh2D` holds nodes, triangles tagged with a material id, named
boundary edge sets and bonded node pairs. Edges of a quadratic mesh are
stored as (end, end, midside) node triples.

Material ids used by the built-in mesher:

    0  silicone skin and core
    1  PLA strain-limiting layer
    2  aluminium leading-edge insert (fully fixed)
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import GeometryError
from ..geometry import DEFAULT_CHORD_M, cosine_stations

__all__ = [
    "SILICONE",
    "PLA_LAYER",
    "ALUMINIUM_INSERT",
    "BOUNDARY_NAMES",
    "Mesh2D",
    "WingSectionSpec",
    "wing_section_mesh",
    "rectangle_mesh",
    "to_quadratic",
    "chain_edges",
    "read_mesh",
    "write_mesh",
]

SILICONE, PLA_LAYER, ALUMINIUM_INSERT = 0, 1, 2
BOUNDARY_NAMES = ("leading_edge_fixed", "chamber_upper", "chamber_lower", "outer_surface")
MESH_FORMAT_VERSION = 1


def _signed_areas(nodes, tri):
    a, b, c = nodes[tri[:, 0]], nodes[tri[:, 1]], nodes[tri[:, 2]]
    return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))


@dataclass
class Mesh2D:
    nodes: np.ndarray
    elements: np.ndarray
    materials: np.ndarray
    boundary_sets: dict = field(default_factory=dict)
    bonded_pairs: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=int))

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float).reshape(-1, 2)
        self.elements = np.asarray(self.elements, dtype=int)
        self.materials = np.asarray(self.materials, dtype=int).reshape(-1)
        self.bonded_pairs = np.asarray(self.bonded_pairs, dtype=int).reshape(-1, 2)
        self.boundary_sets = {k: np.asarray(v, dtype=int).reshape(-1, self.edge_nodes) for k, v in self.boundary_sets.items()}
        self.validate()

    @property
    def order(self):
        return 2 if self.elements.shape[1] == 6 else 1

    @property
    def edge_nodes(self):
        return 3 if self.elements.shape[1] == 6 else 2

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_elements(self):
        return len(self.elements)

    def validate(self):
        if self.elements.ndim != 2 or self.elements.shape[1] not in (3, 6):
            raise GeometryError("elements must be 3- or 6-node triangles")
        if len(self.materials) != len(self.elements):
            raise GeometryError("every element needs exactly one material id")
        if self.elements.size and (self.elements.min() < 0 or self.elements.max() >= self.n_nodes):
            raise GeometryError("element references a missing node")
        areas = _signed_areas(self.nodes, self.elements)
        bad = np.flatnonzero(areas <= 0)
        if bad.size:
            raise GeometryError(f"element {bad[0]} has non-positive area {areas[bad[0]]:.3e}")
        edges = self._edge_lookup()
        for name, es in self.boundary_sets.items():
            for e in es:
                if tuple(sorted(e[:2])) not in edges:
                    raise GeometryError(f"boundary set {name!r} references a non-existent edge {tuple(e)}")
        if len(self.bonded_pairs):
            gap = np.linalg.norm(self.nodes[self.bonded_pairs[:, 0]] - self.nodes[self.bonded_pairs[:, 1]], axis=1)
            if np.any(gap > 1e-9):
                raise GeometryError("bonded node pairs must coincide within 1e-9 m")

    def _edge_lookup(self):
        tri = self.elements[:, :3]
        out = set()
        for a, b in ((0, 1), (1, 2), (2, 0)):
            for p, q in zip(tri[:, a], tri[:, b]):
                out.add((min(p, q), max(p, q)))
        return out

    def element_areas(self):
        return _signed_areas(self.nodes, self.elements)

    def boundary_nodes(self, name):
        return np.unique(self.boundary_sets.get(name, np.zeros((0, self.edge_nodes), dtype=int)))

    def node_representatives(self):
        """Map each node to the smallest node it is bonded to (union-find over bonded pairs)."""
        parent = np.arange(self.n_nodes)

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a, b in self.bonded_pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        return np.array([find(i) for i in range(self.n_nodes)])

    def transformed(self, rotation_deg=0.0, shift=(0.0, 0.0)):
        """Rigidly rotated (about the origin) and shifted copy."""
        t = np.radians(rotation_deg)
        R = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
        return replace(self, nodes=self.nodes @ R.T + np.asarray(shift))

    def chamber_area(self, name, coords=None):
        """Area enclosed by a chamber boundary loop (edges oriented with the solid on their right)."""
        x = self.nodes if coords is None else coords
        total = 0.0
        for e in self.boundary_sets[name]:
            if self.edge_nodes == 2:
                a, b = x[e[0]], x[e[1]]
                total += 0.5 * (a[0] * b[1] - b[0] * a[1])
            else:
                # exact for a quadratic edge: integral of (x y' - y x')/2 over [-1, 1]
                g, w = np.polynomial.legendre.leggauss(3)
                N = np.stack([0.5 * g * (g - 1), 0.5 * g * (g + 1), 1 - g**2], axis=1)
                dN = np.stack([g - 0.5, g + 0.5, -2 * g], axis=1)
                pts = x[[e[0], e[1], e[2]]]
                p, dp = N @ pts, dN @ pts
                total += 0.5 * np.sum(w * (p[:, 0] * dp[:, 1] - p[:, 1] * dp[:, 0]))
        return total


def chain_edges(edges):
    """Order boundary edges into one closed node loop.

    Returns node ids in traversal order (midside nodes included, loop not
    repeated at the end). Edges may arrive in any order and orientation.
    """
    edges = [tuple(e) for e in np.asarray(edges)]
    if not edges:
        return np.zeros(0, dtype=int)
    by_node = {}
    for i, e in enumerate(edges):
        by_node.setdefault(e[0], []).append(i)
        by_node.setdefault(e[1], []).append(i)
    if any(len(v) != 2 for v in by_node.values()):
        raise GeometryError("boundary edges do not form a single closed loop")
    used = np.zeros(len(edges), dtype=bool)
    start = edges[0][0]
    loop = []
    node, idx = start, 0
    for _ in range(len(edges)):
        used[idx] = True
        e = edges[idx]
        forward = e[0] == node
        nxt = e[1] if forward else e[0]
        loop.append(node)
        if len(e) == 3:
            loop.append(e[2])
        node = nxt
        cand = [j for j in by_node[node] if not used[j]]
        if not cand:
            break
        idx = cand[0]
    if node != start or not used.all():
        raise GeometryError("boundary edges do not form a single closed loop")
    return np.array(loop, dtype=int)


# ---------------------------------------------------------------------------
# Linear -> quadratic conversion

def to_quadratic(mesh, curved=None):
    """Add midside nodes. ``curved`` maps an edge midpoint to its true boundary position for outer edges."""
    if mesh.order == 2:
        return mesh
    nodes = [tuple(p) for p in mesh.nodes]
    mid_of = {}
    outer = {tuple(sorted(e)) for e in mesh.boundary_sets.get("outer_surface", [])}

    def midpoint(a, b):
        key = (min(a, b), max(a, b))
        if key not in mid_of:
            m = 0.5 * (mesh.nodes[a] + mesh.nodes[b])
            if curved is not None and key in outer:
                m = curved(m)
            mid_of[key] = len(nodes)
            nodes.append(tuple(m))
        return mid_of[key]

    quad = np.empty((mesh.n_elements, 6), dtype=int)
    for i, (a, b, c) in enumerate(mesh.elements):
        quad[i] = (a, b, c, midpoint(a, b), midpoint(b, c), midpoint(c, a))
    sets = {k: np.array([(a, b, mid_of[(min(a, b), max(a, b))]) for a, b in v], dtype=int).reshape(-1, 3)
            for k, v in mesh.boundary_sets.items()}
    pairs = list(map(tuple, mesh.bonded_pairs))
    return Mesh2D(np.array(nodes), quad, mesh.materials.copy(), sets, np.array(pairs, dtype=int).reshape(-1, 2))


# ---------------------------------------------------------------------------
# Built-in meshers

@dataclass(frozen=True)
class WingSectionSpec:
    """Cross-section layout of the two-chamber soft wing.

    Chordwise positions are fractions of the chord; wall thicknesses are in
    metres. Each chamber is a row of ``n_cells`` cavities separated by solid
    ribs; the cells are assumed to be connected along the span so they share
    one pressure. The chamber outline is not published, so these defaults are
    modelling parameters.
    """

    chord_m: float = DEFAULT_CHORD_M
    thickness_ratio: float = 0.16
    insert_end: float = 0.20
    chamber_start: float = 0.24
    chamber_end: float = 0.82
    skin_m: float = 0.0050
    septum_m: float = 0.0010
    pla_m: float = 0.0020
    last_column: float = 0.975
    n_front: int = 3
    n_cells: int = 6
    cell_columns: int = 4
    rib_columns: int = 1
    n_aft: int = 10
    n_nose: int = 8
    n_skin: int = 2
    n_cavity: int = 3
    n_septum: int = 1
    order: int = 2

    @property
    def n_chamber(self):
        """Number of column intervals spanned by the chamber zone."""
        return self.n_cells * self.cell_columns + (self.n_cells - 1) * self.rib_columns

    def is_rib(self, k):
        """True if interval ``k`` of the chamber zone is a solid rib."""
        return k % (self.cell_columns + self.rib_columns) >= self.cell_columns

    def half_thickness(self, x_over_c):
        t, xc = self.thickness_ratio, np.asarray(x_over_c, dtype=float)
        yt = 5 * t * (0.2969 * np.sqrt(xc) - 0.1260 * xc - 0.3516 * xc**2 + 0.2843 * xc**3 - 0.1036 * xc**4)
        return yt * self.chord_m


def _layer_heights(spec, H):
    """Upper-half layer interfaces (from y = 0 upward) for a column with half thickness H."""
    walls = [0.5 * spec.pla_m, spec.septum_m]
    cavity = H - spec.skin_m - sum(walls)
    if cavity <= 0:
        raise GeometryError("chamber does not fit inside the profile; reduce wall thicknesses")
    parts = [0.5 * spec.pla_m] + [spec.septum_m / spec.n_septum] * spec.n_septum
    parts += [cavity / spec.n_cavity] * spec.n_cavity + [spec.skin_m / spec.n_skin] * spec.n_skin
    return np.concatenate([[0.0], np.cumsum(parts)])


def _compact(nodes, tris, mats, sets):
    """Drop nodes not referenced by any element and renumber."""
    used = np.zeros(len(nodes), dtype=bool)
    used[tris.ravel()] = True
    new_id = np.cumsum(used) - 1
    return Mesh2D(nodes[used], new_id[tris], mats, {k: new_id[v] for k, v in sets.items()})


def wing_section_mesh(spec=None):
    """Structured triangle mesh of the NACA 00xx section with two symmetric chambers."""
    spec = spec or WingSectionSpec()
    c = spec.chord_m
    if not 0 < spec.insert_end < spec.chamber_start < spec.chamber_end < spec.last_column < 1:
        raise GeometryError("chordwise stations must satisfy 0 < insert < chamber start < chamber end < last column < 1")
    if spec.n_cells < 1 or spec.cell_columns < 1 or spec.rib_columns < 0:
        raise GeometryError("need at least one chamber cell of at least one column")

    def seg(a, b, n, endpoint=False):
        s = 0.5 * (1 - np.cos(np.linspace(0, np.pi, n + 1)))
        pts = a + (b - a) * s
        return pts if endpoint else pts[:-1]

    cols = np.concatenate([
        seg(spec.insert_end, spec.chamber_start, spec.n_front),
        np.linspace(spec.chamber_start, spec.chamber_end, spec.n_chamber + 1)[:-1],
        seg(spec.chamber_end, spec.last_column, spec.n_aft, endpoint=True),
    ])
    i_cs = spec.n_front
    i_ce = spec.n_front + spec.n_chamber
    H = spec.half_thickness(cols)
    ref_front = _layer_heights(spec, spec.half_thickness(spec.chamber_start))
    ref_aft = _layer_heights(spec, spec.half_thickness(spec.chamber_end))
    n_half = len(ref_front) - 1
    n_rows = 2 * n_half + 1

    # node rows, bottom (j = 0) to top (j = n_rows - 1)
    grid = np.empty((len(cols), n_rows, 2))
    for i, (x, h) in enumerate(zip(cols, H)):
        if i_cs <= i <= i_ce:
            up = _layer_heights(spec, h)
        else:
            ref = ref_front if i < i_cs else ref_aft
            up = ref / ref[-1] * h
        ys = np.concatenate([-up[::-1], up[1:]])
        grid[i, :, 0] = x * c
        grid[i, :, 1] = ys

    nodes = grid.reshape(-1, 2).tolist()

    def nid(i, j):
        return i * n_rows + j

    # layers counted from the middle: 0 PLA, then septum, cavity, skin
    def layer_kind(j):
        k = j - n_half if j >= n_half else n_half - 1 - j
        if k == 0:
            return "pla"
        if k <= spec.n_septum:
            return "septum"
        if k <= spec.n_septum + spec.n_cavity:
            return "cavity"
        return "skin"

    tris, mats = [], []
    for i in range(len(cols) - 1):
        in_chamber = i_cs <= i < i_ce and not spec.is_rib(i - i_cs)
        for j in range(n_rows - 1):
            kind = layer_kind(j)
            if kind == "cavity" and in_chamber:
                continue
            mat = PLA_LAYER if (kind == "pla" and i < i_ce) else SILICONE
            bl, br, tr, tl = nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)
            if j >= n_half:
                tris += [(bl, br, tr), (bl, tr, tl)]
            else:
                tris += [(bl, br, tl), (br, tr, tl)]
            mats += [mat, mat]

    # trailing-edge wedge
    te = len(nodes)
    nodes.append((c, 0.0))
    last = len(cols) - 1
    for j in range(n_rows - 1):
        tris.append((nid(last, j), te, nid(last, j + 1)))
        mats.append(SILICONE)

    # aluminium nose: fan from an interior point
    s_nose = cosine_stations(spec.n_nose + 1)[:-1] * spec.insert_end  # 0 .. insert_end, excluding the column
    nose_upper = [len(nodes) + k for k in range(len(s_nose))]
    for s in s_nose:
        nodes.append((s * c, float(spec.half_thickness(s))))
    nose_lower = [nose_upper[0]]
    for s in s_nose[1:]:
        nose_lower.append(len(nodes))
        nodes.append((s * c, -float(spec.half_thickness(s))))
    centre = len(nodes)
    nodes.append((0.55 * spec.insert_end * c, 0.0))
    column = [nid(0, j) for j in range(n_rows)]
    # top of the column -> forward along the upper nose -> leading edge -> aft along the lower nose -> up the column
    polygon = [column[-1]] + nose_upper[::-1][:-1] + [nose_upper[0]] + nose_lower[1:] + column[:-1]
    loop = polygon + [polygon[0]]
    for a, b in zip(loop[:-1], loop[1:]):
        tris.append((centre, a, b))
        mats.append(ALUMINIUM_INSERT)

    nodes = np.array(nodes)
    tris = np.array(tris, dtype=int)
    mats = np.array(mats, dtype=int)

    # boundary classification from free edges
    count = {}
    owner = {}
    for t in tris:
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            key = (min(a, b), max(a, b))
            count[key] = count.get(key, 0) + 1
            owner[key] = (a, b)
    free = [owner[k] for k, n in count.items() if n == 1]
    outer_nodes = set(nid(i, 0) for i in range(len(cols))) | set(nid(i, n_rows - 1) for i in range(len(cols)))
    outer_nodes |= set(nose_upper) | set(nose_lower) | {te}
    outer, ch_up, ch_lo = [], [], []
    for a, b in free:
        if a in outer_nodes and b in outer_nodes:
            outer.append((a, b))  # solid on the left: counter-clockwise around the section
        elif nodes[a, 1] + nodes[b, 1] > 0:
            ch_up.append((b, a))  # solid on the right, normal points into the solid
        else:
            ch_lo.append((b, a))
    fixed = []
    for t, m in zip(tris, mats):
        if m == ALUMINIUM_INSERT:
            fixed += [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
    sets = {
        "leading_edge_fixed": np.array(fixed, dtype=int),
        "chamber_upper": np.array(ch_up, dtype=int),
        "chamber_lower": np.array(ch_lo, dtype=int),
        "outer_surface": np.array(outer, dtype=int),
    }
    mesh = _compact(nodes, tris, mats, sets)
    if spec.order == 2:

        def on_surface(m):
            h = float(spec.half_thickness(np.clip(m[0] / c, 0.0, 1.0)))
            return np.array([m[0], np.copysign(h, m[1])])

        mesh = to_quadratic(mesh, curved=on_surface)
    return mesh


def rectangle_mesh(nx, ny, width=1.0, height=1.0, order=1, jitter=0.0, seed=None, materials=None):
    """Structured rectangle split into 2 nx ny triangles; optional interior node jitter for tests."""
    xs = np.linspace(0.0, width, nx + 1)
    ys = np.linspace(0.0, height, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    if jitter:
        rng = np.random.default_rng(seed)
        interior = (X.ravel() > 0) & (X.ravel() < width) & (Y.ravel() > 0) & (Y.ravel() < height)
        h = min(width / nx, height / ny)
        nodes[interior] += rng.uniform(-jitter * h, jitter * h, size=(interior.sum(), 2))
    tris = []
    for i in range(nx):
        for j in range(ny):
            a, b = i * (ny + 1) + j, (i + 1) * (ny + 1) + j
            tris += [(a, b, b + 1), (a, b + 1, a + 1)]
    tris = np.array(tris)
    mats = np.zeros(len(tris), dtype=int) if materials is None else np.asarray(materials)
    sets = {"leading_edge_fixed": np.array([(j, j + 1) for j in range(ny)])}
    mesh = Mesh2D(nodes, tris, mats, sets)
    return to_quadratic(mesh) if order == 2 else mesh


# ---------------------------------------------------------------------------
# Text format

def write_mesh(path, mesh):
    """Write the versioned plain-text mesh format described in docs/meshformat.md."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"morphglide-mesh {MESH_FORMAT_VERSION}", f"nodes {mesh.n_nodes}"]
    lines += [f"{float(x)!r} {float(y)!r}" for x, y in mesh.nodes]
    lines.append(f"elements {mesh.n_elements} {mesh.elements.shape[1]}")
    lines += [" ".join(map(str, [m, *e])) for m, e in zip(mesh.materials, mesh.elements)]
    lines.append(f"bonded {len(mesh.bonded_pairs)}")
    lines += [f"{a} {b}" for a, b in mesh.bonded_pairs]
    for name in sorted(mesh.boundary_sets):
        es = mesh.boundary_sets[name]
        lines.append(f"boundary {name} {len(es)} {mesh.edge_nodes}")
        lines += [" ".join(map(str, e)) for e in es]
    lines.append("end")
    path.write_text("\n".join(lines) + "\n")


def read_mesh(path):
    text = Path(path).read_text().splitlines()
    it = iter(enumerate(text, start=1))

    def next_line():
        for lineno, line in it:
            line = line.strip()
            if line and not line.startswith("#"):
                return lineno, line.split()
        raise GeometryError(f"{path}: unexpected end of file")

    lineno, head = next_line()
    if head[0] != "morphglide-mesh" or int(head[1]) != MESH_FORMAT_VERSION:
        raise GeometryError(f"{path}:{lineno}: not a version {MESH_FORMAT_VERSION} morphglide mesh")
    lineno, tok = next_line()
    if tok[0] != "nodes":
        raise GeometryError(f"{path}:{lineno}: expected 'nodes'")
    nodes = np.array([[float(v) for v in next_line()[1]] for _ in range(int(tok[1]))])
    lineno, tok = next_line()
    if tok[0] != "elements":
        raise GeometryError(f"{path}:{lineno}: expected 'elements'")
    rows = np.array([[int(v) for v in next_line()[1]] for _ in range(int(tok[1]))], dtype=int)
    mats, elems = rows[:, 0], rows[:, 1:]
    lineno, tok = next_line()
    if tok[0] != "bonded":
        raise GeometryError(f"{path}:{lineno}: expected 'bonded'")
    pairs = np.array([[int(v) for v in next_line()[1]] for _ in range(int(tok[1]))], dtype=int).reshape(-1, 2)
    sets = {}
    while True:
        lineno, tok = next_line()
        if tok[0] == "end":
            break
        if tok[0] != "boundary":
            raise GeometryError(f"{path}:{lineno}: expected 'boundary' or 'end'")
        sets[tok[1]] = np.array([[int(v) for v in next_line()[1]] for _ in range(int(tok[2]))], dtype=int)
    return Mesh2D(nodes, elems, mats, sets, pairs)
