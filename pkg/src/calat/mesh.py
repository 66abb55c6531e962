"""Triangulation of a lattice window and OBJ/OFF export.

Each cell ``(i, j)`` is split along the diagonal ``r(i+1,j) -- r(i,j+1)``
into a lower and an upper triangle, both counter-clockwise in the index
plane:

    lower (i,j) -> (i+1,j) -> (i,j+1)
    upper (i+1,j) -> (i+1,j+1) -> (i,j+1)

so every vertex has the six neighbours used by the Laplacian, and the
lower triangle carries the cell volume ``V(i,j)`` with its sign.
"""

from __future__ import annotations

import io
from typing import Iterator

from .lattice import LatticeWindow, Site, det3
from .scalar import decimal_string


def cell_faces(i: int, j: int) -> tuple[tuple[Site, Site, Site], tuple[Site, Site, Site]]:
    lower = ((i, j), (i + 1, j), (i, j + 1))
    upper = ((i + 1, j), (i + 1, j + 1), (i, j + 1))
    return lower, upper


def faces(w: LatticeWindow) -> list[tuple[Site, Site, Site]]:
    """Oriented triangles of the window, cell by cell in row-major order."""
    out = []
    for i in range(w.imin, w.imax):
        for j in range(w.jmin, w.jmax):
            out.extend(cell_faces(i, j))
    return out


def star_faces(site: Site) -> list[tuple[Site, Site, Site]]:
    """The six triangles incident to ``site`` in the infinite triangulation."""
    i, j = site
    out = []
    for ci, cj in ((i, j), (i - 1, j), (i, j - 1), (i - 1, j - 1)):
        for tri in cell_faces(ci, cj):
            if site in tri:
                out.append(tri)
    return out


def cone_volume(w: LatticeWindow, tris) -> object:
    """Signed volume of the cone over the origin spanned by oriented triangles."""
    total = 0
    for p, q, r in tris:
        total = total + det3(w[p], w[q], w[r])
    return total / 6


def vertex_index(w: LatticeWindow) -> dict[Site, int]:
    """1-based vertex numbers in row-major order."""
    return {s: k for k, s in enumerate(w.points, start=1)}


def _iter_obj(w: LatticeWindow, digits: int | None) -> Iterator[str]:
    index = vertex_index(w)
    yield f"# lattice window i in [{w.imin}, {w.imax}], j in [{w.jmin}, {w.jmax}]\n"
    yield f"# {len(index)} vertices, {2 * (w.imax - w.imin) * (w.jmax - w.jmin)} faces\n"
    yield "# index map: vertex k <- lattice site (i, j)\n"
    for s, k in index.items():
        yield f"# {k} {s[0]} {s[1]}\n"
    for p in w.points.values():
        yield "v " + " ".join(decimal_string(x, digits) for x in p) + "\n"
    for tri in faces(w):
        yield "f " + " ".join(str(index[s]) for s in tri) + "\n"


def to_obj(w: LatticeWindow, digits: int | None = None) -> str:
    return "".join(_iter_obj(w, digits))


def to_off(w: LatticeWindow, digits: int | None = 17) -> str:
    """OFF text; with exact input, coordinates are decimal expansions to ``digits``."""
    index = vertex_index(w)
    tris = faces(w)
    buf = io.StringIO()
    buf.write("OFF\n")
    buf.write(f"{len(index)} {len(tris)} 0\n")
    for p in w.points.values():
        buf.write(" ".join(decimal_string(x, digits) for x in p) + "\n")
    for tri in tris:
        buf.write("3 " + " ".join(str(index[s] - 1) for s in tri) + "\n")
    return buf.getvalue()


def read_obj_vertices(text: str) -> list[tuple[float, float, float]]:
    out = []
    for line in text.splitlines():
        if line.startswith("v "):
            x, y, z = (float(t) for t in line.split()[1:4])
            out.append((x, y, z))
    return out


def read_obj_faces(text: str) -> list[tuple[int, int, int]]:
    return [
        tuple(int(t) for t in line.split()[1:4])  # type: ignore[misc]
        for line in text.splitlines()
        if line.startswith("f ")
    ]
