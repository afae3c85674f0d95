"""Headless rendering of extracted meshes to image files."""

from __future__ import annotations


def save_mesh_figure(mesh, path, title: str = "", dpi: int = 150):
    """Render a triangle mesh to an image file (format by extension).

    Uses the Agg backend; nothing is displayed.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig = plt.figure(figsize=(7, 7))
    axis = fig.add_subplot(projection="3d")
    v = mesh.vertices
    axis.plot_trisurf(
        v[:, 0],
        v[:, 1],
        v[:, 2],
        triangles=mesh.triangles,
        cmap="viridis",
        linewidth=0.0,
        antialiased=True,
    )
    span = v.max(axis=0) - v.min(axis=0)
    mid = (v.max(axis=0) + v.min(axis=0)) / 2.0
    half = float(span.max()) / 2.0
    axis.set_xlim(mid[0] - half, mid[0] + half)
    axis.set_ylim(mid[1] - half, mid[1] + half)
    axis.set_zlim(mid[2] - half, mid[2] + half)
    axis.set_box_aspect((1, 1, 1))
    if title:
        axis.set_title(title)
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
