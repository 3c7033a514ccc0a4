"""Coverage and quantization of high-dimensional cubes by balls, cubes and point designs.

Submodules are imported on demand (``from hypercover import union_cover``) so
that light commands do not pay for scipy or scikit-learn start-up.
"""

__version__ = "0.1.0"

__all__ = [
    "special", "geometry", "rvlib", "montecarlo", "estimators", "factorial", "ball_cover",
    "designs", "union_cover", "cube_cover", "quantize", "reference", "tables", "cli",
]
