"""poly37: an immersed polyhedral {3,7} surface built from triangular
prisms and square antiprisms, its 56-triangle genus-3 quotient, and the
verification machinery for both."""

__version__ = "0.1.0"

from .assembly import Chirality, DecorationTree, glue_transform, grow, mirror
from .geom import DEFAULT_TOL, RigidMotion, Tolerance
from .intersect import (IntersectionWitness, first_self_intersecting_iteration,
                        surface_self_intersects, tri_tri_intersect)
from .petrie import (PetrieState, Turn, petrie_period, petrie_polyline,
                     petrie_step)
from .quotient import (FundamentalPiece, QuotientSurface,
                       build_fundamental_piece, covering_label, genus,
                       identify, verify_nonembeddability)
from .solids import (ANTIPRISM_HALF_WIDTH, BACK_APEX_X, EDGE_LENGTH,
                     PRISM_APEX_X, Solid, canonical_antiprism,
                     canonical_prism, check_regular, solve_back_apex_x)
from .surface import (TriangleSurface, boundary_loops, euler_characteristic,
                      is_oriented, vertex_degrees)

__all__ = [
    "__version__",
    "Chirality", "DecorationTree", "glue_transform", "grow", "mirror",
    "DEFAULT_TOL", "RigidMotion", "Tolerance",
    "IntersectionWitness", "first_self_intersecting_iteration",
    "surface_self_intersects", "tri_tri_intersect",
    "PetrieState", "Turn", "petrie_period", "petrie_polyline", "petrie_step",
    "FundamentalPiece", "QuotientSurface", "build_fundamental_piece",
    "covering_label", "genus", "identify", "verify_nonembeddability",
    "ANTIPRISM_HALF_WIDTH", "BACK_APEX_X", "EDGE_LENGTH", "PRISM_APEX_X",
    "Solid", "canonical_antiprism", "canonical_prism", "check_regular",
    "solve_back_apex_x",
    "TriangleSurface", "boundary_loops", "euler_characteristic",
    "is_oriented", "vertex_degrees",
]
