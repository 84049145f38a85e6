"""Exact combinatorics of extended affine Weyl groups, Bedard-Lusztig pieces,
the B complex with its minimal-length flow, poset homotopy tools and dual
pair fingerprints."""
from .root_datum import RootDatum, build_root_datum, parse_datum_spec
from .affine_weyl import AffineWeylElement, AffineWeylGroup, affine_weyl_group
from .pieces import Piece, bedard_from_min_rep, delta, enumerate_classes, newton_point, sigma_J
from .bcomplex import TruncatedBComplex, build_truncated_B, verify_charts
from .dual_invariants import PairDatum, load_pair_tables, match_tables, orbit_series
from .kernels import BACKEND

__version__ = "0.1.0"
