# ruff: noqa: F401

from ._logging import switch_logger, switch_trace
from .bundles import LineBundle, make_bundle, tensor, translate, trivial_bundle
from .decorators import AcceptanceCheck, acceptance_check
from .doubled import Lift, lift_bundle, make_doubled
from .handlers import IHandler
from .homspaces import cohomology_dims, hom_B, intersect_lifts, verify_ext_intersection
from .session import parse_session
from .tfold import gen_metric_decompose, nilfold_doubled
from .torus import ComplexTorus, make_torus, standard_torus
