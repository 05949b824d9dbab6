"""Exact construction, verification and search of odd-distance sets under the l1 metric."""

from oddset.exact_arith import (
    best_rational_in_interval,
    classify_rational,
    format_rational,
    odd_denominator_lcm,
    parse_rational,
)
from oddset.geometry import (
    OddCertificate,
    ParityAudit,
    PointSet,
    l1_distance,
    parity_audit,
    phi_fingerprint,
    verify_odd_set,
)
from oddset.construct import build_odd_set, dim2_pair, extend_dimension, spread_translate
from oddset.search import LatticeBox, bound_report, build_odd_graph, enumerate_box, max_odd_clique
from oddset.rationalize import (
    DecimalPointSet,
    assemble_system,
    dyadic_scale,
    ensure_separation,
    perturb_and_solve,
    rationalize_set,
    rref,
)

__version__ = "0.1.0"
