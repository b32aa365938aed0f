"""Decoding stabilizer codes from defect-parity symmetries."""

from symdec.blossom import Matching, min_weight_perfect_matching
from symdec.codes import (
    CodeParameters,
    StabilizerCode,
    build_code,
    build_repetition_code,
    build_surface_code,
    build_toric_code,
    build_xzzx_code,
    code_parameters,
    logical_class,
)
from symdec.detector import DetectorGraph, build_detector_graph
from symdec.estimators import MatchingDecoder, SyndromeExtractor, UnionFindDecoder
from symdec.harness import ExperimentConfig, ResultRow, find_crossing, run_point, run_sweep
from symdec.matching import build_matching_graph, commutator_via_boundary, decode, mwpm
from symdec.noise import BallisticChannel, PauliChannel, PhenomenologicalChannel
from symdec.pauli import PauliString, commutes, in_group, multiply, weight
from symdec.symmetry import (
    Symmetry,
    clean_logical,
    defect_parity,
    verify_materialised,
    verify_system,
)
from symdec.syndrome import DetectionEvents, detection_events, extract_syndrome

__version__ = "0.1.0"
