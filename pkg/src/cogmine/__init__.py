"""Detect learners' cognitive and metacognitive strategies from knowledge-map learning logs."""
from .abstraction import (
    MetacognitiveStrategySequence, StrategyKind, StrategyLabel, abstract_learner,
    decode_and_label, population_report, render_table,
)
from .codec import decode_ccm, decode_sequence, encode_ccm, encode_sequence, quantize
from .gsp import FrequentPattern, brute_force_frequent, gsp
from .km import (
    KnowledgeMap, KnowledgeUnit, RelationKind, SemanticEdge, builtin_map, dump_km, find_cku,
    load_km, load_km_file, neighbors, normalize_relation,
)
from .logs import LearningActivitySequence, LearningEvent, build_las, filter_events, parse_log, write_log
from .metrics import (
    CognitionControlSequence, CognitiveStrategyInstance, ccm_sequence, coverage,
    prune_irrelevant, recognize_strategies,
)
from .pipeline import PipelineConfig, mine
from .simulator import LearnerArchetype, SimConfig, simulate
from .submaps import Submap, ThinkingMapKind, comparison_triple, search_connective, search_single

__version__ = "0.1.0"
