"""Scene graphs and referential grounding for annotated 3D indoor scenes.

The pipeline: load or synthesize a scene, annotate walkable free space,
enumerate spatial relations per region, assemble a scene graph, generate
minimal unambiguous statements (plus deliberately broken ones), parse
statements back into subgraph queries, ground them by subgraph search,
and score alternative suggestions when nothing matches.
"""

from .bench import generate_dataset, load_dataset, run_bench, split_scenes
from .colors import PALETTE, PALETTE_NAMES, dominant_colors, quantize_colors
from .freespace import FreeSpaceConfig, annotate_free_spaces, extract_free_space
from .geometry import OrientedBox, box_gap, centroid_distance, intersection_volume
from .graph import (GraphError, GraphNode, SceneGraph, build_graph,
                    deserialize_graph, graph_from_dict, graph_to_dict,
                    load_graph, serialize_graph)
from .grounding import (AlternativeCandidate, ExistenceResult, MatchResult,
                        ScoreWeights, SimilarityScore, classify_existence,
                        partial_matches, score_similarity, select_alternative,
                        subgraph_search)
from .language import (GenerationConfig, StatementRecord, SynonymTable,
                       generate_statements, perturb_statement, record_from_dict,
                       record_to_dict, render_query_text, render_statement)
from .metrics import MetricsReport, compute_report, format_report, report_to_dict
from .parsing import (ParseError, ParseOutcome, Parser, build_vocabulary,
                      parse_statement)
from .pointcloud import PointFileError, parse_points
from .query import (Aspect, Attribute, ObjectSpec, QueryError, RelationSpec,
                    SubgraphQuery, query_from_dict, query_to_dict)
from .relations import (Relation, RelationConfig, RelationType, eval_between,
                        eval_binary, generate_relations, load_relation_config)
from .scene import (Scene, SceneError, SceneObject, load_scene, map_class,
                    scene_from_dict, scene_to_dict, serialize_scene)
from .synth import synth_scene, synth_scenes, write_scenes

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
