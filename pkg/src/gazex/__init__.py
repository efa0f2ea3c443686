"""gazex: taxonomy label expansion, gazetteer classification, relation sweeps."""

__version__ = "0.1.0"

from .taxonomy import (  # noqa: F401
    LemmaTable,
    Taxonomy,
    Token,
    load_taxonomy,
    parse_taxonomy,
    tokenize_label,
)
from .relations import (  # noqa: F401
    RELATION_CATALOG,
    CachingProvider,
    ExpansionRequest,
    FixtureProvider,
    LiveProvider,
    RelationId,
    ScoredTerm,
    cache_key,
    fetch_related,
)
from .corpus import (  # noqa: F401
    BASELINE_NAME,
    Corpus,
    Gazetteer,
    RawCorpus,
    WeightedTerm,
    build_single_relation_corpora,
    enhance_lists,
    generate_baseline,
    generate_lists_by_sem_rel,
    read_corpus,
    sort_leaves,
    write_corpus,
)
from .combinations import (  # noqa: F401
    CorpusConfiguration,
    build_all,
    combine_corpora,
    directory_store,
    enumerate_configurations,
    lazy_store,
)
from .classifier import (  # noqa: F401
    ClassificationOutcome,
    CleanQuery,
    LabelScore,
    clean_query,
    reformulate,
    score_corpus,
)
from .evaluation import (  # noqa: F401
    ConfusionCounts,
    GroundTruthEntry,
    Judgment,
    MetricsReport,
    TruthKind,
    compute_metrics,
    evaluate_configuration,
    filter_queries,
    judge,
    parse_ground_truth,
    sweep,
)
from .annotation import AnnotationStore  # noqa: F401
from .server import AnnotationServer  # noqa: F401
