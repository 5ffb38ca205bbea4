"""etrkit: entity type recognition for short search-query entities.

Features from an encyclopedic index (contextual vectors), a domain
embedding model (synonymy vectors), an ontology (Company type flag), and
an agent-noun lexicon are combined into a tf-idf entity-word matrix and
classified with a class-weighted one-vs-rest linear SVM.
"""

from .classifier import ClassifierModel, TrainConfig, fit, predict, predict_scores
from .context_vectors import ContextConfig, ContextVector, build_context_vector
from .corpus_index import (
    ArticleDoc,
    Index,
    IndexConfig,
    SearchHit,
    build_index,
    build_index_from_file,
    filter_article,
    ingest_corpus,
)
from .embedding import (
    EmbeddingModel,
    EmbeddingParams,
    SynonymyVector,
    build_synonymy_vector,
    nearest_neighbors,
    train_embeddings,
)
from .evaluation import (
    EvalReport,
    FeatureExtractor,
    ablation_suite,
    cross_validate,
    metrics,
    stratified_folds,
)
from .features import (
    FeatureMatrix,
    Vocabulary,
    fit_vocabulary,
    merge_vectors,
    transform,
)
from .knowledge import (
    AgentNounLexicon,
    FeatureFlags,
    OntologyStore,
    lexical_flag,
    load_lexicon,
    load_ontology,
    ontological_flag,
)
from .pipeline import Pipeline, Resources, train_pipeline
from .query_parser import NgramLM, phrase_probability, segment, train_lm

__version__ = "0.1.0"
