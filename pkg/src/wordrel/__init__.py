"""Word relationships as translative, orthogonal and linear maps of embedding space."""

__version__ = "0.1.0"

from .corpus import AnalogyCategory, AnalogyQuad, WordPairSet, extract_pairs, parse_analogy_file
from .embeddings import EmbeddingTable, NeighborResult, load_embeddings
from .errors import DataError, NumericError, OutOfVocabulary, WordRelError
from .evaluation import CategoryReport, evaluate_all, evaluate_category, sweep_n
from .transforms import (
    FitSample,
    LinearTransform,
    OrthogonalTransform,
    SolverConfig,
    TranslationVector,
    apply,
    build_fit_sample,
    fit_linear,
    fit_orthogonal,
    fit_translation,
    solve_3cosadd,
    solve_3cosmul,
)

__all__ = [
    "AnalogyCategory", "AnalogyQuad", "WordPairSet", "extract_pairs", "parse_analogy_file",
    "EmbeddingTable", "NeighborResult", "load_embeddings",
    "DataError", "NumericError", "OutOfVocabulary", "WordRelError",
    "CategoryReport", "evaluate_all", "evaluate_category", "sweep_n",
    "FitSample", "LinearTransform", "OrthogonalTransform", "SolverConfig", "TranslationVector",
    "apply", "build_fit_sample", "fit_linear", "fit_orthogonal", "fit_translation",
    "solve_3cosadd", "solve_3cosmul",
]
