"""Precision/recall scoring against ground truth and corpus-level evaluation.

Ground truth is a UTF-8 TSV: ``query_id<TAB>rel_id1,rel_id2,...`` per line,
``#`` lines ignored, duplicate query ids rejected. During corpus evaluation
the query image is excluded from its own result list (leave-one-out).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import (
    EmptyResultError,
    GroundTruthError,
    InvalidArgumentError,
)
from .imaging import RgbRaster
from .retrieval import Index, ResultEntry, RetrievalResult, query, query_by_id


@dataclass(frozen=True)
class PrPoint:
    k: int
    precision: float
    recall: float


@dataclass(frozen=True)
class QueryEvaluation:
    query_id: str
    points: tuple[PrPoint, ...]
    candidates_examined: int
    candidates_ratio: float


@dataclass(frozen=True)
class EvalReport:
    mode: str
    ks: tuple[int, ...]
    per_query: tuple[QueryEvaluation, ...]
    macro: tuple[PrPoint, ...]
    mean_candidates_ratio: float


def precision_recall(result: RetrievalResult, relevant: set[str], k: int) -> PrPoint:
    """Precision and recall over the top min(k, len) retrieved entries."""
    if k < 1:
        raise InvalidArgumentError(f"cutoff k must be >= 1, got {k}")
    if not relevant:
        raise InvalidArgumentError("relevant set must be non-empty")
    if not result.entries:
        raise EmptyResultError("precision is undefined for an empty result")
    cutoff = min(k, len(result.entries))
    hits = sum(1 for e in result.entries[:cutoff] if e.image_id in relevant)
    return PrPoint(k=k, precision=hits / cutoff, recall=hits / len(relevant))


def pr_curve(result: RetrievalResult, relevant: set[str], cutoffs) -> list[PrPoint]:
    """precision_recall at each cutoff, ordered by k ascending."""
    ks = list(cutoffs)
    if not ks:
        raise InvalidArgumentError("cutoff list must be non-empty")
    return [precision_recall(result, relevant, k) for k in sorted(ks)]


def load_ground_truth(path: str | Path) -> dict[str, set[str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GroundTruthError(f"cannot read ground-truth file {path}: {exc}") from exc
    relevance: dict[str, set[str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "\t" not in stripped:
            raise GroundTruthError(
                f"line {lineno}: expected 'query_id<TAB>rel1,rel2,...'"
            )
        query_id, _, rest = stripped.partition("\t")
        query_id = query_id.strip()
        if not query_id:
            raise GroundTruthError(f"line {lineno}: empty query id")
        if query_id in relevance:
            raise GroundTruthError(f"line {lineno}: duplicate query id {query_id!r}")
        rel = {r.strip() for r in rest.split(",") if r.strip()}
        if not rel:
            raise GroundTruthError(f"line {lineno}: empty relevant set for {query_id!r}")
        relevance[query_id] = rel
    return relevance


def _drop_self(result: RetrievalResult, query_id: str, k: int) -> RetrievalResult:
    kept = [e for e in result.entries if e.image_id != query_id][:k]
    return RetrievalResult(
        entries=tuple(
            ResultEntry(image_id=e.image_id, distance=e.distance, rank=i + 1)
            for i, e in enumerate(kept)
        ),
        mode=result.mode,
        candidates_examined=result.candidates_examined,
    )


def evaluate_corpus(index: Index, queries, k_list, mode: str = "clustered") -> EvalReport:
    """Evaluate ranked retrieval over a set of queries.

    `queries` holds (query, relevant_ids) pairs where the query is either an
    indexed image id (evaluated leave-one-out from its stored features) or an
    RgbRaster. Macro averages weight every query equally; query failures
    propagate tagged with the offending query id.
    """
    queries = list(queries)
    if not queries:
        raise InvalidArgumentError("queries must be non-empty")
    ks = sorted(set(int(k) for k in k_list))
    if not ks or ks[0] < 1:
        raise InvalidArgumentError(f"cutoffs must all be >= 1, got {list(k_list)}")
    k_max = ks[-1]

    per_query: list[QueryEvaluation] = []
    n_entries = len(index.entries)
    for ref, relevant in queries:
        query_id = ref if isinstance(ref, str) else "<raster>"
        try:
            if isinstance(ref, str):
                raw = query_by_id(index, ref, k_max + 1, mode)
                result = _drop_self(raw, ref, k_max)
            elif isinstance(ref, RgbRaster):
                result = query(index, ref, k_max, mode)
            else:
                raise InvalidArgumentError(
                    f"query must be an image id or RgbRaster, got {type(ref).__name__}"
                )
            points = pr_curve(result, set(relevant), ks)
        except Exception as exc:
            raise type(exc)(f"query {query_id!r}: {exc}") from exc
        per_query.append(
            QueryEvaluation(
                query_id=query_id,
                points=tuple(points),
                candidates_examined=result.candidates_examined,
                candidates_ratio=result.candidates_examined / n_entries,
            )
        )

    macro = tuple(
        PrPoint(
            k=k,
            precision=sum(q.points[i].precision for q in per_query) / len(per_query),
            recall=sum(q.points[i].recall for q in per_query) / len(per_query),
        )
        for i, k in enumerate(ks)
    )
    mean_ratio = sum(q.candidates_ratio for q in per_query) / len(per_query)
    return EvalReport(
        mode=mode,
        ks=tuple(ks),
        per_query=tuple(per_query),
        macro=macro,
        mean_candidates_ratio=mean_ratio,
    )
