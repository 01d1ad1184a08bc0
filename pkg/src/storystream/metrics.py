"""Clustering-quality metrics and the per-window evaluation protocol.

B-cubed is computed directly from the contingency counts; AMI and ARI
delegate to scikit-learn (the tests check all three against brute-force
evaluations of their defining formulas). Identical partitions short-circuit
to exactly 1.0.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

from sklearn.metrics import adjusted_mutual_info_score, adjusted_rand_score

log = logging.getLogger(__name__)


@dataclass
class LabeledPartition:
    """(item_id, predicted cluster id, gold cluster id) triples."""

    items: list[tuple[str, str, str]]

    def __post_init__(self):
        ids = [i for i, _, _ in self.items]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate item ids in partition")

    def columns(self) -> tuple[list[str], list[str]]:
        return [p for _, p, _ in self.items], [g for _, _, g in self.items]


def _partitions_identical(pred: list[str], gold: list[str]) -> bool:
    fwd: dict[str, str] = {}
    bwd: dict[str, str] = {}
    for p, g in zip(pred, gold):
        if fwd.setdefault(p, g) != g or bwd.setdefault(g, p) != p:
            return False
    return True


def b_cubed(partition: LabeledPartition) -> tuple[float, float, float]:
    """Per-item precision/recall averaged over items; F1 is their harmonic mean."""
    pred, gold = partition.columns()
    n = len(pred)
    if n == 0:
        raise ValueError("empty partition")
    pred_sizes = Counter(pred)
    gold_sizes = Counter(gold)
    joint = Counter(zip(pred, gold))
    precision = sum(joint[(p, g)] / pred_sizes[p] for p, g in zip(pred, gold)) / n
    recall = sum(joint[(p, g)] / gold_sizes[g] for p, g in zip(pred, gold)) / n
    f1 = 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def ami(partition: LabeledPartition, average_method: str = "arithmetic") -> float:
    """Adjusted mutual information (permutation-model chance correction)."""
    pred, gold = partition.columns()
    if len(pred) < 2:
        raise ValueError("AMI needs at least 2 items")
    if _partitions_identical(pred, gold):
        return 1.0
    return float(adjusted_mutual_info_score(gold, pred, average_method=average_method))


def ari(partition: LabeledPartition) -> float:
    """Adjusted Rand index over pair-agreement counts."""
    pred, gold = partition.columns()
    if len(pred) < 2:
        raise ValueError("ARI needs at least 2 items")
    if _partitions_identical(pred, gold):
        return 1.0
    return float(adjusted_rand_score(gold, pred))


POLICY_SINGLETONS = "singletons"
POLICY_EXCLUDE = "exclude"


@dataclass
class EvalRow:
    window_pane: int
    n_articles: int
    n_pred_clusters: int
    n_gold_clusters: int
    b3_p: float
    b3_r: float
    b3_f1: float
    ami: float
    ari: float


def windowed_eval(reports, article_meta: dict[str, tuple[int, str]],
                  window_slides: int, policy: str = POLICY_SINGLETONS,
                  ami_average_method: str = "arithmetic"):
    """Score every sliding window and average over windows.

    ``article_meta`` maps article id to (arrival pane, gold label) for every
    ingested article. Under the default policy, in-window articles that are
    still unassigned count as singleton predicted clusters; the alternative
    drops them. Windows with fewer than 2 scorable articles are skipped.

    Returns (rows, averages) where averages is a dict with the unweighted
    means of b3_p, b3_r, b3_f1, ami, and ari over the scored windows.
    """
    if policy not in (POLICY_SINGLETONS, POLICY_EXCLUDE):
        raise ValueError(f"unknown policy {policy!r}")
    assigned: dict[str, str] = {}
    rejected: set[str] = set()
    rows: list[EvalRow] = []
    for report in sorted(reports, key=lambda r: r.pane):
        for decision in report.assignments:
            if decision.chosen_story is not None:
                assigned[decision.article_id] = decision.chosen_story
        for event in report.new_stories:
            for member in event["members"]:
                assigned[member] = event["story_id"]
        rejected.update(report.rejected_articles)
        pane = report.pane
        lo = pane - window_slides + 1
        items = []
        for article_id in sorted(article_meta):
            arrival, gold = article_meta[article_id]
            if article_id in rejected or not (lo <= arrival <= pane):
                continue
            story = assigned.get(article_id)
            if story is None:
                if policy == POLICY_EXCLUDE:
                    continue
                story = f"__unassigned__{article_id}"
            items.append((article_id, story, gold))
        if len(items) < 2:
            log.info("window at pane %d has %d scorable article(s); skipped",
                     pane, len(items))
            continue
        partition = LabeledPartition(items)
        p, r, f1 = b_cubed(partition)
        rows.append(EvalRow(
            window_pane=pane,
            n_articles=len(items),
            n_pred_clusters=len({s for _, s, _ in items}),
            n_gold_clusters=len({g for _, _, g in items}),
            b3_p=p, b3_r=r, b3_f1=f1,
            ami=ami(partition, ami_average_method),
            ari=ari(partition),
        ))
    averages = {}
    if rows:
        for name in ("b3_p", "b3_r", "b3_f1", "ami", "ari"):
            averages[name] = sum(getattr(row, name) for row in rows) / len(rows)
    return rows, averages
