"""Classification areas, node correctness, ideal-score distance and relative gains."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence


class Label(str, Enum):
    TP = "TP"
    FP = "FP"
    TN = "TN"
    FN = "FN"


@dataclass(frozen=True)
class ScoredPair:
    g_label: str
    h_label: str
    score: float

    @property
    def same_class(self) -> bool:
        return self.g_label == self.h_label


def label(pair: ScoredPair, k: float) -> Label:
    predicted = pair.score >= k
    if pair.same_class:
        return Label.TP if predicted else Label.FN
    return Label.FP if predicted else Label.TN


@dataclass(frozen=True)
class OperatingPoint:
    k: float
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def precision(self) -> float:
        # no predicted positives: precision taken as 1
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def fpr(self) -> float:
        # no negatives: FPR taken as 0
        return self.fp / (self.fp + self.tn) if self.fp + self.tn else 0.0


def operating_point(pairs: Sequence[ScoredPair], k: float) -> OperatingPoint:
    counts = {x: 0 for x in Label}
    for p in pairs:
        counts[label(p, k)] += 1
    return OperatingPoint(k, counts[Label.TP], counts[Label.FP], counts[Label.TN], counts[Label.FN])


def threshold_sweep(pairs: Sequence[ScoredPair], k_step: float = 0.01) -> list[OperatingPoint]:
    """Operating points at ``k = 0, k_step, ..., 1`` followed by a closing point above every score."""
    if not pairs:
        raise ValueError("need at least one scored pair")
    n_steps = round(1 / k_step)
    points = [operating_point(pairs, i / n_steps) for i in range(n_steps + 1)]
    points.append(operating_point(pairs, float("inf")))
    return points


def pr_roc(pairs: Sequence[ScoredPair], k_step: float = 0.01) -> tuple[float, float]:
    """Rectangle-sum AUPR and AUROC over an ascending threshold sweep.

    Each step between consecutive thresholds adds ``precision * |dRecall|``
    (precision at the lower threshold) and ``TPR * |dFPR|`` (TPR at the
    higher threshold).
    """
    points = threshold_sweep(pairs, k_step)
    aupr = auroc = 0.0
    for lo, hi in zip(points, points[1:]):
        aupr += lo.precision * abs(lo.recall - hi.recall)
        auroc += hi.recall * abs(lo.fpr - hi.fpr)
    return aupr, auroc


def node_correctness(f, truth) -> float:
    f = f.mapping if hasattr(f, "mapping") else f
    truth = truth.mapping if hasattr(truth, "mapping") else truth
    if len(f) != len(truth):
        raise ValueError("alignments cover different domains")
    if not f:
        return 0.0
    return sum(a == b for a, b in zip(f, truth)) / len(f)


def dis(produced: Sequence[float], ideal: Sequence[float]) -> float:
    """Sum over noise levels of ``|S_p - S_i| / max(S_p, S_i)``."""
    if len(produced) != len(ideal):
        raise ValueError("curves must cover the same noise levels")
    total = 0.0
    for sp_, si in zip(produced, ideal):
        m = max(sp_, si)
        if m > 0:
            total += abs(sp_ - si) / m
    return total


def gain_higher_better(s_g: float, s_d: float) -> float:
    """Relative gain in percent of the first score over the second; larger is better."""
    m = min(s_g, s_d)
    if m <= 0:
        raise ValueError("gain undefined for a non-positive minimum")
    return (s_g - s_d) / m * 100.0


def gain_lower_better(s_g: float, s_d: float) -> float:
    """Relative gain in percent of the first score over the second; smaller is better."""
    m = min(s_g, s_d)
    if m <= 0:
        raise ValueError("gain undefined for a non-positive minimum")
    return (s_d - s_g) / m * 100.0
