"""Greedy forward feature selection driven by information criteria.

Seven methods share one engine. Every method seeds the selected set with the
feature of maximal MI against the class, then repeatedly adds the candidate
maximizing the method's criterion:

- ``emifs``: relevance minus a redundancy sum whose coefficient |S|/|F|
  grows as the selected set grows (gradual redundancy up-weighting).
- ``mm_emifs``: max-of-min conditional MI of the class with the candidate
  given each selected feature.
- ``mm_emifs_beta``: interpretive variant; relevance minus |S|/|F| times the
  minimum marginal MI with the selected set.
- ``mifs``: fixed redundancy coefficient.
- ``mrmr``: redundancy coefficient 1/|S|.
- ``jmi``: like mrmr plus a class-conditioned redundancy correction, both
  weighted 1/|S|.
- ``jmim``: max-of-min joint MI of (candidate, selected) pairs with the class.

Ties always break toward the lowest feature index, so selection is
deterministic. All scores are raw (possibly negative); nothing is clamped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .data import DiscreteDataset
from .infotheory import (
    conditional_mutual_information,
    joint_pair_mi,
    mutual_information,
)

__all__ = [
    "METHODS",
    "SelectorConfig",
    "SelectionState",
    "SelectionResult",
    "compute_beta",
    "score_emifs",
    "score_linear_baseline",
    "score_maxmin",
    "greedy_select",
]

METHODS = ("emifs", "mm_emifs", "mm_emifs_beta", "mifs", "mrmr", "jmi", "jmim")

_LINEAR = ("mifs", "mrmr", "jmi")
_MAXMIN = ("mm_emifs", "mm_emifs_beta", "jmim")


@dataclass(frozen=True)
class SelectorConfig:
    """Method name, target feature count, and the criterion coefficients.

    ``beta_fixed`` only participates in mifs. ``gamma`` may only be set for
    jmi (where it overrides the default 1/|S| weight on the class-conditioned
    redundancy term); any other method rejects it. ``log_base`` rescales the
    information unit and cannot change the selected order.
    """

    method: str
    tau: int
    beta_fixed: float = 0.5
    gamma: float | None = None
    log_base: float = 2.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if not 0.0 <= self.beta_fixed <= 1.0:
            raise ValueError("beta_fixed must lie in [0, 1]")
        if self.gamma is not None:
            if self.method != "jmi":
                raise ValueError(
                    f"gamma is only meaningful for method 'jmi', not {self.method!r}"
                )
            if not 0.0 <= self.gamma <= 1.0:
                raise ValueError("gamma must lie in [0, 1]")


@dataclass
class SelectionState:
    """Selected/candidate bookkeeping plus lazy caches of information terms.

    Caches key on feature indices; symmetric quantities store one entry per
    unordered pair. The state never recomputes a term it has seen.
    """

    selected: list[int] = field(default_factory=list)
    candidates: set[int] = field(default_factory=set)
    cached_mi: dict[int, float] = field(default_factory=dict)
    cached_pairwise: dict[tuple[int, int], float] = field(default_factory=dict)
    cached_class_cmi: dict[tuple[int, int], float] = field(default_factory=dict)
    cached_cond_redundancy: dict[tuple[int, int], float] = field(default_factory=dict)
    cached_joint: dict[tuple[int, int], float] = field(default_factory=dict)
    log_base: float = 2.0

    @classmethod
    def fresh(cls, ds: DiscreteDataset, log_base: float = 2.0) -> "SelectionState":
        return cls(candidates=set(range(ds.n_features)), log_base=log_base)

    def relevance(self, ds: DiscreteDataset, j: int) -> float:
        """MI(feature j; class)."""
        v = self.cached_mi.get(j)
        if v is None:
            v = mutual_information(ds.column(j), ds.labels, base=self.log_base)
            self.cached_mi[j] = v
        return v

    def pairwise_mi(self, ds: DiscreteDataset, i: int, j: int) -> float:
        """MI(feature i; feature j)."""
        key = (i, j) if i <= j else (j, i)
        v = self.cached_pairwise.get(key)
        if v is None:
            v = mutual_information(ds.column(key[0]), ds.column(key[1]), base=self.log_base)
            self.cached_pairwise[key] = v
        return v

    def class_cmi(self, ds: DiscreteDataset, j: int, s: int) -> float:
        """I(class; feature j | feature s) -- the max-of-min scoring kernel."""
        key = (j, s)
        v = self.cached_class_cmi.get(key)
        if v is None:
            v = conditional_mutual_information(
                ds.labels, ds.column(j), ds.column(s), base=self.log_base
            )
            self.cached_class_cmi[key] = v
        return v

    def cond_redundancy(self, ds: DiscreteDataset, i: int, j: int) -> float:
        """I(feature i; feature j | class) -- jmi's conditional redundancy term."""
        key = (i, j) if i <= j else (j, i)
        v = self.cached_cond_redundancy.get(key)
        if v is None:
            v = conditional_mutual_information(
                ds.column(key[0]), ds.column(key[1]), ds.labels, base=self.log_base
            )
            self.cached_cond_redundancy[key] = v
        return v

    def joint_with_class(self, ds: DiscreteDataset, i: int, j: int) -> float:
        """I((feature i, feature j); class)."""
        key = (i, j) if i <= j else (j, i)
        v = self.cached_joint.get(key)
        if v is None:
            v = joint_pair_mi(ds.column(key[0]), ds.column(key[1]), ds.labels, base=self.log_base)
            self.cached_joint[key] = v
        return v


def compute_beta(selected_count: int, total_count: int) -> float:
    """Redundancy coefficient |S|/|F|: grows as the selected set fills."""
    if total_count < 1:
        raise ValueError("total feature count must be >= 1")
    if not 0 <= selected_count <= total_count:
        raise ValueError("selected count must lie in [0, total]")
    return selected_count / total_count


def _check_candidate(state: SelectionState, candidate: int) -> None:
    if candidate not in state.candidates:
        raise ValueError(f"feature {candidate} is not an available candidate")


def score_emifs(state: SelectionState, candidate: int, ds: DiscreteDataset) -> float:
    """Relevance minus |S|/|F|-weighted redundancy sum over the selected set."""
    _check_candidate(state, candidate)
    rel = state.relevance(ds, candidate)
    if not state.selected:
        return rel
    beta = compute_beta(len(state.selected), ds.n_features)
    redundancy = sum(state.pairwise_mi(ds, candidate, s) for s in state.selected)
    return rel - beta * redundancy


def score_linear_baseline(
    state: SelectionState,
    candidate: int,
    ds: DiscreteDataset,
    method: str,
    beta_fixed: float = 0.5,
    gamma: float | None = None,
) -> float:
    """Linear-combination criteria: mifs (fixed beta), mrmr (1/|S|), jmi."""
    if method not in _LINEAR:
        raise ValueError(f"unknown linear method {method!r}")
    _check_candidate(state, candidate)
    rel = state.relevance(ds, candidate)
    m = len(state.selected)
    if m == 0:
        return rel
    redundancy = sum(state.pairwise_mi(ds, candidate, s) for s in state.selected)
    if method == "mifs":
        return rel - beta_fixed * redundancy
    if method == "mrmr":
        return rel - redundancy / m
    conditional = sum(state.cond_redundancy(ds, candidate, s) for s in state.selected)
    g = (1.0 / m) if gamma is None else gamma
    return rel - redundancy / m + g * conditional


def score_maxmin(
    state: SelectionState, candidate: int, ds: DiscreteDataset, method: str
) -> float:
    """Max-of-min criteria; requires a non-empty selected set to minimize over."""
    if method not in _MAXMIN:
        raise ValueError(f"unknown max-min method {method!r}")
    _check_candidate(state, candidate)
    if not state.selected:
        raise ValueError("max-min scoring needs at least one selected feature")
    if method == "mm_emifs":
        return min(state.class_cmi(ds, candidate, s) for s in state.selected)
    if method == "jmim":
        return min(state.joint_with_class(ds, candidate, s) for s in state.selected)
    beta = compute_beta(len(state.selected), ds.n_features)
    min_red = min(state.pairwise_mi(ds, candidate, s) for s in state.selected)
    return state.relevance(ds, candidate) - beta * min_red


@dataclass(frozen=True)
class SelectionResult:
    """Selected feature indices in order, per-step scores, and the per-step
    redundancy coefficient actually applied (empty for coefficient-free
    methods; starts at the first step that scores against a selected set)."""

    order: tuple[int, ...]
    scores: tuple[float, ...]
    beta_trajectory: tuple[float, ...]
    method: str
    tau: int

    def __post_init__(self):
        if len(set(self.order)) != len(self.order):
            raise ValueError("selection order contains duplicates")
        if len(self.scores) != len(self.order):
            raise ValueError("scores length does not match order")


def _step_score(state: SelectionState, candidate: int, ds: DiscreteDataset,
                config: SelectorConfig) -> float:
    if config.method == "emifs":
        return score_emifs(state, candidate, ds)
    if config.method in _LINEAR:
        return score_linear_baseline(
            state, candidate, ds, config.method, config.beta_fixed, config.gamma
        )
    return score_maxmin(state, candidate, ds, config.method)


def _step_coefficient(config: SelectorConfig, n_selected: int, n_features: int):
    if config.method in ("emifs", "mm_emifs_beta"):
        return compute_beta(n_selected, n_features)
    if config.method == "mifs":
        return config.beta_fixed
    if config.method in ("mrmr", "jmi"):
        return 1.0 / n_selected
    return None


def greedy_select(ds: DiscreteDataset, config: SelectorConfig) -> SelectionResult:
    """Run one greedy forward selection to min(tau, n_features) features.

    The first feature is always the relevance argmax; later steps maximize
    the configured criterion. Deterministic: candidates are scanned in index
    order and ties keep the lowest index.
    """
    if ds.n_features < 1 or ds.n_samples < 2:
        raise ValueError("dataset must have at least 1 feature and 2 samples")
    state = SelectionState.fresh(ds, log_base=config.log_base)
    target = min(config.tau, ds.n_features)

    order: list[int] = []
    scores: list[float] = []
    trajectory: list[float] = []
    while len(order) < target:
        best_j, best_score = -1, None
        if not state.selected:
            for j in sorted(state.candidates):
                s = state.relevance(ds, j)
                if best_score is None or s > best_score:
                    best_j, best_score = j, s
        else:
            coeff = _step_coefficient(config, len(state.selected), ds.n_features)
            if coeff is not None:
                trajectory.append(coeff)
            for j in sorted(state.candidates):
                s = _step_score(state, j, ds, config)
                if best_score is None or s > best_score:
                    best_j, best_score = j, s
        state.candidates.discard(best_j)
        state.selected.append(best_j)
        order.append(best_j)
        scores.append(best_score)

    return SelectionResult(
        order=tuple(order),
        scores=tuple(scores),
        beta_trajectory=tuple(trajectory),
        method=config.method,
        tau=config.tau,
    )
