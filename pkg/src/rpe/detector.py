"""Streaming anomaly detector built on robust window projection.

Training fits a trajectory-subspace model to the recent past and replays the
training windows to seed a memory of residual magnitudes. Each arriving value
then gets one score record:

1. append the value and take the newest window of the history buffer;
2. robustly project the window onto the basis, which excludes the most
   suspect coordinates (possibly including the new value itself) before
   solving for coefficients;
3. the residual is the new value minus its reconstruction from the last basis
   row, and the score is the fraction of remembered residual magnitudes that
   fall strictly below it (computed before the new magnitude is remembered);
4. scores above the threshold flag the stamp, and optionally the stored value
   is replaced by its reconstruction so one anomaly cannot contaminate the
   windows of its successors;
5. periodically the model is re-fitted to the accumulated history until the
   buffer outgrows a stop length, after which the basis is considered stable.

The residual memory persists across re-fits. Scores compare a residual with
the past, so they are meaningful immediately after training and invariant to
the residual scale.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import NotTrained, SeriesTooShort
from .projection import robust_projection, simple_projection
from .subspace import DEFAULT_RANK_CAP, ESTIMATORS, SubspaceModel
from .trajectory import build_trajectory, series_values


@dataclass
class DetectorConfig:
    """Knobs for training and streaming.

    retrain_stop_len defaults to 10 * M1: once the history buffer reaches it,
    periodic re-fitting stops. memory_cap bounds the residual memory with
    oldest-first eviction; None keeps everything.
    """

    M1: int = 30
    n_s: int = 5
    cdf_threshold: float = 0.95
    retrain_every: int = 100
    t_max: int = 300
    retrain_stop_len: int | None = None
    estimator: str = "simple"
    replace_anomalous_values: bool = True
    memory_cap: int | None = None

    def __post_init__(self):
        if self.M1 < 2:
            raise ValueError("M1 must be at least 2")
        if not 0 <= self.n_s < self.M1:
            raise ValueError("n_s must lie in [0, M1)")
        if not 0.0 < self.cdf_threshold < 1.0:
            raise ValueError("cdf_threshold must lie strictly between 0 and 1")
        if self.retrain_every < 1:
            raise ValueError("retrain_every must be positive")
        if self.t_max < 2 * self.M1:
            raise ValueError("t_max must allow at least two windows of history")
        if self.retrain_stop_len is None:
            self.retrain_stop_len = 10 * self.M1
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.memory_cap is not None and self.memory_cap < 1:
            raise ValueError("memory_cap must be positive when set")

    @property
    def rank_cap(self) -> int:
        # Keeps the robust budget feasible: rank + n_s never exceeds M1.
        return min(DEFAULT_RANK_CAP, self.M1 - self.n_s)


class ResidualMemory:
    """Multiset of past residual magnitudes with strict-less empirical CDF."""

    def __init__(self, cap: int | None = None):
        self._sorted: list[float] = []
        self._order: deque[float] = deque()
        self._cap = cap

    def append(self, value: float) -> None:
        value = float(value)
        insort(self._sorted, value)
        self._order.append(value)
        if self._cap is not None and len(self._order) > self._cap:
            oldest = self._order.popleft()
            del self._sorted[bisect_left(self._sorted, oldest)]

    def cdf(self, value: float) -> float:
        """Fraction of remembered magnitudes strictly below value."""
        if not self._sorted:
            return 0.0
        return bisect_left(self._sorted, float(value)) / len(self._sorted)

    def __len__(self) -> int:
        return len(self._order)

    def values(self) -> tuple[float, ...]:
        return tuple(self._order)


@dataclass(frozen=True)
class ScoreRecord:
    """One scored time stamp.

    index is the absolute ordinal of the sample in the stream, counting the
    training samples first. replaced_value is the reconstruction written back
    into the history buffer, present only when the stamp was flagged and
    replacement is enabled.
    """

    index: int
    residual: float
    abs_residual: float
    cdf_score: float
    flagged: bool
    replaced_value: float | None = None


@dataclass
class DetectorState:
    config: DetectorConfig
    model: SubspaceModel | None
    memory: ResidualMemory
    history: list[float]
    counter: int = 0
    samples_seen: int = 0
    projection: str = "robust"  # "robust" or "simple"
    replacements: dict[int, float] = field(default_factory=dict)


def _fit_model(values: np.ndarray, config: DetectorConfig) -> SubspaceModel:
    estimator = ESTIMATORS[config.estimator]
    return estimator(values, config.M1, rank_cap=config.rank_cap)


def _project(model: SubspaceModel, window: np.ndarray, config: DetectorConfig,
             projection: str) -> np.ndarray:
    if projection == "simple" or config.n_s == 0:
        a_hat, _ = simple_projection(model.U, window)
        return a_hat
    return robust_projection(model.U, window, config.n_s).a_hat


def _seed_memory(state: DetectorState) -> None:
    """Replay every complete training window through the scoring steps."""
    model = state.model
    windows = build_trajectory(np.asarray(state.history), state.config.M1).data
    u_last = model.U[-1, :]
    for j in range(windows.shape[1]):
        window = windows[:, j]
        a_hat = _project(model, window, state.config, state.projection)
        state.memory.append(abs(window[-1] - float(a_hat @ u_last)))


def train(t_train, config: DetectorConfig | None = None,
          projection: str = "robust") -> DetectorState:
    """Fit the subspace model and seed the residual memory.

    Only the most recent t_max training samples are kept. Requires at least
    2 * M1 samples.
    """
    config = config if config is not None else DetectorConfig()
    if projection not in ("robust", "simple"):
        raise ValueError("projection must be 'robust' or 'simple'")
    values = series_values(t_train)
    if values.size < 2 * config.M1:
        raise SeriesTooShort(
            f"training needs at least {2 * config.M1} samples, got {values.size}"
        )
    history = values[-config.t_max:].astype(float).tolist()
    state = DetectorState(
        config=config,
        model=_fit_model(np.asarray(history), config),
        memory=ResidualMemory(cap=config.memory_cap),
        history=history,
        counter=0,
        samples_seen=int(values.size),
        projection=projection,
    )
    _seed_memory(state)
    return state


def warm_start(model: SubspaceModel, t_train, config: DetectorConfig | None = None,
               projection: str = "robust") -> DetectorState:
    """Build a streaming state around an existing model.

    The training series seeds the history buffer and residual memory, but the
    model itself is taken as given rather than re-fitted. Used when a model
    was persisted earlier and detection resumes on new data.
    """
    config = config if config is not None else DetectorConfig()
    if model.M1 != config.M1:
        raise ValueError(f"model window {model.M1} does not match config M1 {config.M1}")
    values = series_values(t_train)
    if values.size < config.M1:
        raise SeriesTooShort(
            f"warm start needs at least {config.M1} samples, got {values.size}"
        )
    state = DetectorState(
        config=config,
        model=model,
        memory=ResidualMemory(cap=config.memory_cap),
        history=values[-config.t_max:].astype(float).tolist(),
        counter=0,
        samples_seen=int(values.size),
        projection=projection,
    )
    _seed_memory(state)
    return state


def step(state: DetectorState, value: float) -> ScoreRecord:
    """Score one arriving value and advance the state."""
    if state.model is None:
        raise NotTrained("call train() before step()")
    config = state.config
    state.history.append(float(value))
    state.counter += 1
    index = state.samples_seen
    state.samples_seen += 1

    window = np.asarray(state.history[-config.M1:])
    a_hat = _project(state.model, window, config, state.projection)
    reconstruction = float(a_hat @ state.model.U[-1, :])
    residual = float(value) - reconstruction
    magnitude = abs(residual)

    cdf_score = state.memory.cdf(magnitude)  # before remembering this one
    state.memory.append(magnitude)

    flagged = cdf_score > config.cdf_threshold
    replaced_value = None
    if flagged and config.replace_anomalous_values:
        replaced_value = reconstruction
        state.history[-1] = reconstruction
        state.replacements[index] = reconstruction

    if state.counter % config.retrain_every == 0 and len(state.history) < config.retrain_stop_len:
        state.history = state.history[-config.t_max:]
        state.model = _fit_model(np.asarray(state.history), config)

    return ScoreRecord(
        index=index,
        residual=residual,
        abs_residual=magnitude,
        cdf_score=cdf_score,
        flagged=flagged,
        replaced_value=replaced_value,
    )


def score_series(state: DetectorState, t) -> list[ScoreRecord]:
    """Run step() over every value of the series in order."""
    values = series_values(t) if not isinstance(t, (list, tuple)) else np.asarray(t, dtype=float)
    return [step(state, float(v)) for v in values]
