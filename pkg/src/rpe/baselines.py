"""Reference detectors sharing the streaming step interface.

Four methods, one record shape:

* ``rpe``: the robust-projection detector from the detector module.
* ``spe``: the same pipeline with the plain projection, so a corrupted
  window coordinate leaks into the coefficients. Equals rpe with n_s = 0.
* ``iid``: Gaussian model over a ring buffer of recent values; the score is
  one minus the two-sided p-value of the new value.
* ``ar``: fixed-order autoregression fitted by least squares; the residual
  is the one-step-ahead prediction error.

Every adapter exposes fit(values) and step(value) -> ScoreRecord so the
evaluation harness can drive them interchangeably.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import detector
from .detector import DetectorConfig, DetectorState, ResidualMemory, ScoreRecord
from .errors import SeriesTooShort, SingularNormalEquations
from .trajectory import series_values

IID_BUFFER_LEN = 100
AR_WINDOW = 30
AR_RETRAIN_EVERY = 100
AR_RIDGE = 1e-8


def spe_train(t_train, config: DetectorConfig | None = None) -> DetectorState:
    """Train the detector pipeline with the plain projection."""
    return detector.train(t_train, config, projection="simple")


def spe_step(state: DetectorState, value: float) -> ScoreRecord:
    """Alias of the shared step; the state already carries the projection."""
    return detector.step(state, value)


@dataclass
class IidState:
    buffer: deque = field(default_factory=lambda: deque(maxlen=IID_BUFFER_LEN))


def iid_train(t_train, buffer_len: int = IID_BUFFER_LEN) -> IidState:
    """Seed the ring buffer with the most recent training values."""
    values = series_values(t_train)
    if values.size == 0:
        raise SeriesTooShort("iid training needs at least one sample")
    state = IidState(buffer=deque(maxlen=buffer_len))
    for v in values[-buffer_len:]:
        state.buffer.append(float(v))
    return state


def iid_step(state: IidState, value: float) -> float:
    """Score in [0, 1]: one minus the two-sided Gaussian p-value.

    Zero buffer variance degenerates to 1 when the value differs from the
    buffer mean and 0 when it equals it. The value enters the buffer after
    scoring, evicting the oldest entry once the buffer is full.
    """
    if not state.buffer:
        raise SeriesTooShort("iid buffer is empty")
    buf = np.asarray(state.buffer)
    mean = float(buf.mean())
    std = float(buf.std())
    v = float(value)
    if std == 0.0:
        score = 0.0 if v == mean else 1.0
    else:
        score = math.erf(abs(v - mean) / (std * math.sqrt(2.0)))
    state.buffer.append(v)
    return score


@dataclass
class ArState:
    weights: np.ndarray
    history: list[float]
    window: int = AR_WINDOW
    retrain_every: int = AR_RETRAIN_EVERY
    counter: int = 0


def _fit_ar_weights(values: np.ndarray, window: int) -> np.ndarray:
    """Least-squares one-step predictor with no intercept.

    A rank-deficient design falls back to ridge with a small damping term
    rather than failing.
    """
    rows = np.lib.stride_tricks.sliding_window_view(values[:-1], window)
    targets = values[window:]
    try:
        weights, _, rank, _ = np.linalg.lstsq(rows, targets, rcond=None)
        if rank < window:
            raise SingularNormalEquations(f"design rank {rank} below window {window}")
        return weights
    except SingularNormalEquations:
        gram = rows.T @ rows + AR_RIDGE * np.eye(window)
        return np.linalg.solve(gram, rows.T @ targets)


def ar_train(t_train, window: int = AR_WINDOW,
             retrain_every: int = AR_RETRAIN_EVERY) -> ArState:
    values = series_values(t_train)
    if values.size < 2 * window:
        raise SeriesTooShort(
            f"ar training needs at least {2 * window} samples, got {values.size}"
        )
    return ArState(
        weights=_fit_ar_weights(values, window),
        history=values.astype(float).tolist(),
        window=window,
        retrain_every=retrain_every,
    )


def ar_step(state: ArState, value: float) -> float:
    """Signed one-step prediction residual; refits periodically."""
    context = np.asarray(state.history[-state.window:])
    residual = float(value) - float(state.weights @ context)
    state.history.append(float(value))
    state.counter += 1
    if state.counter % state.retrain_every == 0:
        state.weights = _fit_ar_weights(np.asarray(state.history), state.window)
    return residual


# Streaming adapters: fit(values) then step(value) -> ScoreRecord.

class RpeDetector:
    """Streaming adapter around the robust-projection detector."""

    method = "rpe"
    _projection = "robust"

    def __init__(self, config: DetectorConfig | None = None):
        self.config = config if config is not None else DetectorConfig()
        self.state: DetectorState | None = None

    def fit(self, values) -> "RpeDetector":
        self.state = detector.train(values, self.config, projection=self._projection)
        return self

    def step(self, value: float) -> ScoreRecord:
        return detector.step(self.state, value)


class SpeDetector(RpeDetector):
    method = "spe"
    _projection = "simple"


class IidDetector:
    """Adapter reporting the probability-style score in cdf_score."""

    method = "iid"

    def __init__(self, threshold: float = 0.95, buffer_len: int = IID_BUFFER_LEN):
        self.threshold = threshold
        self.buffer_len = buffer_len
        self.state: IidState | None = None
        self._index = 0

    def fit(self, values) -> "IidDetector":
        self.state = iid_train(values, buffer_len=self.buffer_len)
        self._index = len(series_values(values))
        return self

    def step(self, value: float) -> ScoreRecord:
        buf = np.asarray(self.state.buffer)
        residual = float(value) - float(buf.mean())
        score = iid_step(self.state, value)
        record = ScoreRecord(
            index=self._index,
            residual=residual,
            abs_residual=abs(residual),
            cdf_score=score,
            flagged=score > self.threshold,
        )
        self._index += 1
        return record


class ArDetector:
    """Adapter wrapping the autoregressive residual in the shared record.

    cdf_score ranks the residual magnitude against past magnitudes, seeded
    from the training residuals, mirroring the detector's memory semantics.
    """

    method = "ar"

    def __init__(self, threshold: float = 0.95, window: int = AR_WINDOW,
                 retrain_every: int = AR_RETRAIN_EVERY):
        self.threshold = threshold
        self.window = window
        self.retrain_every = retrain_every
        self.state: ArState | None = None
        self.memory = ResidualMemory()
        self._index = 0

    def fit(self, values) -> "ArDetector":
        self.state = ar_train(values, window=self.window, retrain_every=self.retrain_every)
        train_values = np.asarray(self.state.history)
        rows = np.lib.stride_tricks.sliding_window_view(train_values[:-1], self.window)
        residuals = train_values[self.window:] - rows @ self.state.weights
        self.memory = ResidualMemory()
        for r in residuals:
            self.memory.append(abs(float(r)))
        self._index = train_values.size
        return self

    def step(self, value: float) -> ScoreRecord:
        residual = ar_step(self.state, value)
        magnitude = abs(residual)
        cdf = self.memory.cdf(magnitude)
        self.memory.append(magnitude)
        record = ScoreRecord(
            index=self._index,
            residual=residual,
            abs_residual=magnitude,
            cdf_score=cdf,
            flagged=cdf > self.threshold,
        )
        self._index += 1
        return record


def make_detector(method: str, config: DetectorConfig | None = None):
    """Factory over the four streaming detectors."""
    if method == "rpe":
        return RpeDetector(config)
    if method == "spe":
        return SpeDetector(config)
    threshold = config.cdf_threshold if config is not None else 0.95
    if method == "iid":
        return IidDetector(threshold=threshold)
    if method == "ar":
        return ArDetector(threshold=threshold)
    raise ValueError(f"unknown method {method!r}")
