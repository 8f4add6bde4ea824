"""scikit-learn style transformers over batches of images or volumes.

These wrap the functional core so the encodings drop into standard
pipelines (`get_params`/`set_params`/`clone` all work; `fit` learns only
dataset-wide ranges where a common grid is needed).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import persistence
from .encode import persistence_image, persistence_landscape, to_channels
from .field import load_grid_field
from .hierarchy import build_hierarchy, thresholds_from_fractions
from .morse import segment


def _as_sample_list(X):
    if isinstance(X, np.ndarray) and X.ndim >= 3:
        return [X[i] for i in range(X.shape[0])]
    samples = [np.asarray(x, dtype=np.float64) for x in X]
    if not samples:
        raise ValueError("X must contain at least one sample")
    return samples


def _sample_diagram(sample, filtration):
    f = load_grid_field(sample)
    pairs = (
        persistence.sublevel_pairs(f)
        if filtration == "sublevel"
        else persistence.superlevel_pairs(f)
    )
    return persistence.diagram(pairs)


class ChannelAugmenter(TransformerMixin, BaseEstimator):
    """Multi-channel persistence augmentation of grayscale images or volumes.

    Parameters
    ----------
    fractions : sequence of float, default (0.3, 0.65, 1.0)
        Pair fractions converted to persistence thresholds per sample.
        Ignored when `epsilons` is given.
    epsilons : sequence of float or None
        Explicit thresholds shared by all samples.
    include_region_ids : bool, default False
        Append a raw region-id channel per level (debugging only).

    `transform` maps (n_samples, H, W[, D]) to (n_samples, channels, H, W[, D])
    with channels = 2 * (len(thresholds) + 1).
    """

    def __init__(self, fractions=(0.3, 0.65, 1.0), epsilons=None, include_region_ids=False):
        self.fractions = fractions
        self.epsilons = epsilons
        self.include_region_ids = include_region_ids

    def fit(self, X, y=None):
        samples = _as_sample_list(X)
        self.n_features_in_ = samples[0].size
        self.sample_shape_ = samples[0].shape
        return self

    def transform(self, X):
        check_is_fitted(self, "sample_shape_")
        out = [self._augment_one(s) for s in _as_sample_list(X)]
        return np.stack(out, axis=0)

    def _augment_one(self, sample):
        from .hierarchy import ThresholdSchedule

        f = load_grid_field(sample)
        sub = persistence.sublevel_pairs(f)
        sup = persistence.superlevel_pairs(f)
        if self.epsilons is not None:
            schedule = ThresholdSchedule(self.epsilons)
        else:
            schedule = thresholds_from_fractions(sub, sup, self.fractions)
        h = build_hierarchy(f, schedule, base=segment(f), sub=sub, sup=sup)
        return to_channels(h, include_region_ids=self.include_region_ids).data


class PersistenceImager(TransformerMixin, BaseEstimator):
    """Gaussian persistence images of per-sample diagrams, flattened.

    `fit` derives a common birth/persistence window from the training
    diagrams (bounding box expanded by 3 sigma) unless `ranges` is given,
    so transformed vectors are comparable across samples.
    """

    def __init__(self, resolution=20, sigma=0.1, filtration="sublevel", ranges=None):
        self.resolution = resolution
        self.sigma = sigma
        self.filtration = filtration
        self.ranges = ranges

    def fit(self, X, y=None):
        samples = _as_sample_list(X)
        if self.ranges is not None:
            self.birth_range_, self.pers_range_ = self.ranges
            return self
        births, perss = [], []
        for s in samples:
            pts = _sample_diagram(s, self.filtration).points
            if len(pts):
                births.append(pts[:, 0])
                perss.append(pts[:, 1] - pts[:, 0])
        if births:
            b = np.concatenate(births)
            p = np.concatenate(perss)
            pad = 3.0 * self.sigma
            self.birth_range_ = (float(b.min() - pad), float(b.max() + pad))
            self.pers_range_ = (float(p.min() - pad), float(p.max() + pad))
        else:
            self.birth_range_ = (0.0, 1.0)
            self.pers_range_ = (0.0, 1.0)
        return self

    def transform(self, X):
        check_is_fitted(self, "birth_range_")
        rows = []
        for s in _as_sample_list(X):
            d = _sample_diagram(s, self.filtration)
            pi = persistence_image(
                d,
                resolution=self.resolution,
                sigma=self.sigma,
                ranges=(self.birth_range_, self.pers_range_),
            )
            rows.append(pi.grid.ravel())
        return np.stack(rows, axis=0)


class PersistenceLandscaper(TransformerMixin, BaseEstimator):
    """Persistence landscapes (top `layers` functions on `points` samples), flattened."""

    def __init__(self, layers=5, points=100, filtration="sublevel", t_range=None):
        self.layers = layers
        self.points = points
        self.filtration = filtration
        self.t_range = t_range

    def fit(self, X, y=None):
        if self.t_range is not None:
            self.t_range_ = tuple(self.t_range)
            return self
        lo, hi = np.inf, -np.inf
        for s in _as_sample_list(X):
            pts = _sample_diagram(s, self.filtration).points
            if len(pts):
                lo = min(lo, float(pts[:, 0].min()))
                hi = max(hi, float(pts[:, 1].max()))
        self.t_range_ = (lo, hi) if lo < hi else (0.0, 1.0)
        return self

    def transform(self, X):
        check_is_fitted(self, "t_range_")
        rows = []
        for s in _as_sample_list(X):
            d = _sample_diagram(s, self.filtration)
            pl = persistence_landscape(d, layers=self.layers, points=self.points, t_range=self.t_range_)
            rows.append(pl.matrix.ravel())
        return np.stack(rows, axis=0)
