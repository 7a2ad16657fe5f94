"""scikit-learn style wrappers for batch use.

``LinkSpectra`` turns complexes (or graphs) into expansion features;
``GarlandCertifier`` fits a certificate to one complex and predicts its verdict.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_class, check_complex, check_degree, check_graph_or_complex
from .certify import certify_descent, certify_local
from .complex import WeightedGraph
from .spectral import expander_profile, min_link_profiles


class LinkSpectra(BaseEstimator, TransformerMixin):
    """Worst ``[one-sided, two-sided]`` expansion over the ``j``-links of each input.

    Graphs are measured directly; ``j = -1`` measures a complex's 1-skeleton.
    """

    def __init__(self, j: int = 0, solver: str = "jacobi"):
        self.j = j
        self.solver = solver

    def fit(self, X, y=None):
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        rows = []
        for item in X:
            obj = check_graph_or_complex(item)
            if isinstance(obj, WeightedGraph):
                prof = expander_profile(obj, self.solver)
                rows.append([prof.one_sided, prof.two_sided])
            else:
                one = min_link_profiles(obj, None, self.j, "one", self.solver)
                two = min_link_profiles(obj, None, self.j, "two", self.solver)
                rows.append([one.value, two.value])
        return np.asarray(rows, dtype=float).reshape(len(rows), 2)

    def get_feature_names_out(self, input_features=None):
        return np.array(["one_sided", "two_sided"], dtype=object)


class GarlandCertifier(BaseEstimator):
    """Fit a vanishing certificate for degree ``k`` and a Banach class."""

    def __init__(self, k: int = 1, banach_class="hilbert", criterion: str = "local",
                 sided: str = "two", action=None, solver: str = "jacobi"):
        self.k = k
        self.banach_class = banach_class
        self.criterion = criterion
        self.sided = sided
        self.action = action
        self.solver = solver

    def fit(self, X, y=None):
        cx = check_complex(X)
        k = check_degree(self.k, cx)
        cls = check_class(self.banach_class)
        if self.criterion == "local":
            cert = certify_local(cx, self.action, k, cls, self.solver)
        elif self.criterion == "descent":
            cert = certify_descent(cx, self.action, k, cls, self.sided, self.solver)
        else:
            raise ValueError(f"criterion must be 'local' or 'descent', got {self.criterion!r}")
        self.certificate_ = cert
        self.measured_ = cert.measured
        self.threshold_ = cert.threshold
        self.margin_ = cert.margin
        return self

    def predict(self, X=None) -> bool:
        """Verdict of the fitted certificate; refits first if ``X`` is given."""
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "certificate_")
        return bool(self.certificate_.certified)
