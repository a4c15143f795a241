"""Estimator-style facade: ``fit`` computes the invariants, ``predict`` classifies forms.

Follows the scikit-learn conventions (constructor stores parameters only,
``fit`` returns ``self``, fitted attributes end with ``_``) without depending
on scikit-learn.
"""
from __future__ import annotations

import inspect
from typing import Dict, Iterable, List, Mapping, Optional, Union

from .beta import ClassificationReport, StabilizationError, classify, engine
from .closure import DependenceCertificate
from .forms import DiffForm
from .varieties import VarietySpec, resolve_variety

__all__ = ["NotFittedError", "BetaSheafEstimator", "check_is_fitted", "LABELS"]

# smallest rung of the ladder Omega/torsion <= alpha <= beta <= L holding the form
LABELS = ("omega", "alpha", "beta", "L", "outside", "unknown")


class NotFittedError(ValueError, AttributeError):
    pass


def check_is_fitted(est) -> None:
    if not getattr(est, "invariants_", None):
        raise NotFittedError(f"{type(est).__name__} is not fitted; call fit() first")


class BetaSheafEstimator:
    """Invariants of one variety.

    Parameters
    ----------
    variety : identifier (``"S:4"``, ``"product(S:2,w)"``, a ``.variety`` path) or a spec
    degrees : form degrees to compute; defaults to ``0..dim``
    level_cap : cap on the alpha[p] recursion; defaults to ``q + 2``
    max_cert_degree : degree bound for the certificate search oracle
    """

    def __init__(self, variety: Union[str, VarietySpec] = "S:4", degrees: Optional[Iterable[int]] = None,
                 level_cap: Optional[int] = None, max_cert_degree: int = 6):
        self.variety = variety
        self.degrees = degrees
        self.level_cap = level_cap
        self.max_cert_degree = max_cert_degree

    # parameter protocol -----------------------------------------------------
    @classmethod
    def _param_names(cls) -> List[str]:
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self, deep: bool = True) -> Dict[str, object]:
        return {k: getattr(self, k) for k in self._param_names()}

    def set_params(self, **params) -> "BetaSheafEstimator":
        valid = self._param_names()
        for k, v in params.items():
            if k not in valid:
                raise ValueError(f"invalid parameter {k!r} for {type(self).__name__}")
            setattr(self, k, v)
        return self

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"

    # fitting ----------------------------------------------------------------
    def _spec(self) -> VarietySpec:
        if isinstance(self.variety, VarietySpec):
            return self.variety
        if isinstance(self.variety, str):
            return resolve_variety(self.variety)
        raise TypeError("variety must be an identifier or a VarietySpec")

    def fit(self, X=None, y=None) -> "BetaSheafEstimator":
        """Compute Omega/torsion, alpha seeds, beta with p*, and L per degree.

        ``X`` and ``y`` are ignored; they exist for API compatibility.
        """
        spec = self._spec()
        eng = engine(spec)
        eng.max_cert_degree = self.max_cert_degree
        degrees = list(range(spec.dimension + 1)) if self.degrees is None else sorted(set(self.degrees))
        bad = [q for q in degrees if not 0 <= q <= spec.dimension]
        if bad:
            raise ValueError(f"degrees {bad} outside 0..{spec.dimension}")
        self.spec_ = spec
        self.degrees_ = degrees
        self.invariants_ = {}
        self.p_star_ = {}
        self.failures_ = {}
        for q in degrees:
            cap = q + 2 if self.level_cap is None else self.level_cap
            entry = {"omega": eng.omega(q), "alpha": eng.level(q, 0)}
            try:
                entry["beta"], self.p_star_[q] = eng.beta(q, cap)
            except StabilizationError as exc:
                self.failures_[q] = str(exc)
                entry["beta"] = None
            entry["L"] = eng.L(q)
            self.invariants_[q] = entry
        return self

    # prediction -------------------------------------------------------------
    def _as_form(self, item) -> DiffForm:
        if isinstance(item, DiffForm):
            return item
        if isinstance(item, str):
            return self.spec_.form(item)
        raise TypeError(f"cannot interpret {item!r} as a form")

    def predict_reports(self, X: Iterable, certificates: Optional[Mapping[int, DependenceCertificate]] = None
                        ) -> List[ClassificationReport]:
        check_is_fitted(self)
        certificates = certificates or {}
        out = []
        for i, item in enumerate(X):
            u = self._as_form(item)
            if u.degree not in self.invariants_:
                raise ValueError(f"degree {u.degree} was not fitted (fitted: {self.degrees_})")
            out.append(classify(self.spec_, u, certificates.get(i), self.level_cap))
        return out

    @staticmethod
    def label(report: ClassificationReport) -> str:
        if report.in_omega:
            return "omega"
        if report.alpha.in_alpha:
            return "alpha"
        if report.in_beta:
            return "beta"
        if report.in_L:
            return "L"
        if report.in_L is False:
            return "outside"
        return "unknown"

    def predict(self, X: Iterable, certificates=None) -> List[str]:
        """Label each form with the smallest rung containing it (see ``LABELS``)."""
        return [self.label(r) for r in self.predict_reports(X, certificates)]

    def summary(self) -> Dict[str, object]:
        check_is_fitted(self)
        rows = {}
        for q, entry in self.invariants_.items():
            rows[q] = {
                "omega": len(entry["omega"]),
                "alpha": len(entry["alpha"]),
                "beta": None if entry["beta"] is None else len(entry["beta"]),
                "L": None if entry["L"] is None else len(entry["L"]),
                "p_star": self.p_star_.get(q),
            }
        return {"variety": self.spec_.id, "degrees": rows, "failures": dict(self.failures_)}
