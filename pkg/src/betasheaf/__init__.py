"""Exact computation of the alpha/beta sheaves of singular spaces, with numeric checks."""

__version__ = "0.1.0"

from .poly import MeroFunction, Polynomial
from .forms import DiffForm, d, wedge
from .grammar import FormSyntaxError, format_form, parse_form
from .varieties import VarietyError, VarietySpec, builtin, product, resolve_variety
from .maps import MapSpec, pullback, resolve_map
from .closure import (ArcSpec, DependenceCertificate, MembershipVerdict, Verdict, classify_alpha,
                      decide_monomial, refute_by_arc, verify_certificate)
from .beta import BetaEngine, ClassificationReport, beta, classify, engine
from .estimator import BetaSheafEstimator

__all__ = [
    "__version__",
    "Polynomial", "MeroFunction", "DiffForm", "d", "wedge",
    "parse_form", "format_form", "FormSyntaxError",
    "VarietySpec", "VarietyError", "builtin", "product", "resolve_variety",
    "MapSpec", "pullback", "resolve_map",
    "ArcSpec", "DependenceCertificate", "MembershipVerdict", "Verdict",
    "classify_alpha", "decide_monomial", "refute_by_arc", "verify_certificate",
    "BetaEngine", "ClassificationReport", "beta", "classify", "engine",
    "BetaSheafEstimator",
]
