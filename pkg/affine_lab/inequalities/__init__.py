"""
Sharp inequalities for convex functions with bounded Monge-Ampere mass, and
the counterexamples showing they cannot be improved.
"""

from .checks import (
    CHECKS,
    check_c1n,
    check_cone_lemma,
    check_gradient,
    check_lemma41,
    check_lemma42,
    check_lemma43,
    implied_constant,
)
from .corpus import CorpusEntry, corpus_for, normalized_corpus, run_corpus, standard_corpus
from .holder import (
    gradient_holder,
    gradient_holder_trend,
    holder_points,
    holder_seminorm,
    holder_trend,
    sup_quotient,
)
from .power import PowerCounterexample, power_counterexample
from .slab import (
    SlabCounterexample,
    assemble_slab,
    build_eta,
    build_zeta,
    g2_coefficient,
    lambda_roots,
    pinch,
)

__all__ = [
    "CHECKS",
    "CorpusEntry",
    "PowerCounterexample",
    "SlabCounterexample",
    "assemble_slab",
    "build_eta",
    "build_zeta",
    "check_c1n",
    "check_cone_lemma",
    "check_gradient",
    "check_lemma41",
    "check_lemma42",
    "check_lemma43",
    "corpus_for",
    "g2_coefficient",
    "gradient_holder",
    "gradient_holder_trend",
    "holder_points",
    "holder_seminorm",
    "holder_trend",
    "implied_constant",
    "lambda_roots",
    "normalized_corpus",
    "pinch",
    "power_counterexample",
    "run_corpus",
    "standard_corpus",
    "sup_quotient",
]
