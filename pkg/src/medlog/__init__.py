"""Finite-problem semantics toolkit.

Kripke frames whose worlds are the non-empty subsets of a finite generator
set, ordered by reverse inclusion; formula evaluation over them; the
disjunction-of-negations normal form; and the constructions that transport
refutations between frames.
"""

from .errors import (
    InfiniteRankError,
    LimitError,
    MedlogError,
    ParseError,
    RankOverflowError,
    SearchBudgetError,
    SelfCheckError,
    UnknownAtomError,
)
from .formula import (
    And,
    Atom,
    BOT,
    Bot,
    Formula,
    Imp,
    NEG_BOT,
    NEG_TOP,
    Neg,
    Or,
    Substitution,
    TOP,
    Top,
    apply_subst,
    atoms,
    big_and,
    big_or,
    compose,
    iff,
    parse,
    render,
    subformulas,
)
from .ipc import classical_countermodel, classically_valid, ipc_provable
from .medvedev import (
    MedvedevFrame,
    RefutationWitness,
    ValidityResult,
    Valuation,
    close_up,
    disjoint_embed,
    dp_countermodel,
    enumerate_upsets,
    forces,
    frame,
    generated_subframe,
    gens,
    iter_valuations,
    refute,
    sample_valuation,
    truth_set,
    valid_on,
    valuation,
    valuation_from_obj,
    witness_from_obj,
    world,
)
from .kpform import (
    INFINITE_RANK,
    NegDisjunction,
    NormalFormReport,
    Rank,
    kp_normalize,
    kp_rank,
    verify_normal_form,
)
from .alpha import (
    AlphaFamily,
    LemmaReport,
    UniversalValuation,
    alpha_I,
    alpha_formulas,
    u_valuation,
    universal_subst,
    verify_lemma,
)
from .randgen import random_finite_rank_formula, random_formula
from .structural import (
    AdmissibilityWitness,
    LevinDecomposition,
    PMorphism,
    PMorphismReport,
    TransferReport,
    admissibility_witness,
    alpha_pmorphism,
    check_alpha_transfer,
    check_pmorphism,
    levin_decomposition,
    transfer_check,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityWitness",
    "AlphaFamily",
    "And",
    "Atom",
    "BOT",
    "Bot",
    "Formula",
    "Imp",
    "INFINITE_RANK",
    "InfiniteRankError",
    "LemmaReport",
    "LevinDecomposition",
    "LimitError",
    "MedlogError",
    "MedvedevFrame",
    "NEG_BOT",
    "NEG_TOP",
    "Neg",
    "NegDisjunction",
    "NormalFormReport",
    "Or",
    "ParseError",
    "PMorphism",
    "PMorphismReport",
    "Rank",
    "RankOverflowError",
    "RefutationWitness",
    "SearchBudgetError",
    "SelfCheckError",
    "Substitution",
    "TOP",
    "Top",
    "TransferReport",
    "UniversalValuation",
    "UnknownAtomError",
    "ValidityResult",
    "Valuation",
    "admissibility_witness",
    "alpha_I",
    "alpha_formulas",
    "alpha_pmorphism",
    "apply_subst",
    "atoms",
    "big_and",
    "big_or",
    "check_alpha_transfer",
    "check_pmorphism",
    "classical_countermodel",
    "classically_valid",
    "close_up",
    "compose",
    "disjoint_embed",
    "dp_countermodel",
    "enumerate_upsets",
    "forces",
    "frame",
    "generated_subframe",
    "gens",
    "iff",
    "ipc_provable",
    "iter_valuations",
    "kp_normalize",
    "kp_rank",
    "levin_decomposition",
    "parse",
    "random_finite_rank_formula",
    "random_formula",
    "refute",
    "render",
    "sample_valuation",
    "subformulas",
    "transfer_check",
    "truth_set",
    "u_valuation",
    "universal_subst",
    "valid_on",
    "valuation",
    "valuation_from_obj",
    "verify_lemma",
    "verify_normal_form",
    "witness_from_obj",
    "world",
]
