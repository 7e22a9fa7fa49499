"""Workbench for explicit-evidence deontic logics.

Parsing and printing for the term/formula language, Hilbert-style proof
checking relative to a constant specification, constructive derivation
builders, finite subset-model semantics with well-formedness auditing,
and bounded exhaustive countermodel search.
"""

from .axioms import (
    AxiomTag,
    ConstantSpec,
    SystemId,
    constant_for,
    cs_contains,
    format_cs_file,
    is_axiomatically_appropriate,
    is_tautology,
    j_instance,
    jd_instance,
    jplus_instance,
    jtop_instance,
    match_axiom,
    noc_instance,
    parse_cs_file,
)
from .derive import (
    DeriveError,
    derive_interconsistency,
    derive_interconsistency_jnoc,
    derive_jd_in_jnoc,
    derive_jd_in_jnocplus,
    derive_noc_in_jd,
    interconsistency_formula,
    internalize,
)
from .model import (
    ModelClass,
    SubsetModel,
    UniverseError,
    WellFormedReport,
    app_set,
    build_jd_countermodel,
    check_well_formed,
    eval_formula,
    format_model,
    holds_at_all_normal,
    parse_model_file,
    project,
    truth_set,
    worlds_no_conflict,
    worlds_not_bot,
)
from .proof import (
    ByAN,
    ByAxiom,
    ByMP,
    Proof,
    Step,
    Verdict,
    an_conclusion,
    check_proof,
    format_proof,
    parse_proof_file,
)
from .search import (
    SearchBounds,
    count_models,
    enumerate_models,
    find_countermodel,
    find_witness,
    slow_find_countermodel,
)
from .syntax import (
    FALSUM,
    App,
    Atom,
    Bang,
    Constant,
    Falsum,
    Formula,
    Holds,
    Implies,
    ParseError,
    Sum,
    Term,
    Variable,
    conj,
    disj,
    formula_terms,
    iff,
    neg,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
    subformula_closure,
    subformulas,
    subterm_closure,
    top,
)

__version__ = "0.1.0"
