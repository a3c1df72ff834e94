"""prodkit: computing with finite (and boundedly explorable infinite)
universal algebras — generation, congruences, commutators, rewriting, and
direct-product diagnostics."""

from .terms import (
    App,
    ParseError,
    Signature,
    Term,
    TermError,
    Var,
    evaluate_term,
    format_term,
    parse_term,
    substitute,
    term_length,
)
from .finalg import (
    CapExceeded,
    FiniteAlgebra,
    FiniteFunction,
    find_malcev,
    is_idempotent,
    kary_clone,
    load_algebra,
    make_algebra,
    make_product,
    make_quotient,
    parse_algebra,
    format_algebra,
    save_algebra,
    unary_clone,
)
from .congruences import (
    Congruence,
    CongruencePair,
    HypothesisError,
    as_product_congruence,
    cg,
    check_difference_term,
    cm_kernel_genset,
    commutator,
    con_all,
    con_join,
    con_meet,
    discrete,
    is_abelian_congruence,
    is_congruence,
    is_modular_conlattice,
    max_product_below,
    min_product_above,
    product_congruence,
    product_join_tau,
    product_meet_sigma,
    separate_in_factor,
    term_condition_check,
    total,
)
from .generation import (
    BoundedClosure,
    ComputableAlgebra,
    GenerationCertificate,
    bounded_close,
    close,
    computable_square,
    generates,
    malcev_genset,
    surjective_clone_genset,
)
from .presentations import (
    ClosedLoopPresentation,
    RewriteRule,
    bounded_class,
    closed_presentation_from_loop,
    idem_nf,
    ker_h_member,
    loop_reduce,
    whitman_check,
)
from .gallery import (
    ReducedWord,
    alpha_related,
    beta_related,
    f2_gset,
    gset_product_check,
    nat_mms,
    squarefree_mul,
    zx_invariant_check,
)

__version__ = "0.1.0"
