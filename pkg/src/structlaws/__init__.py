"""Multi-sorted syntax with binding whose auxiliary operations (renaming,
substitution, context plugging, and friends) are derived from declarative
per-constructor clause sets, normalized by a single generic engine, and
validated against independent oracles and benign equations."""

from .kernel import (
    Aux,
    Con,
    EnvArg,
    NatExpr,
    OMEGA,
    OpSchema,
    ScopeError,
    ShiftEnvArg,
    ShiftRenArg,
    Signature,
    SortExpr,
    SubSpec,
    Term,
    TermArg,
    UnknownLaw,
    UnknownOp,
    Var,
    VarKind,
    VarRefArg,
    VarRefSpec,
    check_scope,
    term_size,
    validate_signature,
)
from .laws import (
    AugmentedAlgebra,
    AuxSchema,
    Clause,
    LawStack,
    MainOption,
    StructuralLaw,
    StuckError,
    apply_aux,
    fold,
    normalize,
    validate_law,
)
from .equations import EquationSystem, Interpretation, check_benign, check_coherence
from .examples import BUNDLE_NAMES, build, crosscheck, oracle_eval
from .checks import check_admissible, check_algebra, check_monad_laws

__all__ = [name for name in dir() if not name.startswith("_")]
