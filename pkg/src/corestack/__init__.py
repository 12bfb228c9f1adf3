"""corestack: a frame-stack interpreter for sequential Core Erlang with a
bounded CIU-equivalence harness."""

from .syntax import (
    Atom,
    Box,
    BOX,
    Clause,
    Closure,
    ECall,
    ECase,
    ECons,
    EFun,
    ELet,
    ELetRec,
    EMap,
    EPrimOp,
    ESeq,
    ETry,
    ETuple,
    EApply,
    EValues,
    Exc,
    Expression,
    FunDef,
    FunId,
    Int,
    NIL,
    Nil,
    PCons,
    PMap,
    PTuple,
    Pattern,
    Redex,
    Result,
    Val,
    ValSeq,
    Value,
    VCons,
    VMap,
    VTuple,
    Var,
    check_scope,
    compare_values,
    free_names,
    make_map,
    names_of,
)
from .subst import Substitution, apply, compose_update, mk_closlist, subscoped
from .matching import is_match, match, vars
from .machine import (
    Completed,
    Configuration,
    Final,
    OutOfFuel,
    Stepped,
    Stuck,
    StuckEval,
    Termination,
    applicable_rules,
    eval_star,
    initial,
    plug,
    run_trace,
    stack_concat,
    step,
    terminates,
)
from .bifs import BIF_TABLE, bif_equal, eval_id
from .equiv import (
    DEFAULT_SEED,
    EquivConfig,
    EquivVerdict,
    Witness,
    check_values_equal_theorem,
    ciu_equiv,
    ciu_le,
    replay_witness,
    value_rel,
)
from .parser import ParseError, SourceUnit, parse, parse_unit, unit_expression
from .printer import (
    format_configuration,
    format_expression,
    format_result,
    format_stack,
    format_value,
)

__version__ = "0.1.0"
