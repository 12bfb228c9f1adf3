"""Bounded CIU preorder and equivalence checking.

Two redexes are compared by co-termination under generated closing
substitutions and generated frame stacks, plus a fixed adversarial stack
library (sequencing, application, binder probes) and per-substitution
inspection stacks whose patterns are derived from observed results.  The
empty stack is always tried first: completed results there are compared
observably (componentwise ``'=='`` for sequences, class/reason/details for
exceptions), which is what actually distinguishes first-order results.

Verdicts are three-valued.  Fuel exhaustion on the right-hand side is
reported as Unknown, never silently passed and never counted as a
divergence proof; raising the fuel is the only remedy.  A left-hand side
that fails to complete leaves the preorder premise unestablished, so the
trial passes vacuously (the opposite direction of an equivalence check
still surfaces the asymmetry).
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Optional, Sequence

from .gen import TermGen, omega
from .machine import (
    Completed,
    Configuration,
    EvalOutcome,
    FAppFn,
    FConsHead,
    FLet,
    FSeq,
    FTry,
    FCaseScrutinee,
    FrameStack,
    OutOfFuel,
    StuckEval,
    eval_star,
)
from .bifs import ApplyId, bif_equal, eval_id
from .subst import EMPTY, Substitution, apply as subst_apply, subscoped
from .syntax import (
    Atom,
    Clause,
    Closure,
    Exc,
    Int,
    NIL,
    Nil,
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
)

DEFAULT_SEED = 0xC0DE


@dataclass(frozen=True)
class EquivConfig:
    fuel: int = 2000
    stack_depth_max: int = 2
    value_depth_max: int = 3
    num_stacks: int = 12
    num_substitutions: int = 8
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        for name in ("fuel", "stack_depth_max", "value_depth_max", "num_stacks", "num_substitutions"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


DEFAULT_CONFIG = EquivConfig()


@dataclass(frozen=True)
class Witness:
    """One replayable trial: the stack and substitution tried, and the
    evaluation outcomes of both sides."""

    stack: FrameStack
    substitution: Substitution
    left: EvalOutcome
    right: EvalOutcome


@dataclass(frozen=True)
class EquivVerdict:
    kind: str  # "equivalent" | "inequivalent" | "unknown"
    trials: int
    seed: int
    fuel: int
    witness: Optional[Witness] = None
    reason: Optional[str] = None
    unknown_trials: int = 0

    @property
    def equivalent(self) -> bool:
        return self.kind == "equivalent"

    @property
    def inequivalent(self) -> bool:
        return self.kind == "inequivalent"

    def to_report(self) -> dict:
        from .printer import (
            format_result,
            format_stack,
            format_substitution,
        )

        def outcome_text(out: EvalOutcome) -> str:
            if isinstance(out, Completed):
                return f"completed in {out.steps} steps: {format_result(out.result)}"
            if isinstance(out, OutOfFuel):
                return "out of fuel"
            return f"stuck: {out.reason}"

        report = {
            "verdict": self.kind,
            "trials": self.trials,
            "unknown_trials": self.unknown_trials,
            "seed": self.seed,
            "fuel": self.fuel,
        }
        if self.reason is not None:
            report["reason"] = self.reason
        if self.witness is not None:
            report["witness"] = {
                "stack": format_stack(self.witness.stack),
                "substitution": format_substitution(self.witness.substitution),
                "left": outcome_text(self.witness.left),
                "right": outcome_text(self.witness.right),
            }
        return report


# ---------------------------------------------------------------------------
# observable comparison of completed results


def results_differ(r1: Result, r2: Result) -> bool:
    if isinstance(r1, ValSeq) and isinstance(r2, ValSeq):
        if len(r1.values) != len(r2.values):
            return True
        return any(
            bif_equal(a, b) == Atom("false") for a, b in zip(r1.values, r2.values)
        )
    if isinstance(r1, Exc) and isinstance(r2, Exc):
        return (
            r1.cls != r2.cls
            or bif_equal(r1.reason, r2.reason) == Atom("false")
            or bif_equal(r1.details, r2.details) == Atom("false")
        )
    return True


# ---------------------------------------------------------------------------
# trial suites


def _adversarial_stacks() -> tuple:
    h = Var("Hole")
    return (
        (FSeq(Val(Atom("ok"))),),
        (FLet((h,), Val(h)),),
        (FAppFn(()),),
        (FAppFn((Val(Int(0)),)),),
        (FTry((h,), Val(h), (Var("Ec"), Var("Er"), Var("Ed")), Val(Atom("caught"))),),
        (FConsHead(NIL),),
    )


def _stack_suite(cfg: EquivConfig, rng: Random) -> tuple:
    g = TermGen(rng)
    stacks = [(), *(_adversarial_stacks())]
    stacks += [g.stack(cfg.stack_depth_max) for _ in range(cfg.num_stacks)]
    return tuple(stacks)


def _closing_substitutions(
    gamma: frozenset, cfg: EquivConfig, rng: Random
) -> tuple:
    if not gamma:
        return (EMPTY,)
    g = TermGen(rng)
    return tuple(
        g.substitution(gamma, cfg.value_depth_max)
        for _ in range(cfg.num_substitutions)
    )


def _inspection_stacks(g: TermGen, results) -> list:
    stacks = []
    seen = set()
    for res in results:
        if not isinstance(res, ValSeq):
            continue
        if res in seen:
            continue
        seen.add(res)
        patterns = tuple(g.pattern_of_value(v) for v in res.values)
        fallthrough = tuple(g.fresh_var("I") for _ in res.values)
        stacks.append(
            (
                FCaseScrutinee(
                    (
                        Clause(patterns, Val(Atom("true")), Val(Atom("ok"))),
                        Clause(fallthrough, Val(Atom("true")), omega()),
                    )
                ),
            )
        )
    return stacks


# ---------------------------------------------------------------------------
# verdict computation


def _judge(is_empty_stack: bool, left: EvalOutcome, right: EvalOutcome) -> str:
    """One direction of the preorder on one trial."""
    if not isinstance(left, Completed):
        return "pass"
    if isinstance(right, StuckEval):
        return "inequivalent"
    if isinstance(right, OutOfFuel):
        return "unknown"
    if is_empty_stack and results_differ(left.result, right.result):
        return "inequivalent"
    return "pass"


def _run_trials(
    r1: Redex,
    r2: Redex,
    gamma: frozenset,
    cfg: EquivConfig,
    substitutions: Optional[Sequence[Substitution]],
    both_directions: bool,
) -> EquivVerdict:
    gamma = frozenset(gamma)
    for r in (r1, r2):
        if not check_scope(gamma, r):
            raise ValueError("redex is not closed by the given scope")
    if substitutions is not None:
        substitutions = tuple(substitutions)
        for s in substitutions:
            if not subscoped(gamma, s):
                raise ValueError("substitution does not close the scope")
    rng = Random(cfg.seed)
    if substitutions is None:
        substitutions = _closing_substitutions(gamma, cfg, rng)
    suite = _stack_suite(cfg, rng)
    inspect_gen = TermGen(Random(cfg.seed + 1))

    trials = 0
    unknowns = 0
    first_unknown: Optional[Witness] = None

    def trial(stack: FrameStack, sigma: Substitution, left_r: Redex, right_r: Redex):
        nonlocal trials, unknowns, first_unknown
        left = eval_star(Configuration(stack, left_r), cfg.fuel)
        right = eval_star(Configuration(stack, right_r), cfg.fuel)
        trials += 1
        is_empty = not stack
        outcomes = [_judge(is_empty, left, right)]
        if both_directions:
            outcomes.append(_judge(is_empty, right, left))
        witness = Witness(stack, sigma, left, right)
        if "inequivalent" in outcomes:
            return witness, left
        if "unknown" in outcomes:
            unknowns += 1
            if first_unknown is None:
                first_unknown = witness
        return None, left

    for sigma in substitutions:
        left_r = subst_apply(r1, sigma)
        right_r = subst_apply(r2, sigma)
        bad, left_empty = trial((), sigma, left_r, right_r)
        if bad is not None:
            return EquivVerdict(
                "inequivalent", trials, cfg.seed, cfg.fuel, bad, unknown_trials=unknowns
            )
        right_empty = eval_star(Configuration((), right_r), cfg.fuel)
        observed = [
            out.result for out in (left_empty, right_empty) if isinstance(out, Completed)
        ]
        for stack in (*_inspection_stacks(inspect_gen, observed), *suite[1:]):
            bad, _ = trial(stack, sigma, left_r, right_r)
            if bad is not None:
                return EquivVerdict(
                    "inequivalent", trials, cfg.seed, cfg.fuel, bad, unknown_trials=unknowns
                )
    if first_unknown is not None:
        return EquivVerdict(
            "unknown",
            trials,
            cfg.seed,
            cfg.fuel,
            first_unknown,
            reason="fuel",
            unknown_trials=unknowns,
        )
    return EquivVerdict("equivalent", trials, cfg.seed, cfg.fuel, unknown_trials=unknowns)


def ciu_le(
    r1: Redex,
    r2: Redex,
    gamma=frozenset(),
    cfg: EquivConfig = DEFAULT_CONFIG,
    substitutions: Optional[Sequence[Substitution]] = None,
) -> EquivVerdict:
    """Bounded CIU preorder: whenever the left redex terminates under a
    tried stack and closing substitution, the right one must too."""
    return _run_trials(r1, r2, gamma, cfg, substitutions, both_directions=False)


def ciu_equiv(
    r1: Redex,
    r2: Redex,
    gamma=frozenset(),
    cfg: EquivConfig = DEFAULT_CONFIG,
    substitutions: Optional[Sequence[Substitution]] = None,
) -> EquivVerdict:
    """Bounded CIU equivalence: both preorder directions over a shared
    trial suite.  Inequivalent dominates Unknown dominates Equivalent."""
    return _run_trials(r1, r2, gamma, cfg, substitutions, both_directions=True)


def replay_witness(r1: Redex, r2: Redex, witness: Witness, fuel: int):
    """Re-execute a witness trial; returns the fresh outcome pair."""
    left_r = subst_apply(r1, witness.substitution)
    right_r = subst_apply(r2, witness.substitution)
    left = eval_star(Configuration(witness.stack, left_r), fuel)
    right = eval_star(Configuration(witness.stack, right_r), fuel)
    return left, right


# ---------------------------------------------------------------------------
# the structural value relation


def value_rel(
    v1: Value, v2: Value, depth_budget: int = 2, cfg: EquivConfig = DEFAULT_CONFIG
) -> bool:
    """Structural relation on closed values; closures of equal arity are
    related when applying both to sampled argument tuples co-terminates
    with related results (a bounded proxy for the real definition)."""
    if type(v1) is not type(v2):
        return False
    if isinstance(v1, (Int, Atom)):
        return v1 == v2
    if isinstance(v1, Nil):
        return True
    if isinstance(v1, VCons):
        return value_rel(v1.head, v2.head, depth_budget, cfg) and value_rel(
            v1.tail, v2.tail, depth_budget, cfg
        )
    if isinstance(v1, VTuple):
        if len(v1.elems) != len(v2.elems):
            return False
        return all(
            value_rel(a, b, depth_budget, cfg) for a, b in zip(v1.elems, v2.elems)
        )
    if isinstance(v1, VMap):
        if len(v1.pairs) != len(v2.pairs):
            return False
        return all(
            value_rel(k1, k2, depth_budget, cfg) and value_rel(w1, w2, depth_budget, cfg)
            for (k1, w1), (k2, w2) in zip(v1.pairs, v2.pairs)
        )
    if isinstance(v1, Closure):
        if v1.arity != v2.arity:
            return False
        if depth_budget <= 0:
            return True
        return _closure_rel(v1, v2, depth_budget, cfg)
    return False


def _closure_rel(c1: Closure, c2: Closure, depth_budget: int, cfg: EquivConfig) -> bool:
    g = TermGen(Random(cfg.seed))
    for _ in range(cfg.num_substitutions):
        args = tuple(g.value(cfg.value_depth_max) for _ in range(c1.arity))
        left = eval_star(Configuration((), eval_id(ApplyId(c1), args)), cfg.fuel)
        right = eval_star(Configuration((), eval_id(ApplyId(c2), args)), cfg.fuel)
        if isinstance(left, OutOfFuel) and isinstance(right, OutOfFuel):
            continue
        if not isinstance(left, Completed) or not isinstance(right, Completed):
            return False
        if not _result_rel(left.result, right.result, depth_budget - 1, cfg):
            return False
    return True


def _result_rel(r1: Result, r2: Result, depth_budget: int, cfg: EquivConfig) -> bool:
    if isinstance(r1, ValSeq) and isinstance(r2, ValSeq):
        if len(r1.values) != len(r2.values):
            return False
        return all(
            value_rel(a, b, depth_budget, cfg) for a, b in zip(r1.values, r2.values)
        )
    if isinstance(r1, Exc) and isinstance(r2, Exc):
        return (
            r1.cls == r2.cls
            and value_rel(r1.reason, r2.reason, depth_budget, cfg)
            and value_rel(r1.details, r2.details, depth_budget, cfg)
        )
    return False


def check_values_equal_theorem(pairs) -> dict:
    """For pairs accepted by :func:`value_rel` (closure-free), the equality
    builtin must say true; reports any counterexample."""
    checked = 0
    failures = []
    for v1, v2 in pairs:
        checked += 1
        if bif_equal(v1, v2) != Atom("true"):
            failures.append((v1, v2))
    return {"checked": checked, "failures": failures}
