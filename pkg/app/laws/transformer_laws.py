"""Laws of the weakest-preexpectation calculi: basic properties, frame, duality, soundness, conservativity."""

from typing import Any, Optional

from app.domain.expectation import Add, Expectation, Max, Mul, ONE, ZERO, ZERO_E, const, ext_max
from app.domain.operational import soundness_check
from app.domain.state import enumerate_states
from app.domain.syntax import Program, modified_vars
from app.domain.transformer import (
    DUALITY_PAIRS, WEP, WLP, WP, TransformerMode, check_conservativity, check_duality, check_frame, wp_function,
)
from app.models.enums import Verdict

from .base import Law, LawContext, Witness
from .generators import ArtifactGenerator

Operands = dict[str, Any]


def _wp(ctx: LawContext, c: Program, post: Expectation, mode: TransformerMode = WP, **options):
    fn, _ = wp_function(mode, c, post, ctx.cfg, **options)
    return fn


def _states(ctx: LawContext, c: Program):
    return enumerate_states(ctx.cfg, ctx.program_cells(c))


def _unmodified(g: ArtifactGenerator, c: Program) -> tuple[str, ...]:
    return tuple(v for v in g.vars if v not in modified_vars(c))


# ─── Operand generators ───────────────────────────────────────────────────────
# Laws compared with exact equality or ⪯ draw loop-free programs: a loop
# stopped on tolerance is only known up to its residual.

def _exact_program(g: ArtifactGenerator, **toggles: bool) -> Program:
    return g.program(allow_loops=False, **toggles)


def _looping_program_post(g: ArtifactGenerator) -> Operands:
    return {"c": g.program(), "X": g.expectation()}


def _pair_operands(g: ArtifactGenerator) -> Operands:
    return {"c": _exact_program(g), "X": g.expectation(), "Y": g.expectation()}


def _scaled_operands(g: ArtifactGenerator, **toggles: bool) -> Operands:
    return {"c": _exact_program(g, **toggles), "k": g.scalar(), "X": g.expectation(), "Y": g.expectation()}


def _chain_operands(g: ArtifactGenerator) -> Operands:
    return {
        "c": _exact_program(g, allow_alloc=False),
        "X": g.expectation(),
        "W1": g.expectation(),
        "W2": g.expectation(),
    }


def _pure_frame_operands(g: ArtifactGenerator) -> Operands:
    c = _exact_program(g)
    return {"c": c, "X": g.expectation(), "Y": g.pure(pool=_unmodified(g, c))}


def _frame_operands(g: ArtifactGenerator, one_bounded: bool = False) -> Operands:
    c = _exact_program(g)
    pool = _unmodified(g, c)
    # liberal modes need X and the frame bounded by 1
    frame = Mul(const(g.rational()), g.predicate(pool=pool))
    return {"c": c, "X": g.one_bounded() if one_bounded else g.expectation(), "Y": frame}


def _literal_operands(g: ArtifactGenerator) -> Operands:
    return {"c": _exact_program(g), "X": g.expectation(), "P": g.one_bounded()}


def _duality_operands(g: ArtifactGenerator) -> Operands:
    return {"c": _exact_program(g), "f": g.one_bounded()}


def _conservativity_operands(g: ArtifactGenerator) -> Operands:
    return {
        "c": _exact_program(g, probabilistic=False),
        "pre": g.sl_formula(),
        "post": g.sl_formula(),
    }


# ─── Checks ───────────────────────────────────────────────────────────────────

def _monotone(o: Operands, ctx: LawContext) -> Optional[Witness]:
    c = o["c"]
    return ctx.entails_fn(_wp(ctx, c, o["X"]), _wp(ctx, c, Max(o["X"], o["Y"])), _states(ctx, c))


def _strict(o: Operands, ctx: LawContext) -> Optional[Witness]:
    c = o["c"]
    return ctx.equal_fn(_wp(ctx, c, ZERO_E), lambda state: ZERO, _states(ctx, c))


def _one_bounded(o: Operands, ctx: LawContext) -> Optional[Witness]:
    c = o["c"]
    return ctx.entails_fn(_wp(ctx, c, o["P"]), lambda state: ONE, _states(ctx, c))


def _linear_sides(o: Operands, ctx: LawContext):
    c, k, x, y = o["c"], o["k"], o["X"], o["Y"]
    wx, wy = _wp(ctx, c, x), _wp(ctx, c, y)
    scale = const(k).value
    separate = lambda state: scale * wx(state) + wy(state)  # noqa: E731
    joint = _wp(ctx, c, Add(Mul(const(k), x), y))
    return separate, joint


def _superlinear(o: Operands, ctx: LawContext) -> Optional[Witness]:
    separate, joint = _linear_sides(o, ctx)
    return ctx.entails_fn(separate, joint, _states(ctx, o["c"]))


def _linear(o: Operands, ctx: LawContext) -> Optional[Witness]:
    separate, joint = _linear_sides(o, ctx)
    return ctx.equal_fn(separate, joint, _states(ctx, o["c"]))


def _continuity(o: Operands, ctx: LawContext) -> Optional[Witness]:
    c = o["c"]
    chain = [o["X"]]
    chain.append(Max(chain[-1], o["W1"]))
    chain.append(Max(chain[-1], o["W2"]))
    fns = [_wp(ctx, c, x) for x in chain]
    joined = lambda state: ext_max(f(state) for f in fns)  # noqa: E731
    return ctx.equal_fn(_wp(ctx, c, chain[-1]), joined, _states(ctx, c))


def _pure_frame(o: Operands, ctx: LawContext) -> Optional[Witness]:
    c, x, y = o["c"], o["X"], o["Y"]
    wx = _wp(ctx, c, x)
    frame = ctx.fn(y)
    return ctx.equal_fn(_wp(ctx, c, Mul(y, x)), lambda state: frame(state) * wx(state), _states(ctx, c))


def _literal_rules(o: Operands, ctx: LawContext) -> Optional[Witness]:
    c = o["c"]
    # wp takes any X; liberal and extrinsic modes take the one-bounded P
    for mode, post in ((WP, o["X"]), (WLP, o["P"]), (WEP, o["P"])):
        fast = _wp(ctx, c, post, mode)
        literal = _wp(ctx, c, post, mode, literal_heap_rules=True)
        witness = ctx.equal_fn(fast, literal, _states(ctx, c))
        if witness is not None:
            return Witness(witness.state, witness.lhs, witness.rhs, note=f"{mode}: fast vs literal heap rules")
    return None


def _frame(mode: TransformerMode):
    def check(o: Operands, ctx: LawContext) -> Optional[Witness]:
        result = check_frame(o["c"], o["X"], o["Y"], ctx.cfg, ctx.program_cells(o["c"]), mode=mode)
        if result.verdict is Verdict.COUNTEREXAMPLE:
            return Witness(result.state, result.lhs, result.rhs, result.note)
        return None
    return check


def _duality(name: str):
    def check(o: Operands, ctx: LawContext) -> Optional[Witness]:
        for entry in check_duality(o["c"], o["f"], ctx.cfg, ctx.program_cells(o["c"])):
            if entry.name == name and not entry.result.holds:
                r = entry.result
                return Witness(r.state, r.lhs, r.rhs, note=f"residual {entry.residual}")
        return None
    return check


def _soundness(o: Operands, ctx: LawContext) -> Optional[Witness]:
    report = soundness_check(o["c"], o["X"], ctx.cfg, ctx.program_cells(o["c"]))
    r = report.result
    return None if r.holds else Witness(r.state, r.lhs, r.rhs, r.note)


def _conservativity(o: Operands, ctx: LawContext) -> Optional[Witness]:
    result = check_conservativity(o["c"], o["pre"], o["post"], ctx.cfg, ctx.program_cells(o["c"]))
    if result.verdict is Verdict.AGREE:
        return None
    return Witness(
        result.state,
        note=f"QSL says {result.qsl_valid}, operational says {result.operational_valid}: {result.note}",
    )


TRANSFORMER_LAWS: tuple[Law, ...] = (
    Law("wp.monotone", "X ⪯ X′ implies wp⟦c⟧(X) ⪯ wp⟦c⟧(X′)", _pair_operands, _monotone),
    Law("wp.strict", "wp⟦c⟧(0) = 0", lambda g: {"c": g.program()}, _strict),
    Law("wp.one_bounded", "wp⟦c⟧([φ]) ⪯ 1", lambda g: {"c": g.program(), "P": g.predicate()}, _one_bounded),
    Law("wp.superlinear", "k · wp⟦c⟧(X) + wp⟦c⟧(Y) ⪯ wp⟦c⟧(k · X + Y)", _scaled_operands, _superlinear),
    Law("wp.linear", "wp⟦c⟧(k · X + Y) = k · wp⟦c⟧(X) + wp⟦c⟧(Y) for allocation-free c",
        lambda g: _scaled_operands(g, allow_alloc=False), _linear),
    Law("wp.continuity", "wp⟦c⟧ commutes with the supremum of an increasing chain, for allocation-free c",
        _chain_operands, _continuity),
    Law("wp.pure_frame", "wp⟦c⟧(Y · X) = Y · wp⟦c⟧(X) for pure Y over variables c does not modify",
        _pure_frame_operands, _pure_frame),
    Law("wp.literal_rules", "heap statements give the same tables through ⋆ and −⋆ as through direct updates",
        _literal_operands, _literal_rules),
    Law("frame.wp", "wp⟦c⟧(X) ⋆ Y ⪯ wp⟦c⟧(X ⋆ Y) when c does not modify Vars(Y)", _frame_operands, _frame(WP)),
    Law("frame.wlp", "wlp⟦c⟧(X) ⋆ Y ⪯ wlp⟦c⟧(X ⋆ Y) when c does not modify Vars(Y)",
        lambda g: _frame_operands(g, one_bounded=True), _frame(WLP)),
    *(
        Law(f"duality.{left}_{right}", f"{left}⟦c⟧(f) = 1 − {right}⟦c⟧(1 − f)",
            _duality_operands, _duality(f"{left}_{right}"))
        for left, right in DUALITY_PAIRS
    ),
    Law("soundness.wp", "wp⟦c⟧(X) equals the minimal expected reward of the operational MDP",
        _looping_program_post, _soundness),
    Law("conservativity.agree", "embed(P) ⪯ wp⟦c⟧(embed(Q)) iff the triple {P} c {Q} holds operationally",
        _conservativity_operands, _conservativity),
)
