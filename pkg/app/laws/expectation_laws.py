"""Laws of the separating connectives, heap size, list segments and the SL embedding."""

from typing import Any, Optional

from app.domain.expectation import (
    Add, ContainsAny, Contains, INF_E, ONE, ZERO, ListLength, ListSegment, Max, Min, Monus, Mul, ONE_E,
    OneMinus, PointsTo, SepCon, SepImp, SIZE, EMP, Sup, compile_expectation, embed_sl, render_expectation,
    sl_satisfies,
)
from app.domain.syntax import Var, compile_arith

from .base import Law, LawContext, Witness
from .generators import ArtifactGenerator

Operands = dict[str, Any]


def _triple(g: ArtifactGenerator) -> Operands:
    return {"X": g.expectation(), "Y": g.expectation(), "Z": g.expectation()}


def _in_model(ctx: LawContext, addr, value):
    """Guard: the address lies in 1..A and the stored value in V."""
    a, v = compile_arith(addr), compile_arith(value)
    return lambda state: 1 <= a(state.stack) <= ctx.cfg.addr_count and ctx.cfg.in_domain(v(state.stack))


# ─── Tightest intuitionistic bounds ─────────────────────────────────────────────

def _sep_true_tightest(o: Operands, ctx: LawContext) -> Optional[Witness]:
    x, w = o["X"], o["W"]
    upper = SepCon(x, ONE_E)
    for candidate in (w, Max(x, w), Add(x, w)):
        if ctx.intuitionistic(candidate) is not None or ctx.entails(x, candidate) is not None:
            continue
        witness = ctx.entails(upper, candidate)
        if witness is not None:
            note = f"intuitionistic X′ = {render_expectation(candidate)} above X"
            return Witness(witness.state, witness.lhs, witness.rhs, note=note)
    return None


def _wand_true_tightest(o: Operands, ctx: LawContext) -> Optional[Witness]:
    x, w = o["X"], o["W"]
    lower = SepImp(ONE_E, x)
    for candidate in (w, Min(x, w), Monus(x, w)):
        if ctx.intuitionistic(candidate) is not None or ctx.entails(candidate, x) is not None:
            continue
        witness = ctx.entails(candidate, lower)
        if witness is not None:
            note = f"intuitionistic X′ = {render_expectation(candidate)} below X"
            return Witness(witness.state, witness.lhs, witness.rhs, note=note)
    return None


# ─── Commutative monoid and (sub)distributivity ───────────────────────────────

def _adjoint(o: Operands, ctx: LawContext) -> Optional[Witness]:
    x, phi, y = o["X"], o["P"], o["Y"]
    left = ctx.entails(SepCon(x, phi), y)
    right = ctx.entails(x, SepImp(phi, y))
    if (left is None) == (right is None):
        return None
    failed = left or right
    side = "X ⋆ [φ] ⪯ Y fails" if left else "X ⪯ [φ] −⋆ Y fails"
    return Witness(failed.state, failed.lhs, failed.rhs, note=f"{side}, the other side holds")


def _adjoint_operands(g: ArtifactGenerator) -> Operands:
    x, phi = g.expectation(), g.predicate()
    y = g.expectation()
    if g.chance(0.5):
        # makes the left side valid, so the right side must be too
        y = Max(SepCon(x, phi), y)
    return {"X": x, "P": phi, "Y": y}


def _points_to_operands(g: ArtifactGenerator) -> Operands:
    return {"e": g.address(), "v": g.arith(), "X": g.expectation()}


def _ls_split(o: Operands, ctx: LawContext) -> Optional[Witness]:
    a, b, gamma = o["a"], o["b"], o["gamma"]
    joined = Sup(gamma, SepCon(ListSegment(a, Var(gamma)), ListSegment(Var(gamma), b)))
    segment = ListSegment(a, b)
    witness = ctx.entails(segment, joined)
    if witness is not None:
        return witness
    end = compile_arith(b)
    return ctx.equal(segment, joined, where=lambda state: end(state.stack) not in state.heap)


def _embed_agree(o: Operands, ctx: LawContext) -> Optional[Witness]:
    phi = o["phi"]
    f = compile_expectation(embed_sl(phi), ctx.cfg)
    for state in ctx.states:
        value = f(state.stack, state.heap)
        expected = ONE if sl_satisfies(state, phi, ctx.cfg) else ZERO
        if value != expected:
            return Witness(state, value, expected, note="embedding disagrees with satisfaction")
    return None


def _disjoint_operands(g: ArtifactGenerator) -> Operands:
    return {"P": g.predicate(), "Q": g.predicate()}


def _disjoint_sum(o: Operands, ctx: LawContext) -> Optional[Witness]:
    phi = o["P"]
    psi = Mul(o["Q"], OneMinus(phi))
    return ctx.equal(Add(phi, psi), Max(phi, psi))


EXPECTATION_LAWS: tuple[Law, ...] = (
    Law(
        "sepcon.assoc", "X ⋆ (Y ⋆ Z) = (X ⋆ Y) ⋆ Z", _triple,
        lambda o, ctx: ctx.equal(SepCon(o["X"], SepCon(o["Y"], o["Z"])), SepCon(SepCon(o["X"], o["Y"]), o["Z"])),
    ),
    Law(
        "sepcon.comm", "X ⋆ Y = Y ⋆ X", _triple,
        lambda o, ctx: ctx.equal(SepCon(o["X"], o["Y"]), SepCon(o["Y"], o["X"])),
    ),
    Law(
        "sepcon.unit", "X ⋆ [emp] = X", lambda g: {"X": g.expectation()},
        lambda o, ctx: ctx.equal(SepCon(o["X"], EMP), o["X"]),
    ),
    Law(
        "sepcon.distrib_max", "X ⋆ max(Y, Z) = max(X ⋆ Y, X ⋆ Z)", _triple,
        lambda o, ctx: ctx.equal(SepCon(o["X"], Max(o["Y"], o["Z"])), Max(SepCon(o["X"], o["Y"]), SepCon(o["X"], o["Z"]))),
    ),
    Law(
        "sepcon.subdistrib_add", "X ⋆ (Y + Z) ⪯ X ⋆ Y + X ⋆ Z", _triple,
        lambda o, ctx: ctx.entails(SepCon(o["X"], Add(o["Y"], o["Z"])), Add(SepCon(o["X"], o["Y"]), SepCon(o["X"], o["Z"]))),
    ),
    Law(
        "sepcon.distrib_add_exact", "X ⋆ (Y + Z) = X ⋆ Y + X ⋆ Z for domain-exact X",
        lambda g: {"X": g.domain_exact(), "Y": g.expectation(), "Z": g.expectation()},
        lambda o, ctx: ctx.equal(SepCon(o["X"], Add(o["Y"], o["Z"])), Add(SepCon(o["X"], o["Y"]), SepCon(o["X"], o["Z"]))),
    ),
    Law(
        "sepcon.subdistrib_mul", "[φ] ⋆ (Y · Z) ⪯ ([φ] ⋆ Y) · ([φ] ⋆ Z)",
        lambda g: {"P": g.predicate(), "Y": g.expectation(), "Z": g.expectation()},
        lambda o, ctx: ctx.entails(SepCon(o["P"], Mul(o["Y"], o["Z"])), Mul(SepCon(o["P"], o["Y"]), SepCon(o["P"], o["Z"]))),
    ),
    Law(
        "sepcon.distrib_mul_exact", "[φ] ⋆ (Y · Z) = ([φ] ⋆ Y) · ([φ] ⋆ Z) for domain-exact [φ]",
        lambda g: {"P": g.domain_exact(predicate=True), "Y": g.expectation(), "Z": g.expectation()},
        lambda o, ctx: ctx.equal(SepCon(o["P"], Mul(o["Y"], o["Z"])), Mul(SepCon(o["P"], o["Y"]), SepCon(o["P"], o["Z"]))),
    ),
    Law(
        "sepcon.monotone", "X ⪯ X′ and Y ⪯ Y′ imply X ⋆ Y ⪯ X′ ⋆ Y′",
        lambda g: {"X": g.expectation(), "Y": g.expectation(), "U": g.expectation(), "W": g.expectation()},
        lambda o, ctx: ctx.entails(SepCon(o["X"], o["Y"]), SepCon(Max(o["X"], o["U"]), Add(o["Y"], o["W"]))),
    ),
    # ─── Separating implication ─────────────────────────────────────────────────
    Law(
        "sepimp.modus_ponens", "[φ] ⋆ ([φ] −⋆ X) ⪯ X",
        lambda g: {"P": g.predicate(), "X": g.expectation()},
        lambda o, ctx: ctx.entails(SepCon(o["P"], SepImp(o["P"], o["X"])), o["X"]),
    ),
    Law(
        "sepimp.adjoint", "X ⋆ [φ] ⪯ Y iff X ⪯ [φ] −⋆ Y", _adjoint_operands, _adjoint, full_heaps=True,
    ),
    Law(
        "sepimp.points_to", "(e ↦ e′) ⋆ ((e ↦ e′) −⋆ X) = (e ↪ e′) · X", _points_to_operands,
        lambda o, ctx: ctx.equal(
            SepCon(PointsTo(o["e"], (o["v"],)), SepImp(PointsTo(o["e"], (o["v"],)), o["X"])),
            Mul(Contains(o["e"], o["v"]), o["X"]),
        ),
    ),
    # ─── Purity ─────────────────────────────────────────────────────────────────
    Law(
        "pure.mul_le_sep", "X · Y ⪯ X ⋆ Y for pure X",
        lambda g: {"X": g.pure(), "Y": g.expectation()},
        lambda o, ctx: ctx.entails(Mul(o["X"], o["Y"]), SepCon(o["X"], o["Y"])),
    ),
    Law(
        "pure.mul_eq_sep", "X · Y = X ⋆ Y for pure X and Y",
        lambda g: {"X": g.pure(), "Y": g.pure()},
        lambda o, ctx: ctx.equal(Mul(o["X"], o["Y"]), SepCon(o["X"], o["Y"])),
    ),
    Law(
        "pure.mul_assoc", "(X · Y) ⋆ Z = X · (Y ⋆ Z) for pure X",
        lambda g: {"X": g.pure(), "Y": g.expectation(), "Z": g.expectation()},
        lambda o, ctx: ctx.equal(SepCon(Mul(o["X"], o["Y"]), o["Z"]), Mul(o["X"], SepCon(o["Y"], o["Z"]))),
    ),
    # ─── Tightest intuitionistic expectations ───────────────────────────────────
    Law(
        "intuit.sep_true_intuitionistic", "X ⋆ 1 is intuitionistic",
        lambda g: {"X": g.expectation()},
        lambda o, ctx: ctx.intuitionistic(SepCon(o["X"], ONE_E)),
    ),
    Law(
        "intuit.sep_true_above", "X ⪯ X ⋆ 1",
        lambda g: {"X": g.expectation()},
        lambda o, ctx: ctx.entails(o["X"], SepCon(o["X"], ONE_E)),
    ),
    Law(
        "intuit.sep_true_tightest", "X ⋆ 1 ⪯ X′ for every intuitionistic X′ ⪰ X",
        lambda g: {"X": g.expectation(), "W": g.expectation()},
        _sep_true_tightest,
    ),
    Law(
        "intuit.wand_true_intuitionistic", "1 −⋆ X is intuitionistic",
        lambda g: {"X": g.expectation()},
        lambda o, ctx: ctx.intuitionistic(SepImp(ONE_E, o["X"])),
    ),
    Law(
        "intuit.wand_true_below", "1 −⋆ X ⪯ X",
        lambda g: {"X": g.expectation()},
        lambda o, ctx: ctx.entails(SepImp(ONE_E, o["X"]), o["X"]),
    ),
    Law(
        "intuit.wand_true_tightest", "X′ ⪯ 1 −⋆ X for every intuitionistic X′ ⪯ X",
        lambda g: {"X": g.expectation(), "W": g.expectation()},
        _wand_true_tightest,
        full_heaps=True,
    ),
    # ─── Heap size ──────────────────────────────────────────────────────────────
    Law(
        "heapsize.points_to_sep", "(e ↦ e′) ⋆ size = (e ↪ e′) · (size ⊖ 1)",
        lambda g: {"e": g.address(), "v": g.arith()},
        lambda o, ctx: ctx.equal(
            SepCon(PointsTo(o["e"], (o["v"],)), SIZE),
            Mul(Contains(o["e"], o["v"]), Monus(SIZE, ONE_E)),
        ),
    ),
    Law(
        "heapsize.points_to_wand", "(e ↦ e′) −⋆ size = 1 + size + (e ↪ −) · ∞, where e is an address and e′ a value",
        lambda g: {"e": g.address(), "v": g.arith()},
        lambda o, ctx: ctx.equal(
            SepImp(PointsTo(o["e"], (o["v"],)), SIZE),
            Add(Add(ONE_E, SIZE), Mul(ContainsAny(o["e"]), INF_E)),
            where=_in_model(ctx, o["e"], o["v"]),
        ),
    ),
    Law(
        "heapsize.sep_mul", "(X ⋆ Y) · size ⪯ (X · size) ⋆ Y + X ⋆ (Y · size)",
        lambda g: {"X": g.expectation(), "Y": g.expectation()},
        lambda o, ctx: ctx.entails(
            Mul(SepCon(o["X"], o["Y"]), SIZE),
            Add(SepCon(Mul(o["X"], SIZE), o["Y"]), SepCon(o["X"], Mul(o["Y"], SIZE))),
        ),
    ),
    Law(
        "heapsize.sep_mul_exact", "(X ⋆ Y) · size = (X · size) ⋆ Y + X ⋆ (Y · size) for domain-exact X",
        lambda g: {"X": g.domain_exact(), "Y": g.expectation()},
        lambda o, ctx: ctx.equal(
            Mul(SepCon(o["X"], o["Y"]), SIZE),
            Add(SepCon(Mul(o["X"], SIZE), o["Y"]), SepCon(o["X"], Mul(o["Y"], SIZE))),
        ),
    ),
    # ─── List segments ──────────────────────────────────────────────────────────
    Law(
        "lists.len_size", "len(α, β) = ls(α, β) · size",
        lambda g: {"a": g.arith(), "b": g.arith()},
        lambda o, ctx: ctx.equal(ListLength(o["a"], o["b"]), Mul(ListSegment(o["a"], o["b"]), SIZE)),
    ),
    Law(
        "lists.ls_split",
        "ls(α, β) ⪯ sup γ. ls(α, γ) ⋆ ls(γ, β), with equality where β is not allocated",
        lambda g: {"a": g.arith(), "b": g.arith(), "gamma": g.bound_var},
        _ls_split,
    ),
    # ─── Additional simple rules ────────────────────────────────────────────────
    Law(
        "simple.wand_mul", "(e ↦ e′) −⋆ (X · Y) = ((e ↦ e′) −⋆ X) · ((e ↦ e′) −⋆ Y)",
        lambda g: {"e": g.address(), "v": g.arith(), "X": g.expectation(), "Y": g.expectation()},
        lambda o, ctx: ctx.equal(
            SepImp(PointsTo(o["e"], (o["v"],)), Mul(o["X"], o["Y"])),
            Mul(SepImp(PointsTo(o["e"], (o["v"],)), o["X"]), SepImp(PointsTo(o["e"], (o["v"],)), o["Y"])),
        ),
    ),
    Law(
        "simple.wand_sep",
        "(e ↦ e′) −⋆ ((e ↦ e′) ⋆ X) = (e ↪ −) · ∞ + (1 ⊖ (e ↪ −)) · X, where e is an address and e′ a value",
        _points_to_operands,
        lambda o, ctx: ctx.equal(
            SepImp(PointsTo(o["e"], (o["v"],)), SepCon(PointsTo(o["e"], (o["v"],)), o["X"])),
            Add(Mul(ContainsAny(o["e"]), INF_E), Mul(OneMinus(ContainsAny(o["e"])), o["X"])),
            where=_in_model(ctx, o["e"], o["v"]),
        ),
    ),
    Law(
        "simple.disjoint_sum", "[φ] + [ψ] = max([φ], [ψ]) when [φ] · [ψ] = 0",
        _disjoint_operands, _disjoint_sum,
    ),
    # ─── SL embedding ───────────────────────────────────────────────────────────
    Law(
        "embed.agree", "embed(φ) is 1 exactly on the states satisfying φ and 0 elsewhere",
        lambda g: {"phi": g.sl_formula()}, _embed_agree,
    ),
)
