"""Law packs for bitten algebras and a batched partial-equality checker.

Equality modes:

* ``=`` in an unconditional law or a premise: both sides defined and equal.
* ``ω``: equal wherever both sides are defined.
* ``ω*``: defined on the same assignments and equal there.
* ``=`` in the conclusion of a conditional law follows ``conclusion_semantics``:
  ``"weak"`` (default) behaves like ``ω``, ``"strict"`` like an unconditional ``=``.

A premise ``t = v`` whose right side is a fresh variable binds ``v`` to the
value of ``t`` instead of ranging ``v`` over the carrier.  Free variables are
enumerated in stages; premises and (for weak conclusions) undefined subterms
prune partial assignments early.  Stages whose full cross product exceeds the
assignment budget are sampled with a seeded generator and the result is
flagged as not exhaustive.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..space import InputError
from .model import PartialAlgebraModel
from .terms import App, Const, Equation, SIGNATURE, Term, Var, parse_law, subterms, variables

DEFAULT_BUDGET = 1 << 24
CHUNK = 1 << 15
VARIANTS = ("as-printed", "corrected")


@dataclass(frozen=True)
class Law:
    name: str
    item: int
    text: str
    premises: tuple[Equation, ...]
    conclusions: tuple[Equation, ...]
    variant: str = "both"
    note: str = ""

    @classmethod
    def parse(cls, name: str, item: int, text: str, variant: str = "both", note: str = "") -> "Law":
        premises, conclusions = parse_law(text)
        law = cls(name, item, text, premises, conclusions, variant, note)
        law.check_signature()
        return law

    @property
    def conditional(self) -> bool:
        return bool(self.premises)

    @property
    def variables(self) -> list[str]:
        vs: set[str] = set()
        for eq in self.premises + self.conclusions:
            vs |= eq.variables
        return sorted(vs)

    def check_signature(self) -> None:
        for eq in self.premises + self.conclusions:
            for side in (eq.lhs, eq.rhs):
                for t in subterms(side):
                    if isinstance(t, App) and t.op not in SIGNATURE:
                        raise InputError(f"unknown operation symbol {t.op!r} in {self.name}")

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "item": self.item,
            "variant": self.variant,
            "text": self.text,
            "premises": [str(e) for e in self.premises],
            "conclusions": [{"equation": str(e), "mode": e.mode} for e in self.conclusions],
            "note": self.note,
        }


# -- packs ------------------------------------------------------------------------

BOOLEAN_AXIOMS = (
    "x ∪ y = y ∪ x, x ∩ y = y ∩ x, x ∪ (y ∪ z) = (x ∪ y) ∪ z, x ∩ (y ∩ z) = (x ∩ y) ∩ z, "
    "x ∪ (x ∩ y) = x, x ∩ (x ∪ y) = x, x ∪ (y ∩ z) = (x ∪ y) ∩ (x ∪ z), "
    "x ∩ (y ∪ z) = (x ∩ y) ∪ (x ∩ z), x ∪ xᶜ = ⊤, x ∩ xᶜ = ⊥, x ∪ ⊥ = x, x ∩ ⊤ = x"
)

# item number -> text, shared by the two packs where identical
_CONCRETE = {
    1: BOOLEAN_AXIOMS,
    2: "x ∨ y =ω* y ∨ x",
    3: "x ∨ (y ∨ z) =ω (x ∨ y) ∨ z",
    4: "ξ(x) -> x ∨ x = cl1(x)",
    5: "x ∨ y = z -> ξ(z)",
    6: "x ∨ x = y -> cl2(xᶜ) = xᶜ, y = cl1(x) = x ∧ x",
    7: "cl1(x) ∩ x = x, cl1(cl1(x)) = cl1(x), cl2(x) ∩ x = x, cl2(cl2(x)) = cl2(x)",
    8: "x ∩ y = x -> cl1(x) ∩ cl1(y) = cl1(x), cl2(x) ∩ cl2(y) = cl2(x)",
    9: "x ∧ y =ω* y ∧ x",
    11: "x ∧ x = y -> cl2(xᶜ) = xᶜ, y = cl1(x)",
    12: "cl2(cl1(x)ᶜ) = cl1(x)ᶜ -> x ∧ x = cl1(x)",
    13: "x ∧ y = z -> ξ(z)",
    14: "(x ∧ y) ∨ x = z -> z = cl1(x)",
    15: "(x ∧ y) ∨ x =ω* x ∧ (y ∨ x)",
    16: "𝔏⊥ = ⊥, 𝔏1 = 1",
    17: "ξ(x) -> x ∨ 𝔏x = x, 𝔏𝔏x = 𝔏x",
    18: "x ⊓ y = z -> ξ(x, y, z)",
    19: "x ⊔ y = z -> ξ(x, y, z)",
    20: "x ⊓ y =ω* y ⊓ x",
    21: "x ⊓ (y ⊓ z) =ω (x ⊓ y) ⊓ z",
    22: "x ⊔ y =ω* y ⊔ x",
    23: "x ⊔ (y ⊔ z) =ω (x ⊔ y) ⊔ z",
    24: "ξ(x, y) -> ⋄(x ⊔ y) ∩ (⋄x ⊔ ⋄y) = ⋄x ⊔ ⋄y",
    25: "ξ(x) -> x ⊓ ⋄x = x, ⋄⋄x = ⋄x",
    27: "ξ(x, y) -> 𝔏(x ⊔ y) ∩ (𝔏x ⊔ 𝔏y) = 𝔏x ⊔ 𝔏y",
    28: "ξ(x) -> 𝔏x ⊓ ⋄𝔏x = 𝔏x",
    29: "ξ(x) -> ⋄x ⊔ 𝔏⋄x = ⋄x",
    30: "ξ(x) -> ∼⋄x = 𝔏∼x",
    31: "ξ(x) -> ∼𝔏x = ⋄∼x",
    32: "x ⊓ y = x -> x ⊔ y = y",
}

# the two items whose printed form looks like a slip
_WEDGE_ASSOC = {
    "as-printed": "x ∧ (y ∧ z) =ω (x ∧ y) ∨ z",
    "corrected": "x ∧ (y ∧ z) =ω (x ∧ y) ∧ z",
}
_DIAMOND_MEET = {
    "as-printed": "ξ(x, y) -> ⋄(x ⊓ y) ∩ (⋄x ⊓ ⋄y) = ⋄(x ⊔ y)",
    "corrected": "ξ(x, y) -> ⋄(x ⊓ y) ∩ (⋄x ⊓ ⋄y) = ⋄(x ⊓ y)",
}
_NOTE_ASSOC = "printed right side ends in ∨; the corrected reading uses ∧ throughout"
_NOTE_DIAMOND = "printed right side is ⋄(x ⊔ y); the corrected reading is ⋄(x ⊓ y)"

# abstract item -> concrete item it restates
_ABSTRACT_SOURCE = {i: i for i in range(1, 25)}
_ABSTRACT_SOURCE.update({25: 26, 26: 27, 27: 28, 28: 29, 29: 30, 30: 31})
_ABSTRACT_OVERRIDES = {
    2: "x ∨ y =ω y ∨ x",
    4: "cl2(cl1(x)ᶜ) = cl1(x)ᶜ -> x ∨ x = cl1(x)",
    9: "x ∧ y =ω y ∧ x",
    15: "(x ∧ y) ∨ x =ω x ∧ (y ∨ x)",
    20: "x ⊓ y =ω y ⊓ x",
    22: "x ⊔ y =ω y ⊔ x",
}


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}")


def concrete_law_pack(variant: str = "corrected") -> list[Law]:
    _check_variant(variant)
    out = []
    for item in range(1, 33):
        if item == 10:
            out.append(Law.parse("concrete-10", 10, _WEDGE_ASSOC[variant], variant, _NOTE_ASSOC))
        elif item == 26:
            out.append(Law.parse("concrete-26", 26, _DIAMOND_MEET[variant], variant, _NOTE_DIAMOND))
        else:
            out.append(Law.parse(f"concrete-{item}", item, _CONCRETE[item]))
    return out


def abstract_law_pack(variant: str = "corrected") -> list[Law]:
    _check_variant(variant)
    out = []
    for item in range(1, 31):
        src = _ABSTRACT_SOURCE[item]
        name = f"abstract-{item}"
        if src == 10:
            out.append(Law.parse(name, item, _WEDGE_ASSOC[variant], variant, _NOTE_ASSOC))
        elif src == 26:
            out.append(Law.parse(name, item, _DIAMOND_MEET[variant], variant, _NOTE_DIAMOND))
        else:
            out.append(Law.parse(name, item, _ABSTRACT_OVERRIDES.get(item, _CONCRETE[src])))
    return out


def law_documents(pack: list[Law]) -> list[dict]:
    return [law.to_record() for law in pack]


# -- evaluation -------------------------------------------------------------------

@dataclass
class LawResult:
    name: str
    holds: bool
    checked: int
    exhaustive: bool
    premise_hits: int
    counterexamples: list[dict[str, str]] = field(default_factory=list)
    failing_conclusions: list[str] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "checked": self.checked,
            "exhaustive": self.exhaustive,
            "premise_hits": self.premise_hits,
            "failing_conclusions": self.failing_conclusions,
            "counterexamples": self.counterexamples,
        }


class _Evaluator:
    def __init__(self, model: PartialAlgebraModel, env: dict[str, Any], batch: int):
        self.model = model
        self.env = env  # name -> (values, defined)
        self.batch = batch
        self.memo: dict[Term, tuple[Any, np.ndarray]] = {}

    def __call__(self, t: Term) -> tuple[Any, np.ndarray]:
        if t in self.memo:
            return self.memo[t]
        if isinstance(t, Var):
            out = self.env[t.name]
        elif isinstance(t, Const):
            out = self.model.constant(t.name, self.batch)
        else:
            vals, defs = zip(*(self(a) for a in t.args))
            d = np.logical_and.reduce(defs) if len(defs) > 1 else defs[0]
            out = self.model.apply(t.op, list(vals), d)
        self.memo[t] = out
        return out

    def holds(self, eq: Equation) -> np.ndarray:
        (a, da), (b, db) = self(eq.lhs), self(eq.rhs)
        return da & db & self.model.equal(a, b)


def _bindings(law: Law) -> tuple[dict[str, Equation], list[str]]:
    """Premises ``t = v`` with v not seen in t or any earlier premise bind v."""
    bound: dict[str, Equation] = {}
    seen: set[str] = set()
    for eq in law.premises:
        if isinstance(eq.rhs, Var) and eq.rhs.name not in variables(eq.lhs) | seen:
            bound[eq.rhs.name] = eq
        seen |= eq.variables
    free = [v for v in law.variables if v not in bound]
    return bound, free


def _occurrences(t: Term, parent: tuple[str, int] | None = None):
    """Yield ``(var, (op, position) or None)`` for every variable occurrence."""
    if isinstance(t, Var):
        yield t.name, parent
    elif isinstance(t, App):
        for k, a in enumerate(t.args):
            yield from _occurrences(a, (t.op, k))


def _domains(model: PartialAlgebraModel, law: Law, free: list[str],
             weak_single: bool = False) -> dict[str, np.ndarray]:
    """Carrier indices each free variable must range over.

    When every occurrence of a variable is an argument whose effect the model
    reduces to a key (see ``PartialAlgebraModel.arg_key``), one representative
    per key value gives the same verdicts as the whole carrier.  Variables are
    also confined to the argument domains of operations that must be defined.
    """
    kinds: dict[str, set] = {v: set() for v in free}
    for eq in law.premises + law.conclusions:
        for side in (eq.lhs, eq.rhs):
            for v, parent in _occurrences(side):
                if v in kinds:
                    kinds[v].add(model.arg_key(*parent) if parent else None)
    # every subterm of a premise must be defined, and so must every subterm of
    # the only conclusion when undefined conclusions are skipped anyway
    must = [side for eq in law.premises for side in (eq.lhs, eq.rhs)]
    if weak_single:
        must += [law.conclusions[0].lhs, law.conclusions[0].rhs]
    allowed = {v: np.ones(model.size, dtype=bool) for v in free}
    for side in must:
        for v, parent in _occurrences(side):
            if v in allowed and parent:
                d = model.arg_domain(*parent)
                if d is not None:
                    allowed[v] &= d
    out = {}
    for v in free:
        ks = kinds[v]
        if len(ks) == 1 and None not in ks:
            keys = model.keys(ks.pop())
            _, first = np.unique(keys, return_index=True)
            cand = np.sort(first).astype(np.int64)
        else:
            cand = np.arange(model.size, dtype=np.int64)
        out[v] = cand[allowed[v][cand]]
    return out


def _closure(assigned: set[str], bound: dict[str, Equation]) -> set[str]:
    """Assigned variables plus bound ones computable from them."""
    out = set(assigned)
    changed = True
    while changed:
        changed = False
        for v, eq in bound.items():
            if v not in out and variables(eq.lhs) <= out:
                out.add(v)
                changed = True
    return out


def _maximal_subterms(t: Term, avail: set[str]) -> list[Term]:
    if variables(t) <= avail:
        return [t]
    if isinstance(t, App):
        return [s for a in t.args for s in _maximal_subterms(a, avail)]
    return []


class _Plan:
    def __init__(self, law: Law, semantics: str):
        self.law = law
        self.bound, self.free = _bindings(law)
        self.weak = [self._is_weak(eq, semantics) for eq in law.conclusions]
        # pruning on undefined conclusion subterms is sound only if every conclusion is weak
        self.prunable = all(self.weak) and len(law.conclusions) > 0
        self.order = self._choose_order()

    def _is_weak(self, eq: Equation, semantics: str) -> bool:
        if eq.mode == "ω":
            return True
        if eq.mode == "=" and self.law.conditional:
            return semantics == "weak"
        return False

    def guards_at(self, avail: set[str]) -> tuple[list[Equation], list[list[Term]]]:
        prem = []
        for eq in self.law.premises:
            if isinstance(eq.rhs, Var) and self.bound.get(eq.rhs.name) is eq:
                continue
            if eq.variables <= avail:
                prem.append(eq)
        dead: list[list[Term]] = []
        if self.prunable:
            for eq in self.law.conclusions:
                dead.append(_maximal_subterms(eq.lhs, avail) + _maximal_subterms(eq.rhs, avail))
        return prem, dead

    def _score(self, order: tuple[str, ...]) -> tuple:
        s = []
        for j in range(1, len(order)):
            avail = _closure(set(order[:j]), self.bound)
            prem, dead = self.guards_at(avail)
            s.append(len(prem) + sum(1 for d in dead if any(isinstance(t, App) for t in d)))
        return tuple(s)

    def _choose_order(self) -> tuple[str, ...]:
        if not self.free:
            return ()
        return max(itertools.permutations(self.free), key=lambda o: (self._score(o), tuple(-ord(c[0]) for c in o)))


def _verdicts(model, law: Law, weak: list[bool], ev: "_Evaluator", ok: np.ndarray,
              failing: set[str]) -> np.ndarray:
    bad = np.zeros(len(ok), dtype=bool)
    for eq, w in zip(law.conclusions, weak):
        (x, dx), (y, dy) = ev(eq.lhs), ev(eq.rhs)
        same = model.equal(x, y)
        if w:
            f = dx & dy & ~same
        elif eq.mode == "ω*":
            f = (dx != dy) | (dx & dy & ~same)
        else:
            f = ~(dx & dy & same)
        f &= ok
        if f.any():
            failing.add(str(eq))
        bad |= f
    return bad


def law_eval(model: PartialAlgebraModel, law: Law, mode: str | None = None,
             conclusion_semantics: str = "weak", budget: int = DEFAULT_BUDGET, seed: int = 0,
             max_counterexamples: int = 5) -> LawResult:
    """Check one law on every assignment of carrier elements to its free variables."""
    if conclusion_semantics not in ("weak", "strict"):
        raise InputError("conclusion_semantics must be 'weak' or 'strict'")
    if mode is not None:
        if law.conditional:
            raise InputError("a mode override applies to unconditional laws only")
        law = Law(law.name, law.item, law.text, law.premises,
                  tuple(Equation(e.lhs, e.rhs, mode) for e in law.conclusions), law.variant, law.note)
    plan = _Plan(law, conclusion_semantics)
    rng = np.random.default_rng(seed)
    order = plan.order
    dom = _domains(model, law, plan.free, plan.prunable and len(law.conclusions) == 1)

    # cut the order into stages, ending a stage wherever something can be filtered
    stages: list[list[str]] = []
    cur: list[str] = []
    for j, v in enumerate(order):
        cur.append(v)
        avail = _closure(set(order[:j + 1]), plan.bound)
        prem, dead = plan.guards_at(avail)
        newly_bound = avail - _closure(set(order[:j]), plan.bound) - {v}
        if j == len(order) - 1 or prem or newly_bound or any(any(isinstance(t, App) for t in d) for d in dead):
            stages.append(cur)
            cur = []

    exhaustive = True
    survivors = np.zeros((1, 0), dtype=np.int64)  # carrier indices of the assigned variables
    assigned: list[str] = []
    checked = hits = 0
    cex: list[dict[str, str]] = []
    failing: set[str] = set()

    for si, stage in enumerate(stages):
        final = si == len(stages) - 1
        sizes = [len(dom[v]) for v in stage]
        per = int(np.prod(sizes, dtype=object))
        total = len(survivors) * per
        if total > budget:
            exhaustive = False
            chunks = (rng.integers(0, total, size=min(CHUNK, budget - i), dtype=np.int64)
                      for i in range(0, budget, CHUNK))
        else:
            chunks = (np.arange(i, min(i + CHUNK, total), dtype=np.int64) for i in range(0, total, CHUNK))
        names = assigned + stage
        avail = _closure(set(names), plan.bound)
        prem, dead = plan.guards_at(avail)
        kept = []
        for flat in chunks:
            cols = [survivors[flat // per]]
            rest = flat % per
            digits = []
            for v, size in zip(reversed(stage), reversed(sizes)):
                digits.append(dom[v][rest % size])
                rest //= size
            idx = np.column_stack(cols + digits[::-1])
            b = len(idx)
            env = {name: (model.elements(idx[:, k]), np.ones(b, dtype=bool)) for k, name in enumerate(names)}
            ev = _Evaluator(model, env, b)
            _bind(ev, plan, avail - set(names))
            ok = np.ones(b, dtype=bool)
            for v in avail - set(names):
                ok &= ev.env[v][1]
            for eq in prem:
                ok &= ev.holds(eq)
            if not final:
                if dead:
                    alive = np.zeros(b, dtype=bool)
                    for terms in dead:
                        live = np.ones(b, dtype=bool)
                        for t in terms:
                            live &= ev(t)[1]
                        alive |= live
                    ok &= alive
                kept.append(idx[ok])
                continue
            checked += b
            hits += int(ok.sum())
            bad = _verdicts(model, law, plan.weak, ev, ok, failing)
            for r in np.flatnonzero(bad)[:max(0, max_counterexamples - len(cex))]:
                cex.append({name: model.render(vals, int(r)) if d[r] else "undefined"
                            for name, (vals, d) in sorted(ev.env.items())})
        if not final:
            survivors = np.concatenate(kept) if kept else np.zeros((0, len(names)), dtype=np.int64)
            assigned = names

    if not stages:
        # a closed law has exactly one (empty) assignment
        ev = _Evaluator(model, {}, 1)
        ok = np.ones(1, dtype=bool)
        for eq in law.premises:
            ok &= ev.holds(eq)
        checked, hits = 1, int(ok.sum())
        if _verdicts(model, law, plan.weak, ev, ok, failing).any():
            cex.append({})
    return LawResult(law.name, not failing, checked, exhaustive, hits, cex,
                     [str(e) for e in law.conclusions if str(e) in failing])


def _bind(ev: _Evaluator, plan: _Plan, todo: set[str]) -> None:
    """Evaluate binding premises in dependency order and add them to the environment."""
    todo = set(todo)
    while todo:
        progress = False
        for v in list(todo):
            eq = plan.bound[v]
            if variables(eq.lhs) <= set(ev.env):
                ev.env[v] = ev(eq.lhs)
                todo.discard(v)
                progress = True
        if not progress:
            raise InputError("circular variable bindings")


@dataclass
class PackReport:
    pack: str
    variant: str
    results: list[LawResult]

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.results)

    @property
    def failing(self) -> list[str]:
        return [r.name for r in self.results if not r.holds]

    @property
    def exhaustive(self) -> bool:
        return all(r.exhaustive for r in self.results)


def run_pack(model: PartialAlgebraModel, pack: list[Law], name: str = "", variant: str = "",
             **kw) -> PackReport:
    return PackReport(name, variant, [law_eval(model, law, **kw) for law in pack])
