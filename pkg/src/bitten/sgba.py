"""Choice-driven total operations on the rough quotient.

A choice function is stored only on the sets the operations consult: the
minimal upper bound and maximal lower bound sets of pairs (or the full
cones in ``mode="cone"``) plus singletons.  ``a + b`` and ``a · b`` are the
chosen members of the upper and lower sets of ``{a, b}``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .quotient import QuotientPoset
from .space import CapExceeded, InputError, InvariantError, iter_bits

CHOICE_MODES = ("minimal", "cone")
CHOICE_RULES = ("lexicographic-min", "random")


def _bits(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def ub_min(Q: QuotientPoset, a: int, b: int) -> frozenset[int]:
    P = Q.poset
    return _bits(P.minimal(P.upper_bounds(a, b)))


def lb_max(Q: QuotientPoset, a: int, b: int) -> frozenset[int]:
    P = Q.poset
    return _bits(P.maximal(P.lower_bounds(a, b)))


def upper_set(Q: QuotientPoset, a: int, b: int, mode: str) -> frozenset[int]:
    return ub_min(Q, a, b) if mode == "minimal" else _bits(Q.poset.upper_bounds(a, b))


def lower_set(Q: QuotientPoset, a: int, b: int, mode: str) -> frozenset[int]:
    return lb_max(Q, a, b) if mode == "minimal" else _bits(Q.poset.lower_bounds(a, b))


def cell_key(mode: str, side: str, cell: frozenset[int]):
    """Table key of a queried set.

    With full cones one choice cannot serve both sides: the whole poset is
    the upper cone of the bottom and the lower cone of the top, and coherence
    asks for different members.  Cone mode therefore keeps a table per side.
    """
    return cell if mode == "minimal" or len(cell) == 1 else (side, cell)


def _cell(key) -> frozenset[int]:
    return key if isinstance(key, frozenset) else key[1]


def _forced(Q: QuotientPoset, mode: str) -> tuple[dict, set]:
    """Cells fixed by the choice axioms and coherence, and all cells queried."""
    n = len(Q)
    P = Q.poset
    forced: dict = {frozenset([x]): x for x in range(n)}
    cells: set = set(forced)
    for a in range(n):
        for b in range(n):
            Uc, Dc = upper_set(Q, a, b, mode), lower_set(Q, a, b, mode)
            if not Uc or not Dc:
                raise InvariantError(f"classes {a} and {b} have no common bound")
            U, D = cell_key(mode, "U", Uc), cell_key(mode, "L", Dc)
            cells |= {U, D}
            if P.leq(a, b):
                for cell, want in ((U, b), (D, a)):
                    if forced.setdefault(cell, want) != want:
                        raise InvariantError("coherence constraints conflict")
    return forced, cells


@dataclass(frozen=True)
class ChoiceFunction:
    quotient: QuotientPoset = field(repr=False)
    table: dict
    mode: str = "minimal"

    def __post_init__(self):
        if self.mode not in CHOICE_MODES:
            raise InputError(f"choice mode must be one of {CHOICE_MODES}")
        Q = self.quotient
        for x in range(len(Q)):
            if self.table.get(frozenset([x])) != x:
                raise InvariantError(f"choice of the singleton {{{x}}} must be {x}")
        for A, v in self.table.items():
            if v not in _cell(A):
                raise InvariantError("choice outside its set")
        for a in range(len(Q)):
            for b in range(len(Q)):
                if Q.poset.leq(a, b):
                    if self.upper(a, b) != b or self.lower(a, b) != a:
                        raise InvariantError(f"choice is not coherent at {a} <= {b}")

    def __call__(self, A: Iterable[int], side: str = "U") -> int:
        key = cell_key(self.mode, side, frozenset(A))
        if key not in self.table:
            raise InputError(f"choice not tabulated on {sorted(_cell(key))}")
        return self.table[key]

    def upper(self, a: int, b: int) -> int:
        return self(upper_set(self.quotient, a, b, self.mode), "U")

    def lower(self, a: int, b: int) -> int:
        return self(lower_set(self.quotient, a, b, self.mode), "L")

    def free_cells(self) -> list:
        forced, _ = _forced(self.quotient, self.mode)
        return sorted((c for c in self.table if c not in forced), key=_sort_key)


def _sort_key(key):
    return (sorted(_cell(key)), "" if isinstance(key, frozenset) else key[0])


def make_choice(Q: QuotientPoset, seed: int | None = None, rule: str = "lexicographic-min",
                mode: str = "minimal") -> ChoiceFunction:
    """A coherent choice; ``seed`` switches to a seeded random pick on free cells."""
    if rule not in CHOICE_RULES:
        raise InputError(f"choice rule must be one of {CHOICE_RULES}")
    if seed is not None:
        rule = "random"
    rng = random.Random(seed)
    forced, cells = _forced(Q, mode)
    table = dict(forced)
    for cell in sorted(cells - forced.keys(), key=_sort_key):
        opts = sorted(_cell(cell))
        table[cell] = opts[0] if rule == "lexicographic-min" else rng.choice(opts)
    return ChoiceFunction(Q, table, mode)


def all_choices(Q: QuotientPoset, mode: str = "minimal", cap: int = 1 << 12) -> Iterator[ChoiceFunction]:
    forced, cells = _forced(Q, mode)
    free = sorted(cells - forced.keys(), key=_sort_key)
    total = 1
    for c in free:
        total *= len(_cell(c))
    if total > cap:
        raise CapExceeded(f"{total} coherent choice functions exceed the cap {cap}")
    for pick in itertools.product(*(sorted(_cell(c)) for c in free)):
        yield ChoiceFunction(Q, {**forced, **dict(zip(free, pick))}, mode)


@dataclass(frozen=True)
class SgbaModel:
    quotient: QuotientPoset = field(repr=False)
    choice: ChoiceFunction = field(repr=False)
    plus_table: tuple[tuple[int, ...], ...]
    times_table: tuple[tuple[int, ...], ...]

    @property
    def L(self) -> tuple[int, ...]:
        return self.quotient.L

    @property
    def diamond(self) -> tuple[int, ...]:
        return self.quotient.diamond

    @property
    def neg(self) -> tuple[int | None, ...]:
        return self.quotient.neg

    @property
    def zero(self) -> int:
        return self.quotient.bottom

    @property
    def one(self) -> int:
        return self.quotient.top

    def __len__(self) -> int:
        return len(self.quotient)


def sgba_model(choice: ChoiceFunction) -> SgbaModel:
    Q = choice.quotient
    n = len(Q)
    plus = tuple(tuple(choice.upper(a, b) for b in range(n)) for a in range(n))
    times = tuple(tuple(choice.lower(a, b) for b in range(n)) for a in range(n))
    return SgbaModel(Q, choice, plus, times)


def plus(M: SgbaModel, a: int, b: int) -> int:
    return M.plus_table[a][b]


def times(M: SgbaModel, a: int, b: int) -> int:
    return M.times_table[a][b]


SGBA_ITEMS = tuple(range(1, 15))
LAMBDA_LAWS = ("+ idempotent commutative", "· idempotent commutative", "a·(a+b)=a", "a+(a·b)=a",
               "a·((a·b)·c)=(a·b)·c", "a+((a+b)+c)=(a+b)+c")


@dataclass
class SgbaReport:
    violations: dict[int, list[tuple]] = field(default_factory=dict)
    checked: dict[int, int] = field(default_factory=dict)
    lambda_violations: dict[str, list[tuple]] = field(default_factory=dict)
    extra_violations: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values()) and not self.extra_violations

    @property
    def failing(self) -> list[int]:
        return [k for k in SGBA_ITEMS if self.violations.get(k)]


def lambda_lattice_violations(M: SgbaModel, max_witnesses: int = 5) -> dict[str, list[tuple]]:
    n = len(M)
    p, t = M.plus_table, M.times_table
    out: dict[str, list[tuple]] = {k: [] for k in LAMBDA_LAWS}

    def bad(law: str, *w) -> None:
        if len(out[law]) < max_witnesses:
            out[law].append(w)

    for a in range(n):
        if p[a][a] != a:
            bad(LAMBDA_LAWS[0], a)
        if t[a][a] != a:
            bad(LAMBDA_LAWS[1], a)
        for b in range(n):
            if p[a][b] != p[b][a]:
                bad(LAMBDA_LAWS[0], a, b)
            if t[a][b] != t[b][a]:
                bad(LAMBDA_LAWS[1], a, b)
            if t[a][p[a][b]] != a:
                bad(LAMBDA_LAWS[2], a, b)
            if p[a][t[a][b]] != a:
                bad(LAMBDA_LAWS[3], a, b)
            ab_t, ab_p = t[a][b], p[a][b]
            for c in range(n):
                if t[a][t[ab_t][c]] != t[ab_t][c]:
                    bad(LAMBDA_LAWS[4], a, b, c)
                if p[a][p[ab_p][c]] != p[ab_p][c]:
                    bad(LAMBDA_LAWS[5], a, b, c)
    return out


def sgba_law_report(M: SgbaModel, max_witnesses: int = 5) -> SgbaReport:
    """All fourteen items; the negation item is checked only where both sides are defined."""
    n = len(M)
    p, t, L, D, N = M.plus_table, M.times_table, M.L, M.diamond, M.neg
    rep = SgbaReport({k: [] for k in SGBA_ITEMS}, {k: 0 for k in SGBA_ITEMS})

    def check(item: int, good: bool, *w) -> None:
        rep.checked[item] += 1
        if not good and len(rep.violations[item]) < max_witnesses:
            rep.violations[item].append(w)

    rep.lambda_violations = lambda_lattice_violations(M, max_witnesses)
    for law, ws in rep.lambda_violations.items():
        rep.checked[1] += 1
        for w in ws:
            check(1, False, law, *w)
        if not ws:
            check(1, True)
    for a in range(n):
        check(3, p[a][a] == a and t[a][a] == a, a)
        check(6, p[a][L[a]] == a and t[a][L[a]] == L[a], a)
        check(7, p[a][D[a]] == D[a] and t[a][D[a]] == a, a)
        check(8, L[L[a]] == L[a] and D[D[a]] == D[a], a)
        if N[a] is not None and N[L[a]] is not None:
            check(11, N[L[a]] == D[N[a]], "¬L", a)
        if N[a] is not None and N[D[a]] is not None:
            check(11, N[D[a]] == L[N[a]], "¬◆", a)
        ld = L[D[a]]
        check(13, p[ld][D[a]] == D[a] and t[ld][D[a]] == ld, a)
        dl = D[L[a]]
        check(14, p[L[a]][dl] == dl and t[L[a]][dl] == L[a], a)
        for b in range(n):
            check(2, p[a][b] == p[b][a] and t[a][b] == t[b][a], a, b)
            check(4, p[a][t[a][b]] == a and t[a][p[a][b]] == a, a, b)
            if p[a][b] == a:
                check(9, p[L[a]][L[b]] == L[a], "+", a, b)
                check(10, p[D[a]][D[b]] == D[a], "+", a, b)
            if t[a][b] == a:
                check(9, t[L[a]][L[b]] == L[a], "·", a, b)
                check(10, t[D[a]][D[b]] == D[a], "·", a, b)
            # a · b = a forces a + b = b
            if t[a][b] == a and p[a][b] != b:
                rep.extra_violations.append((a, b))
            for c in range(n):
                bc_p, bc_t = p[b][c], t[b][c]
                check(5, p[a][p[a][bc_p]] == p[a][bc_p] and t[a][t[a][bc_t]] == t[a][bc_t], a, b, c)
    z, o = M.zero, M.one
    check(12, L[z] == z and L[o] == o and D[z] == z and D[o] == o)
    return rep


def forced_value_violations(Q: QuotientPoset, models: Sequence[SgbaModel]) -> list[tuple[str, int, int]]:
    """Pairs with a one-element bound set whose value differs between models."""
    n = len(Q)
    bad = []
    for a in range(n):
        for b in range(n):
            if len(ub_min(Q, a, b)) == 1 and len({m.plus_table[a][b] for m in models}) > 1:
                bad.append(("+", a, b))
            if len(lb_max(Q, a, b)) == 1 and len({m.times_table[a][b] for m in models}) > 1:
                bad.append(("·", a, b))
    return bad


def minimal_granule_classes(Q: QuotientPoset) -> frozenset[int]:
    P = Q.poset
    cand = [c for c in range(len(Q)) if Q.L[c] != Q.bottom]
    return frozenset(c for c in cand if not any(d != c and P.leq(d, c) for d in cand))


@dataclass
class ProbeReport:
    models: int
    order: tuple[tuple[int, ...], ...] | None
    order_matches: bool | None
    minimal_granules: frozenset[int] | None
    blocks: str

    @property
    def empty(self) -> bool:
        return self.models == 0


def reconstruction_probe(models: Sequence[SgbaModel]) -> ProbeReport:
    """Recover what the given algebras determine without looking at the tolerance.

    ``a <= b`` is read off as ``a + b = b`` agreeing across every model.  The
    blocks are never claimed to be determined: a choice function only
    reshuffles values that the order already fixes.
    """
    if not models:
        return ProbeReport(0, None, None, None, "nothing recoverable")
    n = len(models[0])
    up = []
    for a in range(n):
        up.append(tuple(b for b in range(n) if all(m.plus_table[a][b] == b for m in models)))
    Q = models[0].quotient
    truth = tuple(tuple(b for b in range(n) if Q.poset.leq(a, b)) for a in range(n))
    cand = [c for c in range(n) if models[0].L[c] != models[0].zero]
    leq = {(a, b) for a in range(n) for b in up[a]}
    mins = frozenset(c for c in cand if not any(d != c and (d, c) in leq for d in cand))
    return ProbeReport(len(models), tuple(up), tuple(up) == truth, mins, "not established")
