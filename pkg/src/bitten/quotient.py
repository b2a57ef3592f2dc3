"""Rough equality quotient of the power set and its partial operations.

Two subsets are roughly equal when their lower and bitten upper
approximations coincide; the pair ``(lower, bitten)`` is the class
signature.  Classes are numbered in first-encounter order while sweeping
subsets by increasing bit pattern, so the class of the empty set is always 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .approx import Approximator
from .order import FinitePoset
from .space import DEFAULT_MAX_UNIVERSE, Granulation, Subset, Universe


@dataclass(frozen=True)
class RoughClass:
    id: int
    lower: int
    bitten: int
    members: tuple[int, ...]

    @property
    def signature(self) -> tuple[int, int]:
        return self.lower, self.bitten


@dataclass(frozen=True)
class QuotientPoset:
    granulation: Granulation
    classes: tuple[RoughClass, ...]
    poset: FinitePoset
    L: tuple[int, ...]
    diamond: tuple[int, ...]
    neg: tuple[int | None, ...]
    class_of: tuple[int, ...] = field(repr=False)

    @property
    def universe(self) -> Universe:
        return self.granulation.universe

    def __len__(self) -> int:
        return len(self.classes)

    @cached_property
    def by_signature(self) -> dict[tuple[int, int], int]:
        return {c.signature: c.id for c in self.classes}

    @cached_property
    def meet_table(self) -> tuple[tuple[int | None, ...], ...]:
        n = len(self.classes)
        return tuple(tuple(self.poset.meet(a, b) for b in range(n)) for a in range(n))

    @cached_property
    def join_table(self) -> tuple[tuple[int | None, ...], ...]:
        n = len(self.classes)
        return tuple(tuple(self.poset.join(a, b) for b in range(n)) for a in range(n))

    @property
    def bottom(self) -> int:
        return self.class_of[0]

    @property
    def top(self) -> int:
        return self.class_of[self.universe.full_mask]

    def class_of_subset(self, X: Subset) -> int:
        return self.class_of[X.mask]

    def label(self, c: int) -> str:
        u = self.universe
        rc = self.classes[c]
        return f"B{c}:({u.render(rc.lower)}|{u.render(rc.bitten)})"


def build_quotient(G: Granulation, cap: int = DEFAULT_MAX_UNIVERSE) -> QuotientPoset:
    ap = Approximator(G, cap)
    full = ap.full
    size = full + 1
    sig_id: dict[tuple[int, int], int] = {}
    members: list[list[int]] = []
    class_of = [0] * size
    for x in range(size):
        sig = (ap.lower[x], ap.bitten[x])
        if sig not in sig_id:
            sig_id[sig] = len(members)
            members.append([])
        c = sig_id[sig]
        members[c].append(x)
        class_of[x] = c
    classes = tuple(RoughClass(i, sig[0], sig[1], tuple(members[i]))
                    for sig, i in sorted(sig_id.items(), key=lambda kv: kv[1]))
    n = len(classes)

    def leq(a: int, b: int) -> bool:
        ca, cb = classes[a], classes[b]
        return ca.lower & ~cb.lower == 0 and ca.bitten & ~cb.bitten == 0

    poset = FinitePoset.from_leq(n, leq)
    # signatures are class invariants, so any representative will do for L and the diamond
    L = tuple(class_of[c.lower] for c in classes)
    diamond = tuple(class_of[c.bitten] for c in classes)
    neg: list[int | None] = []
    for c in classes:
        images = {class_of[full & ~m] for m in c.members}
        neg.append(images.pop() if len(images) == 1 else None)
    return QuotientPoset(G, classes, poset, L, diamond, tuple(neg), tuple(class_of))


def well_definedness_violations(Q: QuotientPoset) -> list[tuple[str, int, int]]:
    """Members whose own L/diamond image lands outside the tabulated class."""
    ap = Approximator(Q.granulation)
    bad = []
    for c in Q.classes:
        for m in c.members:
            if Q.class_of[ap.lower[m]] != Q.L[c.id]:
                bad.append(("L", c.id, m))
            if Q.class_of[ap.bitten[m]] != Q.diamond[c.id]:
                bad.append(("diamond", c.id, m))
    return bad


def l_class(Q: QuotientPoset, c: int) -> int:
    return Q.L[c]


def diamond_class(Q: QuotientPoset, c: int) -> int:
    return Q.diamond[c]


def neg_class(Q: QuotientPoset, c: int) -> int | None:
    return Q.neg[c]


def leq(Q: QuotientPoset, a: int, b: int) -> bool:
    return Q.poset.leq(a, b)


def meet(Q: QuotientPoset, a: int, b: int) -> int | None:
    return Q.meet_table[a][b]


def join(Q: QuotientPoset, a: int, b: int) -> int | None:
    return Q.join_table[a][b]


def hasse_edges(Q: QuotientPoset) -> list[tuple[int, int]]:
    return Q.poset.covers()


THEOREM_ITEMS = tuple(range(1, 10))


@dataclass
class TheoremReport:
    violations: dict[int, list[tuple]] = field(default_factory=dict)
    checked: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())


def quotient_theorem_report(Q: QuotientPoset) -> TheoremReport:
    """Check the nine quotient laws; conditional items only where their terms exist."""
    n = len(Q)
    le = Q.poset.leq
    L, D, N = Q.L, Q.diamond, Q.neg
    mt, jt = Q.meet_table, Q.join_table
    viol: dict[int, list[tuple]] = {i: [] for i in THEOREM_ITEMS}
    checked = {i: 0 for i in THEOREM_ITEMS}

    def conditional(item: int, small: int | None, big: int | None, *w) -> None:
        if small is None or big is None:
            return
        checked[item] += 1
        if not le(small, big):
            viol[item].append(w)

    for x in range(n):
        checked[2] += 1
        if mt[x][D[x]] != x:
            viol[2].append((x,))
        checked[3] += 1
        if D[D[x]] != D[x]:
            viol[3].append((x,))
        checked[6] += 1
        if mt[L[x]][D[L[x]]] != L[x]:
            viol[6].append((x,))
        checked[7] += 1
        if jt[D[x]][L[D[x]]] != D[x]:
            viol[7].append((x,))
        if N[x] is not None and N[D[x]] is not None:
            checked[8] += 1
            if N[D[x]] != L[N[x]]:
                viol[8].append((x,))
        if N[x] is not None and N[L[x]] is not None:
            checked[9] += 1
            if N[L[x]] != D[N[x]]:
                viol[9].append((x,))
        for y in range(n):
            j, m = jt[x][y], mt[x][y]
            conditional(1, jt[D[x]][D[y]], None if j is None else D[j], x, y)
            conditional(4, None if m is None else D[m], mt[D[x]][D[y]], x, y)
            conditional(5, jt[L[x]][L[y]], None if j is None else L[j], x, y)
    return TheoremReport(viol, checked)


def antitone_violations(Q: QuotientPoset) -> list[tuple[int, int]]:
    """Pairs ``a <= b`` with both negations defined but ``not b <= not a``."""
    out = []
    for a in range(len(Q)):
        for b in range(len(Q)):
            na, nb = Q.neg[a], Q.neg[b]
            if na is not None and nb is not None and Q.poset.leq(a, b) and not Q.poset.leq(nb, na):
                out.append((a, b))
    return out


def to_dot(Q: QuotientPoset, name: str = "quotient") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for c in Q.classes:
        lines.append(f'  n{c.id} [label="{Q.label(c.id)}"];')
    for a, b in sorted(hasse_edges(Q)):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
