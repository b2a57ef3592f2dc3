"""Finite partial algebras over the bitten signature, evaluated in batches.

A model exposes its carrier by index and evaluates operations on whole
batches of values at once.  ``TableModel`` stores explicit operation tables
over a small carrier.  ``BiteAlgebra`` is the concrete algebra on families
of isotone maps: values are rows of packed ``uint64`` words, operations are
computed exactly in the power set of ``K*``, and only the variables of a law
are restricted to the designated carrier.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, Mapping, Sequence

import numpy as np

from ..order import DEFAULT_MAX_UPSETS
from ..quotient import QuotientPoset
from ..space import CapExceeded, InputError, popcount
from .kstar import KStar, c1o2_sets, is_c1o2
from .terms import SIGNATURE

DEFAULT_DEPTH = 2
DEFAULT_MAX_CARRIER = 1 << 16


class PartialAlgebraModel(ABC):
    """Batch interface used by the law evaluator.

    ``apply`` receives argument batches plus the mask of rows where every
    argument is defined and returns the result batch with its own mask;
    entries outside the mask are ignored by callers.
    """

    @property
    @abstractmethod
    def size(self) -> int: ...

    @abstractmethod
    def elements(self, idx: np.ndarray) -> Any: ...

    @abstractmethod
    def constant(self, name: str, batch: int) -> tuple[Any, np.ndarray]: ...

    @abstractmethod
    def apply(self, op: str, args: Sequence[Any], defined: np.ndarray) -> tuple[Any, np.ndarray]: ...

    @abstractmethod
    def equal(self, a: Any, b: Any) -> np.ndarray: ...

    @abstractmethod
    def render(self, values: Any, row: int) -> str: ...

    def arg_key(self, op: str, position: int) -> str | None:
        """Name of a key such that ``op`` sees only the key of this argument."""
        return None

    def keys(self, kind: str) -> np.ndarray:
        raise InputError(f"model has no key {kind!r}")

    def arg_domain(self, op: str, position: int) -> np.ndarray | None:
        """Carrier mask outside which ``op`` is undefined whatever the other arguments."""
        return None


class TableModel(PartialAlgebraModel):
    """Operations given as tables over ``range(n)``; ``-1`` marks undefined."""

    def __init__(self, labels: Sequence[str], tables: Mapping[str, Any]):
        self.labels = list(labels)
        n = len(self.labels)
        self.tables: dict[str, np.ndarray] = {}
        self.constants: dict[str, int] = {}
        for op, table in tables.items():
            if op not in SIGNATURE:
                raise InputError(f"unknown operation {op!r}")
            arity = SIGNATURE[op]
            if arity == 0:
                c = int(table)
                if not 0 <= c < n:
                    raise InputError(f"constant {op} must be defined")
                self.constants[op] = c
                continue
            arr = np.asarray(table, dtype=np.int64)
            if arr.shape != (n,) * arity:
                raise InputError(f"table for {op} has shape {arr.shape}, expected {(n,) * arity}")
            if arr.min(initial=0) < -1 or arr.max(initial=-1) >= n:
                raise InputError(f"table for {op} leaves the carrier")
            self.tables[op] = arr
        for op in SIGNATURE:
            if SIGNATURE[op] == 0 and op not in self.constants:
                raise InputError(f"constant {op} must be defined")

    @property
    def size(self) -> int:
        return len(self.labels)

    def elements(self, idx: np.ndarray) -> np.ndarray:
        return np.asarray(idx, dtype=np.int64)

    def constant(self, name: str, batch: int) -> tuple[np.ndarray, np.ndarray]:
        return np.full(batch, self.constants[name], dtype=np.int64), np.ones(batch, dtype=bool)

    def apply(self, op, args, defined):
        table = self.tables.get(op)
        if table is None:
            return np.zeros(len(defined), dtype=np.int64), np.zeros(len(defined), dtype=bool)
        safe = [np.where(defined, a, 0) for a in args]
        out = table[tuple(safe)]
        return out, defined & (out >= 0)

    def equal(self, a, b):
        return a == b

    def render(self, values, row):
        return self.labels[int(values[row])]


def degenerate_model(labels: Sequence[str]) -> TableModel:
    """Every operation undefined; the three constants sit on the first element."""
    return TableModel(labels, {"⊥": 0, "1": 0, "⊤": 0})


# -- the concrete algebra -------------------------------------------------------

def _boolean_closure(gens: set[int], full: int, depth: int, cap: int) -> list[int]:
    layer = set(gens)
    for _ in range(depth):
        items = sorted(layer)
        nxt = set(items)
        for a in items:
            nxt.add(full & ~a)
            for b in items:
                nxt.add(a | b)
                nxt.add(a & b)
            if len(nxt) > cap:
                raise CapExceeded(f"carrier exceeds {cap} elements")
        layer = nxt
    return sorted(layer, key=lambda m: (popcount(m), m))


class BiteAlgebra(PartialAlgebraModel):
    """Families of isotone maps on a rough-class quotient.

    ``∨`` and ``∧`` close the union/intersection under ``cl1`` and are defined
    when the result is C1O2; ``𝔏``, ``⋄``, ``∼``, ``⊓``, ``⊔`` transport the
    quotient operations through ``sigma`` and need C1O2 arguments.  ``𝔏`` and
    ``⋄`` also fix ``⊥``.  The constant ``1`` is ``sigma`` of the top class.
    """

    def __init__(self, quotient: QuotientPoset, depth: int = DEFAULT_DEPTH,
                 max_kstar: int = DEFAULT_MAX_UPSETS, max_carrier: int = DEFAULT_MAX_CARRIER):
        self.quotient = quotient
        self.depth = depth
        K = quotient.poset
        self.ks = ks = KStar(K, max_kstar)
        self.n_maps = len(ks)
        self.words = max(1, (self.n_maps + 63) // 64)
        self.sigma = [ks.up(p) for p in range(len(K))]
        self.c1o2 = c1o2_sets(ks)
        gens = set(self.c1o2) | {0, ks.all}
        self.carrier: list[int] = _boolean_closure(gens, ks.all, depth, max_carrier)
        self._carrier_rows = self.pack(self.carrier)
        self._all_row = self.pack([ks.all])[0]
        nbytes = self.words * 8
        # per-byte AND/OR tables turn core/support of a packed row into lookups
        and_t = np.full((nbytes, 256), K.full, dtype=np.int64)
        or_t = np.zeros((nbytes, 256), dtype=np.int64)
        for b in range(nbytes):
            for v in range(1, 256):
                low = v & -v
                j = 8 * b + low.bit_length() - 1
                u = ks.upsets[j] if j < self.n_maps else K.full
                prev = v & (v - 1)
                and_t[b, v] = and_t[b, prev] & u
                or_t[b, v] = or_t[b, prev] | (u if j < self.n_maps else 0)
        self._and_t, self._or_t = and_t, or_t
        self._by_points: dict[tuple[str, int], np.ndarray] = {}
        self._c1o2_flag: dict[int, bool] = {}
        self._class_of_core = {K.up[p]: p for p in range(len(K))}

    # -- packing ------------------------------------------------------------------

    def pack(self, families: Sequence[int]) -> np.ndarray:
        out = np.zeros((len(families), self.words), dtype=np.uint64)
        m = (1 << 64) - 1
        for i, f in enumerate(families):
            for w in range(self.words):
                out[i, w] = (f >> (64 * w)) & m
        return out

    def unpack(self, row: np.ndarray) -> int:
        return sum(int(v) << (64 * w) for w, v in enumerate(row))

    # -- vectorised primitives ----------------------------------------------------

    def core(self, V: np.ndarray) -> np.ndarray:
        b = np.ascontiguousarray(V).view(np.uint8).reshape(len(V), -1)
        out = np.full(len(V), self.ks.poset.full, dtype=np.int64)
        for i in range(b.shape[1]):
            out &= self._and_t[i, b[:, i]]
        return out

    def support(self, V: np.ndarray) -> np.ndarray:
        b = np.ascontiguousarray(V).view(np.uint8).reshape(len(V), -1)
        out = np.zeros(len(V), dtype=np.int64)
        for i in range(b.shape[1]):
            out |= self._or_t[i, b[:, i]]
        return out

    def _rows_for(self, kind: str, P: np.ndarray) -> np.ndarray:
        """``containing(P)`` or ``avoiding(P)`` for each point set, via the distinct values."""
        uniq, inv = np.unique(P, return_inverse=True)
        rows = np.empty((len(uniq), self.words), dtype=np.uint64)
        for k, p in enumerate(uniq.tolist()):
            key = (kind, p)
            if key not in self._by_points:
                fam = self.ks.containing(p) if kind == "in" else self.ks.avoiding(p)
                self._by_points[key] = self.pack([fam])[0]
            rows[k] = self._by_points[key]
        return rows[inv.reshape(-1)]

    def _closed_c1o2(self, P: np.ndarray) -> np.ndarray:
        """Whether ``containing(P)`` is C1O2, for point sets P."""
        uniq, inv = np.unique(P, return_inverse=True)
        flags = np.empty(len(uniq), dtype=bool)
        for k, p in enumerate(uniq.tolist()):
            if p not in self._c1o2_flag:
                self._c1o2_flag[p] = is_c1o2(self.ks, self.ks.containing(p))
            flags[k] = self._c1o2_flag[p]
        return flags[inv.reshape(-1)]

    def cl1_rows(self, V):
        return self._rows_for("in", self.core(V))

    def cl2_rows(self, V):
        return self._rows_for("out", self.ks.poset.full & ~self.support(V))

    def comp_rows(self, V):
        return ~V & self._all_row

    def is_c1o2_rows(self, V: np.ndarray) -> np.ndarray:
        c = self.comp_rows(V)
        return (self.cl1_rows(V) == V).all(axis=1) & (self.cl2_rows(c) == c).all(axis=1)

    def class_of_rows(self, V: np.ndarray) -> np.ndarray:
        """Quotient class p with ``V = sigma(p)``, or -1."""
        core = self.core(V)
        cls = np.array([self._class_of_core.get(c, -1) for c in core.tolist()], dtype=np.int64)
        ok = cls >= 0
        if ok.any():
            sig = self.sigma_rows[np.where(ok, cls, 0)]
            ok &= (sig == V).all(axis=1)
        return np.where(ok, cls, -1)

    @cached_property
    def sigma_rows(self) -> np.ndarray:
        return self.pack(self.sigma)

    def _transport(self, table: Sequence[int | None], cls: np.ndarray, defined: np.ndarray):
        lut = np.array([-1 if t is None else t for t in table], dtype=np.int64)
        img = np.where(cls >= 0, lut[np.where(cls >= 0, cls, 0)], -1)
        ok = defined & (img >= 0)
        return self.sigma_rows[np.where(ok, img, 0)], ok

    def _transport2(self, table, c1, c2, defined):
        lut = np.array([[-1 if t is None else t for t in row] for row in table], dtype=np.int64)
        both = (c1 >= 0) & (c2 >= 0)
        img = np.where(both, lut[np.where(both, c1, 0), np.where(both, c2, 0)], -1)
        ok = defined & (img >= 0)
        return self.sigma_rows[np.where(ok, img, 0)], ok

    # -- interface ----------------------------------------------------------------

    _ARG_KEYS = {"∨": "core", "cl1": "core", "cl2": "support",
                 "𝔏": "class", "⋄": "class", "∼": "class", "⊓": "class", "⊔": "class"}

    def arg_key(self, op, position):
        return self._ARG_KEYS.get(op)

    @cached_property
    def _keys(self) -> dict[str, np.ndarray]:
        rows = self._carrier_rows
        cls = self.class_of_rows(rows)
        # the empty family is its own class: 𝔏 and ⋄ fix it
        cls = np.where(~rows.any(axis=1), -2, cls)
        return {"core": self.core(rows), "support": self.support(rows), "class": cls}

    def keys(self, kind):
        return self._keys[kind]

    def arg_domain(self, op, position):
        cls = self._keys["class"]
        if op in ("⊓", "⊔", "∼"):
            return cls >= 0
        if op in ("𝔏", "⋄"):
            return cls != -1
        return None

    @property
    def size(self) -> int:
        return len(self.carrier)

    def elements(self, idx):
        return self._carrier_rows[idx]

    def constant(self, name, batch):
        if name == "⊥":
            row = np.zeros(self.words, dtype=np.uint64)
        elif name == "⊤":
            row = self._all_row
        elif name == "1":
            row = self.sigma_rows[self.quotient.top]
        else:
            raise InputError(f"unknown constant {name!r}")
        return np.broadcast_to(row, (batch, self.words)).copy(), np.ones(batch, dtype=bool)

    def apply(self, op, args, defined):
        Q = self.quotient
        if op == "∪":
            return args[0] | args[1], defined
        if op == "∩":
            return args[0] & args[1], defined
        if op == "ᶜ":
            return self.comp_rows(args[0]), defined
        if op == "cl1":
            return self.cl1_rows(args[0]), defined
        if op == "cl2":
            return self.cl2_rows(args[0]), defined
        if op in ("∨", "∧"):
            if op == "∨":
                P = self.core(args[0]) & self.core(args[1])
            else:
                P = self.core(args[0] & args[1])
            return self._rows_for("in", P), defined & self._closed_c1o2(P)
        if op in ("𝔏", "⋄", "∼"):
            V = args[0]
            cls = self.class_of_rows(V)
            table = {"𝔏": Q.L, "⋄": Q.diamond, "∼": Q.neg}[op]
            out, ok = self._transport(table, cls, defined)
            if op != "∼":
                bot = ~V.any(axis=1) & defined
                out[bot] = 0
                ok = ok | bot
            return out, ok
        if op in ("⊓", "⊔"):
            c1, c2 = self.class_of_rows(args[0]), self.class_of_rows(args[1])
            table = Q.meet_table if op == "⊓" else Q.join_table
            return self._transport2(table, c1, c2, defined)
        raise InputError(f"unknown operation {op!r}")

    def equal(self, a, b):
        return (a == b).all(axis=1)

    def render(self, values, row) -> str:
        fam = self.unpack(values[row])
        cls = self.class_of_rows(values[row:row + 1])[0]
        if cls >= 0:
            return f"σ(B{cls})"
        if fam == 0:
            return "⊥"
        if fam == self.ks.all:
            return "⊤"
        ids = [i for i in range(self.n_maps) if fam >> i & 1]
        if len(ids) > self.n_maps // 2:
            return "⊤ minus maps {" + ",".join(map(str, (i for i in range(self.n_maps) if not fam >> i & 1))) + "}"
        return "maps {" + ",".join(map(str, ids)) + "}"


def build_bite(quotient: QuotientPoset, depth: int = DEFAULT_DEPTH, max_kstar: int = DEFAULT_MAX_UPSETS,
               max_carrier: int = DEFAULT_MAX_CARRIER) -> BiteAlgebra:
    return BiteAlgebra(quotient, depth, max_kstar, max_carrier)


def quotient_table_model(Q: QuotientPoset) -> TableModel:
    """The quotient itself with ⊓, ⊔, 𝔏, ⋄, ∼ as tables; other operations undefined."""
    n = len(Q)
    def tab1(t):
        return [-1 if v is None else v for v in t]
    def tab2(t):
        return [[-1 if v is None else v for v in row] for row in t]
    labels = [f"B{c}" for c in range(n)]
    return TableModel(labels, {
        "⊓": tab2(Q.meet_table), "⊔": tab2(Q.join_table),
        "𝔏": tab1(Q.L), "⋄": tab1(Q.diamond), "∼": tab1(Q.neg),
        "⊥": Q.bottom, "1": Q.top, "⊤": Q.top,
    })
