from __future__ import annotations

from dataclasses import dataclass

# A polynomial maps a monomial (sorted tuple of variable ids, repeats allowed) to an integer
# coefficient; the empty monomial holds the constant part.
Poly = dict[tuple[int, ...], int]


def poly_const(c: int) -> Poly:
    return {(): c} if c else {}


def poly_var(v: int) -> Poly:
    return {(v,): 1}


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def poly_neg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, poly_neg(b))


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(sorted(ma + mb))
            s = out.get(m, 0) + ca * cb
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


class DomainStore:
    """Interval domains [lo, hi] over the naturals, one per variable."""

    def __init__(self, lo: list[int], hi: list[int]):
        self.lo = lo
        self.hi = hi

    def copy(self) -> DomainStore:
        return DomainStore(list(self.lo), list(self.hi))

    def size(self, v: int) -> int:
        return self.hi[v] - self.lo[v] + 1

    def is_determined(self, v: int) -> bool:
        return self.lo[v] == self.hi[v]

    def restrict(self, v: int, lo: int, hi: int) -> bool:
        """Intersect the domain of v with [lo, hi]; True when it changed."""
        lo, hi = max(lo, self.lo[v]), min(hi, self.hi[v])
        if (lo, hi) == (self.lo[v], self.hi[v]):
            return False
        self.lo[v], self.hi[v] = lo, hi
        return True


@dataclass
class _Term:
    coef: int
    monomial: tuple[int, ...]


class PolyConstraint:
    """poly >= bound over natural-valued variables."""

    # Constants for outcome of running
    failed = 0
    entailed = 1
    sleeping = 2

    def __init__(self, poly: Poly, bound: int, label: str = ""):
        self.bound = bound - poly.get((), 0)
        self.terms = [_Term(c, m) for m, c in sorted(poly.items()) if m]
        self.variables = sorted({v for t in self.terms for v in t.monomial})
        self.label = label
        self._by_var = {v: [t for t in self.terms if v in t.monomial] for v in self.variables}

    def __repr__(self):
        return self.label or f"poly >= {self.bound}"

    def is_trivial(self) -> bool:
        """Holds for every assignment: nonnegative terms only and a nonpositive bound."""
        return self.bound <= 0 and all(t.coef > 0 for t in self.terms)

    @staticmethod
    def _extreme(t: _Term, store: DomainStore, upper: bool, var: int = -1, value: int = 0) -> int:
        take_hi = (t.coef > 0) == upper
        out = t.coef
        for v in t.monomial:
            if v == var:
                out *= value
            else:
                out *= store.hi[v] if take_hi else store.lo[v]
        return out

    def upper(self, store: DomainStore) -> int:
        return sum(self._extreme(t, store, True) for t in self.terms)

    def lower(self, store: DomainStore) -> int:
        return sum(self._extreme(t, store, False) for t in self.terms)

    def fails(self, store: DomainStore) -> bool:
        return self.upper(store) < self.bound

    def is_entailed(self, store: DomainStore) -> bool:
        return self.lower(store) >= self.bound

    def infer(self, store: DomainStore) -> tuple[int, list[int]]:
        """Shrink every domain to the values that keep the upper bound reachable."""
        changed = []
        for v in self.variables:
            lo, hi = store.lo[v], store.hi[v]
            if lo == hi:
                continue
            with_v = self._by_var[v]
            rest = self.upper(store) - sum(self._extreme(t, store, True) for t in with_v)
            feasible = [a for a in range(lo, hi + 1)
                        if rest + sum(self._extreme(t, store, True, v, a) for t in with_v) >= self.bound]
            if not feasible:
                return PolyConstraint.failed, changed
            if store.restrict(v, feasible[0], feasible[-1]):
                changed.append(v)
        if self.is_entailed(store):
            return PolyConstraint.entailed, changed
        return PolyConstraint.sleeping, changed

    def run(self, store: DomainStore) -> tuple[int, list[int]]:
        if self.fails(store):
            return PolyConstraint.failed, []
        if self.is_entailed(store):
            return PolyConstraint.entailed, []
        return self.infer(store)


def propagate(store: DomainStore, constraints: list[PolyConstraint], watchers: dict[int, list[int]],
              queue: set[int]) -> bool:
    """Run constraints to a fixed point; False as soon as one fails."""
    while queue:
        k = queue.pop()
        state, changed = constraints[k].run(store)
        if state == PolyConstraint.failed:
            return False
        for v in changed:
            queue.update(watchers.get(v, ()))
    return True
