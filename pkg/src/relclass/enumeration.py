"""Exhaustive enumeration of real Weil polynomials with prefix pruning.

We enumerate h(x) = x^g + b_1 x^{g-1} + ... + b_g coefficient by coefficient.
If all roots of h lie in I = [-2 sqrt q, 2 sqrt q], the same holds for every
derivative of h (Rolle).  After b_1..b_k are fixed, the normalized derivative

    E(x) = h^{(g-k-1)}(x) / (g-k-1)! = sum_{i<=k+1} b_i C(g-i, k+1-i) x^{k+1-i}

is known up to its constant term b_{k+1}, and its derivative is known.  E
has all roots in I iff it alternates in sign at the critical points and at
the ends of I; each such condition is linear in b_{k+1}, which gives an
interval.  Critical points are located numerically and the interval is
widened by a safety margin; the final accept/reject is the exact Sturm test.

The power sums, Frobenius traces, point counts and place counts of the
prefix are maintained incrementally, so a constraint at depth k sees
T_{q}, ..., T_{q^k} (these depend only on b_1..b_k).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from . import poly as P
from .weil import (
    RealWeilPoly,
    dickson_table,
    divisors,
    mobius,
    newton_power_sums,
    real_roots_in_interval,
)

EPS = 1e-7


class ConstraintViolation(RuntimeError):
    """A predicate rejected a prefix that has an accepted extension."""


@dataclass
class Prefix:
    """Read-only view handed to predicates."""

    q: int
    g: int
    b: list          # b_1..b_k
    traces: list     # T_{q}, ..., T_{q^k}
    counts: list     # N_1..N_k
    places: list     # a_1..a_k

    @property
    def depth(self) -> int:
        return len(self.b)

    @property
    def complete(self) -> bool:
        return len(self.b) == self.g


@dataclass
class Constraint:
    """Predicate on trace prefixes.

    ``fn(prefix)`` is called at every depth >= ``depth``; it must be
    monotone: once false on a prefix it must stay false on extensions.
    ``leaf_only`` predicates are checked only on complete polynomials and
    may be non-monotone.
    """

    name: str
    fn: Callable[[Prefix], bool]
    depth: int = 1
    leaf_only: bool = False


class ConstraintSet:
    def __init__(self, constraints: Iterable[Constraint] = ()):
        self.constraints = list(constraints)

    def add(self, c: Constraint) -> "ConstraintSet":
        self.constraints.append(c)
        return self

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)

    def check(self, pre: Prefix) -> Optional[str]:
        """Name of the first failing predicate, or None."""
        k = pre.depth
        for c in self.constraints:
            if c.leaf_only:
                if pre.complete and not c.fn(pre):
                    return c.name
            elif k >= c.depth and not c.fn(pre):
                return c.name
        return None


def positivity_constraint(min_depth: int = 1) -> Constraint:
    return Constraint("positivity", lambda p: all(x >= 0 for x in p.places), depth=min_depth)


def point_count_constraint(i: int, lo=None, hi=None) -> Constraint:
    def fn(p: Prefix) -> bool:
        n = p.counts[i - 1]
        return (lo is None or n >= lo) and (hi is None or n <= hi)
    return Constraint(f"N{i}-range", fn, depth=i)


# ------------------------------------------------------------------- engine

class _Engine:
    def __init__(self, q: int, g: int, cs: ConstraintSet, debug: bool = False):
        self.q, self.g = q, g
        self.cs = cs if isinstance(cs, ConstraintSet) else ConstraintSet(cs or [])
        self.debug = debug
        self.bound = 2 * math.sqrt(q)
        self.dick = dickson_table(q, max(g, 1))
        # binomial table for E's coefficients
        self.binom = [[math.comb(n, r) for r in range(g + 2)] for n in range(g + 2)]
        self.pruned = 0
        self.nodes = 0

    # coefficient list (descending powers) of E at level k, constant term zero
    def _E0(self, b: list, k: int) -> list:
        g = self.g
        coeffs = [self.binom[g - i][k + 1 - i] * (1 if i == 0 else b[i - 1]) for i in range(k + 1)]
        return coeffs + [0]

    def interval(self, b: list) -> tuple:
        """Integer range [lo, hi] for b_{k+1} given b_1..b_k."""
        k = len(b)
        a_, b_ = -self.bound, self.bound
        E0 = self._E0(b, k)
        E0f = [float(c) for c in E0]
        lo, hi = -math.inf, math.inf

        def constrain(x, sign):
            # sign * (E0(x) + c) >= 0
            nonlocal lo, hi
            v = 0.0
            for c in E0f:
                v = v * x + c
            if sign > 0:
                lo = max(lo, -v)
            else:
                hi = min(hi, -v)

        constrain(b_, +1)
        constrain(a_, (-1) ** (k + 1))
        if k >= 1:
            deriv = [c * (k + 1 - i) for i, c in enumerate(E0f[:-1])]
            if k == 1:
                crit = np.array([-deriv[1] / deriv[0]])
            else:
                crit = np.sort(np.real(np.roots(deriv)))
            for j, r in enumerate(crit, start=1):
                r = min(max(r, a_), b_)
                constrain(r, (-1) ** (k - j + 1))
        if lo > hi + 1e-9 * (1 + abs(lo)):
            return 1, 0
        scale = 1.0 + max(abs(lo) if lo != -math.inf else 0, abs(hi) if hi != math.inf else 0)
        ilo = math.ceil(lo - EPS * scale)
        ihi = math.floor(hi + EPS * scale)
        return ilo, ihi

    def _extend(self, s: list, traces: list, counts: list, places: list, b: list):
        """Update incremental data after appending b_k (k = len(b))."""
        k = len(b)
        q = self.q
        # Newton: s_k = -k b_k - sum_{i<k} b_i s_{k-i}
        sk = -k * b[k - 1]
        for i in range(1, k):
            sk -= b[i - 1] * s[k - i - 1]
        s.append(sk)
        row = self.dick[k - 1]
        t = 0
        for j, c in enumerate(row):
            idx = k - 2 * j
            t += c * (self.g if idx == 0 else s[idx - 1])
        traces.append(t)
        counts.append(q ** k + 1 - t)
        tot = 0
        for e in divisors(k):
            tot += mobius(k // e) * counts[e - 1]
        places.append(tot // k if tot % k == 0 else tot / k)

    @staticmethod
    def _retract(*lists):
        for lst in lists:
            lst.pop()

    def run(self, first: Optional[Sequence[int]] = None) -> Iterator[tuple]:
        g = self.g
        if g == 0:
            pre = Prefix(self.q, 0, [], [], [], [])
            if self.cs.check(pre) is None:
                yield (), (), (), ()
            return
        b: list = []
        s: list = []
        tr: list = []
        N: list = []
        a: list = []
        yield from self._dfs(b, s, tr, N, a, first)

    def _dfs(self, b, s, tr, N, a, first=None):
        k = len(b)
        lo, hi = self.interval(b)
        rng = range(hi, lo - 1, -1)
        if k == 0 and first is not None:
            rng = [v for v in rng if v in set(first)]
        for v in rng:
            b.append(v)
            self._extend(s, tr, N, a, b)
            self.nodes += 1
            pre = Prefix(self.q, self.g, b, tr, N, a)
            failed = self.cs.check(pre)
            if failed is None and k + 1 < self.g:
                yield from self._dfs(b, s, tr, N, a)
            elif failed is None:
                if real_roots_in_interval(list(reversed([1] + b)), self.q):
                    yield tuple(b), tuple(tr), tuple(N), tuple(a)
            else:
                self.pruned += 1
                if self.debug:
                    self._verify_prune(list(b), failed)
            self._retract(b, s, tr, N, a)

    def _verify_prune(self, prefix: list, failed: str):
        """Debug: the predicate that pruned ``prefix`` must reject every deeper extension."""
        preds = [c for c in self.cs if c.name == failed and not c.leaf_only]
        if not preds or len(prefix) == self.g:
            return
        sub = _Engine(self.q, self.g, ConstraintSet(), debug=False)
        b: list = []
        s: list = []
        tr: list = []
        N: list = []
        a: list = []
        for v in prefix:
            b.append(v)
            sub._extend(s, tr, N, a, b)
        for bb, tt, nn, aa in sub._dfs(b, s, tr, N, a):
            for depth in range(len(prefix) + 1, self.g + 1):
                pre = Prefix(self.q, self.g, list(bb[:depth]), list(tt[:depth]), list(nn[:depth]), list(aa[:depth]))
                if all(c.fn(pre) for c in preds if depth >= c.depth):
                    raise ConstraintViolation(
                        f"predicate {failed!r} rejected prefix {prefix} but accepts its extension {bb[:depth]}")


@dataclass(frozen=True)
class Candidate:
    """An enumerated real Weil polynomial with its trace data."""

    q: int
    g: int
    b: tuple
    traces: tuple
    counts: tuple
    places: tuple

    @property
    def real(self) -> RealWeilPoly:
        return RealWeilPoly(self.q, self.g, (1,) + self.b)

    def sort_key(self):
        return self.traces


def _run_branch(args):
    q, g, cs, debug, first = args
    eng = _Engine(q, g, cs, debug)
    return [Candidate(q, g, *rec) for rec in eng.run(first)]


def enumerate_candidates(q: int, g: int, cs: ConstraintSet | Sequence[Constraint] | None = None,
                         debug: bool = False, threads: int = 1) -> List[Candidate]:
    """All real Weil polynomials of degree g over F_q passing cs, sorted by traces."""
    cs = cs if isinstance(cs, ConstraintSet) else ConstraintSet(cs or [])
    if threads <= 1 or g == 0:
        eng = _Engine(q, g, cs, debug)
        out = [Candidate(q, g, *rec) for rec in eng.run()]
    else:
        eng = _Engine(q, g, cs, debug)
        lo, hi = eng.interval([])
        firsts = list(range(hi, lo - 1, -1))
        chunks = [firsts[i::threads] for i in range(threads)]
        import multiprocessing as mp
        ctx = mp.get_context("fork")
        with ctx.Pool(threads) as pool:
            parts = pool.map(_run_branch, [(q, g, cs, debug, c) for c in chunks if c])
        out = [c for part in parts for c in part]
    out.sort(key=lambda c: c.traces)
    return out


def enumerate_real_weil(q: int, g: int, cs=None, debug: bool = False, threads: int = 1) -> Iterator[RealWeilPoly]:
    for c in enumerate_candidates(q, g, cs, debug=debug, threads=threads):
        yield c.real


def count_nodes(q: int, g: int, cs=None) -> tuple:
    eng = _Engine(q, g, cs if isinstance(cs, ConstraintSet) else ConstraintSet(cs or []))
    n = sum(1 for _ in eng.run())
    return n, eng.nodes, eng.pruned


# ------------------------------------------------------------ brute force

def brute_force_real_weil(q: int, g: int) -> list:
    """Scan all |b_i| <= C(g,i) (2 sqrt q)^i and keep the exact real-rooted ones."""
    bounds = [math.floor(math.comb(g, i) * (4 * q) ** (i / 2) + 1e-9) for i in range(1, g + 1)]
    out = []

    def rec(prefix):
        i = len(prefix)
        if i == g:
            if real_roots_in_interval(list(reversed([1] + prefix)), q):
                out.append(RealWeilPoly(q, g, tuple([1] + prefix)))
            return
        for v in range(-bounds[i], bounds[i] + 1):
            prefix.append(v)
            rec(prefix)
            prefix.pop()

    rec([])
    return out


# ----------------------------------------------------------- factorization

@dataclass(frozen=True)
class Factorization:
    radical: tuple            # ascending coefficients of rad(h)
    factors: tuple            # distinct irreducible catalog factors (ascending tuples)
    multiplicities: tuple
    splittings: tuple         # pairs (h1, h2) of coprime products, up to order


def catalog_factor(h, catalog: Sequence) -> Factorization:
    """Factor h by trial division against a catalog of irreducible real Weil polynomials.

    ``catalog`` entries may be RealWeilPoly or ascending coefficient lists.
    Every coprime splitting h = h1 * h2 (into products of prime powers) is
    listed once.
    """
    hasc = h.ascending if hasattr(h, "ascending") else list(h)
    rest = list(hasc)
    facs, mults = [], []
    for f in catalog:
        fa = f.ascending if hasattr(f, "ascending") else list(f)
        if len(fa) <= 1 or len(fa) > len(rest):
            continue
        m = 0
        while len(rest) >= len(fa):
            qt = P.exact_div(rest, fa)
            if qt is None:
                break
            rest = qt
            m += 1
        if m:
            facs.append(tuple(fa))
            mults.append(m)
        if len(rest) == 1:
            break
    if len(rest) > 1:
        # not fully factored by the catalog: treat the cofactor as one factor
        facs.append(tuple(P.primitive(rest)))
        mults.append(1)
    radical = P.product(facs) if facs else [1]
    splits = []
    n = len(facs)
    for mask in range(1, 2 ** n - 1):
        if mask & 1 == 0:
            continue  # fix factor 0 on the left to avoid mirrored duplicates
        left = P.product(P.power(facs[i], mults[i]) for i in range(n) if mask >> i & 1)
        right = P.product(P.power(facs[i], mults[i]) for i in range(n) if not mask >> i & 1)
        splits.append((tuple(left), tuple(right)))
    return Factorization(tuple(radical), tuple(facs), tuple(mults), tuple(splits))


def irreducible_catalog(q: int, max_deg: int) -> list:
    """All irreducible real Weil polynomials over F_q of degree <= max_deg (ascending tuples).

    Built by enumeration: a degree-n candidate is irreducible iff no
    catalog polynomial of degree <= n/2 divides it.
    """
    out: list = []
    for n in range(1, max_deg + 1):
        for c in enumerate_candidates(q, n):
            hasc = list(reversed((1,) + c.b))
            if any(len(f) - 1 <= n // 2 and P.exact_div(hasc, list(f)) is not None for f in out):
                continue
            out.append(tuple(hasc))
    return out
