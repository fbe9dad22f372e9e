"""Necessary conditions on a pair (J(C), A) for a cover C' -> C of degree d.

A pair is described by the Weil data of the base curve C and the Prym A;
the cover's Weil data is their product, so T_{C'} = T_C + T_A.  Filters are
pure functions of the pair.  Those that depend on the number t of geometric
ramification points take t explicitly; a pair survives if some feasible t
passes every t-dependent filter at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import lp_bounds as LP
from . import poly as P
from .weil import (
    WeilPoly,
    p_rank,
    places_from_counts,
    prime_of,
    real_roots_in_interval,
    traces as weil_traces,
    weil_to_real,
)


class FilterError(ValueError):
    pass


# ------------------------------------------------------------------ scenario

def rh_delta(d: int, g: int, gp: int) -> Optional[int]:
    """delta = (g' - g) - (d - 1)(g - 1), or None when negative."""
    delta = (gp - g) - (d - 1) * (g - 1)
    return delta if delta >= 0 else None


def feasible_t(q: int, delta: int) -> tuple:
    if delta == 0:
        return (0,)
    top = delta if q % 2 == 0 else 2 * delta
    return tuple(range(1, top + 1))


@dataclass(frozen=True)
class CoverScenario:
    q: int
    d: int
    g: int
    gp: int
    cyclic: bool = True

    @property
    def delta(self) -> int:
        v = rh_delta(self.d, self.g, self.gp)
        if v is None:
            raise FilterError(f"Riemann-Hurwitz infeasible for {self}")
        return v

    @property
    def ts(self) -> tuple:
        return feasible_t(self.q, self.delta)

    @property
    def dim_A(self) -> int:
        return self.gp - self.g

    def key(self) -> tuple:
        return (self.q, self.d, self.g, self.gp)


# --------------------------------------------------------------- positivity

def positivity_depth(q: int, g: int) -> int:
    """Smallest D such that a_d >= 0 is automatic for every d > D.

    d a_d >= q^d - 2g q^{d/2} - sum_{e | d, e < d} (q^e + 1 + 2g q^{e/2}),
    and the last sum is at most sum_{e <= d/2} (...).
    """
    d = 1
    last_bad = 0
    while d < 400:
        lower = q ** d + 1 - 2 * g * q ** (d / 2)
        for e in range(1, d // 2 + 1):
            lower -= q ** e + 1 + 2 * g * q ** (e / 2)
        if lower <= 0:
            last_bad = d
        elif d > 2 * last_bad + 4:
            break
        d += 1
    return max(last_bad, 1)


def places_ok(counts: Sequence[int]) -> bool:
    if any(n < 0 for n in counts):
        return False
    return all(a >= 0 for a in places_from_counts(counts))


# ------------------------------------------------------------------ pair

@dataclass
class PairCandidate:
    scenario: CoverScenario
    C: WeilPoly
    A: WeilPoly
    A_parts: tuple = ()                 # labels of simple factors of A
    A_real_factors: tuple = ()          # irreducible factors of h_A (ascending)
    C_real_factors: tuple = ()          # irreducible factors of h_C (ascending)
    depth: int = 0

    def __post_init__(self):
        if not self.depth:
            sc = self.scenario
            self.depth = max(positivity_depth(sc.q, sc.gp), 8)

    @cached_property
    def TC(self) -> tuple:
        return weil_traces(self.C, self.depth).values

    @cached_property
    def TA(self) -> tuple:
        if self.A.g == 0:
            return (0,) * self.depth
        return weil_traces(self.A, self.depth).values

    @cached_property
    def NC(self) -> tuple:
        q = self.scenario.q
        return tuple(q ** i + 1 - t for i, t in enumerate(self.TC, start=1))

    @cached_property
    def NCp(self) -> tuple:
        return tuple(n - t for n, t in zip(self.NC, self.TA))

    @cached_property
    def TA_twist(self) -> tuple:
        return tuple((-1) ** i * t for i, t in enumerate(self.TA, start=1))

    @cached_property
    def NCpp(self) -> tuple:
        """Point counts of the relative quadratic twist C''."""
        return tuple(n - t for n, t in zip(self.NC, self.TA_twist))

    @cached_property
    def Cp(self) -> WeilPoly:
        return self.C * self.A

    def N(self, i: int) -> int:
        return self.NC[i - 1]

    def Np(self, i: int) -> int:
        return self.NCp[i - 1]

    def T_A(self, i: int) -> int:
        return self.TA[i - 1]


# ---------------------------------------------------------- point-count bounds

def curve_bound_ok(q: int, g: int, counts: Sequence[int], places: Sequence | None = None) -> bool:
    """Tabulated bounds on N_1, N_2, N_4 plus the LP bounds on N_1 / places."""
    if g == 0:
        return all(n == q ** i + 1 for i, n in enumerate(counts, start=1))
    for power in (1, 2, 4):
        if power <= len(counts) and LP.has_static_bound(q ** power, g):
            if counts[power - 1] > LP.static_bound(q ** power, g):
                return False
    if q == 2:
        if len(counts) >= 4:
            pl = places if places is not None else places_from_counts(counts[:4])
            if LP.refined_lhs(pl[:4]) > LP.refined_rhs(g):
                return False
    elif q in LP.PUBLISHED_FIRST:
        if counts[0] > LP.first_bound(q, g):
            return False
    return True


# ---------------------------------------------------------------- filters

def positivity_pair(c: PairCandidate) -> bool:
    return places_ok(c.NC) and places_ok(c.NCp)


def bounds_pair(c: PairCandidate) -> bool:
    sc = c.scenario
    return curve_bound_ok(sc.q, sc.g, c.NC) and curve_bound_ok(sc.q, sc.gp, c.NCp)


def ds_feasible_t(c: PairCandidate) -> set:
    """Values of t solving Deuring-Shafarevich for this pair."""
    sc = c.scenario
    p = prime_of(sc.q)
    if sc.d != p:
        raise FilterError("Deuring-Shafarevich needs d = p")
    gC = p_rank(c.C)
    gA = p_rank(c.A) if c.A.g else 0
    t = (gC + gA - 1) - sc.d * (gC - 1)
    return {t}


def ds_check(c: PairCandidate, t: int) -> bool:
    sc = c.scenario
    gC = p_rank(c.C)
    gA = p_rank(c.A) if c.A.g else 0
    return (gC + gA) - 1 == sc.d * (gC - 1) + t


def ramification_floor(c: PairCandidate, t: int) -> bool:
    sc = c.scenario
    if sc.q % 2:
        return True
    if sc.delta == 1 and c.Np(1) < 1:
        return False
    if sc.delta == 2 and c.Np(2) < 1:
        return False
    if t == 2 and c.Np(2) < 2:
        return False
    return True


def cyclic_divisibility(c: PairCandidate) -> bool:
    sc = c.scenario
    if sc.delta != 0:
        return True
    return sum(c.C.coeffs) % sc.d == 0


def double_cover_checks(c: PairCandidate, t: int, i_range=(1, 2, 3), j_range=(2,),
                        refined: bool = False) -> bool:
    """Lifting of F_{q^i}-points through a double cover, and the parity rule."""
    for i in i_range:
        if 2 * i > len(c.NCp):
            continue
        need = 2 * c.N(i) - t
        if refined:
            need = max(need, c.N(i))
        if c.Np(2 * i) < need:
            return False
    if t <= 2:
        for j in j_range:
            k = 2 * j - 1
            if k <= len(c.NCp) and (c.Np(k) - c.Np(1)) % 2:
                return False
    return True


def double_cover_inequalities(c: PairCandidate, t: int, i_range=(1, 2, 3), refined: bool = False) -> bool:
    return double_cover_checks(c, t, i_range, (), refined)


def double_cover_parity(c: PairCandidate, t: int, j_range=(2,)) -> bool:
    return double_cover_checks(c, t, (), j_range)


def triple_cover_check(c: PairCandidate, i_range=(1, 2)) -> bool:
    for i in i_range:
        if 3 * i > len(c.NC):
            continue
        if c.N(i) + 2 * c.T_A(i) + c.T_A(3 * i) > c.N(3 * i):
            return False
    return True


def quadruple_cover_check(c: PairCandidate, t: int, i_range=(1,)) -> bool:
    for i in i_range:
        if 4 * i > len(c.NC):
            continue
        if 4 * c.T_A(i) + c.T_A(4 * i) - 2 * t > c.N(4 * i):
            return False
    return True


def relative_twist_ok(c: PairCandidate) -> bool:
    """The twin cover C'' with Prym the quadratic twist of A is also plausible."""
    sc = c.scenario
    return places_ok(c.NCpp) and curve_bound_ok(sc.q, sc.gp, c.NCpp)


# -------------------------------------------------------------- resultants

# use the Z[F, V] version of the reduced resultant (see poly.modified_reduced_resultant)
MODIFIED_RESULTANT = True


def reduced_resultant(h1, h2, q: int | None = None) -> int:
    """Reduced resultant of coprime radicals; the modified one when q is given."""
    a = h1.ascending if hasattr(h1, "ascending") else list(h1)
    b = h2.ascending if hasattr(h2, "ascending") else list(h2)
    if len(P.gcd(a, b)) > 1:
        raise FilterError("reduced resultant needs coprime inputs")
    if q is not None and MODIFIED_RESULTANT:
        return P.modified_reduced_resultant(a, b, q)
    return P.reduced_resultant(a, b)


def radical_from_factors(factors: Iterable) -> list:
    seen = []
    for f in factors:
        f = tuple(f)
        if f not in seen:
            seen.append(f)
    return P.product(seen) if seen else [1]


def delta_resultant(c: PairCandidate) -> int:
    """Reduced resultant of the radicals of h_C and h_A (0 if they share a factor)."""
    hc = radical_from_factors(c.C_real_factors)
    ha = radical_from_factors(c.A_real_factors)
    if len(P.gcd(hc, ha)) > 1:
        return 0
    return reduced_resultant(hc, ha, c.scenario.q)


def delta_sequence_ok(c: PairCandidate) -> bool:
    return math.gcd(c.scenario.d, delta_resultant(c)) > 1


# ---------------------------------------------------- Jacobian resultant tests

@dataclass(frozen=True)
class Splitting:
    left: tuple      # irreducible factors (with multiplicity) on each side
    right: tuple
    resultant: int


def splittings(factors: Sequence[tuple]) -> List[Tuple[tuple, tuple]]:
    """All ways to split the distinct factors into two nonempty groups (up to order)."""
    distinct = []
    for f in factors:
        if f not in distinct:
            distinct.append(f)
    n = len(distinct)
    out = []
    for mask in range(1, 2 ** n - 1):
        if not mask & 1:
            continue
        L = tuple(f for f in factors if mask >> distinct.index(f) & 1)
        R = tuple(f for f in factors if not mask >> distinct.index(f) & 1)
        out.append((L, R))
    return out


def jacobian_splittings(factors: Sequence[tuple], q: int | None = None) -> List[Splitting]:
    out = []
    for L, R in splittings(factors):
        r = reduced_resultant(radical_from_factors(L), radical_from_factors(R), q)
        out.append(Splitting(L, R, r))
    return out


def _counts_from_real(q: int, hasc: Sequence[int], m: int) -> tuple:
    if len(hasc) <= 1:
        return tuple(q ** i + 1 for i in range(1, m + 1))
    from .weil import RealWeilPoly, real_traces
    h = RealWeilPoly.from_ascending(q, hasc)
    tr = real_traces(h, m).values
    return tuple(q ** i + 1 - t for i, t in enumerate(tr, start=1))


def double_cover_plausible(q: int, X_counts: Sequence[int], X_prank: int, gX: int,
                           D_factors: tuple, refined: bool = True, ds: bool = False) -> bool:
    """Could a genus-gX curve X with the given counts double-cover a curve D
    whose real Weil polynomial is the product of D_factors?"""
    hD = P.product(D_factors) if D_factors else [1]
    gD = len(hD) - 1
    delta = rh_delta(2, gD, gX)
    if delta is None:
        return False
    m = len(X_counts)
    ND = _counts_from_real(q, hD, m)
    if not places_ok(ND) or not curve_bound_ok(q, gD, ND):
        return False
    hD_asc = hD
    PD = None
    from .weil import RealWeilPoly, real_to_weil
    PD = real_to_weil(RealWeilPoly.from_ascending(q, hD_asc)) if gD else WeilPoly(q, 0, (1,))
    # Prym of X -> D has counts N_D - N_X + ... ; traces T_A = T_X - T_D
    for t in feasible_t(q, delta):
        ok = True
        if delta == 0 and sum(PD.coeffs) % 2:
            ok = False
        if ok and q % 2 == 0:
            if delta == 1 and X_counts[0] < 1:
                ok = False
            elif delta == 2 and X_counts[1] < 1:
                ok = False
            elif t == 2 and X_counts[1] < 2:
                ok = False
            # Deuring-Shafarevich in characteristic 2
            if ok and ds and X_prank - 1 != 2 * (p_rank(PD) - 1) + t:
                ok = False
        if ok:
            for i in (1, 2, 3):
                if 2 * i <= m:
                    need = 2 * ND[i - 1] - t
                    if refined:
                        need = max(need, ND[i - 1])
                    if X_counts[2 * i - 1] < need:
                        ok = False
                        break
        if ok:
            return True
    return False


def jacobian_resultant_ok(q: int, gX: int, counts: Sequence[int], factors: Sequence[tuple],
                          X_prank: int | None = None, refined: bool = True, ds: bool = False) -> bool:
    """Resultant-1 and resultant-2 criteria for a curve X with real Weil factors."""
    for s in jacobian_splittings(factors, q):
        if s.resultant == 1:
            return False
        if s.resultant == 2:
            if X_prank is None:
                continue
            if not (double_cover_plausible(q, counts, X_prank, gX, s.left, refined, ds)
                    or double_cover_plausible(q, counts, X_prank, gX, s.right, refined, ds)):
                return False
    return True


# ---------------------------------------------------------------- gate

ACCEPT, REJECT, FOLLOWUP = "accept", "reject", "followup"


@dataclass(frozen=True)
class GateResult:
    verdict: str
    gcd: int
    obligations: tuple = ()


def resultant_gate(c: PairCandidate) -> GateResult:
    d = c.scenario.d
    r = delta_resultant(c)
    gg = math.gcd(d, r)
    if gg == 1:
        return GateResult(REJECT, gg)
    if gg == 2 and d > 2:
        obligations = ["D~J(C)"]
        sc = c.scenario
        if not sc.gp > 2 * sc.g + 1:
            obligations.append("D~A")
        return GateResult(FOLLOWUP, gg, tuple(obligations))
    return GateResult(ACCEPT, gg)


def d_equals_A_plausible(c: PairCandidate, refined: bool = True, ds: bool = True) -> bool:
    """Option J(D) ~ A for the degree-2 quotient C' -> D."""
    sc = c.scenario
    q = sc.q
    Cp_prank = p_rank(c.C) + (p_rank(c.A) if c.A.g else 0)
    return double_cover_plausible(q, c.NCp, Cp_prank, sc.gp, tuple(c.A_real_factors), refined, ds)


# ----------------------------------------------------------------- registry

@dataclass
class FilterConfig:
    """Toggles for the pair-level filters."""

    positivity: bool = True
    bounds: bool = True
    ramification: bool = True
    cyclic: bool = True
    double_cover: bool = True
    parity: bool = True
    triple: bool = True
    quadruple: bool = True
    deuring_shafarevich: bool = True
    delta_sequence: bool = True
    relative_twist: bool = True
    jacobian_resultants: bool = True
    refined_lift: bool = False
    # Deuring-Shafarevich inside the resultant-2 quotient test on C, C', C''
    resultant2_ds: bool = False

    @classmethod
    def lemma_level(cls) -> "FilterConfig":
        """Filters used to exclude (d, g, g') scenarios."""
        return cls(parity=False, relative_twist=False)

    @classmethod
    def all(cls) -> "FilterConfig":
        return cls()

    def names(self) -> list:
        return [k for k, v in self.__dict__.items() if v is True]


def t_filters(c: PairCandidate, cfg: FilterConfig) -> List[Tuple[str, Callable[[int], bool]]]:
    sc = c.scenario
    out = []
    if cfg.ramification:
        out.append(("ramification", lambda t: ramification_floor(c, t)))
    if sc.d == 2 and cfg.double_cover:
        out.append(("double_cover", lambda t: double_cover_inequalities(c, t, refined=cfg.refined_lift)))
    if sc.d == 2 and cfg.parity:
        out.append(("parity", lambda t: double_cover_parity(c, t)))
    if sc.d == 4 and cfg.quadruple:
        out.append(("quadruple", lambda t: quadruple_cover_check(c, t)))
    if cfg.deuring_shafarevich and sc.d == prime_of(sc.q):
        out.append(("deuring_shafarevich", lambda t: ds_check(c, t)))
    return out


def fixed_filters(c: PairCandidate, cfg: FilterConfig) -> List[Tuple[str, Callable[[], bool]]]:
    sc = c.scenario
    out = []
    if cfg.positivity:
        out.append(("positivity", lambda: positivity_pair(c)))
    if cfg.bounds:
        out.append(("bounds", lambda: bounds_pair(c)))
    if cfg.cyclic and sc.d == 2:
        out.append(("cyclic", lambda: cyclic_divisibility(c)))
    if cfg.triple and sc.d == 3:
        out.append(("triple", lambda: triple_cover_check(c)))
    if cfg.relative_twist and sc.d == 2:
        out.append(("relative_twist", lambda: relative_twist_ok(c)))
    return out


def surviving_ts(c: PairCandidate, cfg: FilterConfig) -> tuple:
    tf = t_filters(c, cfg)
    return tuple(t for t in c.scenario.ts if all(f(t) for _, f in tf))


def evaluate_pair(c: PairCandidate, cfg: FilterConfig, log: Optional[list] = None,
                  order: Optional[Sequence[str]] = None) -> Optional[str]:
    """Run the cheap filters; return the name of the first failure or None.

    Resultant-based filters are applied separately by the search driver
    because they need factorizations and, for d > 2, cross-scenario data.
    """
    checks = list(fixed_filters(c, cfg))
    if order is not None:
        rank = {n: i for i, n in enumerate(order)}
        checks.sort(key=lambda x: rank.get(x[0], len(rank)))
    for name, fn in checks:
        ok = fn()
        if log is not None:
            log.append((name, ok))
        if not ok:
            return name
    ts = surviving_ts(c, cfg)
    if log is not None:
        log.append(("t-filters", bool(ts)))
    if not ts:
        return "t-filters"
    return None
