"""Instance-level verifiers and constructive procedures for the core bounds.

Each verifier evaluates one statement on concrete inputs with exact
rational comparisons and returns a verdict object; none of them certify a
statement symbolically. The reduction and elimination procedures are
constructive and carry their own verification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .analysis import (
    count_effect,
    count_pivotal,
    effect_report,
    estimate_expectation,
    pivotal_report,
    pivotal_set,
    signed_effect,
)
from .boolfn import DenseTable, MajPFn, PlayerFunction, PreconditionError
from .dist import (
    BINARY,
    Distribution,
    DistributionError,
    ExplicitDist,
    PivotalError,
    ProductDist,
    ZERO,
    mixture,
)
from .generators import majp_dist

HALF = Fraction(1, 2)

_REDUCTION_ARITY_LIMIT = 20
_ELIMINATION_N_LIMIT = 16
_ELIMINATION_M_LIMIT = 3
_TIGHTNESS_EXACT_LIMIT = 12


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking one statement on one instance."""

    which: str
    inputs: dict
    computed: dict
    bound: Fraction | None
    ok: bool
    witness: object | None = None


def _require_pairwise(d: Distribution) -> None:
    res = d.check_kwise(min(2, d.n))
    if not res.ok:
        raise PreconditionError("distribution is not pairwise independent",
                                witness=res.witness)


def _positive(name: str, value: Fraction) -> Fraction:
    value = Fraction(value)
    if value <= 0:
        raise PreconditionError(f"{name} must be positive, got {value}")
    return value


def verify_thm1(f: PlayerFunction, d: Distribution,
                p: Fraction, alpha: Fraction) -> Verdict:
    """Pivotal-player count against 8 / (p * alpha^2) under pairwise independence."""
    p, alpha = _positive("p", p), _positive("alpha", alpha)
    _require_pairwise(d)
    count = count_pivotal(f, d, p, alpha)
    bound = 8 / (p * alpha ** 2)
    return Verdict(
        which="thm1",
        inputs={"p": p, "alpha": alpha, "n": d.n},
        computed={"count_pivotal": count},
        bound=bound,
        ok=count < bound,
    )


def _is_uniform_product(d: Distribution) -> bool:
    return (isinstance(d, ProductDist) and d.alphabet == BINARY
            and all(row == (HALF, HALF) for row in d.marginals))


def verify_warmup(f: PlayerFunction, d: Distribution, alpha: Fraction) -> Verdict:
    """Effect count against 4 / alpha^2 on independent fair bits."""
    alpha = _positive("alpha", alpha)
    if not _is_uniform_product(d):
        raise DistributionError(
            "warm-up bound applies to independent fair bits only")
    count = count_effect(f, d, alpha)
    bound = 4 / alpha ** 2
    return Verdict(
        which="warmup",
        inputs={"alpha": alpha, "n": d.n},
        computed={"count_effect": count},
        bound=bound,
        ok=count < bound,
    )


def _equal_binary_marginals(d: Distribution) -> Fraction:
    """Shared Pr[X_i = 0], required strictly inside (0, 1)."""
    if d.alphabet != BINARY:
        raise DistributionError("bound applies to the binary alphabet only")
    q = d.single_marginal(0)[0]
    for i in range(1, d.n):
        if d.single_marginal(i)[0] != q:
            raise DistributionError(
                f"marginals differ: player 0 has Pr[0]={q}, player {i} has {d.single_marginal(i)[0]}")
    if not 0 < q < 1:
        raise DistributionError(f"degenerate shared marginal Pr[0]={q}")
    return q


def verify_sum_bound(f: PlayerFunction, d: Distribution,
                     players: Sequence[int]) -> Verdict:
    """Sum of effects over a player subset against sqrt(2k / p), compared in squares."""
    T = sorted(set(players))
    if not T:
        raise PreconditionError("player subset must be non-empty")
    q = _equal_binary_marginals(d)
    _require_pairwise(d)
    p = min(q, 1 - q)
    report = effect_report(f, d)
    total = sum((report.rows[i].effect for i in T), ZERO)
    bound_sq = Fraction(2 * len(T)) / p
    return Verdict(
        which="sum-bound",
        inputs={"players": tuple(T), "q": q, "p": p},
        computed={"sum_effects": total, "sum_effects_squared": total ** 2},
        bound=bound_sq,
        ok=total ** 2 <= bound_sq,
    )


def verify_binary_bound(f: PlayerFunction, d: Distribution,
                        alpha: Fraction) -> Verdict:
    """Effect count against 2 / (p * alpha^2) for equal skewed binary marginals."""
    alpha = _positive("alpha", alpha)
    q = _equal_binary_marginals(d)
    _require_pairwise(d)
    p = min(q, 1 - q)
    count = count_effect(f, d, alpha)
    bound = 2 / (p * alpha ** 2)
    return Verdict(
        which="binary-bound",
        inputs={"alpha": alpha, "q": q, "p": p},
        computed={"count_effect": count},
        bound=bound,
        ok=count < bound,
    )


# ----------------------------------------------------------------------
# Reduction of pivotality on a general alphabet to effects on skewed bits


@dataclass(frozen=True)
class ReductionResult:
    """Output of the pivotal-to-binary reduction.

    The selected players' signals are collapsed to indicator bits whose
    joint law is computed exactly (the auxiliary coins are marginalized
    analytically, never sampled). ``g`` is the conditional expectation of
    the possibly sign-flipped function given the indicator vector.
    """

    i_plus: tuple[int, ...]
    flipped: bool
    p_values: tuple[Fraction, ...]  # deviating-side mass per selected player
    y_dist: ExplicitDist | None
    g: DenseTable | None
    expectation: Fraction  # of the function actually reduced (after any flip)

    @property
    def is_empty(self) -> bool:
        return not self.i_plus


def reduce_to_binary(f: PlayerFunction, d: Distribution,
                     p: Fraction, alpha: Fraction) -> ReductionResult:
    """Collapse every pivotal player to a skewed indicator bit.

    Working on the sign side where at least half the pivotal players
    deviate, each selected player's bit is 0 exactly when his symbol
    deviates upward and an auxiliary coin of rate p / (2 p_i) fires; the
    joint indicator law and the conditional-expectation table are then
    exact sums over the support.

    A 0/1-valued function is flipped as 1 - f, anything else as -f, so the
    reduced function stays inside [-1, 1] either way.
    """
    p, alpha = _positive("p", p), _positive("alpha", alpha)
    _require_pairwise(d)

    cached = [(x, w, f.evaluate(x)) for x, w in d.items()]
    total = sum((w * fx for _, w, fx in cached), ZERO)
    m = len(d.alphabet)
    mass = [[ZERO] * m for _ in range(d.n)]
    wsum = [[ZERO] * m for _ in range(d.n)]
    for x, w, fx in cached:
        for i, s in enumerate(x):
            mass[i][s] += w
            wsum[i][s] += w * fx

    # Per player: mass deviating upward, downward, and either way.
    up = [ZERO] * d.n
    down = [ZERO] * d.n
    both = [ZERO] * d.n
    for i in range(d.n):
        for s in range(m):
            if mass[i][s] == 0:
                continue
            dev = wsum[i][s] / mass[i][s] - total
            if dev > alpha:
                up[i] += mass[i][s]
            if -dev > alpha:
                down[i] += mass[i][s]
            if abs(dev) > alpha:
                both[i] += mass[i][s]

    pivotal = [i for i in range(d.n) if both[i] > p]
    if not pivotal:
        return ReductionResult((), False, (), None, None, total)

    half_p = p / 2
    plus_side = [i for i in pivotal if up[i] > half_p]
    minus_side = [i for i in pivotal if down[i] > half_p]
    flipped = len(minus_side) > len(plus_side)
    selected = tuple(minus_side if flipped else plus_side)
    sign = -1 if flipped else 1
    if len(selected) > _REDUCTION_ARITY_LIMIT:
        raise PivotalError(
            f"reduction would enumerate 2^{len(selected)} indicator vectors")

    zero_one = all(fx in (0, 1) for _, _, fx in cached)

    def flip(v: Fraction) -> Fraction:
        if not flipped:
            return v
        return 1 - v if zero_one else -v

    # Deviating symbol sets and their masses under the chosen sign.
    dev_syms: list[set[int]] = []
    p_values = []
    for i in selected:
        syms = set()
        for s in range(m):
            if mass[i][s] == 0:
                continue
            dev = wsum[i][s] / mass[i][s] - total
            if sign * dev > alpha:
                syms.add(s)
        dev_syms.append(syms)
        p_values.append(up[i] if not flipped else down[i])

    k = len(selected)
    y_mass = [ZERO] * (1 << k)
    y_wsum = [ZERO] * (1 << k)
    rates = [p / (2 * pi) for pi in p_values]
    for x, w, fx in cached:
        # Chance of each indicator being 0 for this outcome, else it is 1.
        zero_chance = [rates[j] if x[selected[j]] in dev_syms[j] else ZERO
                       for j in range(k)]
        for y in range(1 << k):
            prob = w
            for j in range(k):
                c = zero_chance[j]
                prob *= c if not y & (1 << j) else 1 - c
                if prob == 0:
                    break
            if prob == 0:
                continue
            y_mass[y] += prob
            y_wsum[y] += prob * flip(fx)

    g_expect = flip(total) if flipped else total
    support = []
    g_values = {}
    for y in range(1 << k):
        outcome = tuple((y >> j) & 1 for j in range(k))
        if y_mass[y] > 0:
            support.append((outcome, y_mass[y]))
            g_values[outcome] = y_wsum[y] / y_mass[y]
        else:
            g_values[outcome] = g_expect  # carries no mass; keeps g total
    y_dist = ExplicitDist(BINARY, k, support)
    g = DenseTable(BINARY, k, g_values)
    return ReductionResult(selected, flipped, tuple(p_values), y_dist, g, g_expect)


def verify_reduction(f: PlayerFunction, d: Distribution,
                     p: Fraction, alpha: Fraction) -> Verdict:
    """Run the reduction and check its three guarantees exactly."""
    p, alpha = Fraction(p), Fraction(alpha)
    result = reduce_to_binary(f, d, p, alpha)
    count_f = count_pivotal(f, d, p, alpha)
    if result.is_empty:
        return Verdict(
            which="reduction",
            inputs={"p": p, "alpha": alpha},
            computed={"empty": True, "count_pivotal": count_f},
            bound=None,
            ok=count_f == 0,
        )
    y = result.y_dist
    g = result.g
    marginal_ok = all(y.single_marginal(j)[0] == p / 2 for j in range(y.n))
    g_effects = effect_report(g, y).effects()
    effects_ok = all(e > alpha for e in g_effects)
    count_g = count_effect(g, y, alpha)
    count_ok = count_f <= 2 * count_g
    witness = None
    if not marginal_ok:
        witness = tuple(y.single_marginal(j)[0] for j in range(y.n))
    elif not effects_ok:
        witness = min(g_effects)
    return Verdict(
        which="reduction",
        inputs={"p": p, "alpha": alpha},
        computed={
            "selected": result.i_plus,
            "flipped": result.flipped,
            "indicator_marginal_ok": marginal_ok,
            "g_effects_exceed_alpha": effects_ok,
            "count_pivotal": count_f,
            "count_effect_g": count_g,
        },
        bound=None,
        ok=marginal_ok and effects_ok and count_ok,
        witness=witness,
    )


# ----------------------------------------------------------------------
# Elimination set for pivotal families (Theorem 2 procedure)


@dataclass(frozen=True)
class EliminationResult:
    """Maximal disjoint family of small pivotal sets plus its certificate.

    The certificate re-scans every small subset disjoint from the union
    and records that none is pivotal.
    """

    family: tuple[tuple[int, ...], ...]
    union: tuple[int, ...]
    t: int
    certificate_ok: bool
    certificate_witness: tuple[int, ...] | None = None


def _small_subsets(n: int, m: int):
    # Canonical scan order: by size, then lexicographic.
    for size in range(1, m + 1):
        yield from itertools.combinations(range(n), size)


def elimination_set(f: PlayerFunction, d: Distribution, m: int,
                    p: Fraction, alpha: Fraction) -> EliminationResult:
    """Greedy maximal disjoint family of pivotal sets of size at most m."""
    p, alpha = _positive("p", p), _positive("alpha", alpha)
    if not 1 <= m <= _ELIMINATION_M_LIMIT:
        raise PreconditionError(f"m must be in 1..{_ELIMINATION_M_LIMIT}, got {m}")
    if d.n > _ELIMINATION_N_LIMIT:
        raise PreconditionError(f"n={d.n} exceeds the enumeration limit {_ELIMINATION_N_LIMIT}")
    res = d.check_kwise(min(2 * m, d.n))
    if not res.ok:
        raise PreconditionError(f"distribution is not {2 * m}-wise independent",
                                witness=res.witness)
    family: list[tuple[int, ...]] = []
    union: set[int] = set()
    for T in _small_subsets(d.n, m):
        if union.intersection(T):
            continue
        if pivotal_set(f, d, T, p, alpha):
            family.append(T)
            union.update(T)
    cert_ok = True
    cert_witness = None
    for T in _small_subsets(d.n, m):
        if union.intersection(T):
            continue
        if pivotal_set(f, d, T, p, alpha):
            cert_ok = False
            cert_witness = T
            break
    return EliminationResult(tuple(family), tuple(sorted(union)),
                             len(family), cert_ok, cert_witness)


def verify_elimination(f: PlayerFunction, d: Distribution, m: int,
                       p: Fraction, alpha: Fraction) -> Verdict:
    """Certificate plus the size bounds on the union and the family."""
    p, alpha = Fraction(p), Fraction(alpha)
    result = elimination_set(f, d, m, p, alpha)
    t_bound = 8 / (p * alpha ** 2)
    c_bound = 8 * m / (p * alpha ** 2)
    size_ok = Fraction(len(result.union)) <= c_bound
    t_ok = Fraction(result.t) < t_bound
    return Verdict(
        which="thm2",
        inputs={"m": m, "p": p, "alpha": alpha, "n": d.n},
        computed={
            "family": result.family,
            "union": result.union,
            "t": result.t,
            "certificate_ok": result.certificate_ok,
            "union_size": len(result.union),
        },
        bound=c_bound,
        ok=result.certificate_ok and size_ok and t_ok,
        witness=result.certificate_witness,
    )


# ----------------------------------------------------------------------
# Convex decomposition of signed effects under mixtures


def convex_decomposition_check(f: PlayerFunction, d1: Distribution,
                               d2: Distribution, q: Fraction, i: int) -> Verdict:
    """Signed effect under a mixture must split convexly across components."""
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise PreconditionError(f"mixture weight {q} outside [0, 1]")
    if d1.alphabet != BINARY or d2.alphabet != BINARY:
        raise DistributionError("decomposition applies to the binary alphabet only")
    if d1.n != d2.n:
        raise DistributionError("components have different arities")
    for j in range(d1.n):
        m1, m2 = d1.single_marginal(j), d2.single_marginal(j)
        if m1 != m2:
            raise DistributionError(
                f"marginal mismatch at player {j}: {m1} vs {m2}")
        if not 0 < m1[1] < 1:
            raise DistributionError(f"player {j} marginal {m1[1]} not inside (0, 1)")
    mixed = mixture(d1, d2, q)
    lhs = signed_effect(f, mixed, i)
    rhs = q * signed_effect(f, d1, i) + (1 - q) * signed_effect(f, d2, i)
    return Verdict(
        which="convex",
        inputs={"q": q, "player": i},
        computed={"mixture_signed": lhs, "convex_sum": rhs},
        bound=None,
        ok=lhs == rhs,
    )


# ----------------------------------------------------------------------
# Tightness experiment for the abstention-majority space


@dataclass(frozen=True)
class TightnessRow:
    alpha: Fraction
    count: Fraction  # exact count, or symmetric estimate in Monte Carlo mode
    bound: Fraction
    mode: str
    halfwidth: float | None = None


def estimate_majp_deviations(n: int, p: Fraction, samples: int,
                             seed: int | str) -> dict[int, tuple[Fraction, float]]:
    """Per-symbol estimates of E[f | X_0 = s] - E[f] with combined half-widths.

    Players are exchangeable under the participation space, so player 0
    stands for all of them.
    """
    d = majp_dist(n, p)
    f = MajPFn(n)
    base = estimate_expectation(f, d, samples, f"{seed}/base")
    out = {}
    for s in range(3):
        cond = estimate_expectation(f, d.condition({0: s}), samples, f"{seed}/s{s}")
        out[s] = (cond.estimate - base.estimate, cond.halfwidth + base.halfwidth)
    return out


def majp_tightness(n: int, p: Fraction, alpha_grid: Sequence[Fraction],
                   samples: int | None = None,
                   seed: int | str | None = None) -> list[TightnessRow]:
    """Pivotal count (or symmetric estimate) against the bound, per alpha.

    Exact mode enumerates the 3^n grid once; Monte Carlo mode estimates the
    three conditional expectations for a representative player and scales
    by n.
    """
    p = Fraction(p)
    alphas = [Fraction(a) for a in alpha_grid]
    rows = []
    if samples is None:
        if n > _TIGHTNESS_EXACT_LIMIT:
            raise PivotalError(
                f"n={n} exceeds the exact enumeration limit {_TIGHTNESS_EXACT_LIMIT};"
                " pass samples= for Monte Carlo mode")
        d = majp_dist(n, p)
        f = MajPFn(n)
        report = pivotal_report(f, d, p, alphas[0])  # thresholds re-derived per alpha below
        for alpha in alphas:
            count = 0
            for row in report.rows:
                mass = sum((sd.mass for sd in row.deviations if abs(sd.deviation) > alpha),
                           ZERO)
                if mass > p:
                    count += 1
            rows.append(TightnessRow(alpha, Fraction(count), 8 / (p * alpha ** 2), "exact"))
        return rows
    if seed is None:
        raise PivotalError("Monte Carlo mode needs an explicit seed")
    devs = estimate_majp_deviations(n, p, samples, seed)
    marginal = majp_dist(n, p).single_marginal(0)
    for alpha in alphas:
        mass = sum((marginal[s] for s, (dev, _) in devs.items() if abs(dev) > alpha),
                   ZERO)
        count = Fraction(n) if mass > p else ZERO
        hw = max(hw for _, hw in devs.values())
        rows.append(TightnessRow(alpha, count, 8 / (p * alpha ** 2), "monte-carlo", hw))
    return rows
