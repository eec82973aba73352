"""Player functions: dense tables, builtins, and monotone upward closures.

The counterexample builders at the bottom construct balanced monotone
functions on the mixed Hadamard space whose per-player effects (and, with
a thicker closure, influences) all vanish. Each builder returns a
machine-checked certificate; a failed check raises instead of returning a
bogus pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .dist import (
    BINARY,
    PARTICIPATION,
    Alphabet,
    DistributionError,
    ExplicitDist,
    Outcome,
    PivotalError,
    UndefinedPointError,
    ZERO,
    ONE,
)
from .generators import complement_mu, hadamard_mu, mixture_D

_MONOTONE_CHECK_LIMIT = 24


class PreconditionError(PivotalError):
    """An operation's stated precondition failed; carries a witness."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class CertificateError(PivotalError):
    """A construction's verification certificate failed."""

    def __init__(self, message: str, certificate: "Certificate", violation: object = None):
        super().__init__(message)
        self.certificate = certificate
        self.violation = violation


def outcome_to_mask(x: Outcome) -> int:
    mask = 0
    for j, s in enumerate(x):
        if s:
            mask |= 1 << j
    return mask


def mask_to_outcome(mask: int, n: int) -> Outcome:
    return tuple((mask >> j) & 1 for j in range(n))


class PlayerFunction:
    """Total map from outcome tuples to rational values in [-1, 1]."""

    alphabet: Alphabet
    n: int

    def evaluate(self, x: Outcome) -> Fraction:
        raise NotImplementedError

    def evaluate_mask(self, mask: int) -> Fraction:
        """Binary-alphabet evaluation by bitmask (bit j = player j)."""
        return self.evaluate(mask_to_outcome(mask, self.n))

    def _check_arity(self, x: Outcome) -> None:
        if len(x) != self.n:
            raise PivotalError(f"outcome {x} has length {len(x)}, function expects {self.n}")


def _check_value_range(x: Outcome, v: Fraction) -> None:
    if not -1 <= v <= 1:
        raise PivotalError(f"value {v} at {x} outside [-1, 1]")


class DenseTable(PlayerFunction):
    """Explicit value for every outcome of the full grid."""

    __slots__ = ("alphabet", "n", "entries", "_lookup")

    def __init__(self, alphabet: Alphabet, n: int,
                 values: Mapping[Outcome, Fraction] | Iterable[tuple[Outcome, Fraction]]):
        self.alphabet = alphabet
        self.n = int(n)
        pairs = values.items() if isinstance(values, Mapping) else values
        self.entries = tuple(sorted((tuple(x), Fraction(v)) for x, v in pairs))
        self._lookup = dict(self.entries)
        m = len(alphabet)
        if len(self._lookup) != len(self.entries):
            raise PivotalError("duplicate outcome in table")
        if len(self.entries) != m ** self.n:
            raise PivotalError(
                f"dense table has {len(self.entries)} entries, grid needs {m ** self.n}")
        for x, v in self.entries:
            if len(x) != self.n or any(not 0 <= s < m for s in x):
                raise PivotalError(f"invalid outcome {x} in table")
            _check_value_range(x, v)

    def evaluate(self, x: Outcome) -> Fraction:
        self._check_arity(x)
        return self._lookup[tuple(x)]

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, DenseTable) and self.alphabet == other.alphabet
                and self.n == other.n and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.n, self.entries))

    def __repr__(self) -> str:
        return f"DenseTable(n={self.n}, {len(self.entries)} entries)"


class PartialTable(PlayerFunction):
    """Values on a subset of outcomes; evaluation elsewhere is an error."""

    __slots__ = ("alphabet", "n", "entries", "_lookup")

    def __init__(self, alphabet: Alphabet, n: int,
                 values: Mapping[Outcome, Fraction] | Iterable[tuple[Outcome, Fraction]]):
        self.alphabet = alphabet
        self.n = int(n)
        pairs = values.items() if isinstance(values, Mapping) else values
        self.entries = tuple(sorted((tuple(x), Fraction(v)) for x, v in pairs))
        self._lookup = dict(self.entries)
        if len(self._lookup) != len(self.entries):
            raise PivotalError("outcome mapped twice in partial table")
        m = len(alphabet)
        for x, v in self.entries:
            if len(x) != self.n or any(not 0 <= s < m for s in x):
                raise PivotalError(f"invalid outcome {x} in table")
            _check_value_range(x, v)

    def evaluate(self, x: Outcome) -> Fraction:
        self._check_arity(x)
        try:
            return self._lookup[tuple(x)]
        except KeyError:
            raise UndefinedPointError(f"function undefined at {tuple(x)}") from None

    def domain(self) -> tuple[Outcome, ...]:
        return tuple(x for x, _ in self.entries)

    def __repr__(self) -> str:
        return f"PartialTable(n={self.n}, {len(self.entries)} points)"


@dataclass(frozen=True)
class ParityFn(PlayerFunction):
    """1 iff an odd number of input bits are set."""

    n: int
    alphabet: Alphabet = BINARY

    def evaluate(self, x: Outcome) -> Fraction:
        self._check_arity(x)
        return Fraction(sum(x) & 1)


@dataclass(frozen=True)
class MajorityFn(PlayerFunction):
    """1 iff strictly more ones than zeros (ties give 0)."""

    n: int
    alphabet: Alphabet = BINARY

    def evaluate(self, x: Outcome) -> Fraction:
        self._check_arity(x)
        ones = sum(x)
        return Fraction(1) if 2 * ones > self.n else ZERO


@dataclass(frozen=True)
class DictatorFn(PlayerFunction):
    n: int
    player: int
    alphabet: Alphabet = BINARY

    def __post_init__(self) -> None:
        if not 0 <= self.player < self.n:
            raise PivotalError(f"dictator index {self.player} out of range for n={self.n}")

    def evaluate(self, x: Outcome) -> Fraction:
        self._check_arity(x)
        return Fraction(x[self.player])


@dataclass(frozen=True)
class ConstantFn(PlayerFunction):
    n: int
    value: Fraction
    alphabet: Alphabet = BINARY

    def __post_init__(self) -> None:
        _check_value_range((), self.value)

    def evaluate(self, x: Outcome) -> Fraction:
        self._check_arity(x)
        return self.value


@dataclass(frozen=True)
class MajPFn(PlayerFunction):
    """Majority over participating players on the {0, 1, abstain} alphabet.

    Value 1 iff strictly more participants vote 1 than 0. Ties and empty
    participation give 0; the tie rule is a fixed convention of this
    library.
    """

    n: int
    alphabet: Alphabet = PARTICIPATION

    def evaluate(self, x: Outcome) -> Fraction:
        self._check_arity(x)
        ones = sum(1 for s in x if s == 1)
        zeros = sum(1 for s in x if s == 0)
        return Fraction(1) if ones > zeros else ZERO


def majp_fn(n: int) -> MajPFn:
    return MajPFn(n)


class UpwardClosure(PlayerFunction):
    """Indicator of the upward closure of a generator set on the binary cube.

    Value 1 iff the input dominates some generator coordinatewise; monotone
    by construction. Generators are stored as the minimal antichain, sorted,
    so equal closures compare equal.
    """

    __slots__ = ("alphabet", "n", "generators")

    def __init__(self, n: int, generators: Iterable[Sequence[int]]):
        self.alphabet = BINARY
        self.n = int(n)
        masks = set()
        for g in generators:
            x = tuple(g)
            if len(x) != self.n or any(s not in (0, 1) for s in x):
                raise PivotalError(f"generator {x} is not a length-{self.n} bit vector")
            masks.add(outcome_to_mask(x))
        self.generators = self._minimize(masks)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "UpwardClosure":
        obj = cls.__new__(cls)
        obj.alphabet = BINARY
        obj.n = int(n)
        bad = [m for m in masks if not 0 <= m < (1 << n)]
        if bad:
            raise PivotalError(f"generator mask {bad[0]} out of range for n={n}")
        obj.generators = cls._minimize(set(masks))
        return obj

    @staticmethod
    def _minimize(masks: set[int]) -> tuple[int, ...]:
        # Keep only minimal elements: a generator above another is redundant.
        kept = [g for g in masks
                if not any(h != g and h & g == h for h in masks)]
        return tuple(sorted(kept))

    def evaluate(self, x: Outcome) -> Fraction:
        self._check_arity(x)
        if any(s not in (0, 1) for s in x):
            raise PivotalError(f"non-binary outcome {x} for an upward closure")
        return self.evaluate_mask(outcome_to_mask(x))

    def evaluate_mask(self, mask: int) -> Fraction:
        for g in self.generators:
            if g & mask == g:
                return ONE
        return ZERO

    def generator_outcomes(self) -> tuple[Outcome, ...]:
        return tuple(mask_to_outcome(g, self.n) for g in self.generators)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, UpwardClosure) and self.n == other.n
                and self.generators == other.generators)

    def __hash__(self) -> int:
        return hash((self.n, self.generators))

    def __repr__(self) -> str:
        return f"UpwardClosure(n={self.n}, {len(self.generators)} generators)"


@dataclass(frozen=True)
class MonotoneResult:
    ok: bool
    witness: tuple[Outcome, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def monotone_check(f: PlayerFunction, n: int | None = None) -> MonotoneResult:
    """Exhaustive monotonicity check over the full binary cube.

    Returns a witness (x, i) with f(x) > f(x with bit i set) when the
    function is not monotone.
    """
    n = f.n if n is None else n
    if f.alphabet != BINARY:
        raise PivotalError("monotonicity is defined for the binary alphabet only")
    if n > _MONOTONE_CHECK_LIMIT:
        raise PivotalError(f"n={n} exceeds the enumeration limit {_MONOTONE_CHECK_LIMIT}")
    values = [f.evaluate_mask(m) for m in range(1 << n)]
    for m in range(1 << n):
        vm = values[m]
        for i in range(n):
            bit = 1 << i
            if not m & bit and vm > values[m | bit]:
                return MonotoneResult(False, (mask_to_outcome(m, n), i))
    return MonotoneResult(True, None)


def monotone_extend(pt: PartialTable) -> UpwardClosure:
    """Extend a consistent 0/1 partial labeling to a monotone total function.

    The result is the upward closure of the 1-labeled points; it agrees
    with the labeling iff no 0-labeled point dominates a 1-labeled point.
    """
    if pt.alphabet != BINARY:
        raise PivotalError("monotone extension is defined for the binary alphabet only")
    ones = []
    zeros = []
    for x, v in pt.entries:
        if v == 1:
            ones.append(outcome_to_mask(x))
        elif v == 0:
            zeros.append(outcome_to_mask(x))
        else:
            raise PivotalError(f"monotone extension needs 0/1 labels, got {v} at {x}")
    for z in zeros:
        for o in ones:
            if o & z == o:
                raise PreconditionError(
                    "0-labeled point dominates a 1-labeled point",
                    witness=(mask_to_outcome(z, pt.n), mask_to_outcome(o, pt.n)))
    return UpwardClosure.from_masks(pt.n, ones)


@dataclass(frozen=True)
class CertCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class Certificate:
    kind: str
    k: int
    checks: tuple[CertCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def _neighborhood(masks: Iterable[int], n: int) -> set[int]:
    """A set of points together with all their Hamming-1 neighbors."""
    out = set()
    for m in masks:
        out.add(m)
        for j in range(n):
            out.add(m ^ (1 << j))
    return out


def effect_counterexample(k: int) -> tuple[UpwardClosure, ExplicitDist, Certificate]:
    """Balanced monotone function with all effects zero on the mixed Hadamard space.

    The function is the upward closure of the complement-space support: it
    is constant 0 on the base support and constant 1 on the complement
    support, hence constant on each mixture component, which kills every
    effect. Requires k >= 3 so no non-extreme points of the two supports
    are comparable.
    """
    if k < 3:
        raise PreconditionError(f"k must be >= 3, got {k}")
    mu = hadamard_mu(k)
    mubar = complement_mu(mu)
    d = mixture_D(k)
    f = UpwardClosure.from_masks(mu.n, [outcome_to_mask(x) for x, _ in mubar.items()])

    checks = []
    violation = None
    bad = [x for x, _ in mu.items() if f.evaluate(x) != 0]
    if bad:
        g = next(g for g in f.generators
                 if g & outcome_to_mask(bad[0]) == g)
        violation = (bad[0], mask_to_outcome(g, f.n))
    checks.append(CertCheck("zero_on_base_support", not bad,
                            f"violating point {bad[0]}" if bad else f"{len(mu.support)} points"))
    bad1 = [x for x, _ in mubar.items() if f.evaluate(x) != 1]
    checks.append(CertCheck("one_on_complement_support", not bad1,
                            f"violating point {bad1[0]}" if bad1 else f"{len(mubar.support)} points"))
    exp = d.expectation(f)
    checks.append(CertCheck("balanced_under_mixture", exp == Fraction(1, 2), f"expectation {exp}"))

    cert = Certificate("effect", k, tuple(checks))
    if not cert.ok:
        raise CertificateError("effect counterexample certificate failed", cert, violation)
    return f, d, cert


def influence_counterexample(k: int) -> tuple[UpwardClosure, ExplicitDist, Certificate]:
    """Counterexample whose closure is locally constant around the mixture support.

    Each complement-support vector is lowered by one coordinate before
    closing upward, so the whole Hamming-1 ball around the complement
    support evaluates to 1 while the ball around the base support stays at
    0. Local constancy makes every influence zero. The dominance scan that
    certifies this can fail for small k; the error then names the
    violating (point, generator) pair.
    """
    if k < 3:
        raise PreconditionError(f"k must be >= 3, got {k}")
    mu = hadamard_mu(k)
    mubar = complement_mu(mu)
    d = mixture_D(k)
    n = mu.n
    full = (1 << n) - 1

    gens: set[int] = set()
    for x, _ in mubar.items():
        m = outcome_to_mask(x)
        if m == full:
            continue
        for j in range(n):
            if m & (1 << j):
                gens.add(m ^ (1 << j))
    for j in range(n):
        gens.add(full ^ (1 << j))
    f = UpwardClosure.from_masks(n, gens)

    checks = []
    violation = None

    ball_bar = _neighborhood([outcome_to_mask(x) for x, _ in mubar.items()], n)
    bad1 = [m for m in sorted(ball_bar) if f.evaluate_mask(m) != 1]
    checks.append(CertCheck(
        "one_on_complement_ball", not bad1,
        f"point {mask_to_outcome(bad1[0], n)} not in closure" if bad1
        else f"{len(ball_bar)} points"))

    ball_mu = _neighborhood([outcome_to_mask(x) for x, _ in mu.items()], n)
    bad0 = []
    for m in sorted(ball_mu):
        for g in f.generators:
            if g & m == g:
                bad0.append((m, g))
                break
    if bad0:
        violation = (mask_to_outcome(bad0[0][0], n), mask_to_outcome(bad0[0][1], n))
    checks.append(CertCheck(
        "zero_on_base_ball", not bad0,
        f"point {violation[0]} dominates generator {violation[1]}" if bad0
        else f"{len(ball_mu)} points"))

    checks.append(CertCheck("monotone_by_construction", True, "upward closure"))

    exp = d.expectation(f)
    checks.append(CertCheck("balanced_under_mixture", exp == Fraction(1, 2), f"expectation {exp}"))

    cert = Certificate("influence", k, tuple(checks))
    if not cert.ok:
        raise CertificateError(
            f"influence counterexample certificate failed at k={k}", cert, violation)
    return f, d, cert
