"""Finite joint distributions with exact rational probabilities.

Two concrete representations share one query interface: an explicit
support list and a fully independent product form. All probability mass
is carried by ``fractions.Fraction``, so marginals, conditionals,
expectations, and independence checks are exact computations; floats
appear only when a report is rendered.

Values are immutable after construction and every operation is a pure
function of its inputs, so concurrent use needs no coordination.
Sampling takes its seed and draw index explicitly.
"""

from __future__ import annotations

import itertools
import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Protocol, Sequence

Outcome = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

# Expanding a product form materializes its grid; past this many points
# we refuse rather than exhaust memory (streaming queries stay lazy).
_EXPANSION_LIMIT = 1 << 21


class PivotalError(Exception):
    """Base class for all library errors."""


class DistributionError(PivotalError):
    """A distribution invariant or precondition failed."""


class NullConditionError(DistributionError):
    """Conditioning on an event of probability zero."""


class UndefinedPointError(PivotalError):
    """A player function was evaluated outside its domain."""


class Evaluable(Protocol):
    """Anything that maps outcomes to rational values."""

    def evaluate(self, x: Outcome) -> Fraction: ...


@dataclass(frozen=True)
class Alphabet:
    """Ordered list of distinct symbol labels; order is part of equality."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise DistributionError("alphabet must have at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise DistributionError(f"alphabet symbols not distinct: {self.symbols!r}")

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise DistributionError(f"symbol {symbol!r} not in alphabet {self.symbols!r}") from None

    @property
    def is_binary(self) -> bool:
        return self.symbols == ("0", "1")


BINARY = Alphabet(("0", "1"))
# Third symbol marks a non-participating player.
PARTICIPATION = Alphabet(("0", "1", "⊥"))


@dataclass(frozen=True)
class KwiseWitness:
    """First subset/assignment whose joint mass breaks factorization."""

    players: tuple[int, ...]
    assignment: tuple[int, ...]
    joint: Fraction
    product: Fraction


@dataclass(frozen=True)
class KwiseResult:
    ok: bool
    witness: KwiseWitness | None = None

    def __bool__(self) -> bool:
        return self.ok


def _rng_for(seed: int | str, index: int) -> random.Random:
    # One generator per (seed, index) pair keeps parallel draws reproducible.
    return random.Random(f"{seed}|{index}")


def _draw(rng: random.Random, weights: Sequence[Fraction]) -> int:
    """Pick an index with probability exactly proportional to weights."""
    denom = math.lcm(*(w.denominator for w in weights))
    scaled = [w.numerator * (denom // w.denominator) for w in weights]
    r = rng.randrange(sum(scaled))
    acc = 0
    for i, s in enumerate(scaled):
        acc += s
        if r < acc:
            return i
    raise AssertionError("weights exhausted before cumulative mass reached")


class Distribution(ABC):
    """Shared query interface over explicit and product representations."""

    alphabet: Alphabet
    n: int

    @abstractmethod
    def items(self) -> Iterator[tuple[Outcome, Fraction]]:
        """Iterate (outcome, weight) over the support, weights > 0."""

    @abstractmethod
    def weight(self, x: Outcome) -> Fraction:
        """Exact probability of a single outcome (0 off support)."""

    @abstractmethod
    def single_marginal(self, i: int) -> tuple[Fraction, ...]:
        """Per-symbol mass of player i's signal."""

    @abstractmethod
    def condition(self, assignment: Mapping[int, int]) -> "Distribution":
        """Restrict to outcomes matching the partial assignment, renormalized."""

    @abstractmethod
    def to_explicit(self) -> "ExplicitDist":
        """Explicit expansion with canonically sorted support."""

    @abstractmethod
    def sample(self, seed: int | str, index: int = 0) -> Outcome:
        """Draw one outcome; deterministic given (seed, index)."""

    @abstractmethod
    def validate(self) -> None:
        """Re-check every construction invariant, raising on the first failure."""

    def _check_player(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise DistributionError(f"player index {i} out of range for n={self.n}")

    def marginal(self, players: Sequence[int]) -> "ExplicitDist":
        """Joint law of the given players, as an explicit distribution.

        Coordinates of the result follow the sorted player order.
        """
        T = sorted(set(players))
        for i in T:
            self._check_player(i)
        if not T:
            raise DistributionError("marginal requires at least one player")
        masses: dict[Outcome, Fraction] = {}
        for x, w in self.items():
            key = tuple(x[i] for i in T)
            masses[key] = masses.get(key, ZERO) + w
        return ExplicitDist(self.alphabet, len(T), tuple(sorted(masses.items())))

    def expectation(self, f: Evaluable) -> Fraction:
        """Exact sum of weight * f over the support."""
        total = ZERO
        for x, w in self.items():
            total += w * f.evaluate(x)
        return total

    def check_kwise(self, k: int) -> KwiseResult:
        """Exact k-wise independence test.

        True iff every subset of at most k players factorizes over every
        assignment. Subsets are scanned by size then lexicographically, so
        the witness is canonical.
        """
        if not 1 <= k <= self.n:
            raise DistributionError(f"k={k} out of range 1..{self.n}")
        singles = [self.single_marginal(i) for i in range(self.n)]
        m = len(self.alphabet)
        for size in range(2, k + 1):
            for T in itertools.combinations(range(self.n), size):
                joint: dict[Outcome, Fraction] = {}
                for x, w in self.items():
                    key = tuple(x[i] for i in T)
                    joint[key] = joint.get(key, ZERO) + w
                for a in itertools.product(range(m), repeat=size):
                    prod = ONE
                    for i, s in zip(T, a):
                        prod *= singles[i][s]
                    if joint.get(a, ZERO) != prod:
                        return KwiseResult(False, KwiseWitness(T, a, joint.get(a, ZERO), prod))
        return KwiseResult(True, None)


class ExplicitDist(Distribution):
    """Distribution given by an explicit (outcome, weight) support list."""

    __slots__ = ("alphabet", "n", "support")

    def __init__(self, alphabet: Alphabet, n: int,
                 support: Sequence[tuple[Outcome, Fraction]]):
        self.alphabet = alphabet
        self.n = int(n)
        self.support = tuple(sorted((tuple(x), Fraction(w)) for x, w in support))
        self.validate()

    def validate(self) -> None:
        if self.n < 1:
            raise DistributionError(f"arity must be >= 1, got {self.n}")
        if not self.support:
            raise DistributionError("support is empty")
        m = len(self.alphabet)
        seen: set[Outcome] = set()
        total = ZERO
        for x, w in self.support:
            if len(x) != self.n:
                raise DistributionError(f"outcome {x} has length {len(x)}, expected arity {self.n}")
            if any(not (0 <= s < m) for s in x):
                raise DistributionError(f"outcome {x} uses a symbol index outside the alphabet")
            if x in seen:
                raise DistributionError(f"duplicate outcome {x} in support")
            seen.add(x)
            if w <= 0:
                raise DistributionError(f"weight of {x} is {w}, must be positive")
            total += w
        if total != 1:
            raise DistributionError(f"weights sum to {total}, expected 1")

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ExplicitDist)
                and self.alphabet == other.alphabet
                and self.n == other.n
                and self.support == other.support)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.n, self.support))

    def __repr__(self) -> str:
        return f"ExplicitDist(n={self.n}, |supp|={len(self.support)})"

    def items(self) -> Iterator[tuple[Outcome, Fraction]]:
        return iter(self.support)

    def weight(self, x: Outcome) -> Fraction:
        x = tuple(x)
        for y, w in self.support:
            if y == x:
                return w
        return ZERO

    def single_marginal(self, i: int) -> tuple[Fraction, ...]:
        self._check_player(i)
        acc = [ZERO] * len(self.alphabet)
        for x, w in self.support:
            acc[x[i]] += w
        return tuple(acc)

    def condition(self, assignment: Mapping[int, int]) -> "ExplicitDist":
        for i in assignment:
            self._check_player(i)
        kept = [(x, w) for x, w in self.support
                if all(x[i] == s for i, s in assignment.items())]
        mass = sum((w for _, w in kept), ZERO)
        if mass == 0:
            raise NullConditionError(f"conditioning on null event {dict(assignment)!r}")
        return ExplicitDist(self.alphabet, self.n, [(x, w / mass) for x, w in kept])

    def to_explicit(self) -> "ExplicitDist":
        return self

    def sample(self, seed: int | str, index: int = 0) -> Outcome:
        rng = _rng_for(seed, index)
        pos = _draw(rng, [w for _, w in self.support])
        return self.support[pos][0]


class ProductDist(Distribution):
    """Fully independent players, one marginal vector per player.

    Enumeration streams the symbol grid without materializing it, so
    queries on e.g. a 3^12 grid keep memory flat.
    """

    __slots__ = ("alphabet", "n", "marginals")

    def __init__(self, alphabet: Alphabet, n: int,
                 marginals: Sequence[Sequence[Fraction]]):
        self.alphabet = alphabet
        self.n = int(n)
        self.marginals = tuple(tuple(Fraction(p) for p in row) for row in marginals)
        self.validate()

    def validate(self) -> None:
        if self.n < 1:
            raise DistributionError(f"arity must be >= 1, got {self.n}")
        if len(self.marginals) != self.n:
            raise DistributionError(
                f"{len(self.marginals)} marginal vectors for arity {self.n}")
        m = len(self.alphabet)
        for i, row in enumerate(self.marginals):
            if len(row) != m:
                raise DistributionError(
                    f"player {i} marginal has {len(row)} entries, alphabet has {m}")
            if any(p < 0 for p in row):
                raise DistributionError(f"player {i} marginal has a negative entry")
            if sum(row) != 1:
                raise DistributionError(
                    f"player {i} marginal sums to {sum(row)}, expected 1")

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ProductDist)
                and self.alphabet == other.alphabet
                and self.n == other.n
                and self.marginals == other.marginals)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.n, self.marginals))

    def __repr__(self) -> str:
        return f"ProductDist(n={self.n}, |S|={len(self.alphabet)})"

    def items(self) -> Iterator[tuple[Outcome, Fraction]]:
        nonzero = [[(s, p) for s, p in enumerate(row) if p > 0] for row in self.marginals]
        for combo in itertools.product(*nonzero):
            w = ONE
            for _, p in combo:
                w *= p
            yield tuple(s for s, _ in combo), w

    def weight(self, x: Outcome) -> Fraction:
        if len(x) != self.n:
            raise DistributionError(f"outcome {x} has wrong arity")
        w = ONE
        for i, s in enumerate(x):
            w *= self.marginals[i][s]
        return w

    def single_marginal(self, i: int) -> tuple[Fraction, ...]:
        self._check_player(i)
        return self.marginals[i]

    def marginal(self, players: Sequence[int]) -> ExplicitDist:
        # Factorizes: only the selected players' grid is enumerated.
        T = sorted(set(players))
        for i in T:
            self._check_player(i)
        if not T:
            raise DistributionError("marginal requires at least one player")
        rows = [[(s, p) for s, p in enumerate(self.marginals[i]) if p > 0] for i in T]
        support = []
        for combo in itertools.product(*rows):
            w = ONE
            for _, p in combo:
                w *= p
            support.append((tuple(s for s, _ in combo), w))
        return ExplicitDist(self.alphabet, len(T), support)

    def condition(self, assignment: Mapping[int, int]) -> "ProductDist":
        # Pinning a player keeps the product form.
        for i, s in assignment.items():
            self._check_player(i)
            if self.marginals[i][s] == 0:
                raise NullConditionError(
                    f"conditioning on null event: player {i} never takes symbol {s}")
        rows = list(self.marginals)
        m = len(self.alphabet)
        for i, s in assignment.items():
            rows[i] = tuple(ONE if t == s else ZERO for t in range(m))
        return ProductDist(self.alphabet, self.n, rows)

    def check_kwise(self, k: int) -> KwiseResult:
        if not 1 <= k <= self.n:
            raise DistributionError(f"k={k} out of range 1..{self.n}")
        return KwiseResult(True, None)

    def grid_size(self) -> int:
        return len(self.alphabet) ** self.n

    def to_explicit(self) -> ExplicitDist:
        if self.grid_size() > _EXPANSION_LIMIT:
            raise DistributionError(
                f"grid of {self.grid_size()} points is too large to expand explicitly")
        return ExplicitDist(self.alphabet, self.n, list(self.items()))

    def sample(self, seed: int | str, index: int = 0) -> Outcome:
        rng = _rng_for(seed, index)
        return tuple(_draw(rng, row) for row in self.marginals)


def mixture(d1: Distribution, d2: Distribution, q: Fraction) -> ExplicitDist:
    """Convex combination q*d1 + (1-q)*d2 as an explicit distribution.

    Supports are merged; outcomes whose combined weight is zero are dropped.
    """
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise DistributionError(f"mixture weight {q} outside [0, 1]")
    if d1.alphabet != d2.alphabet:
        raise DistributionError("mixture components use different alphabets")
    if d1.n != d2.n:
        raise DistributionError(f"mixture components have arities {d1.n} and {d2.n}")
    masses: dict[Outcome, Fraction] = {}
    if q > 0:
        for x, w in d1.items():
            masses[x] = masses.get(x, ZERO) + q * w
    if q < 1:
        for x, w in d2.items():
            masses[x] = masses.get(x, ZERO) + (1 - q) * w
    return ExplicitDist(d1.alphabet, d1.n, [(x, w) for x, w in masses.items() if w > 0])
