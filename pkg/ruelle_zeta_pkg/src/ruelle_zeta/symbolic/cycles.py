"""Prime cycles of the 3-disc symbolic dynamics.

Full-domain words use the disc labels ``0 1 2`` with no two cyclically
adjacent letters equal. Fundamental-domain words are binary: ``0`` bounces
back to the disc just left, ``1`` moves on to the third disc.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from ..constants import DOMAINS, MAX_WORD_LENGTH
from ..geometry.symmetry import IDENTITY, ROTATION, GroupElement

# label-frame element advanced by each fundamental symbol
SYMBOL_ELEMENTS = {
    "0": GroupElement(1, True),  # swaps the discs of the last flight
    "1": ROTATION,
}


def canonical_rotation(word: str) -> str:
    return min(word[i:] + word[:i] for i in range(len(word))) if word else word


def is_primitive(word: str) -> bool:
    return bool(word) and (word + word).find(word, 1) == len(word)


def _check_alphabet(word: str, domain: str) -> None:
    alphabet = "01" if domain == "fundamental" else "012"
    if not word or any(ch not in alphabet for ch in word):
        raise ValueError(f"Word '{word}' is not over the {domain} alphabet {alphabet}")
    if domain == "full":
        if len(word) < 2 or any(word[i] == word[(i + 1) % len(word)] for i in range(len(word))):
            raise ValueError(f"Full-domain word '{word}' repeats a disc label")


@dataclass(frozen=True, order=True)
class PrimeCycle:
    """A primitive periodic word in canonical (lexicographically minimal) rotation."""

    length: int
    symbols: str
    domain: str = "fundamental"

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"Unknown domain '{self.domain}'")
        _check_alphabet(self.symbols, self.domain)
        if self.length != len(self.symbols):
            raise ValueError("length does not match the word")
        if not is_primitive(self.symbols):
            raise ValueError(f"'{self.symbols}' is a repetition of a shorter word")
        if canonical_rotation(self.symbols) != self.symbols:
            raise ValueError(f"'{self.symbols}' is not in canonical rotation")

    @classmethod
    def from_word(cls, word: str, domain: str = "fundamental") -> "PrimeCycle":
        canonical = canonical_rotation(word)
        return cls(len(canonical), canonical, domain)

    def __str__(self) -> str:
        return self.symbols


def _lyndon_words(alphabet_size: int, n_max: int) -> Iterator[Tuple[int, ...]]:
    """Duval's generator: all Lyndon words of length <= n_max in lexicographic order."""
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < n_max:
            w.append(w[-m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()


def _full_words(n_max: int) -> Iterator[str]:
    # canonical words start with their smallest label; only "12" avoids label 0
    if n_max >= 2:
        yield "12"

    def extend(prefix: List[str], target: int) -> Iterator[str]:
        if len(prefix) == target:
            if prefix[-1] != prefix[0]:
                word = "".join(prefix)
                if is_primitive(word) and canonical_rotation(word) == word:
                    yield word
            return
        for ch in "12" if prefix[-1] == "0" else ("0" + ("2" if prefix[-1] == "1" else "1")):
            prefix.append(ch)
            yield from extend(prefix, target)
            prefix.pop()

    for target in range(2, n_max + 1):
        yield from extend(["0"], target)


def enumerate_prime_cycles(domain: str, n_max: int) -> List[PrimeCycle]:
    """All prime cycles of topological length <= n_max, sorted by (length, word)."""
    if domain not in DOMAINS:
        raise ValueError(f"Unknown domain '{domain}'")
    if not 1 <= n_max <= MAX_WORD_LENGTH:
        raise ValueError(f"n_max must lie in [1, {MAX_WORD_LENGTH}], got {n_max}")

    if domain == "fundamental":
        words = ("".join(map(str, w)) for w in _lyndon_words(2, n_max))
    else:
        words = _full_words(n_max)
    cycles = [PrimeCycle(len(w), w, domain) for w in words]
    return sorted(cycles)


def lyndon_count(n: int, alphabet_size: int = 2) -> int:
    """Number of Lyndon words of length n (Moebius formula)."""
    def mobius(k: int) -> int:
        result, p, m = 1, 2, k
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                result = -result
            p += 1
        return -result if m > 1 else result

    total = sum(mobius(n // d) * alphabet_size ** d for d in range(1, n + 1) if n % d == 0)
    return total // n


@dataclass(frozen=True)
class UnfoldedItinerary:
    """Full-domain realization of a fundamental-domain prime cycle.

    ``frames[k]`` maps the reference flight (disc 0 -> disc 1) onto flight
    ``k`` of the itinerary; ``h = frames[n]`` closes one fundamental period.
    """

    cycle: PrimeCycle
    labels: Tuple[int, ...]
    closure: Tuple[int, ...]
    frames: Tuple[GroupElement, ...]
    h: GroupElement
    m: int

    @property
    def full_cycle(self) -> PrimeCycle:
        return PrimeCycle.from_word("".join(map(str, self.closure)), "full")


def unfold(cycle: PrimeCycle) -> UnfoldedItinerary:
    if cycle.domain != "fundamental":
        raise ValueError("unfold expects a fundamental-domain cycle")

    frames = [IDENTITY]
    for symbol in cycle.symbols:
        frames.append(frames[-1] * SYMBOL_ELEMENTS[symbol])
    h = frames[-1]
    m = h.order

    closure = []
    frame = IDENTITY
    for _ in range(m):
        for k in range(cycle.length):
            closure.append((frame * frames[k]).act_label(0))
        frame = frame * h
    return UnfoldedItinerary(
        cycle=cycle,
        labels=tuple(closure[: cycle.length]),
        closure=tuple(closure),
        frames=tuple(frames),
        h=h,
        m=m,
    )


def itinerary(cycle: PrimeCycle) -> Tuple[int, ...]:
    """Closed full-domain label sequence realizing ``cycle``."""
    if cycle.domain == "full":
        return tuple(int(ch) for ch in cycle.symbols)
    return unfold(cycle).closure


def _periods(orbits: Iterable[Union[float, object]]) -> np.ndarray:
    values = [getattr(o, "period", o) for o in orbits]
    return np.sort(np.asarray(values, dtype=float))


def count_by_period(orbits: Iterable[Union[float, object]], T: float) -> int:
    """Number of prime orbits with period <= T."""
    return int(np.searchsorted(_periods(orbits), T, side="right"))


def growth_rate(orbits: Sequence[Union[float, object]]) -> float:
    """Slope of log N(T) against T over the upper half of the period range."""
    periods = _periods(orbits)
    if periods.size < 4:
        raise ValueError("Need at least four periods to estimate a growth rate")
    counts = np.arange(1, periods.size + 1)
    upper = periods >= np.median(periods)
    slope, _ = np.polyfit(periods[upper], np.log(counts[upper]), 1)
    return float(slope)


__all__ = [
    "PrimeCycle",
    "UnfoldedItinerary",
    "canonical_rotation",
    "count_by_period",
    "enumerate_prime_cycles",
    "growth_rate",
    "is_primitive",
    "itinerary",
    "lyndon_count",
    "unfold",
]
