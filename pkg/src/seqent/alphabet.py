"""Finite alphabets, fixed-length words, and prefix sets.

A word is a tuple of symbol indices drawn from {0, ..., size-1}.  Prefix
sets hold the distinct length-n openings of a set of one-sided sequences;
their cardinalities drive every entropy computation in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator


@dataclass(frozen=True)
class Alphabet:
    """Symbol set {0, ..., size-1} with optional display labels."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.size}")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ValueError(
                    f"expected {self.size} labels, got {len(self.labels)}"
                )
            if len(set(self.labels)) != len(self.labels):
                raise ValueError("labels must be distinct")

    def symbols(self) -> range:
        return range(self.size)

    def label(self, symbol: int) -> str:
        if self.labels is not None:
            return self.labels[symbol]
        return str(symbol)


@dataclass(frozen=True)
class Word:
    """A fixed-length word over an alphabet."""

    alphabet: Alphabet
    symbols: tuple[int, ...]

    def __post_init__(self) -> None:
        for s in self.symbols:
            if not 0 <= s < self.alphabet.size:
                raise ValueError(
                    f"symbol {s} out of range for alphabet of size "
                    f"{self.alphabet.size}"
                )

    def __len__(self) -> int:
        return len(self.symbols)

    def text(self) -> str:
        return ".".join(self.alphabet.label(s) for s in self.symbols)


@dataclass(frozen=True)
class PrefixSet:
    """Distinct length-n words opening some sequence set.

    Words are stored as raw symbol tuples; ``as_words`` wraps them when the
    richer type is wanted.  ``sorted_words`` fixes the lexicographic order
    used by every serialized output.
    """

    alphabet: Alphabet
    length: int
    words: frozenset[tuple[int, ...]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("prefix length must be >= 0")
        k = self.alphabet.size
        for w in self.words:
            if len(w) != self.length:
                raise ValueError(
                    f"word of length {len(w)} in prefix set of length {self.length}"
                )
            for s in w:
                if not 0 <= s < k:
                    raise ValueError(f"symbol {s} out of range")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: tuple[int, ...]) -> bool:
        return tuple(word) in self.words

    def sorted_words(self) -> list[tuple[int, ...]]:
        return sorted(self.words)

    def as_words(self) -> Iterator[Word]:
        for w in self.sorted_words():
            yield Word(self.alphabet, w)
