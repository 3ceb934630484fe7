"""Alphabets, words, and factor search over free monoids.

A word is a plain Python string whose characters are letters of an
:class:`Alphabet`; the empty string is the monoid identity.  All values
are immutable, so words and alphabets can be shared freely between
threads and workers.
"""

from __future__ import annotations

from dataclasses import dataclass

Word = str


class WordSyntaxError(ValueError):
    """Malformed word text, or a letter outside the intended alphabet."""


@dataclass(frozen=True)
class Alphabet:
    """An ordered collection of distinct single-character letters.

    The construction order is fixed and doubles as the default letter
    precedence (earlier letter = greater) and as the enumeration order
    for shortlex listings (earlier letter = listed first).
    """

    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            raise ValueError("alphabet must contain at least one letter")
        for letter in self.letters:
            if len(letter) != 1:
                raise ValueError(f"letters must be single characters, got {letter!r}")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError(f"duplicate letters in {self.letters!r}")

    def __contains__(self, letter: str) -> bool:
        return letter in self.letters

    def __iter__(self):
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def index(self, letter: str) -> int:
        return self.letters.index(letter)

    def validate_word(self, word: Word) -> Word:
        """Return ``word`` unchanged, raising if any letter is foreign."""
        for ch in word:
            if ch not in self.letters:
                raise WordSyntaxError(f"letter {ch!r} not in alphabet {''.join(self.letters)!r}")
        return word

    def extend(self, letter: str) -> "Alphabet":
        """A new alphabet with ``letter`` appended (last in precedence)."""
        if letter in self.letters:
            raise ValueError(f"letter {letter!r} already present")
        return Alphabet(self.letters + (letter,))


def alphabet(letters: str) -> Alphabet:
    """Convenience constructor: ``alphabet("abx")``."""
    return Alphabet(tuple(letters))


def parse_word(text: str, alpha: Alphabet) -> Word:
    """Expand concrete word syntax like ``a^2b^2ab^2`` to a letter string.

    The syntax is ``letter(^positive-integer)?`` repeated; the empty
    string denotes the identity.  Round-trips with :func:`print_word`.
    """
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch not in alpha:
            raise WordSyntaxError(f"unknown letter {ch!r} in {text!r}")
        i += 1
        if i < len(text) and text[i] == "^":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise WordSyntaxError(f"malformed exponent after {ch!r} in {text!r}")
            n = int(text[i + 1 : j])
            if n == 0:
                raise WordSyntaxError(f"exponent 0 not allowed in {text!r}")
            out.append(ch * n)
            i = j
        else:
            out.append(ch)
    return "".join(out)


def print_word(word: Word) -> str:
    """Compress runs of a word into ``^`` notation, e.g. ``xxb`` -> ``x^2b``."""
    parts: list[str] = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        n = j - i
        parts.append(word[i] if n == 1 else f"{word[i]}^{n}")
        i = j
    return "".join(parts)


def find_occurrences(haystack: Word, needle: Word) -> list[int]:
    """All start positions of ``needle`` in ``haystack``, overlapping included."""
    if not needle:
        raise ValueError("needle must be non-empty")
    out: list[int] = []
    pos = haystack.find(needle)
    while pos != -1:
        out.append(pos)
        pos = haystack.find(needle, pos + 1)
    return out


@dataclass(frozen=True)
class Overlap:
    """How two words share letters.

    ``kind`` is ``"suffix_prefix"`` (``at`` = overlap length t, with the
    length-t suffix of u equal to the length-t prefix of v, 0 < t <
    min(|u|,|v|)) or ``"containment"`` (``at`` = start of an occurrence of
    v strictly inside u, touching neither end).
    """

    kind: str
    at: int


def overlaps(u: Word, v: Word) -> list[Overlap]:
    """Proper suffix-prefix overlaps of u with v, plus strict containments of v in u."""
    if not u or not v:
        raise ValueError("overlaps of empty words are not defined")
    found: list[Overlap] = []
    for t in range(1, min(len(u), len(v))):
        if u[len(u) - t :] == v[:t]:
            found.append(Overlap("suffix_prefix", t))
    if len(v) < len(u):
        for p in find_occurrences(u, v):
            if 0 < p and p + len(v) < len(u):
                found.append(Overlap("containment", p))
    return found
