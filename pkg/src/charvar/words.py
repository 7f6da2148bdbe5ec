"""Freely reduced words in a free group with named generators, and their parser."""

from __future__ import annotations

from typing import Iterable, Sequence

_SUPERSCRIPT = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹⁻", "0123456789-")
_SUP_CHARS = set("⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


class ParseError(ValueError):
    """Malformed word text; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        where = f" at position {position}"
        if text:
            where += f" in {text!r}"
        super().__init__(message + where)
        self.position = position
        self.text = text


def _free_reduce(letters: Iterable[tuple[str, int]]) -> tuple:
    stack: list[list] = []
    for g, e in letters:
        if not e:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if not stack[-1][1]:
                stack.pop()
        else:
            stack.append([g, e])
    return tuple((g, e) for g, e in stack)


class Word:
    """Syllables ``(generator, exponent)`` with adjacent generators distinct."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[str, int]] = ()):
        object.__setattr__(self, "letters", _free_reduce((str(g), int(e)) for g, e in letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        return cls([(name, power)])

    def __len__(self):
        """Letter count: the sum of absolute exponents."""
        return sum(abs(e) for _, e in self.letters)

    @property
    def syllables(self) -> int:
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def commutator(self, other: "Word") -> "Word":
        return self * other * self.inverse() * other.inverse()

    def conjugate_by(self, u: "Word") -> "Word":
        return u * self * u.inverse()

    def cyclic_reduce(self) -> "Word":
        letters = list(self.letters)
        while len(letters) > 1 and letters[0][0] == letters[-1][0]:
            g = letters[0][0]
            e = letters[0][1] + letters[-1][1]
            letters = letters[1:-1]
            if e:
                letters = [(g, e)] + letters
            letters = list(_free_reduce(letters))
        return Word(letters)

    def rotations(self) -> list["Word"]:
        w = self.cyclic_reduce()
        if not w.letters:
            return [w]
        return [Word(w.letters[i:] + w.letters[:i]) for i in range(len(w.letters))]

    def expanded(self) -> list[tuple[str, int]]:
        """One entry per letter, exponent +1 or -1."""
        out = []
        for g, e in self.letters:
            out.extend([(g, 1 if e > 0 else -1)] * abs(e))
        return out

    def exponent_sums(self, generators: Sequence[str]) -> list[int]:
        sums = dict.fromkeys(generators, 0)
        for g, e in self.letters:
            if g not in sums:
                raise KeyError(f"generator {g!r} not in {tuple(generators)}")
            sums[g] += e
        return [sums[g] for g in generators]

    def __eq__(self, other):
        if isinstance(other, Word):
            return self.letters == other.letters
        return NotImplemented

    def __hash__(self):
        return hash(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"


def parse_word(text: str, generators: Sequence[str] | None = None) -> Word:
    """Parse text such as ``"a^3 b a b^-1"``, ``"a³bab⁻¹"`` or ``"b^(-1)abab"``.

    Without ``generators`` each ASCII letter is a generator. With
    ``generators`` the longest matching name is taken and anything else is
    an error. An uppercase single letter denotes the inverse of its lowercase
    generator when it is not itself a generator. ``"1"`` is the empty word.
    """
    gens = tuple(generators) if generators is not None else None
    letters: list[tuple[str, int]] = []
    i, n = 0, len(text)
    if text.strip() == "1":
        return Word()
    if not text.strip():
        return Word()
    while i < n:
        ch = text[i]
        if ch.isspace() or ch in "*·":
            i += 1
            continue
        start = i
        name, inv = _match_name(text, i, gens)
        if name is None:
            raise ParseError(f"unknown generator {ch!r}", i, text)
        i += len(name) if not inv else 1
        if inv:
            name_used = name
            sign = -1
        else:
            name_used = name
            sign = 1
        exp, i = _parse_exponent(text, i, start)
        letters.append((name_used, sign * exp))
    return Word(letters)


def _match_name(text: str, i: int, gens):
    ch = text[i]
    if gens is None:
        if ch.isascii() and ch.isalpha():
            if ch.isupper():
                return ch.lower(), True
            return ch, False
        return None, False
    best = None
    for g in gens:
        if text.startswith(g, i) and (best is None or len(g) > len(best)):
            best = g
    if best is not None:
        return best, False
    if ch.isupper() and ch.lower() in gens:
        return ch.lower(), True
    return None, False


def _parse_exponent(text: str, i: int, start: int) -> tuple[int, int]:
    n = len(text)
    if i < n and text[i] in _SUP_CHARS:
        j = i
        while j < n and text[j] in _SUP_CHARS:
            j += 1
        raw = text[i:j].translate(_SUPERSCRIPT)
        try:
            return int(raw), j
        except ValueError:
            raise ParseError(f"malformed exponent {text[i:j]!r}", i, text) from None
    if text.startswith("**", i):
        i += 2
    elif i < n and text[i] == "^":
        i += 1
    else:
        return 1, i
    j = i
    while j < n and text[j] == " ":
        j += 1
    close = None
    if j < n and text[j] in "({":
        close = ")" if text[j] == "(" else "}"
        j += 1
    k = j
    if k < n and text[k] in "+-−":
        k += 1
    d = k
    while d < n and text[d].isdigit():
        d += 1
    if d == k:
        raise ParseError("malformed exponent", j, text)
    value = int(text[j:d].replace("−", "-"))
    if close is not None:
        if d >= n or text[d] != close:
            raise ParseError(f"expected {close!r}", d, text)
        d += 1
    return value, d
