"""Words in run-length encoding and the basic free-group operations on them.

A word is a tuple of ``(generator, exponent)`` pairs.  Generators are strings;
user-facing names match ``[A-Za-z][A-Za-z0-9_]*`` while names minted by the
engine contain punctuation (``@``, ``.``, ``#``) so they never collide.
Functions here accept unreduced words but always return freely reduced ones.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

Word = tuple  # tuple[tuple[str, int], ...]

EMPTY: Word = ()

_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


class WordParseError(ValueError):
    def __init__(self, message, column=None):
        self.column = column
        where = f" (column {column})" if column is not None else ""
        super().__init__(message + where)


def parse_word(text: str) -> Word:
    """Parse ``x1 y^-3 x1^2``; the literal ``1`` or an empty string is the identity."""
    letters = []
    pos = 0
    for token in text.split():
        col = text.index(token, pos) + 1
        pos = col - 1 + len(token)
        if token == "1":
            continue
        m = _TOKEN.match(token)
        if not m:
            raise WordParseError(f"malformed word token {token!r}", col)
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if exp == 0:
            raise WordParseError(f"zero exponent in token {token!r}", col)
        letters.append((m.group(1), exp))
    return free_reduce(letters)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in w)


def letter(g: str, e: int = 1) -> Word:
    return ((g, e),) if e else EMPTY


def free_reduce(letters: Iterable) -> Word:
    out: list = []
    for g, e in letters:
        if not e:
            continue
        if out and out[-1][0] == g:
            e += out[-1][1]
            out.pop()
            if e:
                out.append((g, e))
        else:
            out.append((g, e))
    return tuple(out)


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def mul(*words: Word) -> Word:
    if len(words) == 1:
        return free_reduce(words[0])
    out: list = []
    for w in words:
        for g, e in w:
            if out and out[-1][0] == g:
                e += out[-1][1]
                out.pop()
                if e:
                    out.append((g, e))
            else:
                out.append((g, e))
    return tuple(out)


def power(w: Word, k: int) -> Word:
    if k == 0 or not w:
        return EMPTY
    base = w if k > 0 else inverse(w)
    return mul(*([base] * abs(k)))


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x y x^-1 y^-1``."""
    return mul(x, y, inverse(x), inverse(y))


def conjugate(w: Word, t: Word) -> Word:
    """``t^-1 w t``."""
    return mul(inverse(t), w, t)


def length(w: Word) -> int:
    return sum(abs(e) for _, e in w)


def generators(w: Word) -> set:
    return {g for g, _ in w}


def exponent_sum(w: Word, g: str) -> int:
    return sum(e for h, e in w if h == g)


def substitute(w: Word, images: Mapping[str, Word]) -> Word:
    """Apply the homomorphism sending each mapped generator to its image."""
    parts = []
    for g, e in w:
        img = images.get(g)
        if img is None:
            parts.append(((g, e),))
        else:
            parts.append(power(img, e))
    return mul(*parts)


def letters_of(w: Word) -> list:
    """Expand to single letters ``(g, +-1)``."""
    out = []
    for g, e in w:
        s = 1 if e > 0 else -1
        out.extend([(g, s)] * abs(e))
    return out


def cyclic_reduce(w: Word) -> tuple:
    """Return ``(core, conjugator)`` with ``w = conjugator * core * conjugator^-1``.

    The core is cyclically reduced; among its rotations at syllable boundaries the
    lexicographically least one is chosen.
    """
    core = list(free_reduce(w))
    conj: list = []
    while len(core) >= 2 and core[0][0] == core[-1][0] and core[0][1] * core[-1][1] < 0:
        g, e_first = core[0]
        e_last = core[-1][1]
        s = 1 if e_first > 0 else -1
        k = min(abs(e_first), abs(e_last))
        conj.append((g, s * k))
        middle = core[1:-1]
        if e_first - s * k:
            middle.insert(0, (g, e_first - s * k))
        if e_last + s * k:
            middle.append((g, e_last + s * k))
        core = list(free_reduce(middle))
    conjugator = free_reduce(conj)
    core_t = tuple(core)
    if len(core_t) >= 2 and core_t[0][0] == core_t[-1][0]:
        # equal signs at both ends: fold the front run onto the back one
        front = core_t[:1]
        core_t = core_t[1:-1] + ((core_t[0][0], core_t[0][1] + core_t[-1][1]),)
        conjugator = mul(conjugator, front)
    if not core_t:
        return EMPTY, EMPTY
    best_i, best = 0, core_t
    for i in range(1, len(core_t)):
        rot = core_t[i:] + core_t[:i]
        if rot < best:
            best_i, best = i, rot
    return best, mul(conjugator, core_t[:best_i])


def is_cyclically_reduced(w: Word) -> bool:
    w = free_reduce(w)
    if len(w) < 2:
        return True
    return not (w[0][0] == w[-1][0] and w[0][1] * w[-1][1] < 0)


@dataclass(frozen=True)
class SyllableSeq:
    syllables: tuple = ()
    trailing: Word = EMPTY

    @property
    def length(self) -> int:
        return len(self.syllables)

    def tags(self) -> tuple:
        return tuple(t for t, _ in self.syllables)

    def join(self) -> Word:
        return mul(*[w for _, w in self.syllables], self.trailing)


def syllable_split(w: Word, partition: Mapping[str, str], central: str = "C") -> SyllableSeq:
    """Group maximal same-tag runs; letters tagged ``central`` move to ``trailing``."""
    syl: list = []
    trail: list = []
    for g, e in free_reduce(w):
        try:
            tag = partition[g]
        except KeyError:
            raise KeyError(f"generator {g!r} has no factor tag") from None
        if tag == central:
            trail.append((g, e))
            continue
        if syl and syl[-1][0] == tag:
            syl[-1][1].append((g, e))
        else:
            syl.append((tag, [(g, e)]))
    out = []
    for tag, letters_ in syl:
        red = free_reduce(letters_)
        if not red:
            continue
        if out and out[-1][0] == tag:
            merged = mul(out[-1][1], red)
            out.pop()
            if merged:
                out.append((tag, merged))
        else:
            out.append((tag, red))
    return SyllableSeq(tuple(out), free_reduce(trail))
