"""Word problem and factor membership in one-relator quotients of ``(A*B) x C``.

``A`` and ``B`` are free groups on (possibly infinite) letter sets, ``C`` is
free abelian and central.  The recursion follows the Magnus breakdown: the
relator's factor syllables generate ``A0`` and ``B0``; the quotient of
``(A0*B0) x C`` is an HNN extension of a quotient with shorter relator (or an
amalgam over a cyclic subgroup when the relator has one syllable of each
kind), and normal forms in those splittings are assembled from the answers of
the sub-quotients.

Engine-minted letters carry punctuation: ``a3.1`` is a basis letter of depth
3 and ``x@h`` stands for ``tau^h x tau^-h`` inside an HNN extension.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from . import groups
from .decision import (IN, NONTRIVIAL, NOT_IN, TRIVIAL, Decision, Fuel,
                       OutOfFuel, as_fuel)
from .membership import fold, free_member
from .words import (EMPTY, SyllableSeq, Word, cyclic_reduce, free_reduce,
                    inverse, mul, power, substitute)


class Undecided(Exception):
    """Raised inside the engine; surfaces as an Unknown verdict."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class ConjugateIntoFactor(ValueError):
    def __init__(self, side):
        self.side = side
        super().__init__(f"relator is conjugate into the {side}-factor")


# -- letters ---------------------------------------------------------------------

def split_level(x: str):
    base, sep, h = x.rpartition("@")
    if not sep:
        return x, None
    return base, int(h)


def lev(x: str, h: int) -> str:
    return f"{x}@{h}"


@dataclass(frozen=True)
class LetterSet:
    """Free generators of a factor: fixed names plus level ranges ``base@lo..hi``.

    A bound of ``None`` means unbounded.
    """
    fixed: frozenset = frozenset()
    ranges: tuple = ()  # ((base, lo, hi), ...)

    def __contains__(self, x) -> bool:
        if x in self.fixed:
            return True
        if not self.ranges:
            return False
        base, h = split_level(x)
        if h is None:
            return False
        for b, lo, hi in self.ranges:
            if b == base and (lo is None or lo <= h) and (hi is None or h <= hi):
                return True
        return False

    @classmethod
    def of(cls, names):
        return cls(frozenset(names))

    def describe(self) -> str:
        parts = sorted(self.fixed)
        for b, lo, hi in self.ranges:
            lo_s = "-inf" if lo is None else str(lo)
            hi_s = "inf" if hi is None else str(hi)
            parts.append(f"{b}@[{lo_s},{hi_s}]")
        return "{" + ", ".join(parts) + "}"


def strip_central(w: Word, central) -> tuple:
    """Split into the non-central word and the sorted central word."""
    if not central:
        return free_reduce(w), EMPTY
    cset = set(central)
    ab, c = [], {}
    for x, e in w:
        if x in cset:
            c[x] = c.get(x, 0) + e
        else:
            ab.append((x, e))
    return free_reduce(ab), tuple((x, c[x]) for x in central if c.get(x))


def exponent_vector(w: Word, letters) -> list:
    idx = {x: i for i, x in enumerate(letters)}
    v = [0] * len(letters)
    for x, e in w:
        if x in idx:
            v[idx[x]] += e
    return v


def nielsen_euclid(letters, values):
    """Nielsen moves turning ``letters`` into a basis ``(pivot, others)`` with
    ``values(pivot) = 1`` and ``values(other) = 0``.

    Returns ``(gens, pivot, expr)``: ``gens[i]`` is a word over ``letters``,
    ``pivot`` the index of the pivot, ``expr[x]`` the word over gen indices
    equal to the old letter ``x``.
    """
    gens = [((x, 1),) for x in letters]
    vals = list(values)
    expr = {x: ((i, 1),) for i, x in enumerate(letters)}
    while sum(1 for v in vals if v) > 1:
        nz = [i for i, v in enumerate(vals) if v]
        i = min(nz, key=lambda k: (abs(vals[k]), k))
        j = max((k for k in nz if k != i), key=lambda k: (abs(vals[k]), -k))
        q = vals[j] // vals[i]
        gens[j] = mul(gens[j], power(gens[i], -q))
        vals[j] -= q * vals[i]
        sub = {j: ((j, 1), (i, q))}
        expr = {x: substitute(w, sub) for x, w in expr.items()}
    nz = [i for i, v in enumerate(vals) if v]
    if len(nz) != 1 or abs(vals[nz[0]]) != 1:
        raise ValueError("values are not a primitive functional")
    p = nz[0]
    if vals[p] < 0:
        gens[p] = inverse(gens[p])
        expr = {x: substitute(w, {p: ((p, -1),)}) for x, w in expr.items()}
    return gens, p, expr


def orthogonal_functional(e) -> list:
    """A primitive integer vector killing ``e`` (needs ``len(e) >= 2``)."""
    n = len(e)
    for i, x in enumerate(e):
        if x == 0:
            return [int(k == i) for k in range(n)]
    g = gcd(e[0], e[1])
    return [e[1] // g, -e[0] // g] + [0] * (n - 2)


def levelize(w: Word, tau: str):
    """Rewrite a word as levelled letters ``x@h`` and return ``(word, final height)``."""
    out, h = [], 0
    for x, e in w:
        if x == tau:
            h += e
        else:
            out.append((lev(x, h), e))
    return free_reduce(out), h


def shift(w: Word, k: int, central=()) -> Word:
    if k == 0:
        return w
    out = []
    for x, e in w:
        if x in central:
            out.append((x, e))
            continue
        base, h = split_level(x)
        out.append((lev(base, h + k), e))
    return tuple(out)


def delevel(w: Word, tau: str, central=()) -> Word:
    """``x@h -> tau^h x tau^-h``."""
    parts = []
    for x, e in w:
        if x in central:
            parts.append(((x, e),))
            continue
        base, h = split_level(x)
        parts.append(free_reduce(((tau, h), (base, e), (tau, -h))))
    return mul(*parts)


# -- engine context -------------------------------------------------------------

@dataclass
class EngineContext:
    fuel: Fuel = field(default_factory=Fuel)
    strategy: str = "orthogonal"
    max_depth: int = 48
    memo: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)

    def quotient(self, A: LetterSet, B: LetterSet, central: tuple, relator: Word, depth: int,
                 parent_len=None) -> "Quotient":
        ab, c = strip_central(relator, central)
        core, _ = cyclic_reduce(ab)
        key = (A, B, central, core + c)
        q = self.memo.get(key)
        if q is None:
            if depth > self.max_depth:
                raise Undecided("recursion-depth")
            q = Quotient(self, A, B, central, core + c, depth)
            if parent_len is not None and q.length >= parent_len:
                q = _resolve_stall(self, q, parent_len)
            self.memo[key] = q
        return q

    def log(self, **entry):
        self.trace.append(entry)


def _resolve_stall(ctx, q: "Quotient", parent_len):
    """Shorten a child relator of unchanged length with an automorphism fixing ``A``.

    For the cyclic word ``h_1 s^e_1 ... h_L s^e_L`` with every ``e_i = +-1`` and
    two neighbouring equal signs, ``s -> s h^-1`` (or ``s -> h s``) merges two
    ``s``-syllables.  Other stalls keep the child as is: if the ``s``-exponents
    sum to zero it splits by the zero-sum case, which always shortens.
    """
    if q.degenerate or len(q.b_letters_used) != 1:
        return q
    sigma = next(iter(q.b_letters_used))
    syl = q.syllables
    L = len(syl) // 2
    es = [syl[2 * i + 1][1][0][1] if len(syl[2 * i + 1][1]) == 1 else 0 for i in range(L)]
    if any(abs(e) != 1 for e in es):
        return q
    for i in range(L):
        j = (i + 1) % L
        if es[i] == es[j]:
            h = syl[2 * j][1]
            img = mul(((sigma, 1),), inverse(h)) if es[i] > 0 else mul(h, ((sigma, 1),))
            phi = {sigma: img}
            rel = substitute(q.relator, phi)
            ctx.log(case="stall-automorphism", depth=q.depth, length=q.length)
            inner = ctx.quotient(q.A, q.B, q.central, rel, q.depth)
            if inner.length >= q.length:
                return q
            return _Automorphed(inner, phi)
    return q


class _Automorphed:
    """A quotient seen through an automorphism that fixes the ``A``-factor."""

    def __init__(self, inner, phi):
        self.inner, self.phi = inner, phi
        self.length = inner.length
        self.degenerate = inner.degenerate

    def member(self, u, side):
        if side != "A":
            raise Undecided("stall-automorphism-B-side")
        return self.inner.member(substitute(u, self.phi), "A")

    def word_problem(self, u):
        return self.inner.word_problem(substitute(u, self.phi))


# -- the frame: (A x C) *_(A0 x C) Q0 *_(B0 x C) (B x C) ---------------------------

class Quotient:
    def __init__(self, ctx: EngineContext, A: LetterSet, B: LetterSet, central: tuple, relator: Word,
                 depth: int):
        self.ctx, self.A, self.B, self.central, self.depth = ctx, A, B, tuple(central), depth
        ab, c = strip_central(relator, self.central)
        self.relator = mul(ab, c)
        self.c_rel = c
        syl = []
        for x, e in ab:
            side = self._side(x)
            if syl and syl[-1][0] == side:
                syl[-1] = (side, syl[-1][1] + ((x, e),))
            else:
                syl.append((side, ((x, e),)))
        if len(syl) >= 2 and syl[0][0] == syl[-1][0]:
            syl = [(syl[0][0], mul(syl[-1][1], syl[0][1]))] + syl[1:-1]
        if syl and syl[0][0] == "B":
            syl = syl[1:] + syl[:1]
        self.syllables = syl
        self.degenerate = len({s for s, _ in syl}) < 2
        self.length = len(syl) // 2 if not self.degenerate else 0
        self.b_letters_used = {x for s, w in syl if s == "B" for x, _ in w}
        self._memo: dict = {}
        self._core = None
        self.torsion = None
        if self.degenerate:
            core, _ = cyclic_reduce(ab)
            if not c and len(core) == 1:
                self.torsion = (core[0][0], abs(core[0][1]))
                ctx.log(case="cyclic-factor", depth=depth, letter=core[0][0], order=abs(core[0][1]))
            return
        a_syl = [w for s, w in syl if s == "A"]
        b_syl = [w for s, w in syl if s == "B"]
        self.fgA = fold(a_syl, ctx.fuel)
        self.fgB = fold(b_syl, ctx.fuel)
        self.basisA = self.fgA.basis()
        self.basisB = self.fgB.basis()
        self.lettersA = tuple(f"a{depth}.{j}" for j in range(len(self.basisA)))
        self.lettersB = tuple(f"b{depth}.{j}" for j in range(len(self.basisB)))
        self.backA = dict(zip(self.lettersA, self.basisA))
        self.backB = dict(zip(self.lettersB, self.basisB))
        parts = []
        for s, w in syl:
            parts.append(self._to_fresh(s, w))
        self.w0 = mul(*parts, c)
        ctx.log(case="split", depth=depth, length=self.length, A=A.describe(), B=B.describe(),
                rankA0=len(self.lettersA), rankB0=len(self.lettersB))

    def _side(self, x):
        if x in self.A:
            return "A"
        if x in self.B:
            return "B"
        raise Undecided(f"letter {x!r} lies in neither factor")

    def _to_fresh(self, side, w) -> Optional[Word]:
        fg, letters = (self.fgA, self.lettersA) if side == "A" else (self.fgB, self.lettersB)
        coords = fg.basis_coordinates(w)
        if coords is None:
            return None
        return tuple((letters[j], e) for j, e in coords)

    def _from_fresh(self, side, w) -> Word:
        return substitute(w, self.backA if side == "A" else self.backB)

    @property
    def core(self):
        if self._core is None:
            if self.length == 1:
                self._core = BaseCore(self)
            else:
                self._core = Core(self)
        return self._core

    # membership by reduction in the tree of groups X - Q - Y
    def member(self, u: Word, side: str) -> Optional[Word]:
        key = (u, side)
        if key in self._memo:
            return self._memo[key]
        self.ctx.fuel.spend(1 + len(u))
        ab, c = strip_central(u, self.central)
        if self.degenerate and self.torsion is None:
            raise Undecided("relator-in-factor")
        if not ab:
            res = c
        elif self.torsion is not None:
            res = self._cyclic_member(ab, c, side)
        else:
            res = self._reduce(ab, c, side)
        self._memo[key] = res
        return res

    def _cyclic_member(self, ab, c, side):
        # the relator is y^k: a free product of <y | y^k> with free letters
        y, k = self.torsion
        out: list = []
        for x, e in ab:
            if out and out[-1][0] == x:
                e += out.pop()[1]
            if x == y:
                e %= k
                if 2 * e > k:
                    e -= k
            if e:
                out.append((x, e))
        if any(self._side(x) != side for x, _ in out):
            return None
        return mul(tuple(out), c)

    def _reduce(self, ab, c, side):
        target = "X" if side == "A" else "Y"
        creps = [c]
        stack = [[target, EMPTY]]
        pieces = []
        for x, e in ab:
            s = "X" if self._side(x) == "A" else "Y"
            if pieces and pieces[-1][0] == s:
                pieces[-1][1] = mul(pieces[-1][1], ((x, e),))
            else:
                pieces.append([s, ((x, e),)])
        for s, w in pieces:
            fresh = self._to_fresh("A" if s == "X" else "B", w)
            if fresh is not None:
                self._push(stack, "Q", fresh, creps)
            else:
                self._push(stack, s, w, creps)
        self._push(stack, target, EMPTY, creps)
        if len(stack) != 1:
            return None
        return mul(stack[0][1], *creps)

    def _push(self, stack, v, w, creps):
        while True:
            if not stack:
                stack.append([v, w])
                return
            if stack[-1][0] == v:
                stack[-1][1] = mul(stack[-1][1], w)
                return
            if v != "Q" and stack[-1][0] != "Q":
                # X and Y are joined through a trivial Q piece
                self._push(stack, "Q", EMPTY, creps)
                continue
            if len(stack) >= 2 and stack[-2][0] == v:
                mid_v, mid_w = stack[-1]
                conv = self._edge(mid_v, mid_w, v, creps)
                if conv is not None:
                    stack.pop()
                    prev = stack.pop()
                    w = mul(prev[1], conv, w)
                    continue
            stack.append([v, w])
            return

    def _edge(self, mid_v, mid_w, nb_v, creps):
        """Rewrite a piece into the neighbouring vertex group through the edge group."""
        if mid_v == "Q":
            side = "A" if nb_v == "X" else "B"
            if not mid_w:
                return EMPTY
            rep = self.core.member(mid_w, side)
            if rep is None:
                return None
            ab, c = strip_central(rep, self.central)
            creps.append(c)
            return self._from_fresh(side, ab)
        return self._to_fresh("A" if mid_v == "X" else "B", mid_w)

    def word_problem(self, u: Word) -> bool:
        rep = self.member(u, "A")
        if rep is None:
            return False
        return not rep


# -- l = 1: Q0 = <alpha> x C ----------------------------------------------------------

class BaseCore:
    """Relator ``alpha^p beta^q c`` with ``p, q = +-1``, so ``beta = (alpha^-p c^-1)^q``."""

    def __init__(self, frame: Quotient):
        self.frame = frame
        self.central = frame.central
        ab, c = strip_central(frame.w0, self.central)
        (alpha, p), (beta, q) = ab
        self.alpha, self.beta, self.p, self.q = alpha, beta, p, q
        self.c = c
        # beta = alpha^(-p q) c^(-q)
        self.beta_alpha = -p * q
        self.beta_c = {x: -q * e for x, e in c}
        frame.ctx.log(case="base-amalgam", depth=frame.depth, relator=_fmt(frame.w0))

    def _abelian(self, u):
        k = 0
        cv = {x: 0 for x in self.central}
        for x, e in u:
            if x == self.alpha:
                k += e
            elif x == self.beta:
                k += e * self.beta_alpha
                for y, f in self.beta_c.items():
                    cv[y] += e * f
            else:
                cv[x] += e
        return k, cv

    def _cword(self, cv):
        return tuple((x, cv[x]) for x in self.central if cv.get(x))

    def member(self, u, side):
        k, cv = self._abelian(u)
        if side == "A":
            return mul(((self.alpha, k),), self._cword(cv))
        j = k * self.beta_alpha  # beta_alpha = +-1 is its own inverse
        for y, f in self.beta_c.items():
            cv[y] -= j * f
        return mul(((self.beta, j),), self._cword(cv))


# -- l >= 2 -----------------------------------------------------------------------------

class Core:
    def __init__(self, frame: Quotient):
        self.frame = frame
        self.ctx = frame.ctx
        self.depth = frame.depth
        self.central = frame.central
        self.w0 = frame.w0
        self.l = frame.length
        self.letters = {"A": frame.lettersA, "B": frame.lettersB}
        ab, _ = strip_central(self.w0, self.central)
        self.evec = {s: exponent_vector(ab, self.letters[s]) for s in "AB"}
        self.phi = {s: self._functional(s) for s in "AB"}
        self.sums = {s: sum(a * b for a, b in zip(self.phi[s], self.evec[s])) for s in "AB"}
        self._handlers: dict = {}

    def _functional(self, side):
        n = len(self.letters[side])
        if self.ctx.strategy == "orthogonal" and n >= 2:
            return orthogonal_functional(self.evec[side])
        return [1] + [0] * (n - 1)

    def _case1(self, pivot_side):
        key = ("case1", pivot_side)
        if key not in self._handlers:
            self._handlers[key] = Case1(self, pivot_side)
        return self._handlers[key]

    def _handler(self, side):
        other = "B" if side == "A" else "A"
        if self.sums[side] == 0:
            return self._case1(side).member_pivot_side
        if self.sums[other] == 0:
            return self._case1(other).member_other_side
        key = ("case2", side)
        if key not in self._handlers:
            if len(self.letters[other]) == 1:
                self._handlers[key] = Case21(self, side)
            else:
                self._handlers[key] = Case22(self, side)
        return self._handlers[key].member

    def member(self, u, side):
        return self._handler(side)(u)

    def word_problem(self, u):
        for s in "AB":
            if self.sums[s] == 0:
                return self._case1(s).word_problem(u)
        rep = self.member(u, "A")
        return rep is not None and not rep


def _fmt(w):
    from .words import format_word
    return format_word(w)


class _Basis:
    """Nielsen basis ``(pivot, rest)`` of a free factor adapted to a functional."""

    def __init__(self, letters, values, pivot_name, rest_prefix):
        gens, p, expr = nielsen_euclid(letters, values)
        names = []
        k = 0
        for i in range(len(gens)):
            if i == p:
                names.append(pivot_name)
            else:
                names.append(f"{rest_prefix}{k}")
                k += 1
        self.pivot = pivot_name
        self.rest = tuple(n for i, n in enumerate(names) if i != p)
        self.to_new = {x: tuple((names[i], e) for i, e in w) for x, w in expr.items()}
        self.to_old = {names[i]: g for i, g in enumerate(gens)}


class HNN:
    """``< Q_base, tau | tau E_low tau^-1 = E_high >`` for a relator of height 0.

    ``absorbed`` letters occur at every level of both edge groups; ``windowed``
    letters are restricted to levels ``[mu, nu-1]`` and ``[mu+1, nu]``.
    """

    def __init__(self, ctx, tau, absorbed, windowed, central, relator, parent_len, depth, label):
        self.ctx, self.tau, self.depth = ctx, tau, depth
        self.Y, self.X = frozenset(absorbed), frozenset(windowed)
        self.central = tuple(central)
        self.parent_len = parent_len
        ab, c = strip_central(relator, self.central)
        lw, h = levelize(ab, tau)
        if h != 0:
            raise AssertionError("HNN relator must have stable-letter exponent sum zero")
        levels = [split_level(x)[1] for x, _ in lw if split_level(x)[0] in self.X]
        if not levels:
            raise Undecided("relator-in-factor")
        mu, nu = min(levels), max(levels)
        k = -mu if mu > 0 else (-nu if nu < 0 else 0)
        self.shift_applied = k
        self.rel = mul(shift(lw, k), c)
        self.mu, self.nu = mu + k, nu + k
        self.levels = [x + k for x in levels]
        self._split = {}
        ctx.log(case=label, depth=depth, stable=tau, mu=self.mu, nu=self.nu,
                levels=self.levels, relator=_fmt(self.rel))

    def split(self, which):
        if which not in self._split:
            ys = tuple((y, None, None) for y in sorted(self.Y))
            if which == 1:
                lo, hi, b = self.mu, self.nu - 1, self.nu
            else:
                lo, hi, b = self.mu + 1, self.nu, self.mu
            xs = tuple((x, lo, hi) for x in sorted(self.X)) if lo <= hi else ()
            A = LetterSet(frozenset(), ys + xs)
            B = LetterSet(frozenset(), tuple((x, b, b) for x in sorted(self.X)))
            self._split[which] = self.ctx.quotient(A, B, self.central, self.rel, self.depth + 1,
                                                   parent_len=self.parent_len)
        return self._split[which]

    def height(self, u):
        return sum(e for x, e in u if x == self.tau)

    def britton(self, u):
        stack = [EMPTY]
        for x, e in u:
            if x == self.tau:
                s = 1 if e > 0 else -1
                for _ in range(abs(e)):
                    self._push_tau(stack, s)
            else:
                y = x if x in self.central else lev(x, 0)
                stack[-1] = mul(stack[-1], ((y, e),))
        return stack

    def _push_tau(self, stack, s):
        self.ctx.fuel.spend(1)
        if len(stack) >= 3 and stack[-2] == -s:
            mid = stack[-1]
            if stack[-2] == 1:
                rep = self.split(1).member(mid, "A")
                new = None if rep is None else shift(rep, 1, self.central)
            else:
                rep = self.split(2).member(mid, "A")
                new = None if rep is None else shift(rep, -1, self.central)
            if new is not None:
                stack.pop()
                stack.pop()
                stack[-1] = mul(stack[-1], new)
                return
        stack.append(s)
        stack.append(EMPTY)

    def word_problem(self, u) -> bool:
        if self.height(u) != 0:
            return False
        seq = self.britton(u)
        if len(seq) > 1:
            return False
        return self.split(1).word_problem(seq[0])

    def member_absorbed(self, v) -> Optional[Word]:
        """For ``v`` of height 0: the word over ``tau`` and absorbed letters equal to it."""
        seq = self.britton(v)
        if len(seq) > 1:
            return None
        rep = self.split(1).member(seq[0], "A")
        if rep is None:
            return None
        ab, c = strip_central(rep, self.central)
        if any(split_level(x)[0] not in self.Y for x, _ in ab):
            return None
        return mul(delevel(ab, self.tau), c)

    def member_level0(self, v) -> Optional[Word]:
        """Membership in the windowed letters at level 0."""
        if self.height(v) != 0:
            return None
        seq = self.britton(v)
        if len(seq) > 1:
            return None
        if self.nu - 1 >= 0:
            rep = self.split(1).member(seq[0], "A")
            if rep is None:
                return None
            ab, c = strip_central(rep, self.central)
            for x, _ in ab:
                base, h = split_level(x)
                if base not in self.X or h != 0:
                    return None
        else:
            rep = self.split(1).member(seq[0], "B")
            if rep is None:
                return None
            ab, c = strip_central(rep, self.central)
        return mul(tuple((split_level(x)[0], e) for x, e in ab), c)


class Case1:
    """Zero exponent sum on the pivot side: HNN over the pivot letter."""

    def __init__(self, core: Core, pivot_side):
        self.core = core
        d = core.depth
        other = "B" if pivot_side == "A" else "A"
        self.side = pivot_side
        self.basis = _Basis(core.letters[pivot_side], core.phi[pivot_side], f"t{d}{pivot_side}",
                            f"y{d}{pivot_side}.")
        rel = substitute(core.w0, self.basis.to_new)
        self.hnn = HNN(core.ctx, self.basis.pivot, self.basis.rest, core.letters[other], core.central,
                       rel, core.l, d, "hnn-zero-sum")

    def member_pivot_side(self, u):
        v = substitute(u, self.basis.to_new)
        k = self.hnn.height(v)
        rep = self.hnn.member_absorbed(mul(v, ((self.basis.pivot, -k),)))
        if rep is None:
            return None
        return substitute(mul(rep, ((self.basis.pivot, k),)), self.basis.to_old)

    def member_other_side(self, u):
        return self.hnn.member_level0(substitute(u, self.basis.to_new))

    def word_problem(self, u):
        return self.hnn.word_problem(substitute(u, self.basis.to_new))


class Case21:
    """Nonzero sums, other side cyclic: adjoin a root of the pivot and shear."""

    def __init__(self, core: Core, side):
        self.core = core
        d = core.depth
        other = "B" if side == "A" else "A"
        self.basis = _Basis(core.letters[side], core.phi[side], f"t{d}{side}", f"y{d}{side}.")
        (s,) = core.letters[other]
        self.s = s
        rel = substitute(core.w0, self.basis.to_new)
        ab, _ = strip_central(rel, core.central)
        m = sum(e for x, e in ab if x == self.basis.pivot)
        n = sum(e for x, e in ab if x == s)
        if m == 0 or n == 0:
            raise AssertionError("root adjunction needs nonzero exponent sums on both sides")
        self.sign = 1 if n > 0 else -1
        self.m, self.n = m, abs(n)
        self.alpha = f"r{d}{side}"
        t = self.basis.pivot
        self.f = {t: ((self.alpha, self.n),),
                  s: power(((s, 1), (self.alpha, -m)), self.sign)}
        frel = substitute(rel, self.f)
        self.hnn = HNN(core.ctx, self.alpha, self.basis.rest, (s,), core.central, frel, core.l, d,
                       "hnn-root")
        self.hnn.block_exponents = [e for x, e in ab if x == s]
        # the copy of A inside the root extension: <alpha^n, rest>
        self.sub_gens = [((self.alpha, self.n),)] + [((y, 1),) for y in self.basis.rest]
        self.sub_names = [t] + list(self.basis.rest)
        self.fg = fold(self.sub_gens)

    def member(self, u):
        v = substitute(substitute(u, self.basis.to_new), self.f)
        k = self.hnn.height(v)
        rep = self.hnn.member_absorbed(mul(v, ((self.alpha, -k),)))
        if rep is None:
            return None
        ab, c = strip_central(mul(rep, ((self.alpha, k),)), self.core.central)
        wit = free_member(self.fg, ab)
        if wit is None:
            return None
        back = substitute(wit.word, {i: ((nm, 1),) for i, nm in enumerate(self.sub_names)})
        return mul(substitute(back, self.basis.to_old), c)


class Case22:
    """Nonzero sums, other side of rank >= 2: embed into ``(A*B*<z>) x C`` and split over ``u``."""

    def __init__(self, core: Core, side):
        self.core = core
        d = core.depth
        other = "B" if side == "A" else "A"
        self.bS = _Basis(core.letters[side], core.phi[side], f"t{d}{side}", f"y{d}{side}.")
        self.bO = _Basis(core.letters[other], core.phi[other], f"s{d}{side}", f"x{d}{side}.")
        self.to_new = {**self.bS.to_new, **self.bO.to_new}
        rel = substitute(core.w0, self.to_new)
        ab, _ = strip_central(rel, core.central)
        t, s = self.bS.pivot, self.bO.pivot
        m = sum(e for x, e in ab if x == t)
        n = sum(e for x, e in ab if x == s)
        if m == 0 or n == 0:
            raise AssertionError("the shear case needs nonzero exponent sums on both sides")
        g = gcd(m, n)
        self.m, self.n = m, n
        self.psi_t, self.psi_s = n // g, -m // g
        gens, p, expr = nielsen_euclid([t, s], [self.psi_t, self.psi_s])
        self.u, self.r, self.z = f"u{d}{side}", f"v{d}{side}", f"z{d}{side}"
        names = [self.u if i == p else self.r for i in range(2)]
        t_img = tuple((names[i], e) for i, e in expr[t])
        s_img = tuple((names[i], e) for i, e in expr[s])
        self.back_ur = {names[i]: gens[i] for i in range(2)}
        zz = ((self.z, 1),)
        self.iota = {t: t_img, s: mul(inverse(zz), s_img, zz)}
        for x in self.bO.rest:
            self.iota[x] = mul(inverse(zz), ((x, 1),), zz)
        self.pivot, self.rest = t, self.bS.rest
        irel = substitute(rel, self.iota)
        absorbed = (self.r,) + tuple(self.bS.rest) + tuple(self.bO.rest)
        self.hnn = HNN(core.ctx, self.u, absorbed, (self.z,), core.central, irel, core.l, d,
                       "hnn-shear")
        self.a_letters = {t, *self.bS.rest}
        self.t_formula = shear_t_sequence(m, n, *_block_sums(ab, t, s, core.central, set(self.a_letters)))

    def psi(self, w):
        return sum(self.psi_t * e for x, e in w if x == self.pivot) + \
            sum(self.psi_s * e for x, e in w if x == self.bO.pivot)

    def member(self, u):
        v = substitute(u, self.to_new)
        k = self.psi(v)
        if k % self.psi_t:
            return None
        a = ((self.pivot, k // self.psi_t),)
        w = substitute(mul(v, inverse(a)), self.iota)
        rep = self.hnn.member_absorbed(w)
        if rep is None:
            return None
        ab, c = strip_central(rep, self.core.central)
        plain = substitute(ab, self.back_ur)
        if any(x not in self.a_letters for x, _ in plain):
            return None
        return mul(substitute(mul(plain, a), self.bS.to_old), c)


def _block_sums(ab, t, s, central, a_letters):
    """Per-syllable pivot exponent sums ``m_i`` and ``n_i`` of a cyclically ordered relator."""
    blocks = []
    for x, e in ab:
        side = "A" if x in a_letters else "B"
        if blocks and blocks[-1][0] == side:
            blocks[-1][1].append((x, e))
        else:
            blocks.append((side, [(x, e)]))
    ms = [sum(e for x, e in w if x == t) for sd, w in blocks if sd == "A"]
    ns = [sum(e for x, e in w if x == s) for sd, w in blocks if sd == "B"]
    return ms, ns


def shear_t_sequence(m, n, ms, ns) -> list:
    """``t_{2j-1} = -n sum_{i<=j} m_i + m sum_{i<j} n_i``, ``t_{2j} = -n sum_{i<=j} m_i + m sum_{i<=j} n_i``."""
    out = []
    sm = sn = 0
    for mi, ni in zip(ms, ns):
        sm += mi
        out.append(-n * sm + m * sn)
        sn += ni
        out.append(-n * sm + m * sn)
    return out


def root_levels(m, n, ms, ns) -> list:
    """Levels ``k_{i,j}`` of the ``b``-letters after the shear ``b -> b alpha^-m``.

    ``ms`` are the scaled pivot sums of the ``a``-syllables and ``ns`` the
    exponents of ``b``; inside block ``i`` the levels step by ``m``.
    """
    out = []
    height = 0
    for mi, ni in zip(ms, ns):
        height += mi
        block = []
        if ni > 0:
            block = [height - (j - 1) * m for j in range(1, ni + 1)]
        else:
            block = [height + j * m for j in range(1, -ni + 1)]
        out.append(block)
        height -= ni * m
    return out


# -- public operations ---------------------------------------------------------------------

class UnsupportedFactor(TypeError):
    pass


def _free_letters(g) -> tuple:
    """Letters of a free group expression, or raise ``UnsupportedFactor``."""
    if g is None:
        return ()
    if isinstance(g, (tuple, list, frozenset, set)):
        return tuple(g)
    if isinstance(g, groups.FreeAbelian):
        if g.rank > 1:
            raise UnsupportedFactor("free abelian factor of rank > 1")
        return g.gens
    if isinstance(g, groups.FreeProduct):
        return _free_letters(g.left) + _free_letters(g.right)
    if isinstance(g, groups.GraphProduct):
        if g.graph.edges or any(a.rank != 1 for _, a in g.vertex_groups):
            raise UnsupportedFactor("factor is not a free group")
        return groups.all_gens(g)
    raise UnsupportedFactor(f"{type(g).__name__} factor is not supported")


@dataclass
class MagnusInstance:
    A: tuple
    B: tuple
    C: tuple
    relator: Word
    syllables: SyllableSeq
    length: int
    ctx: EngineContext = field(repr=False, default=None)

    @property
    def quotient(self) -> Quotient:
        return self.ctx.quotient(LetterSet.of(self.A), LetterSet.of(self.B), self.C, self.relator, 0)


def normalize_instance(A, B, C, w: Word, fuel=None, strategy="orthogonal"):
    """Build an instance; raise ``ConjugateIntoFactor`` when the relator lies in one factor."""
    a, b, c = _free_letters(A), _free_letters(B), _free_letters(C)
    if set(a) & set(b) or (set(a) | set(b)) & set(c):
        raise ValueError("factor alphabets overlap")
    known = set(a) | set(b) | set(c)
    for x, _ in w:
        if x not in known:
            raise groups.ForeignGenerator(f"generator {x!r} is not in the group")
    ab, cw = strip_central(w, c)
    if not ab and not cw:
        raise ValueError("relator is trivial")
    core, _ = cyclic_reduce(ab)
    sides = {("A" if x in set(a) else "B") for x, _ in core}
    if len(sides) < 2:
        raise ConjugateIntoFactor("A" if sides == {"A"} else "B")
    part = {x: "A" for x in a}
    part.update({x: "B" for x in b})
    part.update({x: "C" for x in c})
    ctx = EngineContext(fuel=as_fuel(fuel), strategy=strategy)
    q = ctx.quotient(LetterSet.of(a), LetterSet.of(b), c, mul(core, cw), 0)
    seq = groups_syllables(q, part)
    return MagnusInstance(a, b, c, mul(core, cw), seq, q.length, ctx)


def groups_syllables(q: Quotient, part) -> SyllableSeq:
    from .words import syllable_split
    return syllable_split(q.relator, part)


def reduce_to_generated(inst: MagnusInstance) -> dict:
    """The generated subgroups ``A0``, ``B0`` (free bases) and the relator over them."""
    q = inst.quotient
    return {"A0": list(q.basisA), "B0": list(q.basisB), "letters_A0": q.lettersA,
            "letters_B0": q.lettersB, "relator": q.w0,
            "identity_frame": (len(q.basisA) == len(inst.A) and len(q.basisB) == len(inst.B))}


def _decide(inst, fn, yes, no):
    ctx = inst.ctx
    start = 0  # the whole decomposition tree built so far, root first
    try:
        res = fn()
    except Undecided as exc:
        return Decision.unknown(exc.reason, ctx.trace[start:])
    except OutOfFuel:
        return Decision.unknown("fuel-exhausted", ctx.trace[start:])
    except RecursionError:
        return Decision.unknown("recursion-depth", ctx.trace[start:])
    if isinstance(res, tuple) and len(res) == 2 and res[0] == "in":
        return Decision(yes, witness=res[1], trace=ctx.trace[start:])
    return Decision(yes if res else no, trace=ctx.trace[start:])


def quotient_word_problem(inst: MagnusInstance, u: Word) -> Decision:
    q = inst.quotient
    return _decide(inst, lambda: q.word_problem(free_reduce(u)), TRIVIAL, NONTRIVIAL)


def quotient_member_factor(inst: MagnusInstance, u: Word, which: str) -> Decision:
    """``which`` is ``"A"`` or ``"B"``; the witness is a word of that factor (times ``C``)."""
    side = which[0].upper()
    q = inst.quotient

    def run():
        rep = q.member(free_reduce(u), side)
        return ("in", rep) if rep is not None else False

    return _decide(inst, run, IN, NOT_IN)


def adjoin_root(A, a: Word, n: int, root: str = "alpha") -> groups.RootAdjunction:
    """The root extension ``A *_(a = root^n) <root>`` as a group expression."""
    if n < 2:
        raise ValueError("root degree must be at least 2")
    return groups.RootAdjunction(A, free_reduce(a), n, root)
