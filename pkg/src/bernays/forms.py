"""Positive definite binary quadratic forms: reduction, class enumeration, genera."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import Discriminant, factor, is_discriminant, kronecker
from .errors import BudgetExceededError, InvalidDiscriminantError, OutOfRangeError

REPRESENT_BUDGET = 10**7
RESIDUE_ORACLE_LIMIT = 2000


@dataclass(frozen=True, order=True)
class QuadraticForm:
    """The form a*X^2 + b*X*Y + c*Y^2, written [a,b,c]."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    @property
    def positive_definite(self) -> bool:
        return self.a > 0 and self.discriminant < 0

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not abs(b) <= a <= c:
            return False
        return b >= 0 or (abs(b) != a and a != c)

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __str__(self) -> str:
        return f"[{self.a},{self.b},{self.c}]"

    @classmethod
    def parse(cls, text: str) -> "QuadraticForm":
        a, b, c = (int(t) for t in text.strip("[] ").split(","))
        return cls(a, b, c)


def _check_discriminant(D: int) -> None:
    if D >= 0 or not is_discriminant(D):
        raise InvalidDiscriminantError(f"{D} is not a negative discriminant")


def principal_form(D: int) -> QuadraticForm:
    _check_discriminant(D)
    if D % 4 == 0:
        return QuadraticForm(1, 0, -D // 4)
    return QuadraticForm(1, 1, (1 - D) // 4)


def reduce(f: QuadraticForm) -> QuadraticForm:
    """The unique reduced form properly equivalent to f."""
    if not f.positive_definite:
        raise ValueError(f"{f} is not positive definite")
    if not f.primitive:
        raise ValueError(f"{f} is not primitive")
    a, b, c = f
    while True:
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            b, c = b + 2 * a * k, a * k * k + b * k + c
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if a == c and b < 0:
        b = -b
    return QuadraticForm(a, b, c)


@lru_cache(maxsize=256)
def _reduced_forms(D: int) -> tuple[QuadraticForm, ...]:
    A = math.isqrt(-D // 3)
    forms = []
    for b in range(D % 2, A + 1, 2):
        N = (b * b - D) // 4
        lo = max(b, 1)
        hi = min(A, math.isqrt(N))
        if hi < lo:
            continue
        cand = np.arange(lo, hi + 1, dtype=np.int64)
        for a in cand[N % cand == 0].tolist():
            c = N // a
            if math.gcd(a, b, c) != 1:
                continue
            forms.append(QuadraticForm(a, b, c))
            if b != 0 and b != a and a != c:
                forms.append(QuadraticForm(a, -b, c))
    return tuple(sorted(forms))


def enumerate_reduced(D: int) -> list[QuadraticForm]:
    """All primitive reduced forms of discriminant D, sorted by (a, b, c).

    Scans b >= 0 of the right parity and the divisors a of (b^2 - D)/4 in
    [b, sqrt(|D|/3)], one vectorized divisibility test per b.
    """
    _check_discriminant(D)
    return list(_reduced_forms(D))


def class_number(D: int) -> int:
    _check_discriminant(D)
    return len(_reduced_forms(D))


def represents(f: QuadraticForm, m: int, budget: int = REPRESENT_BUDGET):
    """A pair (x, y) with f(x, y) = m, or None if m is not represented."""
    if m < 1:
        raise ValueError("m must be positive")
    if m > budget:
        raise BudgetExceededError(f"m = {m} exceeds the enumeration budget {budget}")
    a, b, c = f
    D = f.discriminant
    ymax = math.isqrt(4 * a * m // -D)
    for y in _zigzag(ymax):
        disc = D * y * y + 4 * a * m
        if disc < 0:
            continue
        s = math.isqrt(disc)
        if s * s != disc:
            continue
        for num in (-b * y + s, -b * y - s):
            if num % (2 * a) == 0:
                return num // (2 * a), y
    return None


def _zigzag(n: int):
    yield 0
    for y in range(1, n + 1):
        yield y
        yield -y


@dataclass(frozen=True)
class GenusPartition:
    discriminant: Discriminant
    classes: tuple[QuadraticForm, ...]
    genera: tuple[tuple[int, ...], ...]
    character_labels: tuple[str, ...]

    def genus_forms(self, i: int) -> list[QuadraticForm]:
        return [self.classes[j] for j in self.genera[i]]

    def genus_of(self, f: QuadraticForm) -> int:
        j = self.classes.index(reduce(f))
        return next(i for i, g in enumerate(self.genera) if j in g)

    def as_sets(self) -> list[frozenset[QuadraticForm]]:
        return [frozenset(self.genus_forms(i)) for i in range(len(self.genera))]


def _two_adic_characters(D: int) -> list[str]:
    if D % 4 == 1:
        return []
    n = -D // 4
    if n % 4 == 1:
        return ["delta"]
    if n % 8 == 2:
        return ["delta*epsilon"]
    if n % 8 == 6:
        return ["epsilon"]
    raise InvalidDiscriminantError(f"{D} has no fundamental 2-part")


def _eval_two_adic(label: str, r: int) -> int:
    delta = 1 if r % 4 == 1 else -1
    epsilon = 1 if r % 8 in (1, 7) else -1
    return {"delta": delta, "epsilon": epsilon, "delta*epsilon": delta * epsilon}[label]


def _coprime_value(f: QuadraticForm, modulus: int) -> int:
    for s in range(1, 1000):
        for x in range(-s, s + 1):
            for y in (s - abs(x), abs(x) - s):
                r = f(x, y)
                if math.gcd(r, modulus) == 1:
                    return r
    raise ArithmeticError(f"no small value of {f} coprime to {modulus}")


def _group(disc: Discriminant, classes, keys, labels) -> GenusPartition:
    order: dict = {}
    for j, key in enumerate(keys):
        order.setdefault(key, []).append(j)
    genera = tuple(tuple(v) for v in order.values())
    return GenusPartition(disc, tuple(classes), genera, tuple(labels))


def genus_partition(D: int) -> GenusPartition:
    """Split the classes of a fundamental D by their assigned genus characters."""
    disc = Discriminant.of(D).require_fundamental()
    classes = enumerate_reduced(D)
    odd = [p for p in disc.primes if p != 2]
    two = _two_adic_characters(D)
    labels = [f"(r/{p})" for p in odd] + two
    keys = []
    for f in classes:
        r = _coprime_value(f, 2 * disc.abs)
        keys.append(tuple(kronecker(r, p) for p in odd) + tuple(_eval_two_adic(t, r) for t in two))
    return _group(disc, classes, keys, labels)


def _values_mod(f: QuadraticForm, q: int) -> np.ndarray:
    # int32 keeps the q x q grid small; products stay below 2^31 for q < 46000
    dtype = np.int32 if q < 46000 else np.int64
    r = np.arange(q, dtype=np.int64)
    ax2 = (f.a * r * r % q).astype(dtype)
    bx = (f.b * r % q).astype(dtype)
    cy2 = (f.c * r * r % q).astype(dtype)
    vals = bx[:, None] * r.astype(dtype)[None, :]
    vals += ax2[:, None]
    vals += cy2[None, :]
    vals %= q
    seen = np.zeros(q, dtype=bool)
    seen[vals] = True
    return np.flatnonzero(seen)


def represented_units(f: QuadraticForm, N: int) -> frozenset[int]:
    """Residues in (Z/NZ)* taken by f(x, y), (x, y) over a full period mod N.

    The period is split by CRT into prime-power moduli; since f(x, y) mod q
    depends only on (x, y) mod q, the value set mod N is the CRT product of
    the value sets mod each prime power.
    """
    residues = [0]
    modulus = 1
    for p, e in factor(N).factors:
        q = p**e
        comp = [v for v in _values_mod(f, q).tolist() if v % p]
        # combine residues mod `modulus` with residues mod q
        inv = pow(modulus, -1, q) if modulus > 1 else 1
        residues = [
            r + modulus * ((v - r) * inv % q) for r in residues for v in comp
        ]
        modulus *= q
    return frozenset(r % N for r in residues)


def genus_partition_residue_oracle(D: int) -> GenusPartition:
    """Genera by direct comparison of represented unit residues mod |D|."""
    disc = Discriminant.of(D).require_fundamental()
    if disc.abs > RESIDUE_ORACLE_LIMIT:
        raise OutOfRangeError(f"|D| = {disc.abs} above oracle limit {RESIDUE_ORACLE_LIMIT}")
    classes = enumerate_reduced(D)
    keys = [represented_units(f, disc.abs) for f in classes]
    return _group(disc, classes, keys, ["residue-set"])


def genera_representing(m: int, D: int, budget: int = REPRESENT_BUDGET) -> int:
    """g(m, D): how many genera of D contain a class representing m."""
    part = genus_partition(D)
    return sum(
        any(represents(f, m, budget) is not None for f in part.genus_forms(i))
        for i in range(len(part.genera))
    )

