"""Integer arithmetic: Kronecker symbols, segmented prime sieve, factorization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidDiscriminantError, NotFundamentalError, OutOfRangeError

MAX_PRIME_BOUND = 10**9
SEGMENT_ODDS = 1 << 20
TRIAL_DIVISION_BOUND = 10**6
MAX_INT64 = (1 << 63) - 1
MAX_ABS_DISCRIMINANT = 1 << 40

# deterministic Miller-Rabin witnesses for n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n), defined for all integer pairs."""
    if n == 0:
        return 1 if D in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    if n % 2 == 0:
        if D % 2 == 0:
            return 0
        v = (n & -n).bit_length() - 1
        n >>= v
        if v & 1 and D % 8 in (3, 5):
            result = -result
    return result * jacobi(D, n)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        v = (a & -a).bit_length() - 1
        a >>= v
        if v & 1 and n % 8 in (3, 5):
            result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


def kronecker_array(D: int, ns) -> np.ndarray:
    """Vectorized (D/n) over an array of positive integers, as int8."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and ns.min() < 1:
        raise ValueError("kronecker_array expects n >= 1")
    out = np.ones(ns.shape, dtype=np.int8)
    n = ns.copy()
    # factor out powers of two from n
    low = n & -n
    v = np.log2(low.astype(np.float64)).astype(np.int64)
    n >>= v
    if D % 2 == 0:
        out[v > 0] = 0
    elif D % 8 in (3, 5):
        out[(v & 1) == 1] *= -1
    live = np.flatnonzero(out != 0)
    n = n[live]
    a = D % n
    sign = np.ones(live.size, dtype=np.int8)
    idx = live
    while idx.size:
        zero = a == 0
        if zero.any():
            # loop ended: symbol is sign if n == 1 else 0
            done = idx[zero]
            out[done] *= np.where(n[zero] == 1, sign[zero], 0).astype(np.int8)
            keep = ~zero
            idx, a, n, sign = idx[keep], a[keep], n[keep], sign[keep]
            if not idx.size:
                break
        low = a & -a
        v = np.log2(low.astype(np.float64)).astype(np.int64)
        a = a >> v
        n8 = n & 7
        flip = ((v & 1) == 1) & ((n8 == 3) | (n8 == 5))
        flip ^= ((a & 3) == 3) & ((n & 3) == 3)
        sign[flip] *= -1
        a, n = n % a, a
    return out


def _small_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class PrimeStream:
    """All primes up to ``limit``, ascending. The array is read-only."""

    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    def __contains__(self, p) -> bool:
        i = np.searchsorted(self.primes, p)
        return bool(i < len(self.primes) and self.primes[i] == p)


def _segmented_sieve(limit: int, segment_odds: int = SEGMENT_ODDS) -> np.ndarray:
    base = _small_sieve(math.isqrt(limit))[1:]
    chunks = [np.array([2], dtype=np.int64)]
    low = 3
    while low <= limit:
        high = min(low + 2 * segment_odds, limit + 1)  # exclusive
        count = (high - low + 1) // 2
        mask = np.ones(count, dtype=bool)
        for p in base:
            p = int(p)
            pp = p * p
            if pp >= high:
                break
            start = max(pp, -(-low // p) * p)
            if start % 2 == 0:
                start += p
            mask[(start - low) // 2 :: p] = False
        chunks.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        low = high if high % 2 else high + 1
    return np.concatenate(chunks)


@lru_cache(maxsize=4)
def primes_up_to(P: int) -> PrimeStream:
    """Primes <= P from a segmented odd-only sieve (segments of 2^20 odd numbers)."""
    P = int(P)
    if P < 2 or P > MAX_PRIME_BOUND:
        raise OutOfRangeError(f"prime bound {P} outside [2, {MAX_PRIME_BOUND}]")
    primes = _segmented_sieve(P)
    primes.setflags(write=False)
    return PrimeStream(P, primes)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every 64-bit n."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int) -> int:
    """Brent's variant of Pollard rho; returns a nontrivial factor of composite n."""
    if n % 2 == 0:
        return 2
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(_small_sieve(TRIAL_DIVISION_BOUND).tolist())


def factor(n: int) -> Factorization:
    """Factor 1 <= n < 2^63: trial division to 10^6, then Miller-Rabin and rho."""
    n = int(n)
    if n < 1 or n > MAX_INT64:
        raise OutOfRangeError(f"cannot factor {n}")
    found: dict[int, int] = {}
    m = n
    for p in _trial_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    stack = [m] if m > 1 else []
    while stack:
        k = stack.pop()
        if is_prime(k):
            found[k] = found.get(k, 0) + 1
        else:
            d = _rho(k)
            stack += [d, k // d]
    return Factorization(n, tuple(sorted(found.items())))


def omega(D: int) -> int:
    """Number of distinct prime divisors of |D|."""
    return len(factor(abs(D)).factors)


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factor(n).factors:
        result = result // p * (p - 1)
    return result


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factor(abs(n)).factors)


def is_discriminant(D: int) -> bool:
    return D % 4 in (0, 1)


def is_fundamental(D: int) -> bool:
    """True iff D is the discriminant of a quadratic field (D != 1)."""
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


@dataclass(frozen=True)
class Discriminant:
    """A validated negative discriminant with its factorization."""

    value: int
    factorization: Factorization = field(repr=False)
    fundamental: bool

    @classmethod
    def of(cls, D: int) -> "Discriminant":
        D = int(D)
        if D >= 0 or not is_discriminant(D):
            raise InvalidDiscriminantError(f"{D} is not a negative discriminant")
        if -D > MAX_ABS_DISCRIMINANT:
            raise OutOfRangeError(f"|D| = {-D} exceeds 2^40")
        return cls(D, factor(-D), is_fundamental(D))

    @property
    def abs(self) -> int:
        return -self.value

    @property
    def primes(self) -> tuple[int, ...]:
        return self.factorization.primes

    @property
    def omega(self) -> int:
        return len(self.factorization.factors)

    @property
    def phi(self) -> int:
        result = self.abs
        for p in self.primes:
            result = result // p * (p - 1)
        return result

    def require_fundamental(self) -> "Discriminant":
        if not self.fundamental:
            raise NotFundamentalError(f"{self.value} is not a fundamental discriminant")
        return self


def fundamental_discriminants(lo: int, hi: int) -> list[int]:
    """Negative fundamental discriminants D with lo <= D <= hi, descending."""
    return [D for D in range(min(hi, -3), lo - 1, -1) if is_fundamental(D)]
