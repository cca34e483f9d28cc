"""L(1, chi_D) via the class number formula, L(2^k, chi_D) and zeta(2^k) with error bounds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .arith import Discriminant, kronecker_array, primes_up_to
from .errors import OutOfRangeError
from .forms import class_number

# pi(x) < ROSSER_SCHOENFELD * x / ln x for all x > 1
ROSSER_SCHOENFELD = 1.25506
CHARSUM_ORACLE_LIMIT = 10**7
CHARACTER_TABLE_LIMIT = 10**6
DEFAULT_EVEN_PRIME_BOUND = 10**6
EPS = 2.0**-52
BLOCK = 1 << 16


@dataclass(frozen=True)
class LValue:
    s: int
    value: float
    abs_error_bound: float
    method: str  # class_number_formula | euler_product | character_sum

    def to_dict(self) -> dict:
        return asdict(self)


def fsum_blocks(terms: np.ndarray) -> float:
    """Pairwise sums inside fixed blocks, exact (fsum) accumulation across blocks."""
    terms = np.asarray(terms, dtype=np.float64)
    if terms.size <= BLOCK:
        return math.fsum(terms.tolist())
    return math.fsum(terms[i : i + BLOCK].sum() for i in range(0, terms.size, BLOCK))


def unit_weight(D: int) -> float:
    """u(D): 1/3 for D = -3, 1/2 for D = -4, else 1."""
    return {-3: 1 / 3, -4: 1 / 2}.get(D, 1.0)


def character_values(D: int, ns: np.ndarray) -> np.ndarray:
    """chi_D(n) for an int64 array; uses the period |D| when it is small."""
    if -D <= CHARACTER_TABLE_LIMIT:
        q = -D
        table = kronecker_array(D, np.arange(1, q + 1, dtype=np.int64))
        # table[i] holds chi(i + 1); chi(n) = table[(n - 1) mod q]
        return table[(ns - 1) % q]
    return kronecker_array(D, ns)


@lru_cache(maxsize=8)
def character_at_primes(D: int, P: int) -> np.ndarray:
    chi = character_values(D, primes_up_to(P).primes)
    chi.setflags(write=False)
    return chi


def prime_tail_bound(P: int, s: float) -> float:
    """Upper bound for the sum of p^-s over primes p > P (s > 1).

    Partial summation against pi(t) < 1.25506 t / ln t.
    """
    return ROSSER_SCHOENFELD * s * P ** (1.0 - s) / ((s - 1.0) * math.log(P))


def l_one(D: int) -> LValue:
    disc = Discriminant.of(D).require_fundamental()
    h = class_number(D)
    value = math.pi * unit_weight(D) * h / math.sqrt(disc.abs)
    return LValue(1, value, 4 * EPS * value, "class_number_formula")


def l_one_charsum_oracle(D: int) -> LValue:
    """-pi |D|^(-3/2) sum_{a<|D|} chi_D(a) a, an exact integer sum."""
    disc = Discriminant.of(D).require_fundamental()
    if D >= -4 or disc.abs > CHARSUM_ORACLE_LIMIT:
        raise OutOfRangeError(f"character-sum oracle needs -{CHARSUM_ORACLE_LIMIT} <= D < -4")
    a = np.arange(1, disc.abs, dtype=np.int64)
    total = int(np.dot(kronecker_array(D, a).astype(np.int64), a))
    value = -math.pi * total / disc.abs**1.5
    return LValue(1, value, 8 * EPS * abs(value), "character_sum")


def _check_power_of_two(s: int) -> None:
    if s < 2 or s & (s - 1):
        raise OutOfRangeError(f"s = {s} is not a power of 2 >= 2")


def l_even(D: int, s: int, P: int = DEFAULT_EVEN_PRIME_BOUND) -> LValue:
    """Euler product of L(s, chi_D) over p <= P, summed in log space."""
    _check_power_of_two(s)
    Discriminant.of(D).require_fundamental()
    if P < 100:
        raise OutOfRangeError("prime bound must be >= 100")
    primes = primes_up_to(P).primes
    chi = character_at_primes(D, P)
    live = chi != 0
    x = chi[live] * np.power(primes[live].astype(np.float64), -float(s))
    log_value = -fsum_blocks(np.log1p(-x))
    value = math.exp(log_value)
    tail = prime_tail_bound(P, s)
    log_err = tail / (1.0 - P ** (-float(s)))
    err = value * math.expm1(log_err) + 8 * EPS * value * math.log2(len(primes))
    return LValue(s, value, err, "euler_product")


ZETA_TERMS = 100


@lru_cache(maxsize=None)
def zeta_even_with_error(s: int) -> tuple[float, float]:
    if s not in (2, 4, 8, 16, 32, 64):
        raise OutOfRangeError(f"zeta_even supports s in 2..64 (powers of 2), got {s}")
    if s == 2:
        return math.pi**2 / 6, 2 * EPS
    if s == 4:
        return math.pi**4 / 90, 2 * EPS
    n = np.arange(ZETA_TERMS, 0, -1, dtype=np.float64)
    value = math.fsum(np.power(n, -float(s)).tolist())
    tail = ZETA_TERMS ** (1.0 - s) / (s - 1.0)
    return value, tail + 4 * EPS


def zeta_even(s: int) -> float:
    return zeta_even_with_error(s)[0]
