"""E(D), J(D) and Bernays' constant C(D) for fundamental D < 0."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import Discriminant, primes_up_to
from .errors import EstimatorDisagreementError, OutOfRangeError
from .forms import genera_representing
from .lfunc import (
    DEFAULT_EVEN_PRIME_BOUND,
    EPS,
    LValue,
    character_at_primes,
    fsum_blocks,
    l_even,
    l_one,
    prime_tail_bound,
    zeta_even_with_error,
)

DEFAULT_PRIME_BOUND = 10**8
FAST_PRIME_BOUND = 10**5
DEFAULT_DEPTH = 5
METHODS = ("direct", "accelerated", "both")
CSV_COLUMNS = ("D", "h", "omega", "L1", "E", "C", "err", "method", "prime_bound", "runtime_ms")
# prime bounds tried, smallest first, when a precision target is given
PRIME_BOUND_LADDER = (10**5, 10**6, 10**7, 10**8, 10**9)


@lru_cache(maxsize=2)
def _log_factors(P: int) -> np.ndarray:
    """-log(1 - p^-2) for every prime p <= P."""
    p = primes_up_to(P).primes.astype(np.float64)
    w = -np.log1p(-1.0 / (p * p))
    w.setflags(write=False)
    return w


def euler_product_direct(D: int, P: int = DEFAULT_PRIME_BOUND) -> tuple[float, float]:
    """Truncated product of (1 - p^-2)^-1 over p <= P with chi_D(p) = -1."""
    Discriminant.of(D).require_fundamental()
    if P < 100:
        raise OutOfRangeError("prime bound must be >= 100")
    chi = character_at_primes(D, P)
    w = _log_factors(P)
    log_e = fsum_blocks(w[chi == -1])
    e = math.exp(log_e)
    # the missing factors only raise the product
    err = e * math.expm1(prime_tail_bound(P, 2) / (1 - P**-2.0)) + 16 * EPS * e
    return e, err


def accelerated_factor(D: int, k: int, P: int = DEFAULT_EVEN_PRIME_BOUND) -> tuple[float, float]:
    """The k-th factor (zeta(2^k)/L(2^k) prod_{p|D}(1 - p^-2^k))^(1/2^k), with log-error."""
    s = 2**k
    disc = Discriminant.of(D)
    z, z_err = zeta_even_with_error(s)
    L = l_even(D, s, P)
    log_f = math.log(z) - math.log(L.value) + math.fsum(math.log1p(-float(p) ** -s) for p in disc.primes)
    log_err = z_err / z + L.abs_error_bound / (L.value - L.abs_error_bound) + 4 * EPS
    return math.exp(log_f / s), log_err / s


def _truncation_bound(K: int) -> float:
    """Bound on the log of the omitted factors k > K.

    log F_k <= 2^-k sum_p 2 p^-s / (1 - p^-s) and sum_p p^-s <= zeta(s) - 1
    <= 2^-s (1 + 2/(s - 1)).
    """
    total = 0.0
    for k in range(K + 1, K + 8):
        s = 2.0**k
        total += 2.0**-k * 2 * 2.0**-s * (1 + 2 / (s - 1)) / (1 - 2.0**-s)
    return total


def euler_product_accelerated(
    D: int, K: int = DEFAULT_DEPTH, P: int = DEFAULT_EVEN_PRIME_BOUND
) -> tuple[float, float]:
    """E(D) from the zeta(2^k)/L(2^k, chi_D) product truncated after k = K."""
    Discriminant.of(D).require_fundamental()
    if not 3 <= K <= 6:
        raise OutOfRangeError("truncation depth K must be in 3..6")
    log_e = 0.0
    log_err = _truncation_bound(K)
    for k in range(1, K + 1):
        f, f_err = accelerated_factor(D, k, P)
        log_e += math.log(f)
        log_err += f_err
    e = math.exp(log_e)
    return e, e * math.expm1(log_err)


@dataclass(frozen=True)
class ConstantReport:
    D: Discriminant
    h: int
    omega: int
    phi: int
    l_one: LValue
    e_d: float
    e_err: float
    j_d: float
    c_d: float
    c_err: float
    method: str
    prime_bound: int
    depth: int
    runtime_ms: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["D"] = self.D.value
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ConstantReport":
        d = dict(d)
        d["D"] = Discriminant.of(d["D"])
        d["l_one"] = LValue(**d["l_one"])
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ConstantReport":
        return cls.from_dict(json.loads(text))

    def csv_row(self, timing: bool = True) -> list[str]:
        return [
            str(self.D.value),
            str(self.h),
            str(self.omega),
            f"{self.l_one.value:.9f}",
            f"{self.e_d:.9f}",
            f"{self.c_d:.9f}",
            f"{self.c_err:.3e}",
            self.method,
            str(self.prime_bound),
            str(self.runtime_ms if timing else 0),
        ]


def reports_to_csv(reports, timing: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(r.csv_row(timing))
    return buf.getvalue()


def _prime_bound_for(tol: float) -> int:
    for P in PRIME_BOUND_LADDER:
        # C inherits half the relative error of E, and C < 4 in range
        if 2.0 * prime_tail_bound(P, 2) < tol:
            return P
    return PRIME_BOUND_LADDER[-1]


def bernays_constant(
    D: int,
    method: str = "direct",
    prime_bound: int | None = None,
    depth: int = DEFAULT_DEPTH,
    even_prime_bound: int = DEFAULT_EVEN_PRIME_BOUND,
    tol: float | None = None,
) -> ConstantReport:
    """C(D) = 2^(1-omega) sqrt(|D|/phi(|D|) * L(1,chi_D)/pi * E(D)).

    ``method`` picks the estimator of E(D); "both" runs the two and insists
    they overlap. ``tol`` chooses the smallest adequate prime bound when
    ``prime_bound`` is not given.
    """
    start = time.perf_counter()
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    disc = Discriminant.of(D).require_fundamental()
    if prime_bound is None:
        prime_bound = _prime_bound_for(tol) if tol is not None else DEFAULT_PRIME_BOUND
    L1 = l_one(D)

    if method == "direct":
        e, e_err = euler_product_direct(D, prime_bound)
    elif method == "accelerated":
        e, e_err = euler_product_accelerated(D, depth, even_prime_bound)
    else:
        e1, err1 = euler_product_direct(D, prime_bound)
        e2, err2 = euler_product_accelerated(D, depth, even_prime_bound)
        if abs(e1 - e2) > err1 + err2:
            raise EstimatorDisagreementError(
                f"E({D}): direct {e1!r} +- {err1:.2e} vs accelerated {e2!r} +- {err2:.2e}"
            )
        e, e_err = (e1, err1) if err1 <= err2 else (e2, err2)

    ratio = disc.abs / disc.phi
    core = L1.value / math.pi * e
    c = 2.0 ** (1 - disc.omega) * math.sqrt(ratio * core)
    j = math.sqrt(core / ratio)
    c_err = c * (e_err / e + L1.abs_error_bound / L1.value) / 2 + 8 * EPS * c
    return ConstantReport(
        D=disc,
        h=int(round(L1.value * math.sqrt(disc.abs) / (math.pi * {-3: 1 / 3, -4: 1 / 2}.get(D, 1.0)))),
        omega=disc.omega,
        phi=disc.phi,
        l_one=L1,
        e_d=e,
        e_err=e_err,
        j_d=j,
        c_d=c,
        c_err=c_err,
        method=method,
        prime_bound=prime_bound,
        depth=depth,
        runtime_ms=int((time.perf_counter() - start) * 1000),
    )


def landau_constant_product(P: int = DEFAULT_PRIME_BOUND) -> tuple[float, float]:
    """(1/sqrt 2) prod_{p <= P, p = 3 mod 4} (1 - p^-2)^(-1/2), with tail bound."""
    if P < 100:
        raise OutOfRangeError("prime bound must be >= 100")
    primes = primes_up_to(P).primes
    log_c = 0.5 * fsum_blocks(_log_factors(P)[primes % 4 == 3])
    c = math.exp(log_c) / math.sqrt(2)
    err = c * math.expm1(0.5 * prime_tail_bound(P, 2) / (1 - P**-2.0)) + 16 * EPS * c
    return c, err


@dataclass(frozen=True)
class GenusSum:
    D: int
    M: int
    terms: int
    partial: Fraction
    upper: Fraction
    closed_form: Fraction

    @property
    def contains_closed_form(self) -> bool:
        return self.partial <= self.closed_form <= self.upper


def divisors_of_power(primes, M: int) -> list[int]:
    """All m <= M whose prime factors all divide D (m | D^infinity), ascending."""
    out = [1]
    for p in primes:
        out = [m * p**j for m in out for j in range(int(math.log(M, p)) + 2) if m * p**j <= M]
    return sorted(out)


def genus_sum_check(D: int, M: int = 10**6) -> GenusSum:
    """Partial Bernays genus sum over m | D^inf, m <= M, with a rigorous tail bracket.

    The tail uses g(m, D) <= 2^t(D) and the exact value of sum 1/m over all
    m | D^inf, which is prod_{p|D} p/(p-1) = |D|/phi(|D|).
    """
    disc = Discriminant.of(D).require_fundamental()
    if M > 10**6:
        raise OutOfRangeError("M must be <= 10^6")
    ms = divisors_of_power(disc.primes, M)
    partial = sum((Fraction(genera_representing(m, D), m) for m in ms), Fraction(0))
    closed = Fraction(disc.abs, disc.phi)
    tail = closed - sum((Fraction(1, m) for m in ms), Fraction(0))
    upper = partial + 2 ** (disc.omega - 1) * tail
    return GenusSum(D, M, len(ms), partial, upper, closed)
