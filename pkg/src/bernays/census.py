"""Exact counts of integers represented by a form, and the two asymptotic predictions."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .arith import Discriminant
from .errors import BudgetExceededError, OutOfRangeError
from .forms import QuadraticForm, genus_partition, principal_form

MAX_CUTOFF = 10**9
SEGMENT_BITS = 1 << 26
CENSUS_COLUMNS = ("D", "a", "b", "c", "x", "count", "count_coprime", "landau_pred", "integral_pred")


def memory_budget() -> int:
    """Bytes a single census may hold; override with BERNAYS_MEMORY_BUDGET."""
    return int(os.environ.get("BERNAYS_MEMORY_BUDGET", 1 << 30))


@dataclass(frozen=True)
class RepresentedSet:
    """Bit m is set iff 1 <= m <= x is represented by the form. Bits packed little-endian."""

    form: QuadraticForm
    x: int
    bits: np.ndarray = field(repr=False)
    count: int
    count_coprime: int

    def __contains__(self, m: int) -> bool:
        if not 1 <= m <= self.x:
            return False
        return bool((self.bits[m >> 3] >> (m & 7)) & 1)

    def to_bool(self) -> np.ndarray:
        """Boolean array indexed 0..x."""
        return np.unpackbits(self.bits, count=self.x + 1, bitorder="little").view(bool)


def _x_interval(a: int, b: int, D: int, Y: int, bound: int) -> tuple[int, int]:
    # 4a f(X,Y) = (2aX + bY)^2 - D Y^2, so f <= bound iff |2aX + bY| <= isqrt(4a bound + D Y^2)
    rad = 4 * a * bound + D * Y * Y
    if rad < 0 or bound < 0:
        return 1, 0
    r = math.isqrt(rad)
    return -((b * Y + r) // (2 * a)), (r - b * Y) // (2 * a)


def _mark_segment(f: QuadraticForm, lo: int, hi: int, seg: np.ndarray) -> None:
    """Set seg[m - lo] for every value lo <= m = f(X, Y) <= hi, (X, Y) != (0, 0).

    f(X, Y) = f(-X, -Y), so only Y > 0, or Y = 0 with X > 0, is visited.
    """
    a, b, c = f
    D = f.discriminant
    ymax = math.isqrt(4 * a * hi // -D)
    for Y in range(ymax + 1):
        L, R = _x_interval(a, b, D, Y, hi)
        if Y == 0:
            L = max(L, 1)
        if L > R:
            continue
        iL, iR = _x_interval(a, b, D, Y, lo - 1)
        if iL <= iR:
            spans = ((L, min(R, iL - 1)), (max(L, iR + 1), R))
        else:
            spans = ((L, R),)
        for s, e in spans:
            if s > e:
                continue
            X = np.arange(s, e + 1, dtype=np.int64)
            vals = (a * X + b * Y) * X + c * Y * Y
            seg[vals - lo] = True


def _coprime_mask(lo: int, n: int, primes) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    for p in primes:
        mask[(-lo) % p :: p] = False
    return mask


def sieve_representable(f: QuadraticForm, x: int, segment_bits: int = SEGMENT_BITS) -> RepresentedSet:
    """Mark every m <= x represented by f, one segment of the range at a time."""
    if not (f.positive_definite and f.primitive):
        raise ValueError(f"{f} must be primitive positive definite")
    if not 1 <= x <= MAX_CUTOFF:
        raise OutOfRangeError(f"cutoff {x} outside [1, {MAX_CUTOFF}]")
    if (x + 1) / 8 + 2 * min(segment_bits, x + 1) > memory_budget():
        raise BudgetExceededError(f"census up to {x} exceeds the memory budget")
    if segment_bits % 8:
        raise ValueError("segment size must be a multiple of 8")
    primes = Discriminant.of(f.discriminant).primes
    packed = []
    count = count_coprime = 0
    for lo in range(0, x + 1, segment_bits):
        hi = min(lo + segment_bits - 1, x)
        seg = np.zeros(hi - lo + 1, dtype=bool)
        _mark_segment(f, max(lo, 1), hi, seg[max(lo, 1) - lo :])
        count += int(seg.sum())
        count_coprime += int(np.count_nonzero(seg & _coprime_mask(lo, seg.size, primes)))
        packed.append(np.packbits(seg, bitorder="little"))
    return RepresentedSet(f, x, np.concatenate(packed), count, count_coprime)


def ramanujan_integral(x: float) -> float:
    """Integral of dt / sqrt(ln t) from 2 to x, via t = e^u."""
    if x <= 2:
        return 0.0
    value, _ = integrate.quad(
        lambda u: math.exp(u) / math.sqrt(u), math.log(2), math.log(x), epsabs=0, epsrel=1e-10, limit=200
    )
    return value


def landau_prediction(C: float, x: float) -> float:
    return C * x / math.sqrt(math.log(x))


@dataclass(frozen=True)
class CensusRecord:
    form: QuadraticForm
    x: int
    count: int
    count_coprime: int
    landau_pred: float
    integral_pred: float
    c_used: float

    def csv_row(self) -> list[str]:
        a, b, c = self.form
        return [
            str(self.form.discriminant), str(a), str(b), str(c), str(self.x),
            str(self.count), str(self.count_coprime),
            f"{self.landau_pred:.9f}", f"{self.integral_pred:.9f}",
        ]


def census(f: QuadraticForm, x: int, C: float) -> CensusRecord:
    if x < 3:
        raise OutOfRangeError("census needs x >= 3")
    rep = sieve_representable(f, x)
    return CensusRecord(f, x, rep.count, rep.count_coprime, landau_prediction(C, x), C * ramanujan_integral(x), C)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CENSUS_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def plot_data(f: QuadraticForm, xs) -> list[tuple[int, float]]:
    """(x, B_f(x) sqrt(ln x) / x) pairs; the ratio tends to C(D)."""
    xs = sorted(int(x) for x in xs)
    cum = np.cumsum(sieve_representable(f, xs[-1]).to_bool())
    return [(x, float(cum[x]) * math.sqrt(math.log(x)) / x) for x in xs]


@dataclass(frozen=True)
class GenusCensus:
    D: int
    x: int
    counts: tuple[int, ...]
    total: int
    overlap: int

    @property
    def shares(self) -> tuple[float, ...]:
        return tuple(c / self.total for c in self.counts)


def census_by_genus(D: int, x: int) -> GenusCensus:
    """Counts of m <= x coprime to D represented by each genus of D."""
    part = genus_partition(D)
    coprime = _coprime_mask(0, x + 1, part.discriminant.primes)
    coprime[0] = False
    counts = []
    seen = np.zeros(x + 1, dtype=np.int8)
    union = np.zeros(x + 1, dtype=bool)
    for i in range(len(part.genera)):
        genus = np.zeros(x + 1, dtype=bool)
        for f in part.genus_forms(i):
            genus |= sieve_representable(f, x).to_bool()
        genus &= coprime
        counts.append(int(genus.sum()))
        seen += genus
        union |= genus
    return GenusCensus(D, x, tuple(counts), int(union.sum()), int(np.count_nonzero(seen > 1)))


def odd_counts(x: int) -> np.ndarray:
    """Od(y) for y = 0..x: odd sums of two squares up to y."""
    bits = sieve_representable(QuadraticForm(1, 0, 1), x).to_bool().copy()
    bits[0::2] = False
    return np.cumsum(bits)


def odd_identity_check(x: int) -> bool:
    """B(x) == sum_j Od(x / 2^j) for sums of two squares."""
    if not 1 <= x <= 10**8:
        raise OutOfRangeError("x must be in [1, 10^8]")
    B = sieve_representable(QuadraticForm(1, 0, 1), x).count
    od = odd_counts(x)
    total = 0
    y = x
    while y >= 1:
        total += int(od[y])
        y //= 2
    return total == B


@dataclass(frozen=True)
class ComparisonRow:
    x: int
    count: int
    landau_err: float
    integral_err: float
    landau_pred: float
    integral_pred: float


def compare_approximations(D: int, xs, C: float | None = None) -> list[ComparisonRow]:
    """|B - C x/sqrt(ln x)| and |B - C Li_{1/2}(x)| for the principal form of D."""
    if C is None:
        from .constants import bernays_constant

        C = bernays_constant(D).c_d
    f = principal_form(D)
    xs = sorted(int(x) for x in xs)
    cum = np.cumsum(sieve_representable(f, xs[-1]).to_bool())
    rows = []
    for x in xs:
        B = int(cum[x])
        lp = landau_prediction(C, x)
        ip = C * ramanujan_integral(x)
        rows.append(ComparisonRow(x, B, abs(B - lp), abs(B - ip), lp, ip))
    return rows
