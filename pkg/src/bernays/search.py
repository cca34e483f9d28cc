"""Scans of prime discriminants -q or -4q for large C(D), and L(1, chi) size diagnostics."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .arith import Discriminant, is_fundamental, is_prime, primes_up_to
from .constants import FAST_PRIME_BOUND, DEFAULT_PRIME_BOUND, bernays_constant
from .errors import BudgetExceededError
from .lfunc import l_one

C_MINUS_8 = 0.872887558
EULER_GAMMA = 0.5772156649015329
SCAN_LIMIT = 10**9
FAMILIES = ("-q", "-4q")


@dataclass(frozen=True)
class Candidate:
    q: int
    D: int
    h: int
    l_one: float
    c_d: float
    c_err: float

    def to_dict(self) -> dict:
        return asdict(self)


def ranked(cands) -> list[Candidate]:
    """Largest C first; ties go to the smaller q so output never depends on arrival order."""
    return sorted(cands, key=lambda c: (-c.c_d, c.q))


@dataclass
class SearchResult:
    modulus: int
    residue: int
    limit: int
    family: str
    top: list[Candidate]
    exceed_count: int
    scanned: int
    last_q: int

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "residue": self.residue,
            "limit": self.limit,
            "family": self.family,
            "top": [c.to_dict() for c in self.top],
            "exceed_count": self.exceed_count,
            "scanned": self.scanned,
            "last_q": self.last_q,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def csv_lines(self) -> list[str]:
        lines = ["rank,q,D,h,L1,C,err"]
        for i, c in enumerate(self.top, 1):
            lines.append(f"{i},{c.q},{c.D},{c.h},{c.l_one:.9f},{c.c_d:.9f},{c.c_err:.3e}")
        return lines


def _discriminant_for(q: int, family: str) -> int:
    return -q if family == "-q" else -4 * q


def _candidate(q: int, D: int, prime_bound: int) -> Candidate:
    r = bernays_constant(D, prime_bound=prime_bound)
    return Candidate(q, D, r.h, r.l_one.value, r.c_d, r.c_err)


def write_checkpoint(path, state: SearchResult) -> None:
    """Plain text: header lines ``key value`` then one ``top`` line per candidate."""
    lines = [
        f"modulus {state.modulus}",
        f"residue {state.residue}",
        f"limit {state.limit}",
        f"family {state.family}",
        f"last_q {state.last_q}",
        f"exceed_count {state.exceed_count}",
        f"scanned {state.scanned}",
    ]
    for c in state.top:
        lines.append(f"top {c.q} {c.D} {c.h} {c.l_one!r} {c.c_d!r} {c.c_err!r}")
    tmp = Path(str(path) + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


def read_checkpoint(path) -> SearchResult:
    header: dict[str, str] = {}
    top = []
    for line in Path(path).read_text().splitlines():
        key, _, rest = line.partition(" ")
        if key == "top":
            q, D, h, l1, c, err = rest.split()
            top.append(Candidate(int(q), int(D), int(h), float(l1), float(c), float(err)))
        elif key:
            header[key] = rest
    return SearchResult(
        modulus=int(header["modulus"]),
        residue=int(header["residue"]),
        limit=int(header["limit"]),
        family=header["family"],
        top=ranked(top),
        exceed_count=int(header["exceed_count"]),
        scanned=int(header["scanned"]),
        last_q=int(header["last_q"]),
    )


def scan(
    modulus: int,
    residue: int,
    limit: int,
    top_n: int = 10,
    family: str = "-q",
    fast_bound: int = FAST_PRIME_BOUND,
    full_bound: int = DEFAULT_PRIME_BOUND,
    checkpoint=None,
    checkpoint_every: int = 1000,
    resume: bool = False,
) -> SearchResult:
    """Rank primes q = residue (mod modulus), q <= limit, by C(D) for D = -q or -4q.

    Every q is scored with E(D) at ``fast_bound``; the final top_n are
    recomputed at ``full_bound``. Values of q giving a non-fundamental D are
    skipped. ``exceed_count`` counts q with C(D) > C(-8) at the fast bound.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}")
    if modulus < 1 or top_n < 1:
        raise ValueError("modulus and top_n must be positive")
    if math.gcd(residue, modulus) != 1 and not is_prime(residue % modulus):
        raise ValueError(f"the progression {residue} mod {modulus} holds no primes")
    if limit > SCAN_LIMIT:
        raise BudgetExceededError(f"scan limit {limit} exceeds {SCAN_LIMIT}")

    state = SearchResult(modulus, residue % modulus, limit, family, [], 0, 0, 1)
    if resume and checkpoint and Path(checkpoint).exists():
        state = read_checkpoint(checkpoint)
        if (state.modulus, state.residue, state.family) != (modulus, residue % modulus, family):
            raise ValueError("checkpoint was written for a different progression")
        state.limit = limit

    if limit >= 2:
        qs = primes_up_to(max(limit, 2)).primes
        qs = qs[(qs > state.last_q) & (qs % modulus == residue % modulus)]
    else:
        qs = np.zeros(0, dtype=np.int64)
    pool = list(state.top)
    for i, q in enumerate(qs.tolist(), 1):
        D = _discriminant_for(q, family)
        if is_fundamental(D):
            cand = _candidate(q, D, fast_bound)
            state.scanned += 1
            if cand.c_d > C_MINUS_8:
                state.exceed_count += 1
            pool.append(cand)
            if len(pool) > 4 * top_n:
                pool = ranked(pool)[:top_n]
        state.last_q = q
        if checkpoint and i % checkpoint_every == 0:
            state.top = ranked(pool)[:top_n]
            write_checkpoint(checkpoint, state)

    state.top = ranked(_candidate(c.q, c.D, full_bound) for c in ranked(pool)[:top_n])
    if checkpoint:
        write_checkpoint(checkpoint, state)
    return state


@dataclass(frozen=True)
class Diagnostics:
    D: int
    l_one: float
    bec_bound: float
    loglog_ratio: float

    @property
    def bec_holds(self) -> bool:
        return self.l_one < self.bec_bound

    @property
    def ratio_over_exp_gamma(self) -> float:
        return self.loglog_ratio / math.exp(EULER_GAMMA)


def l_diagnostics(D: int) -> Diagnostics:
    """L(1, chi_D), the Bateman-Erdos-Chowla bound, and L(1, chi_D) / ln ln |D|."""
    disc = Discriminant.of(D).require_fundamental()
    L = l_one(D).value
    bound = 10 / 3 * disc.phi / disc.abs * math.log(disc.abs) + 1
    return Diagnostics(D, L, bound, L / math.log(math.log(disc.abs)))
