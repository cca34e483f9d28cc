"""Bernays' constant C(D) for negative fundamental discriminants."""

from .arith import Discriminant, factor, is_fundamental, kronecker, primes_up_to
from .census import census_by_genus, sieve_representable
from .constants import ConstantReport, bernays_constant
from .forms import QuadraticForm, class_number, enumerate_reduced, genus_partition
from .search import l_diagnostics, scan

__all__ = [
    "ConstantReport",
    "Discriminant",
    "QuadraticForm",
    "bernays_constant",
    "census_by_genus",
    "class_number",
    "enumerate_reduced",
    "factor",
    "genus_partition",
    "is_fundamental",
    "kronecker",
    "l_diagnostics",
    "primes_up_to",
    "scan",
    "sieve_representable",
]
