"""Two independent evaluators for Mth-order intensity correlations.

correlation_pathsum sums quantum paths explicitly: it enumerates the ways the
M detected photons can be drawn from the K sources (partitions), and for each
partition coherently sums one phase term per distinct assignment of sources to
detectors.  A partition {n_l} carries the statistical weight
prod_l n_l! * nbar_l**n_l, and the coherent inner sum runs over the distinct
multiset permutations only (the n_l! multiplicity of identical assignments is
already inside the weight).

correlation_permanent evaluates the same quantity as the permanent of the M x M
mutual coherence matrix J[j, k] = sum_l nbar_l * exp(1j*alpha_l*(d_j - d_k)),
which is what the Gaussian moment theorem gives for independent thermal
sources.  The two routes share no code and serve as oracles for each other.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapacityError, NumericalError
from .geometry import SourceArray

PATHSUM_MAX_ORDER = 12
PERMANENT_MAX_ORDER = 20


def enumerate_partitions(count: int, order: int) -> list[tuple[int, ...]]:
    """All ways to split `order` photons over `count` sources.

    Returns tuples (n_0, ..., n_{count-1}) with sum equal to `order`, in
    lexicographically descending order of the first component.  There are
    C(order + count - 1, count - 1) of them.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if order < 0:
        raise ValueError("order must be >= 0")

    out: list[tuple[int, ...]] = []

    def fill(prefix: tuple[int, ...], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for n in range(remaining, -1, -1):
            fill(prefix + (n,), remaining - n, slots - 1)

    fill((), order, count)
    return out


def _multiset_permutations(items: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Yield the distinct permutations of a multiset in lexicographic order."""
    seq = sorted(items)
    n = len(seq)
    while True:
        yield tuple(seq)
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1 :] = reversed(seq[i + 1 :])


def multiset_phase_sum(
    prefactors: Iterable[int], deltas: Sequence[float]
) -> complex:
    """Coherent sum over distinct assignments of source prefactors to detectors.

    For each distinct permutation (l_1, ..., l_M) of the prefactor multiset the
    sum gains one term exp(1j*(alpha_{l_1}*d_1 + ... + alpha_{l_M}*d_M)).  The
    modulus of the result is bounded by the number of distinct permutations.
    """
    alphas = [int(a) for a in prefactors]
    phases = [float(d) for d in deltas]
    if len(alphas) != len(phases):
        raise ValueError(
            f"prefactor multiset has {len(alphas)} entries but {len(phases)} deltas"
        )
    # One complex factor per (detector, prefactor value); permutation terms are
    # then pure products, no transcendentals in the inner loop.
    values = sorted(set(alphas))
    w = {a: [cmath.exp(1j * a * d) for d in phases] for a in values}
    total = 0j
    for arrangement in _multiset_permutations(alphas):
        term = 1 + 0j
        for j, a in enumerate(arrangement):
            term *= w[a][j]
        total += term
    return total


def correlation_pathsum(sources: SourceArray, deltas: Sequence[float]) -> float:
    """Mth-order correlation by explicit quantum-path summation.

    G = sum over partitions {n_l} of prod_l (n_l! * nbar_l**n_l) times the
    squared modulus of the distinct-assignment phase sum.  Nonnegative real.
    Guarded at M = 12; use correlation_permanent for larger orders.
    """
    phases = [float(d) for d in deltas]
    order = len(phases)
    if order < 1:
        raise ValueError("need at least one detector phase")
    if order > PATHSUM_MAX_ORDER:
        raise CapacityError(
            f"path summation is limited to M <= {PATHSUM_MAX_ORDER} "
            f"(M!/prod n_l! arrangements); got M = {order}. "
            "Use correlation_permanent for larger orders."
        )
    alphas = sources.prefactors
    total = 0.0
    for counts in enumerate_partitions(sources.count, order):
        weight = 1.0
        multiset: list[int] = []
        for alpha, n in zip(alphas, counts):
            weight *= math.factorial(n) * sources.nbar[alpha] ** n
            multiset.extend([alpha] * n)
        amplitude = multiset_phase_sum(multiset, phases)
        total += weight * abs(amplitude) ** 2
    return total


def _permanent_ryser(matrix: np.ndarray) -> complex:
    """Permanent by Ryser inclusion-exclusion with Gray-code column updates."""
    a = np.asarray(matrix, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if n == 0:
        return 1 + 0j
    row_sums = np.zeros(n, dtype=complex)
    total = 0j
    gray = 0
    sign = 1  # (-1)**|S|, flips on every Gray step
    for g in range(1, 1 << n):
        new_gray = g ^ (g >> 1)
        changed = new_gray ^ gray
        col = changed.bit_length() - 1
        if new_gray & changed:
            row_sums += a[:, col]
        else:
            row_sums -= a[:, col]
        gray = new_gray
        sign = -sign
        total += sign * np.prod(row_sums)
    if n % 2:
        total = -total
    return complex(total)


def coherence_matrix(sources: SourceArray, deltas: Sequence[float]) -> np.ndarray:
    """Mutual coherence matrix J[j, k] = sum_l nbar_l * exp(1j*alpha_l*(d_j - d_k))."""
    phases = np.asarray([float(d) for d in deltas], dtype=float)
    j = np.zeros((len(phases), len(phases)), dtype=complex)
    for alpha, nbar in zip(sources.prefactors, sources.nbar):
        e = np.exp(1j * alpha * phases)
        j += nbar * np.outer(e, e.conj())
    return j


def correlation_permanent(sources: SourceArray, deltas: Sequence[float]) -> float:
    """Mth-order correlation as the permanent of the mutual coherence matrix.

    Independent of correlation_pathsum; the permanent of the positive
    semidefinite J is real and nonnegative, and a residual imaginary part
    larger than 1e-8 relative is reported as a numerical failure.
    """
    order = len(deltas)
    if order < 1:
        raise ValueError("need at least one detector phase")
    if order > PERMANENT_MAX_ORDER:
        raise CapacityError(
            f"permanent evaluation is limited to M <= {PERMANENT_MAX_ORDER}, "
            f"got M = {order}"
        )
    value = _permanent_ryser(coherence_matrix(sources, deltas))
    scale = max(abs(value.real), 1e-30)
    if abs(value.imag) > 1e-8 * scale:
        raise NumericalError(
            f"permanent of a coherence matrix should be real, got {value!r}"
        )
    return value.real
