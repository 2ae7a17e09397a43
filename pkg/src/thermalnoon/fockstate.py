"""Truncated two-mode Fock space: projection onto the N00N-like sector.

Detecting m2 photons at the magic positions collapses the two-mode field
product to A = a1**m2 + (-1)**(m2-1) * a2**m2.  Applied to a two-mode thermal
state this leaves a four-term density matrix whose only coherences sit at the
Fock offsets (+-m2, -+m2), i.e. a mixed N00N-like state.  Scanning m1 further
detectors through delta1 on that state reproduces the co-located correlation:

    G_full(m1 at delta1, m2 at magic positions; rho)
        = g_moving(projected rho, m1, delta1) * tr(A rho A+)

verify_isomorphism checks that factorization numerically, with the left side
evaluated by direct operator algebra on the unprojected state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError, ZeroProbabilityError
from .geometry import magic_positions

TAIL_LIMIT = 1e-6


def default_cutoff(nbar: float, m1: int = 0, m2: int = 0) -> int:
    """Per-mode Fock cutoff that keeps the thermal tail below TAIL_LIMIT."""
    return max(30, math.ceil(10.0 * nbar + m1 + m2 + 10))


@dataclass(frozen=True, eq=False)
class TwoModeDensityMatrix:
    """Density matrix on span{|n1, n2> : n1, n2 <= cutoff}.

    tensor has axes (n1, n2, n1', n2').  trunc_tail records the probability
    mass the cutoff discarded before renormalization; projection_norm is set
    by project_magic to the pre-normalization trace tr(A rho A+).
    """

    tensor: np.ndarray
    cutoff: int
    trunc_tail: float = 0.0
    projection_norm: float | None = None

    def __post_init__(self) -> None:
        t = np.asarray(self.tensor, dtype=complex)
        object.__setattr__(self, "tensor", t)
        dim = self.cutoff + 1
        if t.shape != (dim, dim, dim, dim):
            raise ValueError(
                f"tensor shape {t.shape} does not match cutoff {self.cutoff}"
            )
        if not np.allclose(t, t.transpose(2, 3, 0, 1).conj(), rtol=0, atol=1e-10):
            raise ValueError("density matrix must be Hermitian")
        tr = self.trace()
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"density matrix must have unit trace, got {tr!r}")

    def trace(self) -> float:
        return float(np.einsum("abab->", self.tensor).real)

    def entry(self, n1: int, n2: int, n1p: int, n2p: int) -> complex:
        return complex(self.tensor[n1, n2, n1p, n2p])

    def as_matrix(self) -> np.ndarray:
        dim = (self.cutoff + 1) ** 2
        return self.tensor.reshape(dim, dim)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.as_matrix())[0])

    def diagonal_part(self) -> "TwoModeDensityMatrix":
        """Same populations with every Fock coherence zeroed."""
        dim = self.cutoff + 1
        out = np.zeros_like(self.tensor)
        idx = np.arange(dim)
        out[idx[:, None], idx[None, :], idx[:, None], idx[None, :]] = self.tensor[
            idx[:, None], idx[None, :], idx[:, None], idx[None, :]
        ]
        return TwoModeDensityMatrix(
            tensor=out, cutoff=self.cutoff, trunc_tail=self.trunc_tail
        )

    def support_offsets(self, tol: float = 1e-12) -> set[tuple[int, int]]:
        """Fock-index offsets (n1-n1', n2-n2') carrying any weight above tol."""
        dim = self.cutoff + 1
        n = np.arange(dim)
        shape = self.tensor.shape
        d1 = np.broadcast_to(n[:, None, None, None] - n[None, None, :, None], shape)
        d2 = np.broadcast_to(n[None, :, None, None] - n[None, None, None, :], shape)
        mask = np.abs(self.tensor) > tol
        return set(zip(d1[mask].tolist(), d2[mask].tolist()))


def _lowering_coef(cutoff: int, power: int) -> np.ndarray:
    """coef[n] = sqrt((n+power)! / n!) for n = 0 .. cutoff-power."""
    n = np.arange(cutoff + 1 - power, dtype=float)
    coef = np.ones_like(n)
    for i in range(1, power + 1):
        coef *= n + i
    return np.sqrt(coef)


def _lower_left(t: np.ndarray, mode: int, power: int) -> np.ndarray:
    """a_mode**power applied from the left."""
    if power == 0:
        return t
    cutoff = t.shape[0] - 1
    coef = _lowering_coef(cutoff, power)
    out = np.zeros_like(t)
    if mode == 1:
        out[: cutoff + 1 - power] = coef[:, None, None, None] * t[power:]
    else:
        out[:, : cutoff + 1 - power] = coef[None, :, None, None] * t[:, power:]
    return out


def _dagger_right(t: np.ndarray, mode: int, power: int) -> np.ndarray:
    """a_mode+**power applied from the right."""
    if power == 0:
        return t
    cutoff = t.shape[0] - 1
    coef = _lowering_coef(cutoff, power)
    out = np.zeros_like(t)
    if mode == 1:
        out[:, :, : cutoff + 1 - power] = coef[None, None, :, None] * t[:, :, power:]
    else:
        out[:, :, :, : cutoff + 1 - power] = (
            coef[None, None, None, :] * t[:, :, :, power:]
        )
    return out


def _field_left(t: np.ndarray, delta: float) -> np.ndarray:
    """E+(delta) = a1 + exp(-1j*delta)*a2 applied from the left."""
    return _lower_left(t, 1, 1) + np.exp(-1j * delta) * _lower_left(t, 2, 1)


def _field_right(t: np.ndarray, delta: float) -> np.ndarray:
    """E-(delta) = a1+ + exp(+1j*delta)*a2+ applied from the right."""
    return _dagger_right(t, 1, 1) + np.exp(1j * delta) * _dagger_right(t, 2, 1)


def thermal_two_mode(nbar: float, cutoff: int | None = None) -> TwoModeDensityMatrix:
    """Product of two single-mode thermal states with the same nbar.

    Raises TruncationError when the cutoff would discard more than TAIL_LIMIT
    probability mass; the kept mass is renormalized to unit trace.
    """
    if nbar < 0.0:
        raise ValueError(f"nbar must be nonnegative, got {nbar!r}")
    if cutoff is None:
        cutoff = default_cutoff(nbar)
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    n = np.arange(cutoff + 1, dtype=float)
    weights = nbar**n / (1.0 + nbar) ** (n + 1.0)
    kept = float(weights.sum()) ** 2
    tail = 1.0 - kept
    if tail > TAIL_LIMIT:
        raise TruncationError(
            f"cutoff {cutoff} keeps only {kept:.9f} of the thermal mass "
            f"(tail {tail:.3e} > {TAIL_LIMIT:.0e}) for nbar = {nbar}"
        )
    dim = cutoff + 1
    tensor = np.zeros((dim, dim, dim, dim), dtype=complex)
    joint = np.outer(weights, weights) / kept
    idx = np.arange(dim)
    tensor[idx[:, None], idx[None, :], idx[:, None], idx[None, :]] = joint
    return TwoModeDensityMatrix(tensor=tensor, cutoff=cutoff, trunc_tail=tail)


def project_magic(rho: TwoModeDensityMatrix, m2: int) -> TwoModeDensityMatrix:
    """State after detecting m2 photons at the magic positions.

    Applies the collapsed field product A = a1**m2 + (-1)**(m2-1)*a2**m2 and
    renormalizes; the discarded norm tr(A rho A+) is kept on the result as
    projection_norm.  Projecting a state that cannot supply m2 photons from
    either mode (e.g. the vacuum) is a zero-probability event.
    """
    if not isinstance(m2, (int, np.integer)) or m2 < 1:
        raise ValueError(f"m2 must be a positive integer, got {m2!r}")
    m2 = int(m2)
    if m2 > rho.cutoff:
        raise TruncationError(
            f"operator power m2 = {m2} exceeds the Fock cutoff {rho.cutoff}"
        )
    sign = -1.0 if m2 % 2 == 0 else 1.0
    t = rho.tensor
    lower1 = _lower_left(t, 1, m2)
    lower2 = _lower_left(t, 2, m2)
    out = (
        _dagger_right(lower1, 1, m2)
        + _dagger_right(lower2, 2, m2)
        + sign * (_dagger_right(lower1, 2, m2) + _dagger_right(lower2, 1, m2))
    )
    norm = float(np.einsum("abab->", out).real)
    if norm < 1e-30:
        raise ZeroProbabilityError(
            f"detecting {m2} photons at the magic positions has zero probability "
            "for this state"
        )
    return TwoModeDensityMatrix(
        tensor=out / norm,
        cutoff=rho.cutoff,
        trunc_tail=rho.trunc_tail,
        projection_norm=norm,
    )


def g_detectors(rho: TwoModeDensityMatrix, deltas) -> float:
    """Normally ordered intensity correlation of detectors at the given phases."""
    phases = [float(d) for d in deltas]
    if len(phases) > rho.cutoff:
        raise TruncationError(
            f"operator power {len(phases)} exceeds the Fock cutoff {rho.cutoff}"
        )
    sigma = rho.tensor
    for d in phases:
        sigma = _field_left(sigma, d)
    for d in phases:
        sigma = _field_right(sigma, d)
    return float(np.einsum("abab->", sigma).real)


def g_moving(rho: TwoModeDensityMatrix, m1: int, delta1: float) -> float:
    """Correlation of m1 co-located detectors at delta1: <E-**m1 E+**m1>."""
    if not isinstance(m1, (int, np.integer)) or m1 < 0:
        raise ValueError(f"m1 must be a nonnegative integer, got {m1!r}")
    return g_detectors(rho, [float(delta1)] * int(m1))


def noon_overlap(rho: TwoModeDensityMatrix, m2: int) -> float:
    """Overlap <psi|rho|psi> with |psi> = (|m2,0> + (-1)**(m2-1)|0,m2>)/sqrt(2)."""
    if not isinstance(m2, (int, np.integer)) or m2 < 1:
        raise ValueError(f"m2 must be a positive integer, got {m2!r}")
    m2 = int(m2)
    if m2 > rho.cutoff:
        raise TruncationError(
            f"N00N occupation {m2} exceeds the Fock cutoff {rho.cutoff}"
        )
    sign = -1.0 if m2 % 2 == 0 else 1.0
    value = 0.5 * (
        rho.entry(m2, 0, m2, 0)
        + rho.entry(0, m2, 0, m2)
        + sign * (rho.entry(m2, 0, 0, m2) + rho.entry(0, m2, m2, 0))
    )
    return float(value.real)


def noon_state(m2: int, cutoff: int) -> TwoModeDensityMatrix:
    """Pure N00N-like state (|m2,0> + (-1)**(m2-1)|0,m2>)/sqrt(2) as a density matrix."""
    if m2 < 1 or m2 > cutoff:
        raise ValueError("need 1 <= m2 <= cutoff")
    sign = -1.0 if m2 % 2 == 0 else 1.0
    dim = cutoff + 1
    tensor = np.zeros((dim, dim, dim, dim), dtype=complex)
    tensor[m2, 0, m2, 0] = 0.5
    tensor[0, m2, 0, m2] = 0.5
    tensor[m2, 0, 0, m2] = 0.5 * sign
    tensor[0, m2, m2, 0] = 0.5 * sign
    return TwoModeDensityMatrix(tensor=tensor, cutoff=cutoff)


@dataclass(frozen=True)
class IsomorphismReport:
    nbar: float
    m1: int
    m2: int
    delta1: float
    cutoff: int
    lhs: float
    rhs: float
    relative_gap: float
    projection_norm: float
    trunc_tail: float


def verify_isomorphism(
    nbar: float,
    m1: int,
    m2: int,
    delta1: float,
    cutoff: int | None = None,
) -> IsomorphismReport:
    """Compare the full (m1+m2)-detector correlation with its projected factorization.

    lhs applies all detector fields to the thermal state directly; rhs scans
    only the moving detectors on the projected state and multiplies by the
    recorded projection norm.
    """
    if not isinstance(m1, (int, np.integer)) or m1 < 0:
        raise ValueError(f"m1 must be a nonnegative integer, got {m1!r}")
    if cutoff is None:
        cutoff = default_cutoff(nbar, int(m1), int(m2))
    rho = thermal_two_mode(nbar, cutoff)
    phases = [float(delta1)] * int(m1) + [float(p) for p in magic_positions(m2)]
    lhs = g_detectors(rho, phases)
    projected = project_magic(rho, m2)
    rhs = g_moving(projected, int(m1), delta1) * projected.projection_norm
    gap = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    return IsomorphismReport(
        nbar=float(nbar),
        m1=int(m1),
        m2=int(m2),
        delta1=float(delta1),
        cutoff=int(cutoff),
        lhs=lhs,
        rhs=rhs,
        relative_gap=gap,
        projection_norm=projected.projection_norm,
        trunc_tail=rho.trunc_tail,
    )
