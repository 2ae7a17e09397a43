"""Pseudothermal speckle Monte Carlo for intensity correlation curves.

Each frame draws one circular complex Gaussian amplitude per source with
mean square modulus nbar_l, builds the field E(delta) = env(delta) *
sum_l exp(-1j*alpha_l*delta) * a_l at every detector phase, and multiplies the
M detector intensities; G(delta1) is the frame average of that product.
env is the single-slit factor sin(x)/x with x = delta*slit_ratio/2 (1 for
point sources).

Determinism contract: frames are split into min(20, frames) contiguous batches
of fixed sizes; batch b draws from its own counter-based substream
Philox(key=seed, counter lane b), and batch partial sums are combined in batch
order.  The result is bit-identical for any worker count, and the batch means
feed the stderr estimate and the bootstrap in fit_cosine.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .curves import CorrelationCurve, default_grid
from .errors import AccumulatorOverflowError
from .geometry import TWO_PI, DetectorLayout, SourceArray

CHUNK_FRAMES = 4096
MAX_BATCHES = 20
BOOTSTRAP_RESAMPLES = 200


@dataclass(frozen=True, eq=False)
class SpeckleConfig:
    """Everything a simulation run depends on; same config + seed, same curve."""

    sources: SourceArray
    layout: DetectorLayout
    frames: int
    seed: int
    grid: np.ndarray = field(default_factory=default_grid)
    slit_ratio: float = 0.0
    workers: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.frames, (int, np.integer)) or self.frames < 1:
            raise ValueError(f"frames must be a positive integer, got {self.frames!r}")
        if not isinstance(self.seed, (int, np.integer)) or not (
            0 <= int(self.seed) < 2**64
        ):
            raise ValueError("seed must be an integer in [0, 2**64)")
        object.__setattr__(self, "frames", int(self.frames))
        object.__setattr__(self, "seed", int(self.seed))
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid must be 1-d with at least two points")
        object.__setattr__(self, "grid", grid)
        if not (0.0 <= self.slit_ratio < 1.0):
            raise ValueError("slit_ratio must lie in [0, 1)")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def to_dict(self) -> dict:
        return {
            "sources": self.sources.to_dict(),
            "layout": self.layout.to_dict(),
            "frames": self.frames,
            "seed": self.seed,
            "grid": [float(g) for g in self.grid],
            "slit_ratio": self.slit_ratio,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpeckleConfig":
        return cls(
            sources=SourceArray.from_dict(data["sources"]),
            layout=DetectorLayout.from_dict(data["layout"]),
            frames=int(data["frames"]),
            seed=int(data["seed"]),
            grid=np.asarray(data["grid"], dtype=float)
            if "grid" in data
            else default_grid(),
            slit_ratio=float(data.get("slit_ratio", 0.0)),
            workers=int(data.get("workers", 1)),
        )


def _batch_sizes(frames: int) -> list[int]:
    n = min(MAX_BATCHES, frames)
    base, rem = divmod(frames, n)
    return [base + 1] * rem + [base] * (n - rem)


def _phase_table(config: SpeckleConfig) -> np.ndarray:
    """Distinct detector phases: moving columns first (per grid point), then fixed."""
    layout = config.layout
    grid = config.grid
    if layout.m1 == 0:
        moving = np.empty(0)
    elif layout.moving_kind == "co-located":
        moving = grid
    else:
        moving = np.concatenate(
            [layout.detector_phases(d)[: layout.m1] for d in grid]
        )
    return np.concatenate([moving, np.asarray(layout.fixed_phases, dtype=float)])


def _envelope(phases: np.ndarray, slit_ratio: float) -> np.ndarray:
    if slit_ratio == 0.0:
        return np.ones_like(phases)
    # np.sinc is sin(pi x)/(pi x); we want sin(y)/y with y = delta*slit_ratio/2
    return np.sinc(phases * slit_ratio / (2.0 * math.pi))


def _chunk_product_sums(
    intensity: np.ndarray, layout: DetectorLayout, ngrid: int
) -> np.ndarray:
    """Sum over frames of the M-detector intensity product, per grid point."""
    m1, m2 = layout.m1, layout.m2
    frames = intensity.shape[0]
    fixed_prod = (
        np.prod(intensity[:, intensity.shape[1] - m2 :], axis=1)
        if m2
        else np.ones(frames)
    )
    if m1 == 0:
        return np.full(ngrid, fixed_prod.sum())
    if layout.moving_kind == "co-located":
        moving_prod = intensity[:, :ngrid] ** m1
    else:
        moving_prod = np.prod(
            intensity[:, : ngrid * m1].reshape(frames, ngrid, m1), axis=2
        )
    # explicit broadcast + ordered reduce keeps the accumulation deterministic
    return (moving_prod * fixed_prod[:, None]).sum(axis=0)


def _run_batch(
    config: SpeckleConfig,
    table: np.ndarray,
    batch_index: int,
    batch_frames: int,
) -> np.ndarray:
    rng = np.random.Generator(
        np.random.Philox(key=config.seed, counter=[0, 0, 0, batch_index])
    )
    k = config.sources.count
    scale = np.sqrt(np.asarray(config.sources.nbar) / 2.0)
    ngrid = config.grid.size
    sums = np.zeros(ngrid)
    remaining = batch_frames
    while remaining:
        f = min(CHUNK_FRAMES, remaining)
        z = rng.standard_normal((f, 2 * k))
        amps = (z[:, :k] + 1j * z[:, k:]) * scale[None, :]
        fields = np.zeros((f, table.shape[1]), dtype=complex)
        for l in range(k):
            fields += amps[:, l][:, None] * table[l][None, :]
        intensity = fields.real**2 + fields.imag**2
        sums += _chunk_product_sums(intensity, config.layout, ngrid)
        remaining -= f
    if not np.all(np.isfinite(sums)):
        raise AccumulatorOverflowError(
            f"batch {batch_index} accumulated non-finite values"
        )
    return sums


def simulate_curve(config: SpeckleConfig) -> CorrelationCurve:
    """Frame-averaged correlation curve with batch-means standard errors.

    Raw values converge to the path-sum/permanent values of the same sources
    and layout (combinatorial units); normalize() rescales for plotting.
    """
    phases = _phase_table(config)
    env = _envelope(phases, config.slit_ratio)
    alphas = np.asarray(config.sources.prefactors, dtype=float)
    # table[l, c] = env(c) * exp(-1j*alpha_l*delta_c)
    table = env[None, :] * np.exp(-1j * alphas[:, None] * phases[None, :])

    sizes = _batch_sizes(config.frames)
    if config.workers == 1:
        batch_sums = [
            _run_batch(config, table, b, size) for b, size in enumerate(sizes)
        ]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            batch_sums = list(
                pool.map(
                    lambda args: _run_batch(config, table, *args),
                    list(enumerate(sizes)),
                )
            )
    sums = np.stack(batch_sums)  # (batches, grid), combined in batch order
    values = sums.sum(axis=0) / config.frames
    size_arr = np.asarray(sizes, dtype=float)
    batch_means = sums / size_arr[:, None]
    if len(sizes) >= 2:
        stderr = batch_means.std(axis=0, ddof=1) / math.sqrt(len(sizes))
    else:
        stderr = np.zeros_like(values)
    return CorrelationCurve(
        grid=config.grid,
        values=values,
        order=config.layout.order,
        layout=f"{config.layout.describe()};sources={config.sources.count}",
        stderr=stderr,
        batch_means=batch_means,
        frames=config.frames,
        seed=config.seed,
    )


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of A + B*cos(frequency*delta1) to a curve."""

    offset: float
    amplitude: float
    frequency: int
    visibility: float
    stderr_visibility: float
    stderr_amplitude: float
    dominant_frequency: int | None
    parity_ok: bool


def _lsq_cosine(
    grid: np.ndarray, values: np.ndarray, frequency: int
) -> tuple[float, float]:
    design = np.column_stack([np.ones_like(grid), np.cos(frequency * grid)])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    return float(coef[0]), float(coef[1])


def dominant_frequency(grid: np.ndarray, values: np.ndarray) -> int | None:
    """Strongest nonzero Fourier component, in cycles per 2*pi of delta1.

    Needs a uniform grid; a duplicated 2*pi endpoint is dropped before the
    transform.  Returns None when the grid is non-uniform or too short.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    steps = np.diff(grid)
    if grid.size < 4 or not np.allclose(steps, steps[0], rtol=0, atol=1e-9):
        return None
    step = float(steps[0])
    span = float(grid[-1] - grid[0])
    if abs(span - TWO_PI) < 1e-9:
        samples = values[:-1]
    else:
        samples = values
    period = len(samples) * step
    spectrum = np.abs(np.fft.rfft(samples))
    if spectrum.size < 2:
        return None
    k = 1 + int(np.argmax(spectrum[1:]))
    return int(round(k * TWO_PI / period))


def _bootstrap_spread(
    batch_means: np.ndarray, grid: np.ndarray, frequency: int, seed: int
) -> tuple[float, float]:
    rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 1, 0]))
    nb = batch_means.shape[0]
    visibilities = np.empty(BOOTSTRAP_RESAMPLES)
    amplitudes = np.empty(BOOTSTRAP_RESAMPLES)
    for i in range(BOOTSTRAP_RESAMPLES):
        idx = rng.integers(0, nb, size=nb)
        resampled = batch_means[idx].mean(axis=0)
        a, b = _lsq_cosine(grid, resampled, frequency)
        amplitudes[i] = b
        visibilities[i] = abs(b) / a
    return float(visibilities.std(ddof=1)), float(amplitudes.std(ddof=1))


def fit_cosine(curve: CorrelationCurve, frequency: int) -> FitResult:
    """Fit A + B*cos(frequency*delta1); bootstrap errors come from batch means.

    The curve must cover at least one modulation period.  parity_ok records
    whether the sign of B matches (-1)**(frequency - 1).
    """
    if not isinstance(frequency, (int, np.integer)) or frequency < 1:
        raise ValueError(f"frequency must be a positive integer, got {frequency!r}")
    frequency = int(frequency)
    span = float(curve.grid.max() - curve.grid.min())
    if span + 1e-9 < TWO_PI / frequency:
        raise ValueError(
            f"grid spans {span:.6f} rad but one period at frequency "
            f"{frequency} needs {TWO_PI / frequency:.6f}"
        )
    offset, amplitude = _lsq_cosine(curve.grid, curve.values, frequency)
    if offset <= 0.0:
        raise ValueError("fitted offset must be positive for a visibility")
    if curve.batch_means is not None and curve.batch_means.shape[0] >= 2:
        stderr_vis, stderr_amp = _bootstrap_spread(
            curve.batch_means,
            curve.grid,
            frequency,
            curve.seed if curve.seed is not None else 0,
        )
    else:
        stderr_vis, stderr_amp = 0.0, 0.0
    expected_sign = 1.0 if frequency % 2 else -1.0
    return FitResult(
        offset=offset,
        amplitude=amplitude,
        frequency=frequency,
        visibility=abs(amplitude) / offset,
        stderr_visibility=stderr_vis,
        stderr_amplitude=stderr_amp,
        dominant_frequency=dominant_frequency(curve.grid, curve.values),
        parity_ok=bool(amplitude * expected_sign >= 0.0),
    )


@dataclass(frozen=True)
class ConvergenceReport:
    frames_small: int
    frames_large: int
    stderr_small: float
    stderr_large: float
    ratio: float
    expected_ratio: float
    within_factor_two: bool


def convergence_probe(
    config: SpeckleConfig,
    frames_small: int,
    frames_large: int,
    frequency: int | None = None,
) -> ConvergenceReport:
    """Check that the visibility stderr shrinks like 1/sqrt(frames).

    Runs the same config at two frame counts (frames_large >= 4*frames_small)
    and compares the stderr ratio to sqrt(frames_large/frames_small) within a
    factor of two.
    """
    if frames_small < 1 or frames_large < 4 * frames_small:
        raise ValueError("need frames_large >= 4*frames_small >= 4")
    if frequency is None:
        frequency = config.layout.m2 if config.layout.m2 >= 1 else 1
    fit_small = fit_cosine(
        simulate_curve(replace(config, frames=frames_small)), frequency
    )
    fit_large = fit_cosine(
        simulate_curve(replace(config, frames=frames_large)), frequency
    )
    expected = math.sqrt(frames_large / frames_small)
    ratio = (
        fit_small.stderr_visibility / fit_large.stderr_visibility
        if fit_large.stderr_visibility > 0
        else math.inf
    )
    return ConvergenceReport(
        frames_small=frames_small,
        frames_large=frames_large,
        stderr_small=fit_small.stderr_visibility,
        stderr_large=fit_large.stderr_visibility,
        ratio=ratio,
        expected_ratio=expected,
        within_factor_two=bool(expected / 2.0 <= ratio <= 2.0 * expected),
    )
