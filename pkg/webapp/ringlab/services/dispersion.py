"""
Magnetostatic spin-wave dispersion of a thin YIG film.

    f_MSSW  = sqrt((f_H + f_M/2)² - (f_M/2)² exp(-2 k d0))
    f_BVMSW = sqrt(f_H (f_H + f_M (1 - exp(-k d0)) / (k d0)))

with f_H = γ H0 and f_M = γ 4πM0. γ is in MHz/Oe, fields in Oe/G,
thickness in meters, wavenumbers in rad/m; frequencies come out in GHz.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .circuit import PhaseAngle
from .errors import OutOfBandError, RingSimError

MSSW = "MSSW"
BVMSW = "BVMSW"
GEOMETRIES = (MSSW, BVMSW)

GAMMA_MHZ_PER_OE = 2.8
DEFAULT_BIAS_OE = 330.0

# Below this k·d0 the BVMSW factor (1 - e^-x)/x is taken from its series.
SERIES_CROSSOVER = 1e-6
INVERSION_RTOL = 1e-9


@dataclass(frozen=True)
class SpinWaveMedium:
    d0: float
    M0_4pi: float
    H0: float = DEFAULT_BIAS_OE
    gamma: float = GAMMA_MHZ_PER_OE
    geometry: str = MSSW

    def __post_init__(self):
        for name in ("d0", "M0_4pi", "H0", "gamma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise RingSimError(f"{name} must be positive, got {value!r}")
        if self.geometry not in GEOMETRIES:
            raise RingSimError(f"geometry must be MSSW or BVMSW, got {self.geometry!r}")

    @property
    def f_H(self):
        """GHz"""
        return self.gamma * self.H0 / 1000.0

    @property
    def f_M(self):
        """GHz"""
        return self.gamma * self.M0_4pi / 1000.0

    def with_geometry(self, geometry):
        return SpinWaveMedium(self.d0, self.M0_4pi, self.H0, self.gamma, geometry)


@dataclass(frozen=True)
class DispersionPoint:
    k: float
    f: float


# Delay line one of the two-path YIG experiment
YIG_DELAY_LINE_1 = SpinWaveMedium(d0=9.6e-6, M0_4pi=1750.0, geometry=BVMSW)
# Delay line two
YIG_DELAY_LINE_2 = SpinWaveMedium(d0=21.3e-6, M0_4pi=1750.0, geometry=MSSW)


def _bv_factor(x):
    x = np.asarray(x, dtype=float)
    small = x < SERIES_CROSSOVER
    safe = np.where(small, 1.0, x)
    closed = -np.expm1(-safe) / safe
    series = 1.0 - x / 2.0 + x * x / 6.0
    return np.where(small, series, closed)


def _frequency(medium, k):
    fh, fm = medium.f_H, medium.f_M
    x = np.asarray(k, dtype=float) * medium.d0
    if medium.geometry == MSSW:
        return np.sqrt((fh + fm / 2) ** 2 - (fm / 2) ** 2 * np.exp(-2 * x))
    return np.sqrt(fh * (fh + fm * _bv_factor(x)))


def frequency_at(medium, k):
    """Frequency (GHz) at wavenumber k (rad/m); k may be an array."""
    arr = np.asarray(k, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise RingSimError("wavenumber must be finite and >= 0")
    f = _frequency(medium, arr)
    return float(f) if f.ndim == 0 else f


def band_limits(medium):
    """(f_low, f_high) in GHz for the medium's geometry."""
    fh, fm = medium.f_H, medium.f_M
    k0 = math.sqrt(fh * (fh + fm))
    if medium.geometry == MSSW:
        return k0, fh + fm / 2
    return fh, k0


def wavenumber_for(medium, f):
    """Invert the dispersion by bisection; f must lie strictly inside the band."""
    f = float(f)
    low, high = band_limits(medium)
    if not low < f < high:
        raise OutOfBandError(
            f"{f:.6g} GHz is outside the {medium.geometry} band ({low:.6g}, {high:.6g}) GHz"
        )
    increasing = medium.geometry == MSSW

    def residual(k):
        return _frequency(medium, k) - f

    hi = 1.0 / medium.d0
    for _ in range(200):
        r = residual(hi)
        if (r >= 0) if increasing else (r <= 0):
            break
        hi *= 2.0
    else:
        raise OutOfBandError(f"{f:.6g} GHz sits too close to the band edge to invert")

    k = optimize.bisect(residual, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)
    if abs(residual(k)) > INVERSION_RTOL * f:
        raise OutOfBandError(f"inversion did not converge at {f:.6g} GHz")
    return float(k)


def phase_over_length(medium, f, length):
    """Phase accumulated over `length` meters at frequency f, wrapped mod 2π."""
    if not length > 0:
        raise RingSimError(f"length must be positive, got {length!r}")
    return PhaseAngle(wavenumber_for(medium, f) * length)


def dispersion_table(medium, k_min, k_max, points=50):
    """Evenly spaced (k, f) samples for the CLI table."""
    if points < 2 or k_max <= k_min or k_min < 0:
        raise RingSimError("dispersion table needs 0 <= k_min < k_max and at least 2 points")
    ks = np.linspace(k_min, k_max, int(points))
    fs = _frequency(medium, ks)
    return [DispersionPoint(float(k), float(f)) for k, f in zip(ks, fs)]
