"""
Round-by-round amplitude model of a single ring resonance.

Each round the circulating amplitude is multiplied by the round gain and
rotated by the phase mismatch, a fresh thermal seed is added, and the
amplifier saturates:

    c[k+1] = sat(g·exp(i·detuning)·c[k] + c_seed),  sat(x) = x / sqrt(1 + |x|²/p_sat)

In-phase signals (detuning 0) build up round after round; mismatched ones
interfere and stay small. Above threshold (g > 1) every detuning eventually
grows in this model, so the discrimination is read below threshold.
"""

import math
from dataclasses import dataclass

import numpy as np

from .circuit import PhaseAngle
from .errors import RingSimError

SEED_FRACTION = 1e-3


@dataclass(frozen=True)
class AmplitudeTrace:
    magnitudes: tuple
    rounds: int
    p_sat: float
    seed: float

    @property
    def plateau(self):
        return self.magnitudes[-1]

    @property
    def peak(self):
        return max(self.magnitudes)

    def is_non_decreasing(self, rel_tol=1e-12):
        return all(b >= a * (1 - rel_tol) for a, b in zip(self.magnitudes, self.magnitudes[1:]))

    def first_round_reaching(self, level):
        for k, m in enumerate(self.magnitudes, start=1):
            if m >= level:
                return k
        return None


def saturate(x, p_sat):
    return x / math.sqrt(1.0 + abs(x) ** 2 / p_sat)


def simulate_rounds(round_gain, detuning, rounds, p_sat=1.0):
    """Magnitudes |c_1| .. |c_rounds| starting from c_0 = c_seed."""
    detuning = float(detuning.value if isinstance(detuning, PhaseAngle) else detuning)
    for name, value in (("round_gain", round_gain), ("detuning", detuning), ("p_sat", p_sat)):
        if not math.isfinite(value):
            raise RingSimError(f"{name} must be finite, got {value!r}")
    if round_gain < 0:
        raise RingSimError(f"round_gain must be >= 0, got {round_gain!r}")
    if p_sat <= 0:
        raise RingSimError(f"p_sat must be positive, got {p_sat!r}")
    if int(rounds) < 1:
        raise RingSimError(f"rounds must be >= 1, got {rounds!r}")

    seed = SEED_FRACTION * math.sqrt(p_sat)
    step = complex(round_gain * np.exp(1j * detuning))
    magnitudes = np.empty(int(rounds))
    c = complex(seed)
    for k in range(int(rounds)):
        c = saturate(step * c + seed, p_sat)
        magnitudes[k] = abs(c)
    return AmplitudeTrace(
        magnitudes=tuple(float(m) for m in magnitudes),
        rounds=int(rounds),
        p_sat=float(p_sat),
        seed=seed,
    )
