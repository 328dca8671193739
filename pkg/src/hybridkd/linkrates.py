"""Physical-layer key rates: asymptotic decoy-state BB84 and KEM cycle counts.

QKD rates follow the standard asymptotic signal-state bound

    K = CR * p_z**2 * p_mu * Q_mu * r
    r = -f * H(e_z) + q_1 * (1 - H(e_1))

with gain, yields and single-photon quantities derived from the channel
transmittance ``eta = eta_det * 10**(-alpha * L / 10)``. KEM rates are bits per
round divided by the wall-clock time of keygen + encaps + decaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

FIBER_LOSS_DB_PER_KM = 0.19


@dataclass(frozen=True)
class QkdParams:
    clock_rate: float
    p_z: float
    p_mu: float
    eta_det: float
    p_d: float
    e_z: float
    e_x: float
    f: float
    mu: float
    alpha: float = FIBER_LOSS_DB_PER_KM
    e_0: float = 0.5

    def __post_init__(self):
        for name in ("p_z", "p_mu", "p_d", "e_z", "e_x", "e_0"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be a probability, got {v}")
        if not 0.0 < self.eta_det <= 1.0:
            raise ValueError(f"eta_det must lie in (0, 1], got {self.eta_det}")
        if self.clock_rate <= 0 or self.mu <= 0 or self.f < 1 or self.alpha < 0:
            raise ValueError("clock_rate and mu must be > 0, f >= 1, alpha >= 0")


@dataclass(frozen=True)
class QkdDerived:
    eta: float
    Q_mu: float
    Y_0: float
    Y_1: float
    q_1: float
    e_1: float
    r: float


@dataclass(frozen=True)
class KemParams:
    cycles_keygen: float
    cycles_encaps: float
    cycles_decaps: float
    clock_hz: float
    bits_per_round: float = 256

    def __post_init__(self):
        cycles = (self.cycles_keygen, self.cycles_encaps, self.cycles_decaps)
        if min(cycles) <= 0 or self.clock_hz <= 0 or self.bits_per_round < 0:
            raise ValueError("cycle counts and clock must be positive, bits_per_round >= 0")


COMMERCIAL = QkdParams(
    clock_rate=1e9,
    p_z=0.9668 * (1 - 1 / 128),
    p_mu=0.9697,
    eta_det=0.31,
    p_d=1e-6,
    e_z=0.03,
    e_x=0.03,
    f=1.3,
    mu=0.4,
)

SOTA = QkdParams(
    clock_rate=2.5e9,
    p_z=0.955,
    p_mu=0.88,
    eta_det=0.56,
    p_d=1e-8,
    e_z=0.005,
    e_x=0.04,
    f=1.04,
    mu=0.54,
)

# Kyber-1024, AVX2 Haswell cycle counts on a 3 GHz PC
KYBER1024_PC = KemParams(73544, 97324, 79128, 3.0e9, 256)

QKD_PRESETS: dict[str, QkdParams] = {"commercial": COMMERCIAL, "sota": SOTA}
KEM_PRESETS: dict[str, KemParams] = {"kyber1024-pc": KYBER1024_PC}


@dataclass(frozen=True)
class PresetRegistry:
    qkd: dict
    kem: dict


DEFAULT_PRESETS = PresetRegistry(QKD_PRESETS, KEM_PRESETS)


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def transmittance(params: QkdParams, distance_km: float) -> float:
    return params.eta_det * 10 ** (-params.alpha * distance_km / 10)


def qkd_derived(params: QkdParams, distance_km: float) -> QkdDerived:
    if distance_km < 0:
        raise ValueError(f"distance must be >= 0, got {distance_km}")
    eta = transmittance(params, distance_km)
    keep = 1 - 2 * params.p_d
    q_mu = 1 - keep * math.exp(-params.mu * eta)
    y0 = 2 * params.p_d
    y1 = 1 - keep * (1 - eta)
    q1 = y1 * params.mu * math.exp(-params.mu) / q_mu
    e1 = params.e_x + (params.e_0 - params.e_x) * y0 / y1
    r = -params.f * binary_entropy(params.e_z) + q1 * (1 - binary_entropy(e1))
    return QkdDerived(eta=eta, Q_mu=q_mu, Y_0=y0, Y_1=y1, q_1=q1, e_1=e1, r=r)


def qkd_rate(params: QkdParams, distance_km: float) -> float:
    """Secret-key rate in bit/s; zero once the per-detection key fraction goes negative."""
    d = qkd_derived(params, distance_km)
    if d.r <= 0:
        return 0.0
    return params.clock_rate * params.p_z**2 * params.p_mu * d.Q_mu * d.r


def kem_rate(params: KemParams) -> float:
    seconds = (params.cycles_keygen + params.cycles_encaps + params.cycles_decaps) / params.clock_hz
    return params.bits_per_round / seconds


def rate_curve(
    params: Union[QkdParams, KemParams], l_min: float, l_max: float, step: float
) -> list[tuple[float, float]]:
    """Tabulate the rate at ``l_min, l_min + step, ...`` up to ``l_max`` inclusive."""
    if step <= 0 or l_min < 0 or l_min > l_max:
        raise ValueError(f"invalid range: min={l_min} max={l_max} step={step}")
    count = int(math.floor((l_max - l_min) / step + 1e-9)) + 1
    points = []
    for i in range(count):
        dist = l_min + i * step
        rate = kem_rate(params) if isinstance(params, KemParams) else qkd_rate(params, dist)
        points.append((dist, rate))
    return points


def curve_csv(points: list[tuple[float, float]]) -> str:
    lines = ["distance_km,rate_bps"]
    lines.extend(f"{d:.6g},{r:.5e}" for d, r in points)
    return "\n".join(lines) + "\n"
