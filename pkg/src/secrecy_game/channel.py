"""Channel parameters, received powers and the rate-region corner points.

All rates are in bits per channel use (base-2 logarithms) and the noise at
both receivers has unit variance.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Mapping

from .errors import InvalidChannel

CONDITION_SLACK = 1e-12

_GAIN_KEYS = ("h_sd", "h_rd", "h_se", "h_re", "p_s", "p_r")
_POWER_KEYS = ("g_sd", "g_rd", "g_se", "g_re")


def _check_nonneg(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidChannel(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value) or value < 0:
        raise InvalidChannel(f"{name} must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class ChannelConfig:
    """Channel-gain magnitudes |h_kl| and average power budgets."""

    h_sd: float
    h_rd: float
    h_se: float
    h_re: float
    p_s: float
    p_r: float

    def __post_init__(self):
        for name in _GAIN_KEYS:
            object.__setattr__(self, name, _check_nonneg(name, getattr(self, name)))
        if self.p_s <= 0:
            raise InvalidChannel("p_s must be > 0 (a silent source has no game)")


@dataclass(frozen=True)
class ReceivedPowers:
    """Received SNRs gamma_kl = |h_kl|^2 P_k."""

    g_sd: float
    g_rd: float
    g_se: float
    g_re: float

    def __post_init__(self):
        for name in _POWER_KEYS:
            object.__setattr__(self, name, _check_nonneg(name, getattr(self, name)))

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CornerPoints:
    """Corners of the destination (big_*) and eavesdropper (small_*) regions.

    ``*_delta_*`` is the corner where the relay codeword is decoded first and
    cancelled; ``*_omega_*`` the corner where the source is decoded while
    treating the relay codeword as noise.
    """

    big_delta_s: float
    big_delta_r: float
    big_omega_s: float
    big_omega_r: float
    small_delta_s: float
    small_delta_r: float
    small_omega_s: float
    small_omega_r: float
    sum_d: float
    sum_e: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CaseReport:
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    cond_iv: bool
    cond_v: bool

    @property
    def all_hold(self) -> bool:
        return self.cond_i and self.cond_ii and self.cond_iii and self.cond_iv and self.cond_v

    def as_dict(self) -> dict:
        d = asdict(self)
        d["all_hold"] = self.all_hold
        return d


def received_powers(cfg: ChannelConfig) -> ReceivedPowers:
    return ReceivedPowers(
        g_sd=cfg.h_sd**2 * cfg.p_s,
        g_rd=cfg.h_rd**2 * cfg.p_r,
        g_se=cfg.h_se**2 * cfg.p_s,
        g_re=cfg.h_re**2 * cfg.p_r,
    )


def _cap(snr: float) -> float:
    return math.log2(1.0 + snr)


def corner_points(p: ReceivedPowers) -> CornerPoints:
    return CornerPoints(
        big_delta_s=_cap(p.g_sd),
        big_delta_r=_cap(p.g_rd / (1.0 + p.g_sd)),
        big_omega_s=_cap(p.g_sd / (1.0 + p.g_rd)),
        big_omega_r=_cap(p.g_rd),
        small_delta_s=_cap(p.g_se),
        small_delta_r=_cap(p.g_re / (1.0 + p.g_se)),
        small_omega_s=_cap(p.g_se / (1.0 + p.g_re)),
        small_omega_r=_cap(p.g_re),
        sum_d=_cap(p.g_sd + p.g_rd),
        sum_e=_cap(p.g_se + p.g_re),
    )


def check_conditions(c: CornerPoints, slack: float = CONDITION_SLACK) -> CaseReport:
    """Evaluate the five corner orderings under which the game is solved."""

    def le(x, y):
        return x <= y + slack

    return CaseReport(
        cond_i=le(c.sum_e, c.sum_d),
        cond_ii=le(c.small_delta_s, c.big_delta_s),
        cond_iii=le(c.big_delta_r, c.small_delta_r),
        cond_iv=le(c.small_omega_s, c.big_omega_s) and le(c.big_omega_s, c.small_delta_s),
        cond_v=le(c.small_delta_r, c.big_omega_r) and le(c.big_omega_r, c.small_omega_r),
    )


def baseline_no_jammer(p: ReceivedPowers) -> float:
    """Gaussian wiretap secrecy capacity with the relay silent."""
    return max(0.0, _cap(p.g_sd) - _cap(p.g_se))


def load_channel(doc: Mapping) -> ReceivedPowers:
    """Build received powers from a channel-description mapping.

    Accepts either the physical form (h_sd, h_rd, h_se, h_re, p_s, p_r) or
    received powers directly (g_sd, g_rd, g_se, g_re), never a mix.
    """
    if not isinstance(doc, Mapping):
        raise InvalidChannel("channel description must be a JSON object")
    keys = set(doc)
    has_gain = keys & set(_GAIN_KEYS)
    has_power = keys & set(_POWER_KEYS)
    if has_gain and has_power:
        raise InvalidChannel("gain form (h_*, p_*) and power form (g_*) are mutually exclusive")
    if has_power:
        expected = set(_POWER_KEYS)
    else:
        expected = set(_GAIN_KEYS)
    missing = expected - keys
    extra = keys - expected
    if missing:
        raise InvalidChannel("missing keys: " + ", ".join(sorted(missing)))
    if extra:
        raise InvalidChannel("unknown keys: " + ", ".join(sorted(extra)))
    if has_power:
        return ReceivedPowers(**{k: doc[k] for k in _POWER_KEYS})
    return received_powers(ChannelConfig(**{k: doc[k] for k in _GAIN_KEYS}))


REFERENCE_CHANNEL = {"h_sd": 1.0, "h_rd": 0.5, "h_se": 2.0 / 3.0, "h_re": 2.0 / 3.0, "p_s": 10.0, "p_r": 10.0}
