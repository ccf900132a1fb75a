# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
AWGN calibrated from Eb/N0 and a static multipath channel with a cyclic
prefix, so that the channel acts as a circular convolution on each block.
"""

import logging
from dataclasses import dataclass

import numpy as np

from sefdm_im.utils.exceptions import ConfigurationError, UsageError


@dataclass(frozen=True)
class NoiseModel:
    ebn0_db: float
    N0: float

    @property
    def sigma(self):
        """Per-dimension standard deviation."""
        return float(np.sqrt(self.N0 / 2.0))


def ebn0_to_n0(ebn0_db, scheme, coding_rate, G, N):
    """
    N0 for a block of unit-energy subcarriers carrying R * L * G information
    bits: Eb = N / (R * L * G).
    """
    if not 0.0 < coding_rate <= 1.0:
        raise ConfigurationError(f"Coding rate must lie in (0, 1], got {coding_rate}")
    info_bits = coding_rate * scheme.L * G
    eb = N / info_bits
    return float(eb / 10.0 ** (ebn0_db / 10.0))


def noise_model(ebn0_db, scheme, coding_rate, G, N):
    return NoiseModel(
        ebn0_db=float(ebn0_db), N0=ebn0_to_n0(ebn0_db, scheme, coding_rate, G, N)
    )


def awgn(X, N0, rng):
    """
    Adds circularly symmetric Gaussian noise of variance N0 per complex
    sample (N0 / 2 per real dimension).
    """
    if N0 < 0:
        raise ConfigurationError(f"N0 must be non-negative, got {N0}")
    X = np.asarray(X)
    sigma = np.sqrt(N0 / 2.0)
    W = sigma * (rng.standard_normal(X.shape) + 1j * rng.standard_normal(X.shape))
    return X + W


@dataclass(frozen=True)
class MultipathChannel:
    """
    Static taps given as (delay in samples, complex gain) pairs.
    """

    taps: tuple
    cp_len: int

    def __post_init__(self):
        if not self.taps:
            raise ConfigurationError("A multipath channel needs at least one tap")
        for delay, _ in self.taps:
            if int(delay) != delay or delay < 0:
                raise ConfigurationError(f"Tap delays must be non-negative integers, got {delay}")
        if self.cp_len < self.max_delay:
            raise ConfigurationError(
                f"Cyclic prefix of {self.cp_len} samples is shorter than the "
                f"maximum delay {self.max_delay}"
            )

    @property
    def max_delay(self):
        return int(max(delay for delay, _ in self.taps))

    def impulse_response(self):
        h = np.zeros(self.max_delay + 1, dtype=np.complex128)
        for delay, gain in self.taps:
            h[int(delay)] += gain
        return h


# Static three-tap profile with one deep notch in band
STATIC_3TAP = MultipathChannel(
    taps=((0, 0.9137 + 0j), (2, 0.3179 + 0j), (3, -0.2532j)), cp_len=3
)

CHANNELS = {"awgn": None, "paper3tap": STATIC_3TAP}

# Older spellings still accepted in run configs
CHANNEL_ALIASES = {"static3tap": "paper3tap"}


def get_channel(name, cp_len=None):
    """Looks up a named channel, optionally overriding the prefix length."""
    name = CHANNEL_ALIASES.get(str(name).lower(), str(name).lower())
    if name not in CHANNELS:
        raise ConfigurationError(f"Unknown channel {name}, expected one of {sorted(CHANNELS)}")
    channel = CHANNELS[name]
    if channel is not None and cp_len is not None:
        channel = MultipathChannel(taps=channel.taps, cp_len=int(cp_len))
    return channel


def multipath_apply(X, channel):
    """
    Prepends the cyclic prefix, convolves with the taps and strips the
    prefix. Equivalent to a circular convolution of every block.
    """
    X = np.asarray(X)
    if X.ndim not in (1, 2):
        raise UsageError(f"X must have shape (N,) or (B, N), got {X.shape}")
    rows = np.atleast_2d(X)
    N = rows.shape[1]
    cp = channel.cp_len
    if cp > N:
        raise ConfigurationError(f"Cyclic prefix of {cp} samples exceeds the block length {N}")
    with_cp = np.concatenate([rows[:, N - cp :], rows], axis=1) if cp else rows
    Y = np.zeros_like(rows, dtype=np.complex128)
    for delay, gain in channel.taps:
        Y += gain * with_cp[:, cp - int(delay) : cp - int(delay) + N]
    return Y[0] if X.ndim == 1 else Y


def circulant_matrix(channel, N):
    """H[n, m] = h[(n - m) mod N]."""
    h = np.zeros(N, dtype=np.complex128)
    for delay, gain in channel.taps:
        h[int(delay) % N] += gain
    n = np.arange(N)
    return h[(n[:, None] - n[None, :]) % N]


def effective_correlation(cm, channel):
    """Phi^H H Phi, the correlation seen by the detector through the channel."""
    H = circulant_matrix(channel, cm.N)
    C_eff = cm.hermitian @ H @ cm.phi
    logging.debug(f"effective correlation built for N={cm.N}, alpha={cm.alpha}")
    return C_eff


def frequency_response(channel, n_points):
    """
    Complex response H(f) = sum_l h_l exp(-j 2 pi f d_l) at f = i / n_points.
    """
    if n_points < channel.max_delay + 1:
        raise ConfigurationError(
            f"Need at least {channel.max_delay + 1} points, got {n_points}"
        )
    return np.fft.fft(channel.impulse_response(), int(n_points))
