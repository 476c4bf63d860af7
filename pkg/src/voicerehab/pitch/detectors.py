"""The seven classical pitch estimators behind ``detect_f0``.

Every detector maps one frame to a candidate fundamental plus a normalized
periodicity confidence in [0, 1], so a single engine-level voicing threshold
works across methods:

* ACF      -- autocorrelation peak, confidence r(lag)/r(0)
* AMDF     -- average magnitude difference valley, confidence 1 - d(lag)/mean(d)
* YIN      -- cumulative mean normalized difference with absolute threshold,
              confidence 1 - d'(lag)
* MPM      -- McLeod normalized square difference, first key peak >= k * max,
              confidence nsdf(lag)
* CEPSTRUM -- real-cepstrum quefrency peak, confidence = peak prominence
              over the searched quefrency section
* HPS      -- harmonic product spectrum (4 log-products on a zero-padded FFT)
* SHS      -- subharmonic summation (8 subharmonics, weight decay 0.84)

Lag-domain methods refine the winning integer lag by parabolic interpolation
over three points; at an array boundary refinement is skipped. All functions
are pure: identical input produces a bit-identical result.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .types import Method

# Peak/valley selection constants. The *_MARGIN values admit near-tied
# candidates of the true peak so that the lag/frequency preference rules
# below can resolve period ambiguity deterministically.
YIN_PICK_THRESHOLD = 0.1
YIN_FALLBACK_MARGIN = 0.15
MPM_PEAK_FACTOR = 0.9
CEPSTRUM_PEAK_MARGIN = 0.75
AMDF_VALLEY_MARGIN = 0.1
AMDF_DIVISOR_MARGIN = 0.25
HPS_HARMONICS = 4
HPS_FUNDAMENTAL_WEIGHT = 2.0
HPS_TIE_MARGIN = 0.1
SHS_SUBHARMONICS = 8
SHS_WEIGHT_DECAY = 0.84
SHS_TIE_MARGIN = 0.98

# Fixed per-method confidence scales for the spectral peak-salience measures.
# CEPSTRUM uses the peak's z-score over the searched quefrency section (the
# usual cepstral-peak-prominence idea); HPS/SHS use peak-to-mean contrast.
CEPSTRUM_CONF_SCALE = 9.0
HPS_CONF_SCALE = 9.0
SHS_CONF_SCALE = 2.0

HPS_SUPPORT_FRACTION = 0.05
HPS_MAG_FLOOR = 0.05

# log-spectrum band kept for the cepstral transform; voice harmonics above
# this carry no pitch cues but their window ripple pollutes low quefrencies
CEPSTRUM_BAND_HZ = 4000.0
CEPSTRUM_BAND_TAPER_HZ = 500.0
CEPSTRUM_UPSAMPLE = 4


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


def _autocorr(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Linear (non-circular) autocorrelation r[0..max_lag] via FFT."""
    nfft = _next_pow2(2 * len(x))
    spec = np.fft.rfft(x, nfft)
    return np.fft.irfft(spec * np.conj(spec))[: max_lag + 1]


def _parabolic_refine(y: np.ndarray, i: int) -> float:
    """Vertex abscissa of the parabola through (i-1, i, i+1); i at a boundary
    skips refinement and is returned unchanged."""
    if i <= 0 or i >= len(y) - 1:
        return float(i)
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    if denom == 0.0:
        return float(i)
    delta = 0.5 * (y[i - 1] - y[i + 1]) / denom
    return float(i) + float(np.clip(delta, -1.0, 1.0))


def _parabolic_vertex_value(y: np.ndarray, i: int) -> float:
    """Height of the interpolated extremum at i; the sampled value at a
    boundary. Alignment-independent, so peak heights at fractional lags
    compare fairly."""
    if i <= 0 or i >= len(y) - 1:
        return float(y[i])
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    if denom == 0.0:
        return float(y[i])
    return float(y[i] - (y[i - 1] - y[i + 1]) ** 2 / (8.0 * denom))


def lag_range(sample_rate: int, f_min: float, f_max: float, frame_len: int) -> tuple[int, int]:
    """Integer lag search range [tau_min, tau_max] for the given band.

    tau_max is clamped to frame_len - 2; frames too short to cover the band
    at all raise ConfigError.
    """
    tau_min = max(2, int(np.ceil(sample_rate / f_max)))
    tau_max = min(int(np.floor(sample_rate / f_min)), frame_len - 2)
    if tau_max <= tau_min + 1:
        raise ConfigError(
            f"frame of {frame_len} samples cannot cover [{f_min}, {f_max}] Hz at {sample_rate} Hz"
        )
    return tau_min, tau_max


def _local_maxima(y: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Indices i in [lo, hi] with y[i-1] < y[i] >= y[i+1]."""
    inner = np.arange(max(lo, 1), min(hi, len(y) - 2) + 1)
    mask = (y[inner] > y[inner - 1]) & (y[inner] >= y[inner + 1])
    return inner[mask]


def _clamp01(v: float) -> float:
    return float(min(1.0, max(0.0, v)))


# ---------------------------------------------------------------------------
# time/lag domain
# ---------------------------------------------------------------------------

def acf_detect(x: np.ndarray, sample_rate: int, tau_min: int, tau_max: int):
    x = x - x.mean()
    n = len(x)
    r = _autocorr(x, tau_max + 1)
    if r[0] <= 0.0:
        return None, 0.0
    tau = int(tau_min + np.argmax(r[tau_min : tau_max + 1]))
    # r shrinks with lag because the overlap shrinks; undo that bias for the
    # confidence but keep the biased peak search (it prefers the period over
    # its multiples)
    conf = _clamp01(r[tau] / r[0] * n / (n - tau))
    lag = _parabolic_refine(r, tau)
    return sample_rate / lag, conf


def amdf_detect(x: np.ndarray, sample_rate: int, tau_min: int, tau_max: int):
    x = x - x.mean()
    n = len(x)
    lo = max(1, tau_min - 1)
    d = np.empty(tau_max + 2 - lo)
    for i, tau in enumerate(range(lo, tau_max + 2)):
        d[i] = np.abs(x[: n - tau] - x[tau:]).mean()
    section = d[tau_min - lo : tau_max + 1 - lo]
    d_mean = float(section.mean())
    if d_mean <= 0.0:
        return None, 0.0
    d_min = float(section.min())
    # valleys near the global minimum, earliest lag wins (period, not multiples)
    margin = d_min + AMDF_VALLEY_MARGIN * (d_mean - d_min)
    idx = np.arange(1, len(d) - 1)
    valleys = idx[(d[idx] < d[idx - 1]) & (d[idx] <= d[idx + 1]) & (d[idx] <= margin)]
    valleys = valleys[(valleys + lo >= tau_min) & (valleys + lo <= tau_max)]
    if len(valleys) == 0:
        tau = int(tau_min + np.argmin(section))
    else:
        tau = int(valleys[0] + lo)
    # sub-sample misalignment can make the valley at the true period shallower
    # than at its multiples; accept a credible valley at an integer divisor
    divisor_bar = d_min + AMDF_DIVISOR_MARGIN * (d_mean - d_min)
    for m in range(5, 1, -1):
        j = int(round(tau / m))
        if j < tau_min or j > tau_max:
            continue
        if float(d[j - 1 - lo : j + 2 - lo].min()) <= divisor_bar:
            tau = int(j - 1 + np.argmin(d[j - 1 - lo : j + 2 - lo]))
            break
    conf = _clamp01(1.0 - d[tau - lo] / d_mean)
    lag = _parabolic_refine(d, tau - lo) + lo
    return sample_rate / lag, conf


def yin_cmnd(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Cumulative mean normalized difference d'[0..max_lag]; d'[0] == 1."""
    n = len(x)
    energy = np.concatenate(([0.0], np.cumsum(x * x)))
    r = _autocorr(x, max_lag)
    taus = np.arange(max_lag + 1)
    diff = energy[n - taus] + (energy[n] - energy[taus]) - 2.0 * r
    diff = np.maximum(diff, 0.0)
    out = np.ones(max_lag + 1)
    cums = np.cumsum(diff[1:])
    nonzero = cums > 0.0
    out[1:][nonzero] = diff[1:][nonzero] * taus[1:][nonzero] / cums[nonzero]
    return out


def yin_detect(x: np.ndarray, sample_rate: int, tau_min: int, tau_max: int):
    x = x - x.mean()
    d = yin_cmnd(x, tau_max + 1)
    tau = None
    for t in range(tau_min, tau_max + 1):
        if d[t] < YIN_PICK_THRESHOLD:
            while t + 1 <= tau_max and d[t + 1] < d[t]:
                t += 1
            tau = t
            break
    if tau is None:
        # no dip under the absolute threshold; the cumulative mean deflates
        # d' at deep lags, so prefer the earliest dip near the global min
        # over the global min itself
        section = d[tau_min : tau_max + 1]
        d_min = float(section.min())
        bar = d_min + YIN_FALLBACK_MARGIN * (1.0 - d_min)
        idx = np.arange(max(tau_min, 1), min(tau_max, len(d) - 2) + 1)
        dips = idx[(d[idx] < d[idx - 1]) & (d[idx] <= d[idx + 1]) & (d[idx] <= bar)]
        tau = int(dips[0]) if len(dips) else int(tau_min + np.argmin(section))
    conf = _clamp01(1.0 - d[tau])
    lag = _parabolic_refine(d, tau)
    return sample_rate / lag, conf


def mpm_nsdf(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Normalized square difference nsdf[0..max_lag]; nsdf[0] == 1."""
    n = len(x)
    energy = np.concatenate(([0.0], np.cumsum(x * x)))
    r = _autocorr(x, max_lag)
    taus = np.arange(max_lag + 1)
    m = energy[n - taus] + (energy[n] - energy[taus])
    out = np.zeros(max_lag + 1)
    nonzero = m > 0.0
    out[nonzero] = 2.0 * r[nonzero] / m[nonzero]
    return out


def mpm_detect(x: np.ndarray, sample_rate: int, tau_min: int, tau_max: int):
    x = x - x.mean()
    nsdf = mpm_nsdf(x, tau_max + 1)
    peaks = _local_maxima(nsdf, tau_min, tau_max)
    peaks = peaks[nsdf[peaks] > 0.0]
    if len(peaks) == 0:
        return None, 0.0
    n_max = float(nsdf[peaks].max())
    chosen = peaks[nsdf[peaks] >= MPM_PEAK_FACTOR * n_max][0]
    conf = _clamp01(nsdf[chosen])
    lag = _parabolic_refine(nsdf, int(chosen))
    return sample_rate / lag, conf


# ---------------------------------------------------------------------------
# frequency domain
# ---------------------------------------------------------------------------

def _magnitude_spectrum(x: np.ndarray, pad_factor: int, windowed: bool) -> tuple[np.ndarray, int]:
    nfft = _next_pow2(pad_factor * len(x))
    if windowed:
        x = x * np.hanning(len(x))
    return np.abs(np.fft.rfft(x, nfft)), nfft


def cepstrum_detect(x: np.ndarray, sample_rate: int, tau_min: int, tau_max: int):
    """Real-cepstrum quefrency peak.

    Two details make the textbook method usable on this frame size:
    half-wave rectification regenerates harmonics, so near-sinusoidal voices
    produce log-spectrum ripple at all (a lone spectral lobe has no ripple);
    and the quefrency axis is upsampled so peak heights at fractional
    periods are not attenuated relative to their aligned multiples.
    """
    x = x - x.mean()
    pos = np.maximum(x, 0.0)
    neg = np.maximum(-x, 0.0)
    rect = pos if float(np.sum(pos**2)) >= float(np.sum(neg**2)) else neg
    rect = rect - rect.mean()
    # rectangular window: a tapered window widens spectral lobes beyond the
    # harmonic spacing of low-pitched voices
    mag, nfft = _magnitude_spectrum(rect, 2, windowed=False)
    peak_mag = mag.max()
    if peak_mag <= 0.0:
        return None, 0.0
    logmag = np.log(mag + 1e-2 * peak_mag)
    logmag -= logmag.mean()
    # keep only the voice band of the log-spectrum
    band_lo = min(CEPSTRUM_BAND_HZ, 0.4 * sample_rate) * nfft / sample_rate
    band_hi = band_lo + CEPSTRUM_BAND_TAPER_HZ * nfft / sample_rate
    bins = np.arange(len(logmag))
    taper = np.clip((band_hi - bins) / (band_hi - band_lo), 0.0, 1.0)
    up = CEPSTRUM_UPSAMPLE
    cep = np.fft.irfft(logmag * taper, nfft * up)
    lo, hi = tau_min * up, tau_max * up
    section = cep[lo : hi + 1]
    peaks = _local_maxima(cep, lo, hi)
    peaks = peaks[cep[peaks] > 0.0]
    if len(peaks) == 0:
        # envelope tail only; no periodicity evidence
        q = int(lo + np.argmax(section))
        if cep[q] <= 0.0:
            return None, 0.0
    else:
        # quefrency peaks repeat at multiples of the true period; take the
        # earliest within margin of the tallest
        heights = np.array([_parabolic_vertex_value(cep, int(p)) for p in peaks])
        near = peaks[heights >= CEPSTRUM_PEAK_MARGIN * float(heights.max())]
        q = int(near[0])
    prominence = (cep[q] - float(section.mean())) / (float(section.std()) + 1e-12)
    conf = _clamp01(prominence / CEPSTRUM_CONF_SCALE)
    lag = _parabolic_refine(cep, q) / up
    return sample_rate / lag, conf


def _bin_range(sample_rate: int, nfft: int, n_bins: int, f_min: float, f_max: float,
               harmonics: int) -> tuple[int, int]:
    k_min = max(1, int(np.ceil(f_min * nfft / sample_rate)))
    k_max = min(int(np.floor(f_max * nfft / sample_rate)), (n_bins - 1) // harmonics)
    if k_max <= k_min + 1:
        raise ConfigError(f"no spectral candidates in [{f_min}, {f_max}] Hz")
    return k_min, k_max


def _tolerant_harmonic_mags(mag: np.ndarray, ks: np.ndarray, h: int) -> np.ndarray:
    """mag around bins h*ks, taking the max over a small radius.

    A candidate half a bin off the true fundamental lands (h - 1) / 2 bins
    off at harmonic h; sampling the neighborhood max keeps such candidates
    from losing their high harmonics to grid misalignment.
    """
    radius = h // 2
    idx = h * ks
    out = mag[np.minimum(idx, len(mag) - 1)].copy()
    for off in range(-radius, radius + 1):
        if off == 0:
            continue
        probe = np.clip(idx + off, 0, len(mag) - 1)
        out = np.maximum(out, mag[probe])
    return out


def hps_detect(x: np.ndarray, sample_rate: int, f_min: float, f_max: float):
    mag, nfft = _magnitude_spectrum(x, 4, windowed=True)
    k_min, k_max = _bin_range(sample_rate, nfft, len(mag), f_min, f_max, HPS_HARMONICS)
    peak_mag = mag.max()
    if peak_mag <= 0.0:
        return None, 0.0
    ks = np.arange(k_min, k_max + 1)
    floor = HPS_MAG_FLOOR * peak_mag
    # extra weight on the fundamental bin keeps lobe-skirt leakage in the
    # higher products from outvoting it
    logprod = HPS_FUNDAMENTAL_WEIGHT * np.log(mag[ks] + floor)
    for h in range(2, HPS_HARMONICS + 1):
        logprod += np.log(_tolerant_harmonic_mags(mag, ks, h) + floor)
    # a candidate with no energy in its own fundamental bin is a spectral
    # subharmonic artifact, not a pitch
    supported = mag[ks] >= HPS_SUPPORT_FRACTION * mag[ks].max()
    search = np.where(supported, logprod, -np.inf)
    # equal-harmonic signals tie the fundamental with its multiples; among
    # near-tied candidates prefer the strongest fundamental bin, then the
    # lowest frequency
    near = np.flatnonzero(search >= float(search.max()) - HPS_TIE_MARGIN)
    strong = near[mag[ks[near]] >= 0.9 * float(mag[ks[near]].max())]
    best = int(strong[0])
    conf = _clamp01((logprod[best] - float(logprod.mean())) / HPS_CONF_SCALE)
    k = _parabolic_refine(logprod, best) + k_min
    return k * sample_rate / nfft, conf


def shs_detect(x: np.ndarray, sample_rate: int, f_min: float, f_max: float):
    mag, nfft = _magnitude_spectrum(x, 4, windowed=True)
    k_min, k_max = _bin_range(sample_rate, nfft, len(mag), f_min, f_max, 1)
    if mag.max() <= 0.0:
        return None, 0.0
    ks = np.arange(k_min, k_max + 1)
    salience = np.zeros(len(ks))
    for h in range(1, SHS_SUBHARMONICS + 1):
        valid = h * ks < len(mag)
        vals = _tolerant_harmonic_mags(mag, ks[valid], h)
        salience[valid] += (SHS_WEIGHT_DECAY ** (h - 1)) * vals
    mean_sal = float(salience.mean())
    if mean_sal <= 0.0:
        return None, 0.0
    # near-tied saliences occur at multiples of the fundamental; prefer the
    # lowest candidate
    best = int(np.argmax(salience >= SHS_TIE_MARGIN * float(salience.max())))
    conf = _clamp01((salience[best] / mean_sal - 1.0) / SHS_CONF_SCALE)
    k = _parabolic_refine(salience, best) + k_min
    return k * sample_rate / nfft, conf


def run_method(method: Method, x: np.ndarray, sample_rate: int,
               f_min: float, f_max: float) -> tuple[float | None, float]:
    """Dispatch one frame to the selected estimator.

    Returns (refined f0 in Hz or None, confidence in [0, 1]).
    """
    if method in (Method.HPS, Method.SHS):
        fn = hps_detect if method is Method.HPS else shs_detect
        return fn(x, sample_rate, f_min, f_max)
    tau_min, tau_max = lag_range(sample_rate, f_min, f_max, len(x))
    fn = {
        Method.ACF: acf_detect,
        Method.AMDF: amdf_detect,
        Method.YIN: yin_detect,
        Method.MPM: mpm_detect,
        Method.CEPSTRUM: cepstrum_detect,
    }[method]
    return fn(x, sample_rate, tau_min, tau_max)
