import numpy as np
import pytest

from voicerehab.errors import ConfigError
from voicerehab.evalharness.synth import SignalSpec, render_signal, synthesize
from voicerehab.pitch.detectors import lag_range, mpm_nsdf, run_method, yin_cmnd
from voicerehab.pitch.engine import detect_f0
from voicerehab.pitch.types import ALL_METHODS, AudioFrame, EngineSettings, Method

SR = 44100


def sine_frame(f0: float, n: int = 2048, amp: float = 0.5, sr: int = SR) -> AudioFrame:
    t = np.arange(n) / sr
    return AudioFrame(samples=amp * np.sin(2 * np.pi * f0 * t), sample_rate=sr)


def test_yin_on_pure_sine_220():
    est = detect_f0(sine_frame(220.0), EngineSettings(method=Method.YIN))
    assert est.voiced
    assert 219.5 <= est.f0_hz <= 220.5


@pytest.mark.parametrize("method", ALL_METHODS)
def test_all_zero_frame_is_unvoiced_with_zero_confidence(method):
    frame = AudioFrame(samples=np.zeros(2048), sample_rate=SR)
    est = detect_f0(frame, EngineSettings(method=method))
    assert not est.voiced
    assert est.confidence == 0.0


def test_mpm_on_noisy_sawtooth_150():
    spec = SignalSpec(
        waveform="sawtooth",
        f0_contour=((0.0, 150.0),),
        duration_s=0.3,
        noise_snr_db=20.0,
        seed=123,
    )
    frames, _ = synthesize(spec)
    est = detect_f0(frames[len(frames) // 2], EngineSettings(method=Method.MPM))
    assert est.voiced
    assert abs(est.f0_hz - 150.0) <= 1.5


def test_yin_cmnd_normalization_at_zero_lag():
    # d'(0) = 1 by definition for any non-silent frame
    for seed in (0, 1, 2):
        rng = np.random.default_rng(seed)
        x = rng.uniform(-0.5, 0.5, 2048)
        assert yin_cmnd(x, 600)[0] == 1.0
    assert yin_cmnd(sine_frame(220.0).samples, 600)[0] == 1.0


def test_mpm_nsdf_is_one_at_zero_lag():
    assert mpm_nsdf(sine_frame(150.0).samples, 600)[0] == pytest.approx(1.0)


@pytest.mark.parametrize("method", ALL_METHODS)
def test_detect_is_pure(method):
    frame = sine_frame(179.0)
    settings = EngineSettings(method=method)
    assert detect_f0(frame, settings) == detect_f0(frame, settings)


@pytest.mark.parametrize("method", ALL_METHODS)
def test_silence_floor_gates_voicing(method):
    quiet = sine_frame(220.0, amp=0.005)
    est = detect_f0(quiet, EngineSettings(method=method, silence_rms_floor=0.01))
    assert not est.voiced
    assert est.confidence == 0.0


@pytest.mark.parametrize("method", ALL_METHODS)
def test_voiced_estimates_stay_in_band(method):
    settings = EngineSettings(method=method, f_min=60.0, f_max=600.0)
    for f0 in (61.0, 300.0, 599.0):
        spec = SignalSpec(waveform="sawtooth", f0_contour=((0.0, f0),), duration_s=0.15, seed=2)
        frame = synthesize(spec)[0][0]
        est = detect_f0(frame, settings)
        if est.voiced:
            assert settings.f_min <= est.f0_hz <= settings.f_max


def test_octave_sanity_sweep():
    # harmonic tone sweep: accurate, or unvoiced, or at least not confident
    freqs = np.geomspace(80.0, 500.0, 20)
    for f0 in freqs:
        spec = SignalSpec(
            waveform="sawtooth", f0_contour=((0.0, float(f0)),), duration_s=0.15, seed=3
        )
        frames, _ = synthesize(spec)
        frame = frames[len(frames) // 2]
        for method in ALL_METHODS:
            est = detect_f0(frame, EngineSettings(method=method))
            if est.voiced and abs(est.f0_hz - f0) / f0 > 0.05:
                assert est.confidence <= 0.9, (
                    f"{method} confidently wrong at {f0:.1f} Hz: "
                    f"{est.f0_hz:.1f} Hz conf {est.confidence:.2f}"
                )


def test_short_frame_still_detects_midrange():
    est = detect_f0(sine_frame(220.0, n=512), EngineSettings(method=Method.YIN))
    assert est.voiced
    assert abs(est.f0_hz - 220.0) < 1.0


def test_lag_range_rejects_impossible_band():
    with pytest.raises(ConfigError):
        lag_range(SR, 60.0, 65.0, 512)


def test_settings_inconsistent_with_rate():
    frame = sine_frame(220.0, sr=8000)
    with pytest.raises(ConfigError):
        detect_f0(frame, EngineSettings(f_max=5000.0))


@pytest.mark.parametrize("method", ALL_METHODS)
def test_white_noise_rarely_voiced(method):
    rng = np.random.default_rng(42)
    voiced = 0
    for _ in range(10):
        x = np.clip(rng.normal(0.0, 0.1, 2048), -1, 1)
        frame = AudioFrame(samples=x, sample_rate=SR)
        if detect_f0(frame, EngineSettings(method=method)).voiced:
            voiced += 1
    assert voiced <= 3


def test_run_method_dispatches_every_method():
    frame = sine_frame(200.0)
    for method in ALL_METHODS:
        f0, conf = run_method(method, frame.samples, SR, 60.0, 600.0)
        assert f0 is None or f0 > 0
        assert 0.0 <= conf <= 1.0
