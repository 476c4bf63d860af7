import type { Calibration, EngineSettings, GameConfig } from "./messages.js";

export const CONFIG_VERSION = 1;

export function defaultConfig(): GameConfig {
  return {
    version: CONFIG_VERSION,
    sensitivity: 1.0,
    x_spread: 4.0,
    y_spread: 0.6,
    incoming_speed: 0.1,
    voice_maintenance_ms: 500.0,
    session_duration_s: 120.0,
    hit_radius: 0.08,
    seed: 0,
  };
}

export function defaultEngineSettings(): EngineSettings {
  return {
    method: "YIN",
    f_min: 60.0,
    f_max: 600.0,
    voicing_threshold: 0.5,
    silence_rms_floor: 0.01,
    median_window: 5,
  };
}

export function defaultCalibration(): Calibration {
  return { mel_low: 250.0, mel_high: 450.0 };
}

/**
 * Mirror of the server-side level validation, byte-for-byte identical
 * violation strings so the inline editor text matches server errors.
 */
export function validateConfig(cfg: GameConfig): string[] {
  const violations: string[] = [];
  if (!(cfg.sensitivity > 0)) violations.push("sensitivity > 0");
  if (!(cfg.x_spread > 0)) violations.push("x_spread > 0");
  if (!(cfg.y_spread > 0 && cfg.y_spread <= 1)) violations.push("y_spread in (0, 1]");
  if (!(cfg.incoming_speed > 0)) violations.push("incoming_speed > 0");
  if (!(cfg.voice_maintenance_ms > 0)) violations.push("voice_maintenance_ms > 0");
  if (!(cfg.session_duration_s >= 10)) violations.push("session_duration_s >= 10");
  if (!(cfg.hit_radius > 0 && cfg.hit_radius < 0.5)) violations.push("hit_radius in (0, 0.5)");
  return violations;
}

/** Numeric edit on a draft; unknown fields are rejected at compile time. */
export function withField<K extends keyof GameConfig>(
  cfg: GameConfig,
  field: K,
  value: GameConfig[K],
): GameConfig {
  return { ...cfg, [field]: value };
}
