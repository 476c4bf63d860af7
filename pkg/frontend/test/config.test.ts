import { describe, expect, it } from "vitest";

import { defaultConfig, validateConfig, withField } from "../src/config.js";

describe("level validation (server parity)", () => {
  it("accepts the defaults", () => {
    expect(validateConfig(defaultConfig())).toEqual([]);
  });

  it("reports the exact server string for a short session", () => {
    const draft = withField(defaultConfig(), "session_duration_s", 5);
    expect(validateConfig(draft)).toEqual(["session_duration_s >= 10"]);
  });

  it("reports every violation, not just the first", () => {
    const draft = {
      ...defaultConfig(),
      y_spread: 1.5,
      incoming_speed: 0,
    };
    const violations = validateConfig(draft);
    expect(violations).toHaveLength(2);
    expect(violations).toContain("y_spread in (0, 1]");
    expect(violations).toContain("incoming_speed > 0");
  });

  it("treats NaN fields as violations", () => {
    const draft = withField(defaultConfig(), "sensitivity", NaN);
    expect(validateConfig(draft)).toContain("sensitivity > 0");
  });

  it("covers the full constraint table", () => {
    const broken = {
      ...defaultConfig(),
      sensitivity: 0,
      x_spread: -1,
      y_spread: 0,
      incoming_speed: 0,
      voice_maintenance_ms: 0,
      session_duration_s: 1,
      hit_radius: 0.5,
    };
    expect(validateConfig(broken)).toEqual([
      "sensitivity > 0",
      "x_spread > 0",
      "y_spread in (0, 1]",
      "incoming_speed > 0",
      "voice_maintenance_ms > 0",
      "session_duration_s >= 10",
      "hit_radius in (0, 0.5)",
    ]);
  });
});
