import { describe, expect, it } from "vitest";

import { LiveClient } from "../src/client.js";
import { defaultCalibration, defaultConfig, defaultEngineSettings } from "../src/config.js";
import { ViewState } from "../src/viewState.js";
import type { StateMessage } from "../src/messages.js";

describe("view state machine", () => {
  it("blocks PLAY without an open stream", () => {
    const view = new ViewState();
    expect(() => view.setMode("PLAY")).toThrow();
    view.setConnection("open");
    view.setMode("PLAY");
    expect(view.mode).toBe("PLAY");
  });

  it("blocks CALIBRATE when the microphone was denied", () => {
    const view = new ViewState();
    view.micPermission = "denied";
    view.setMode("EDIT");
    expect(() => view.setMode("CALIBRATE")).toThrow();
  });

  it("cannot start with an invalid draft", () => {
    const view = new ViewState();
    view.setConnection("open");
    view.editDraft({ session_duration_s: 5 });
    expect(view.draftViolations).toEqual(["session_duration_s >= 10"]);
    expect(view.canStart).toBe(false);
    view.resetDraft();
    expect(view.canStart).toBe(true);
  });

  it("drops out of PLAY when the stream closes, keeping no fabricated state", () => {
    const view = new ViewState();
    view.setConnection("open");
    view.setMode("PLAY");
    const snapshot: StateMessage = {
      type: "STATE", clock_ms: 10, avatar_y: 0.5, score: 0, targets: [], mel: null, voiced: false,
    };
    view.apply(snapshot);
    view.setConnection("disconnected");
    expect(view.mode).not.toBe("PLAY");
    expect(view.latestState).toEqual(snapshot); // last real state, nothing invented
  });

  it("tracks server messages", () => {
    const view = new ViewState();
    view.apply({ type: "WARNING", message: "late chunk" });
    view.apply({ type: "SESSION_SAVED", session_id: "abc" });
    view.apply({ type: "EVENT", event: { t_ms: 9, kind: "HIT", target_id: 1 } });
    expect(view.warnings).toEqual(["late chunk"]);
    expect(view.sessionSavedId).toBe("abc");
    expect(view.lastEventAt["HIT"]).toBe(9);
  });
});

describe("live client guard rails", () => {
  it("refuses to send START for an invalid draft", () => {
    const sent: Uint8Array[] = [];
    const client = new LiveClient({ send: (d) => sent.push(d), close: () => {} });
    const violations = client.start({
      patientId: "p01",
      config: { ...defaultConfig(), session_duration_s: 5 },
      calibration: defaultCalibration(),
      engine: defaultEngineSettings(),
      sampleRate: 44100,
    });
    expect(violations).toEqual(["session_duration_s >= 10"]);
    expect(sent).toHaveLength(0);
    expect(() => client.sendAudio(new Float32Array(10), 0)).toThrow();
  });
});
