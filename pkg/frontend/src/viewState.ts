/**
 * Application state machine. Four modes; PLAY needs an open stream, EDIT
 * drafts can only be started once they validate, and every clinical value
 * on screen originates from a server message.
 */
import type { GameConfig, ServerMessage, StateMessage } from "./messages.js";
import { defaultConfig, validateConfig } from "./config.js";

export type Mode = "CALIBRATE" | "PLAY" | "EDIT" | "REVIEW";
export type ConnectionStatus = "disconnected" | "connecting" | "open" | "error";

export class ViewState {
  mode: Mode = "CALIBRATE";
  connection: ConnectionStatus = "disconnected";
  draft: GameConfig = defaultConfig();
  latestState: StateMessage | null = null;
  lastEventAt: Partial<Record<string, number>> = {};
  sessionSavedId: string | null = null;
  warnings: string[] = [];
  errorMessage: string | null = null;
  micPermission: "unknown" | "granted" | "denied" = "unknown";

  get draftViolations(): string[] {
    return validateConfig(this.draft);
  }

  /** START is only available for a valid draft over an open connection. */
  get canStart(): boolean {
    return this.draftViolations.length === 0 && this.connection === "open";
  }

  setMode(mode: Mode): void {
    if (mode === "PLAY" && this.connection !== "open") {
      throw new Error("PLAY mode requires an open live stream");
    }
    if (mode === "CALIBRATE" && this.micPermission === "denied") {
      throw new Error("microphone permission denied; calibration unavailable");
    }
    this.mode = mode;
  }

  setConnection(status: ConnectionStatus): void {
    this.connection = status;
    if (status !== "open" && this.mode === "PLAY") {
      // stream dropped: stay visually paused, never fabricate state
      this.mode = "CALIBRATE";
    }
  }

  editDraft(patch: Partial<GameConfig>): void {
    this.draft = { ...this.draft, ...patch };
  }

  resetDraft(): void {
    this.draft = defaultConfig();
  }

  apply(message: ServerMessage): void {
    switch (message.type) {
      case "STATE":
        this.latestState = message;
        break;
      case "EVENT":
        this.lastEventAt[message.event.kind] = message.event.t_ms;
        break;
      case "SESSION_SAVED":
        this.sessionSavedId = message.session_id;
        break;
      case "WARNING":
        this.warnings.push(message.message);
        break;
      case "ERROR":
        this.errorMessage = message.message;
        break;
    }
  }
}
