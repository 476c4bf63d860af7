/**
 * Transport-agnostic live client plus the REST calls. The browser app
 * hands in a real WebSocket; tests hand in anything that moves bytes.
 */
import type {
  Calibration,
  ClientMessage,
  EngineSettings,
  GameConfig,
  ProgressReport,
  ServerMessage,
} from "./messages.js";
import { validateConfig } from "./config.js";
import { encodeAudio, frameMessage, StreamDecoder } from "./protocol.js";

export interface BinaryTransport {
  send(data: Uint8Array): void;
  close(): void;
}

export class LiveClient {
  private decoder = new StreamDecoder();
  private startSent = false;
  private stopped = false;
  onMessage: (message: ServerMessage) => void = () => {};

  constructor(private readonly transport: BinaryTransport) {}

  /** Refuses to start an invalid draft; returns the violations instead. */
  start(params: {
    patientId: string;
    config: GameConfig;
    calibration: Calibration;
    engine: EngineSettings;
    sampleRate: number;
    sessionId?: string;
  }): string[] {
    const violations = validateConfig(params.config);
    if (violations.length > 0) return violations;
    this.sendMessage({
      type: "START",
      patient_id: params.patientId,
      config: params.config,
      calibration: params.calibration,
      engine: params.engine,
      sample_rate: params.sampleRate,
      session_id: params.sessionId,
    });
    this.startSent = true;
    return [];
  }

  sendAudio(samples: Float32Array, tMs: number): void {
    if (!this.startSent || this.stopped) {
      throw new Error("audio can only be streamed between START and STOP");
    }
    this.sendMessage({ type: "AUDIO_CHUNK", samples: encodeAudio(samples), t_ms: tMs });
  }

  stop(): void {
    if (!this.startSent || this.stopped) return;
    this.stopped = true;
    this.sendMessage({ type: "STOP" });
  }

  /** Wire incoming transport bytes here. */
  handleIncoming(data: Uint8Array): void {
    for (const message of this.decoder.feed(data)) {
      this.onMessage(message);
    }
  }

  private sendMessage(message: ClientMessage): void {
    this.transport.send(frameMessage(message));
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class RestClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch,
    private readonly token?: string,
  ) {}

  private headers(): Record<string, string> {
    return this.token ? { Authorization: `Bearer ${this.token}` } : {};
  }

  /** null means 404: no data for this patient yet. */
  async fetchProgress(patientId: string): Promise<ProgressReport | null> {
    const res = await this.fetchFn(
      `${this.baseUrl}/api/v1/patients/${encodeURIComponent(patientId)}/progress`,
      { headers: this.headers() },
    );
    if (res.status === 404) return null;
    if (!res.ok) throw new Error(`progress request failed: ${res.status}`);
    return (await res.json()) as ProgressReport;
  }
}
