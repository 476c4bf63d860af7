/** Wire types shared with the sync service. */

export interface GameConfig {
  version: number;
  sensitivity: number;
  x_spread: number;
  y_spread: number;
  incoming_speed: number;
  voice_maintenance_ms: number;
  session_duration_s: number;
  hit_radius: number;
  seed: number;
}

export interface Calibration {
  mel_low: number;
  mel_high: number;
}

export interface EngineSettings {
  method: string;
  f_min: number;
  f_max: number;
  voicing_threshold: number;
  silence_rms_floor: number;
  median_window: number;
}

export interface TargetView {
  id: number;
  x: number;
  y: number;
}

export interface StateMessage {
  type: "STATE";
  clock_ms: number;
  avatar_y: number;
  score: number;
  targets: TargetView[];
  mel: number | null;
  voiced: boolean;
}

export interface GameEventView {
  t_ms: number;
  kind: "SPAWN" | "HIT" | "MISS" | "PHONATION_START" | "PHONATION_STOP" | "SESSION_END";
  target_id: number | null;
}

export interface EventMessage {
  type: "EVENT";
  event: GameEventView;
}

export interface SessionSavedMessage {
  type: "SESSION_SAVED";
  session_id: string;
}

export interface WarningMessage {
  type: "WARNING";
  message: string;
}

export interface ErrorMessage {
  type: "ERROR";
  message: string;
}

export type ServerMessage =
  | StateMessage
  | EventMessage
  | SessionSavedMessage
  | WarningMessage
  | ErrorMessage;

export interface StartMessage {
  type: "START";
  patient_id: string;
  config: GameConfig;
  calibration: Calibration;
  engine: EngineSettings;
  sample_rate: number;
  frame_size?: number;
  hop?: number;
  session_id?: string;
}

export interface AudioChunkMessage {
  type: "AUDIO_CHUNK";
  samples: string; // base64 little-endian float32
  t_ms: number;
}

export interface StopMessage {
  type: "STOP";
}

export type ClientMessage = StartMessage | AudioChunkMessage | StopMessage;

export interface Trend {
  slope: number;
  intercept: number;
  n_points: number;
}

export interface SessionMetricsView {
  phonation_time_ms: number;
  pitch_change_mel: number;
  duration_s: number;
  reaction_time_ms: number | null;
  score: number;
  hit_count: number;
  miss_count: number;
  spawn_count: number;
}

export interface ProgressReport {
  patient_id: string;
  n_sessions: number;
  trends: Record<string, Trend>;
  latest: SessionMetricsView;
  suggestions: string[];
}
