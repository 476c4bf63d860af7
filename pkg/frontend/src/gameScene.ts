/**
 * Pure scene builder: one STATE snapshot in, a list of draw commands out.
 * Large, high-contrast shapes and at most a handful of interactive
 * elements; the canvas layer just executes the commands.
 */
import type { StateMessage } from "./messages.js";

export type SceneNode =
  | { kind: "rect"; x: number; y: number; w: number; h: number; color: string }
  | { kind: "circle"; x: number; y: number; r: number; color: string }
  | { kind: "text"; x: number; y: number; text: string; size: number; color: string }
  | { kind: "overlay"; text: string };

export interface SceneInput {
  state: StateMessage | null;
  sessionDurationS: number;
  paused: boolean;
  /** clock of the most recent HIT / MISS, for short visual feedback */
  lastHitAtMs?: number;
  lastMissAtMs?: number;
}

export const AVATAR_X = 0.18;
export const FEEDBACK_FLASH_MS = 400;

export function buildScene(input: SceneInput): SceneNode[] {
  const nodes: SceneNode[] = [
    { kind: "rect", x: 0, y: 0, w: 1, h: 1, color: "#10243a" },
  ];
  if (input.paused || input.state === null) {
    nodes.push({ kind: "overlay", text: "paused - waiting for the stream" });
    return nodes;
  }
  const s = input.state;

  for (const target of s.targets) {
    nodes.push({ kind: "circle", x: target.x, y: target.y, r: 0.05, color: "#ffd166" });
  }
  nodes.push({
    kind: "circle",
    x: AVATAR_X,
    y: s.avatar_y,
    r: 0.045,
    color: s.voiced ? "#06d6a0" : "#8aa3b8",
  });

  const remaining = Math.max(0, input.sessionDurationS - s.clock_ms / 1000);
  nodes.push({
    kind: "text", x: 0.02, y: 0.06, text: `score ${s.score}`, size: 0.05, color: "#ffffff",
  });
  nodes.push({
    kind: "text",
    x: 0.78,
    y: 0.06,
    text: `${remaining.toFixed(0)} s left`,
    size: 0.05,
    color: "#ffffff",
  });
  if (s.mel !== null) {
    nodes.push({
      kind: "text", x: 0.02, y: 0.97, text: `${s.mel.toFixed(1)} mel`, size: 0.04, color: "#9fd8ff",
    });
  }

  if (input.lastHitAtMs !== undefined && s.clock_ms - input.lastHitAtMs <= FEEDBACK_FLASH_MS) {
    nodes.push({ kind: "text", x: 0.45, y: 0.5, text: "HIT!", size: 0.1, color: "#06d6a0" });
  }
  if (input.lastMissAtMs !== undefined && s.clock_ms - input.lastMissAtMs <= FEEDBACK_FLASH_MS) {
    nodes.push({ kind: "text", x: 0.45, y: 0.6, text: "miss", size: 0.07, color: "#ef476f" });
  }
  return nodes;
}
