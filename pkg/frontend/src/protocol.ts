/**
 * Length-prefixed JSON framing for the live stream: 4-byte big-endian
 * length + UTF-8 JSON body. Audio samples are base64 little-endian
 * float32. Works in both browser and node.
 */
import type { ClientMessage, ServerMessage } from "./messages.js";

const MAX_MESSAGE_BYTES = 8 * 1024 * 1024;

function bytesToBase64(bytes: Uint8Array): string {
  if (typeof Buffer !== "undefined") {
    return Buffer.from(bytes).toString("base64");
  }
  let binary = "";
  for (let i = 0; i < bytes.length; i += 0x8000) {
    binary += String.fromCharCode(...bytes.subarray(i, i + 0x8000));
  }
  return btoa(binary);
}

function base64ToBytes(b64: string): Uint8Array {
  if (typeof Buffer !== "undefined") {
    return new Uint8Array(Buffer.from(b64, "base64"));
  }
  const binary = atob(b64);
  const out = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) out[i] = binary.charCodeAt(i);
  return out;
}

export function encodeAudio(samples: Float32Array): string {
  const bytes = new Uint8Array(samples.length * 4);
  const view = new DataView(bytes.buffer);
  for (let i = 0; i < samples.length; i++) {
    view.setFloat32(i * 4, samples[i] ?? 0, true);
  }
  return bytesToBase64(bytes);
}

export function decodeAudio(b64: string): Float32Array {
  const bytes = base64ToBytes(b64);
  if (bytes.length % 4 !== 0) {
    throw new Error("audio payload is not whole float32 samples");
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  const out = new Float32Array(bytes.length / 4);
  for (let i = 0; i < out.length; i++) out[i] = view.getFloat32(i * 4, true);
  return out;
}

export function frameMessage(message: ClientMessage | ServerMessage): Uint8Array {
  const body = new TextEncoder().encode(JSON.stringify(message));
  if (body.length > MAX_MESSAGE_BYTES) {
    throw new Error(`message of ${body.length} bytes exceeds the frame limit`);
  }
  const out = new Uint8Array(4 + body.length);
  new DataView(out.buffer).setUint32(0, body.length, false);
  out.set(body, 4);
  return out;
}

/** Incremental deframer: feed arbitrary byte chunks, get whole messages. */
export class StreamDecoder {
  private buffer = new Uint8Array(0);

  feed(data: Uint8Array): ServerMessage[] {
    const merged = new Uint8Array(this.buffer.length + data.length);
    merged.set(this.buffer);
    merged.set(data, this.buffer.length);
    this.buffer = merged;

    const messages: ServerMessage[] = [];
    for (;;) {
      if (this.buffer.length < 4) return messages;
      const view = new DataView(this.buffer.buffer, this.buffer.byteOffset);
      const length = view.getUint32(0, false);
      if (length > MAX_MESSAGE_BYTES) {
        throw new Error(`declared frame of ${length} bytes exceeds the limit`);
      }
      if (this.buffer.length < 4 + length) return messages;
      const body = this.buffer.subarray(4, 4 + length);
      this.buffer = this.buffer.slice(4 + length);
      const parsed = JSON.parse(new TextDecoder().decode(body));
      if (typeof parsed !== "object" || parsed === null || !("type" in parsed)) {
        throw new Error("message must be a JSON object with a 'type'");
      }
      messages.push(parsed as ServerMessage);
    }
  }
}
