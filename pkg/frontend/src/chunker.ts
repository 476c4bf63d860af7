/**
 * Turns arbitrary capture callbacks into ordered audio chunks of at most
 * 100 ms, with strictly increasing timestamps. The capture path only
 * enqueues; draining happens on the caller's schedule.
 */

export interface AudioChunk {
  samples: Float32Array;
  tMs: number;
}

export const MAX_CHUNK_MS = 100;

export class AudioChunker {
  private readonly chunkSamples: number;
  private pending: Float32Array[] = [];
  private pendingLength = 0;
  private samplesSent = 0;
  private lastTimestamp = -1;

  constructor(
    private readonly sampleRate: number,
    chunkMs: number = 50,
  ) {
    if (chunkMs <= 0 || chunkMs > MAX_CHUNK_MS) {
      throw new Error(`chunk size must be in (0, ${MAX_CHUNK_MS}] ms`);
    }
    this.chunkSamples = Math.round((chunkMs / 1000) * sampleRate);
  }

  /** Enqueue captured samples (real-time safe: no allocation beyond copy). */
  push(samples: Float32Array): void {
    this.pending.push(samples.slice());
    this.pendingLength += samples.length;
  }

  /** Whole chunks accumulated so far, timestamped by sample position. */
  drain(): AudioChunk[] {
    const out: AudioChunk[] = [];
    while (this.pendingLength >= this.chunkSamples) {
      const chunk = new Float32Array(this.chunkSamples);
      let filled = 0;
      while (filled < this.chunkSamples) {
        const head = this.pending[0]!;
        const take = Math.min(head.length, this.chunkSamples - filled);
        chunk.set(head.subarray(0, take), filled);
        filled += take;
        if (take === head.length) {
          this.pending.shift();
        } else {
          this.pending[0] = head.subarray(take);
        }
        this.pendingLength -= take;
      }
      let tMs = (this.samplesSent / this.sampleRate) * 1000;
      if (tMs <= this.lastTimestamp) {
        tMs = this.lastTimestamp + 1e-3; // strictly increasing, always
      }
      this.lastTimestamp = tMs;
      this.samplesSent += this.chunkSamples;
      out.push({ samples: chunk, tMs });
    }
    return out;
  }

  /** Remaining partial chunk, if any (used on stop). */
  flush(): AudioChunk | null {
    if (this.pendingLength === 0) return null;
    const chunk = new Float32Array(this.pendingLength);
    let filled = 0;
    for (const part of this.pending) {
      chunk.set(part, filled);
      filled += part.length;
    }
    this.pending = [];
    this.pendingLength = 0;
    let tMs = (this.samplesSent / this.sampleRate) * 1000;
    if (tMs <= this.lastTimestamp) tMs = this.lastTimestamp + 1e-3;
    this.lastTimestamp = tMs;
    this.samplesSent += chunk.length;
    return { samples: chunk, tMs };
  }
}
