/**
 * Browser microphone capture. The audio callback only copies samples into
 * the chunker; encoding and sending happen on a timer outside the
 * real-time path.
 */
import { AudioChunker } from "./chunker.js";

export interface CaptureSession {
  sampleRate: number;
  chunker: AudioChunker;
  stop(): void;
}

export async function startCapture(chunkMs = 50): Promise<CaptureSession> {
  const stream = await navigator.mediaDevices.getUserMedia({ audio: true, video: false });
  const context = new AudioContext();
  const source = context.createMediaStreamSource(stream);
  const chunker = new AudioChunker(context.sampleRate, chunkMs);

  // ScriptProcessor keeps this dependency-free; the worklet path would need
  // a separately served module file
  const processor = context.createScriptProcessor(2048, 1, 1);
  processor.onaudioprocess = (event) => {
    chunker.push(event.inputBuffer.getChannelData(0));
  };
  source.connect(processor);
  processor.connect(context.destination);

  return {
    sampleRate: context.sampleRate,
    chunker,
    stop() {
      processor.disconnect();
      source.disconnect();
      for (const track of stream.getTracks()) track.stop();
      void context.close();
    },
  };
}
