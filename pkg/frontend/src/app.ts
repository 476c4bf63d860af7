/**
 * DOM wiring: four big buttons for the modes, the live canvas, the level
 * editor form and the progress charts. All clinical numbers on screen come
 * straight from server messages.
 */
import { LiveClient, RestClient } from "./client.js";
import { defaultCalibration, defaultEngineSettings } from "./config.js";
import { buildScene } from "./gameScene.js";
import { drawScene } from "./canvas.js";
import { buildProgressView } from "./progressView.js";
import { startCapture, type CaptureSession } from "./capture.js";
import { encodeAudio, frameMessage } from "./protocol.js";
import { ViewState } from "./viewState.js";
import type { GameConfig } from "./messages.js";

const EDITABLE_FIELDS: (keyof GameConfig)[] = [
  "sensitivity",
  "x_spread",
  "y_spread",
  "incoming_speed",
  "voice_maintenance_ms",
  "session_duration_s",
  "hit_radius",
  "seed",
];

export function mountApp(root: HTMLElement, serverBase: string): void {
  const view = new ViewState();
  const wsUrl = serverBase.replace(/^http/, "ws") + "/ws/live";
  const rest = new RestClient(serverBase);

  root.innerHTML = `
    <nav>
      <button data-mode="CALIBRATE">calibrate</button>
      <button data-mode="PLAY">play</button>
      <button data-mode="EDIT">level editor</button>
      <button data-mode="REVIEW">progress</button>
    </nav>
    <section id="status"></section>
    <canvas id="game" width="960" height="540"></canvas>
    <form id="editor"></form>
    <section id="violations"></section>
    <section id="progress"></section>
    <button id="start" disabled>start session</button>
    <button id="stop">stop</button>
  `;
  const canvas = root.querySelector<HTMLCanvasElement>("#game")!;
  const ctx = canvas.getContext("2d")!;
  const statusEl = root.querySelector<HTMLElement>("#status")!;
  const violationsEl = root.querySelector<HTMLElement>("#violations")!;
  const editorEl = root.querySelector<HTMLFormElement>("#editor")!;
  const progressEl = root.querySelector<HTMLElement>("#progress")!;
  const startBtn = root.querySelector<HTMLButtonElement>("#start")!;
  const stopBtn = root.querySelector<HTMLButtonElement>("#stop")!;

  let socket: WebSocket | null = null;
  let client: LiveClient | null = null;
  let capture: CaptureSession | null = null;
  let pump: number | null = null;

  function render(): void {
    statusEl.textContent =
      `${view.mode} | ${view.connection}` +
      (view.errorMessage ? ` | ${view.errorMessage}` : "") +
      (view.sessionSavedId ? ` | saved ${view.sessionSavedId}` : "");
    violationsEl.textContent = view.draftViolations.join("; ");
    startBtn.disabled = !view.canStart;
    drawScene(
      ctx,
      buildScene({
        state: view.latestState,
        sessionDurationS: view.draft.session_duration_s,
        paused: view.connection !== "open",
        lastHitAtMs: view.lastEventAt["HIT"],
        lastMissAtMs: view.lastEventAt["MISS"],
      }),
    );
  }

  function connect(): void {
    view.setConnection("connecting");
    socket = new WebSocket(wsUrl);
    socket.binaryType = "arraybuffer";
    client = new LiveClient({
      send: (data) => socket!.send(data),
      close: () => socket!.close(),
    });
    client.onMessage = (message) => {
      view.apply(message);
      render();
    };
    socket.onopen = () => {
      view.setConnection("open");
      render();
    };
    socket.onmessage = (event) => client!.handleIncoming(new Uint8Array(event.data));
    socket.onclose = () => {
      view.setConnection("disconnected");
      render();
    };
    socket.onerror = () => {
      view.setConnection("error");
      render();
    };
  }

  editorEl.innerHTML = EDITABLE_FIELDS.map(
    (f) =>
      `<label>${f} <input name="${f}" type="number" step="any" value="${view.draft[f]}"></label>`,
  ).join("");
  editorEl.addEventListener("input", () => {
    const data = new FormData(editorEl);
    for (const field of EDITABLE_FIELDS) {
      const raw = data.get(field);
      if (raw !== null && raw !== "") view.editDraft({ [field]: Number(raw) });
    }
    render();
  });

  for (const button of root.querySelectorAll<HTMLButtonElement>("nav button")) {
    button.addEventListener("click", async () => {
      try {
        view.setMode(button.dataset.mode as ViewState["mode"]);
      } catch (err) {
        view.errorMessage = String(err);
      }
      if (view.mode === "REVIEW") {
        const patient = prompt("patient id?") ?? "";
        const model = buildProgressView(await rest.fetchProgress(patient));
        progressEl.textContent = model.empty
          ? "no data"
          : model.charts
              .map((c) => `${c.metric}: slope ${c.slope} over ${c.points.length} sessions`)
              .join("\n") + `\nsuggestions: ${model.suggestions.join("; ") || "none"}`;
      }
      render();
    });
  }

  startBtn.addEventListener("click", async () => {
    if (!client || view.connection !== "open") connect();
    try {
      capture = await startCapture();
      view.micPermission = "granted";
    } catch {
      view.micPermission = "denied";
      view.errorMessage = "microphone permission denied";
      render();
      return;
    }
    const violations = client!.start({
      patientId: "local-patient",
      config: view.draft,
      calibration: defaultCalibration(),
      engine: defaultEngineSettings(),
      sampleRate: capture.sampleRate,
    });
    if (violations.length > 0) {
      view.errorMessage = violations.join("; ");
      render();
      return;
    }
    view.setMode("PLAY");
    pump = window.setInterval(() => {
      for (const chunk of capture!.chunker.drain()) {
        client!.sendAudio(chunk.samples, chunk.tMs);
      }
    }, 40);
    render();
  });

  stopBtn.addEventListener("click", () => {
    if (pump !== null) window.clearInterval(pump);
    capture?.stop();
    client?.stop();
    render();
  });

  connect();
  render();
}

// silence unused-import lints for the helpers intentionally re-exported
export { encodeAudio, frameMessage };
