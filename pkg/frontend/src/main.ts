/** DOM wiring for the console page. */

import { ServiceClient } from "./api.js";
import type { RectDto } from "./api.js";
import { drawMap } from "./render.js";
import { ConsoleState } from "./view.js";

const PLAYBACK_MS = 150;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const serviceUrl = new URLSearchParams(window.location.search).get("service") ?? "";
const client = new ServiceClient(serviceUrl);
const state = new ConsoleState(client);

const canvas = el<HTMLCanvasElement>("map");
const ctx = canvas.getContext("2d")!;
const environmentSelect = el<HTMLSelectElement>("environment");
const seedInput = el<HTMLInputElement>("seed");
const startButton = el<HTMLButtonElement>("start");
const requestInput = el<HTMLInputElement>("request");
const submitButton = el<HTMLButtonElement>("submit");
const rawToggle = el<HTMLInputElement>("raw-mode");
const pauseButton = el<HTMLButtonElement>("pause");
const stepButton = el<HTMLButtonElement>("step");
const backButton = el<HTMLButtonElement>("back");
const replayButton = el<HTMLButtonElement>("replay");
const transcriptPane = el<HTMLDivElement>("transcript");
const stateReadout = el<HTMLDivElement>("state-readout");
const bannerPane = el<HTMLDivElement>("banner");
const observationsPane = el<HTMLPreElement>("observations");

async function fillCatalog(): Promise<void> {
  try {
    const catalog = await client.catalog();
    environmentSelect.innerHTML = "";
    for (const environment of catalog.environments) {
      const option = document.createElement("option");
      option.value = environment.name;
      option.textContent = environment.name;
      environmentSelect.appendChild(option);
    }
  } catch {
    bannerPane.textContent = "service unreachable: is `ptzbench serve` running?";
    bannerPane.hidden = false;
  }
}

function currentViewport(): RectDto | null {
  const frame = state.playback.current;
  if (frame) return frame.viewport;
  return null;
}

function redraw(): void {
  if (state.scene) {
    drawMap(ctx, state.scene, currentViewport(), canvas.width, canvas.height);
  }
  const frame = state.playback.current;
  const camera = frame ? frame.state : state.cameraState;
  if (camera) {
    const where = state.playback.length
      ? `frame ${state.playback.position + 1}/${state.playback.length}`
      : "idle";
    stateReadout.textContent =
      `pan ${camera.pan.toFixed(1)}°  tilt ${camera.tilt.toFixed(1)}°  ` +
      `zoom ${camera.zoom.toFixed(2)}x  (${where})`;
  }
  bannerPane.hidden = state.banner === null;
  if (state.banner) bannerPane.textContent = state.banner;
  submitButton.disabled = !state.canSubmit(requestInput.value);
}

function renderTranscript(): void {
  transcriptPane.innerHTML = "";
  for (const entry of state.entries) {
    const block = document.createElement("div");
    block.className = entry.accepted ? "entry" : "entry rejected";
    const request = document.createElement("div");
    request.className = "request";
    request.textContent = `> ${entry.request}`;
    block.appendChild(request);
    const raw = document.createElement("pre");
    raw.className = "raw";
    raw.textContent = entry.rawResponse;
    block.appendChild(raw);
    if (entry.accepted) {
      const commands = document.createElement("div");
      commands.className = "commands";
      commands.textContent = entry.commands.join("  ");
      block.appendChild(commands);
    } else {
      for (const diagnostic of entry.diagnostics) {
        const badge = document.createElement("span");
        badge.className = "diagnostic";
        badge.textContent = `${diagnostic.kind}: ${diagnostic.text}`;
        block.appendChild(badge);
      }
    }
    transcriptPane.appendChild(block);
  }
  transcriptPane.scrollTop = transcriptPane.scrollHeight;
}

startButton.addEventListener("click", async () => {
  await state.startSession(environmentSelect.value, Number(seedInput.value) || 0);
  renderTranscript();
  redraw();
});

submitButton.addEventListener("click", async () => {
  const text = requestInput.value;
  if (!state.canSubmit(text)) return;
  submitButton.disabled = true;
  await state.submit(text);
  requestInput.value = "";
  renderTranscript();
  observationsPane.textContent = state.observations;
  redraw();
});

requestInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") submitButton.click();
});
requestInput.addEventListener("input", redraw);
rawToggle.addEventListener("change", () => {
  state.rawMode = rawToggle.checked;
});
pauseButton.addEventListener("click", () => {
  if (state.playback.isPlaying) state.playback.pause();
  else state.playback.resume();
  redraw();
});
stepButton.addEventListener("click", () => {
  state.playback.stepForward();
  redraw();
});
backButton.addEventListener("click", () => {
  state.playback.stepBack();
  redraw();
});
replayButton.addEventListener("click", () => {
  state.playback.restart();
  redraw();
});

window.setInterval(() => {
  if (state.playback.advance()) redraw();
}, PLAYBACK_MS);

void fillCatalog().then(redraw);
