/**
 * Cockpit entry point: wires the socket, view model, charts, and controls.
 * Message handling and rendering are decoupled: incoming frames land in the
 * view model's ring buffers, and a requestAnimationFrame loop repaints from
 * whatever is there. Feedback presses bypass the render path entirely.
 */
import { EmgGauge, StripChart } from "./charts.js";
import { DEFAULT_BINDINGS, feedbackForKey } from "./keys.js";
import { CockpitSocket } from "./socket.js";
import { CockpitViewModel } from "./viewmodel.js";
import {
  ControlCommand,
  encodeControl,
  encodeFeedback,
  FEEDBACK_NEGATIVE,
  FEEDBACK_POSITIVE,
} from "./wire.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function serverUrl(): string {
  const override = new URLSearchParams(location.search).get("server");
  if (override) return override;
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  return `${scheme}://${location.host}/ws`;
}

const vm = new CockpitViewModel();

const socket = new CockpitSocket(serverUrl(), {
  onMessage: (msg) => vm.ingest(msg),
  onStatus: (status) => {
    vm.connection = status;
    renderStatus();
  },
});

const ANGLE_BAND = 0.1; // tracking tolerance shown around the target angle

const charts = [
  new StripChart(el<HTMLCanvasElement>("chart-reward"),
    [{ buffer: vm.cumulativeReward, color: "#e7b75f", label: "cumulative reward" }],
    { title: "Accumulated reward" }),
  new StripChart(el<HTMLCanvasElement>("chart-angle"),
    [
      { buffer: vm.thetaTarget, color: "#82aaff", label: "target" },
      { buffer: vm.theta, color: "#53c98f", label: "actual" },
    ],
    { title: "Joint angle (rad)", band: ANGLE_BAND }),
  new StripChart(el<HTMLCanvasElement>("chart-mu"),
    [{ buffer: vm.mu, color: "#d78fe7", label: "policy mean" }],
    { title: "Policy mean" }),
  new StripChart(el<HTMLCanvasElement>("chart-sigma"),
    [{ buffer: vm.sigma, color: "#f2708a", label: "policy deviation" }],
    { title: "Policy deviation", yMin: 0 }),
];
const gauge = new EmgGauge(el<HTMLCanvasElement>("emg-gauge"));

function renderStatus(): void {
  el("status-phase").textContent = vm.phase;
  el("status-connection").textContent = vm.connection;
  el("status-step").textContent = vm.lastFrameT >= 0 ? String(vm.lastFrameT) : "–";
  el("status-session").textContent = vm.sessionId || "–";
  const banner = el("error-banner");
  if (vm.lastError) {
    banner.textContent = `${vm.lastError.code}: ${vm.lastError.text}`;
    banner.classList.remove("hidden");
  } else {
    banner.classList.add("hidden");
  }
  const canPress = vm.running;
  el<HTMLButtonElement>("btn-positive").disabled = !canPress;
  el<HTMLButtonElement>("btn-negative").disabled = !canPress;
}

function renderPresses(): void {
  const list = el("press-log");
  const recent = vm.presses.slice(-8).reverse();
  list.innerHTML = recent
    .map((p) => {
      const label = p.value > 0 ? "+1 reward" : "−0.5 punish";
      const cls = p.value > 0 ? "press-pos" : "press-neg";
      const ack = p.ackedStep === null ? "pending…" : `applied @ step ${p.ackedStep}`;
      return `<li class="${cls}">${label} <span class="ack">${ack}</span></li>`;
    })
    .join("");
}

function frame(): void {
  for (const chart of charts) chart.draw();
  gauge.draw(vm.sEmg);
  renderStatus();
  renderPresses();
  requestAnimationFrame(frame);
}

function sendFeedback(value: number): void {
  if (!vm.running) return;
  if (socket.send(encodeFeedback(value))) {
    vm.notePressSent(value);
  }
}

function sendControl(command: ControlCommand): void {
  socket.send(encodeControl(command));
}

window.addEventListener("keydown", (event) => {
  const value = feedbackForKey(
    { key: event.key, repeat: event.repeat }, vm.running, DEFAULT_BINDINGS);
  if (value !== null) {
    event.preventDefault();
    sendFeedback(value);
  }
});

el("btn-positive").addEventListener("click", () => sendFeedback(FEEDBACK_POSITIVE));
el("btn-negative").addEventListener("click", () => sendFeedback(FEEDBACK_NEGATIVE));
el("btn-start").addEventListener("click", () => sendControl("start"));
el("btn-pause").addEventListener("click", () => sendControl("pause"));
el("btn-resume").addEventListener("click", () => sendControl("resume"));
el("btn-stop").addEventListener("click", () => sendControl("stop"));

socket.connect();
requestAnimationFrame(frame);
