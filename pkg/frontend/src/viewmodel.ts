/**
 * Cockpit view model: rolling telemetry buffers, session phase, and the
 * feedback-press ledger. Message ingestion is cheap and never blocks on
 * rendering; charts read the buffers on their own schedule.
 */
import { RingBuffer } from "./buffers.js";
import {
  ErrorMsg,
  FeedbackAckMsg,
  ServerMessage,
  SessionPhase,
  SessionStatusMsg,
  TelemetryFrame,
} from "./wire.js";

export interface ChartPoint {
  t: number;
  value: number;
}

export interface PressRecord {
  value: number;
  sentAtFrame: number;
  ackedStep: number | null;
}

export type ConnectionState = "connecting" | "open" | "closed" | "reconnecting";

const DEFAULT_CAPACITY = 2000;

export class CockpitViewModel {
  readonly theta: RingBuffer<ChartPoint>;
  readonly thetaTarget: RingBuffer<ChartPoint>;
  readonly mu: RingBuffer<ChartPoint>;
  readonly sigma: RingBuffer<ChartPoint>;
  readonly cumulativeReward: RingBuffer<ChartPoint>;
  readonly humanComponent: RingBuffer<ChartPoint>;

  phase: SessionPhase = "idle";
  sessionId = "";
  connection: ConnectionState = "connecting";
  clients = 0;
  sEmg = 0;
  lastFrameT = -1;
  framesSeen = 0;
  lastError: ErrorMsg | null = null;

  readonly presses: PressRecord[] = [];

  constructor(capacity: number = DEFAULT_CAPACITY) {
    this.theta = new RingBuffer(capacity);
    this.thetaTarget = new RingBuffer(capacity);
    this.mu = new RingBuffer(capacity);
    this.sigma = new RingBuffer(capacity);
    this.cumulativeReward = new RingBuffer(capacity);
    this.humanComponent = new RingBuffer(capacity);
  }

  get running(): boolean {
    return this.phase === "running" && this.connection === "open";
  }

  ingest(msg: ServerMessage): void {
    switch (msg.type) {
      case "telemetry":
        this.ingestFrame(msg);
        break;
      case "session":
        this.ingestSession(msg);
        break;
      case "feedback_ack":
        this.ingestAck(msg);
        break;
      case "error":
        this.lastError = msg;
        break;
    }
  }

  private ingestFrame(frame: TelemetryFrame): void {
    const t = frame.t;
    this.theta.push({ t, value: frame.theta });
    this.thetaTarget.push({ t, value: frame.theta_t });
    this.mu.push({ t, value: frame.mu });
    this.sigma.push({ t, value: frame.sigma });
    this.cumulativeReward.push({ t, value: frame.cumulative_reward });
    this.humanComponent.push({ t, value: frame.r_components.human });
    this.sEmg = frame.s_emg;
    this.lastFrameT = t;
    this.framesSeen += 1;
  }

  private ingestSession(msg: SessionStatusMsg): void {
    const newTrial = msg.session_id !== this.sessionId && msg.phase === "running";
    this.phase = msg.phase;
    this.sessionId = msg.session_id;
    this.clients = msg.clients;
    if (newTrial) this.resetTrialState();
  }

  /** Match the ack against the oldest pending press of the same value. */
  private ingestAck(ack: FeedbackAckMsg): void {
    const pending = this.presses.find(
      (p) => p.ackedStep === null && p.value === ack.value,
    );
    if (pending) pending.ackedStep = ack.step;
  }

  notePressSent(value: number): PressRecord {
    const record: PressRecord = { value, sentAtFrame: this.lastFrameT, ackedStep: null };
    this.presses.push(record);
    if (this.presses.length > 200) this.presses.shift();
    return record;
  }

  get pendingPresses(): number {
    return this.presses.filter((p) => p.ackedStep === null).length;
  }

  private resetTrialState(): void {
    for (const buf of [this.theta, this.thetaTarget, this.mu, this.sigma,
                       this.cumulativeReward, this.humanComponent]) {
      buf.clear();
    }
    this.presses.length = 0;
    this.lastFrameT = -1;
    this.lastError = null;
  }
}
