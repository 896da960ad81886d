/**
 * Wire protocol types and codecs, mirroring the bridge schema
 * (docs/wire_protocol.md in the repository root) field for field.
 */

export const WIRE_VERSION = 1;

export const FEEDBACK_POSITIVE = 1.0;
export const FEEDBACK_NEGATIVE = -0.5;

export type SessionPhase = "idle" | "running" | "paused" | "finished" | "faulted";

export interface RewardComponents {
  env: number;
  human: number;
}

export interface TelemetryFrame {
  v: number;
  type: "telemetry";
  t: number;
  theta: number;
  theta_t: number;
  mu: number;
  sigma: number;
  a_exec: number;
  r: number;
  r_components: RewardComponents;
  cumulative_reward: number;
  s_emg: number;
}

export interface FeedbackAckMsg {
  v: number;
  type: "feedback_ack";
  value: number;
  step: number;
}

export interface SessionStatusMsg {
  v: number;
  type: "session";
  session_id: string;
  phase: SessionPhase;
  step: number;
  clients: number;
}

export interface ErrorMsg {
  v: number;
  type: "error";
  code: string;
  text: string;
}

export type ServerMessage = TelemetryFrame | FeedbackAckMsg | SessionStatusMsg | ErrorMsg;

export type ControlCommand = "start" | "pause" | "resume" | "stop";

const PHASES: SessionPhase[] = ["idle", "running", "paused", "finished", "faulted"];

function isNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

/** Parse one server message; returns null for anything malformed. */
export function parseServerMessage(text: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null) return null;
  const msg = raw as Record<string, unknown>;
  switch (msg.type) {
    case "telemetry": {
      const rc = msg.r_components as Record<string, unknown> | undefined;
      if (
        isNumber(msg.t) && isNumber(msg.theta) && isNumber(msg.theta_t) &&
        isNumber(msg.mu) && isNumber(msg.sigma) && isNumber(msg.a_exec) &&
        isNumber(msg.r) && isNumber(msg.cumulative_reward) && isNumber(msg.s_emg) &&
        rc !== undefined && isNumber(rc.env) && isNumber(rc.human)
      ) {
        return msg as unknown as TelemetryFrame;
      }
      return null;
    }
    case "feedback_ack":
      if (isNumber(msg.value) && isNumber(msg.step)) {
        return msg as unknown as FeedbackAckMsg;
      }
      return null;
    case "session":
      if (
        typeof msg.session_id === "string" && isNumber(msg.step) &&
        isNumber(msg.clients) && PHASES.includes(msg.phase as SessionPhase)
      ) {
        return msg as unknown as SessionStatusMsg;
      }
      return null;
    case "error":
      if (typeof msg.code === "string" && typeof msg.text === "string") {
        return msg as unknown as ErrorMsg;
      }
      return null;
    default:
      return null;
  }
}

/** Serialize a feedback press; value must be one of the two legal magnitudes. */
export function encodeFeedback(value: number): string {
  if (value !== FEEDBACK_POSITIVE && value !== FEEDBACK_NEGATIVE) {
    throw new Error(`illegal feedback value ${value}`);
  }
  return JSON.stringify({ v: WIRE_VERSION, type: "feedback", value });
}

export function encodeControl(command: ControlCommand, config?: Record<string, unknown>): string {
  return JSON.stringify({ v: WIRE_VERSION, type: "control", command, config: config ?? null });
}

export function encodeEmgSample(sRaw: number): string {
  return JSON.stringify({ v: WIRE_VERSION, type: "emg", s_raw: sRaw });
}
