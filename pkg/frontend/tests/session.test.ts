import { describe, expect, it } from "vitest";

import { CockpitViewModel } from "../src/viewmodel.js";
import { parseServerMessage, TelemetryFrame } from "../src/wire.js";

/**
 * 60 s session at 33 Hz: every frame and every press must survive the
 * message path. Rendering may decimate pixels; the view model may not lose
 * session-critical state.
 */

function wireFrame(t: number, human: number): string {
  const frame: TelemetryFrame = {
    v: 1, type: "telemetry", t, theta: 0.7 + 0.001 * (t % 7),
    theta_t: 0.75, mu: 0.01, sigma: 0.4, a_exec: 0.02, r: 1.0,
    r_components: { env: 1.0, human }, cumulative_reward: t, s_emg: 0.5,
  };
  return JSON.stringify(frame);
}

describe("60 second 33 Hz session", () => {
  it("loses no feedback and keeps buffers bounded", () => {
    const vm = new CockpitViewModel(2000);
    vm.connection = "open";
    vm.ingest(parseServerMessage(JSON.stringify({
      v: 1, type: "session", session_id: "long", phase: "running",
      step: -1, clients: 1,
    }))!);

    const totalFrames = 60 * 33; // 1980
    let pressesSent = 0;
    for (let t = 0; t < totalFrames; t++) {
      // ~1 press per second, alternating polarity, sent between frames
      if (t % 33 === 16) {
        const value = pressesSent % 2 === 0 ? 1.0 : -0.5;
        vm.notePressSent(value);
        pressesSent += 1;
        const ack = parseServerMessage(JSON.stringify(
          { v: 1, type: "feedback_ack", value, step: t + 1 }));
        vm.ingest(ack!);
      }
      const trace = t % 33 === 17 ? 1.0 : 0.0;
      const msg = parseServerMessage(wireFrame(t, trace));
      expect(msg).not.toBeNull();
      vm.ingest(msg!);
    }

    expect(vm.framesSeen).toBe(totalFrames);
    expect(vm.lastFrameT).toBe(totalFrames - 1);
    expect(pressesSent).toBe(60);
    // every press reached the learner and came back acknowledged
    expect(vm.pendingPresses).toBe(0);
    const acked = vm.presses.filter((p) => p.ackedStep !== null);
    expect(vm.presses.length).toBeLessThanOrEqual(200);
    expect(acked.length).toBe(vm.presses.length);
    // buffers bounded at capacity, holding the newest frames
    expect(vm.theta.length).toBe(Math.min(totalFrames, 2000));
    expect(vm.theta.at(vm.theta.length - 1).t).toBe(totalFrames - 1);
    expect(vm.running).toBe(true);
  });
});
