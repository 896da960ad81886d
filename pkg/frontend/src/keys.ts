/**
 * Keyboard feedback input. Polarity is made explicit everywhere because
 * mixing up positive and negative keys is the easiest way for an operator
 * to poison a training run. Auto-repeat is suppressed: one event per
 * physical press.
 */
import { FEEDBACK_NEGATIVE, FEEDBACK_POSITIVE } from "./wire.js";

export interface KeyBindings {
  positive: string[];
  negative: string[];
}

export const DEFAULT_BINDINGS: KeyBindings = {
  positive: ["ArrowUp", "p", "+"],
  negative: ["ArrowDown", "n", "-"],
};

export interface KeyLikeEvent {
  key: string;
  repeat: boolean;
}

/**
 * Map a keydown to a feedback value. Returns null when the key is unbound,
 * is an auto-repeat, or the session is not accepting feedback.
 */
export function feedbackForKey(
  event: KeyLikeEvent,
  running: boolean,
  bindings: KeyBindings = DEFAULT_BINDINGS,
): number | null {
  if (!running || event.repeat) return null;
  if (bindings.positive.includes(event.key)) return FEEDBACK_POSITIVE;
  if (bindings.negative.includes(event.key)) return FEEDBACK_NEGATIVE;
  return null;
}
