"""Wire protocol for live sessions.

JSON messages over a websocket, discriminated by `type` and versioned with
`v`. Inbound: feedback keypresses, session control, optional live EMG
samples. Outbound: per-step telemetry frames, feedback acknowledgments,
session status changes, and errors. Field names here are the contract the
cockpit (and any other client) builds against; docs/wire_protocol.md renders
the same schema for humans.
"""
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter, field_validator

WIRE_VERSION = 1

ALLOWED_FEEDBACK = (1.0, -0.5)


class RewardComponents(BaseModel):
    env: float
    human: float


class TelemetryFrame(BaseModel):
    v: int = WIRE_VERSION
    type: Literal["telemetry"] = "telemetry"
    t: int
    theta: float
    theta_t: float
    mu: float
    sigma: float
    a_exec: float
    r: float
    r_components: RewardComponents
    cumulative_reward: float
    s_emg: float


class FeedbackMsg(BaseModel):
    v: int = WIRE_VERSION
    type: Literal["feedback"] = "feedback"
    value: float

    @field_validator("value")
    @classmethod
    def _legal_value(cls, value):
        if value not in ALLOWED_FEEDBACK:
            raise ValueError(f"feedback value must be one of {ALLOWED_FEEDBACK}, got {value}")
        return value


class ControlMsg(BaseModel):
    v: int = WIRE_VERSION
    type: Literal["control"] = "control"
    command: Literal["start", "pause", "resume", "stop"]
    config: Optional[dict] = None


class EmgSampleMsg(BaseModel):
    v: int = WIRE_VERSION
    type: Literal["emg"] = "emg"
    s_raw: float


class ErrorMsg(BaseModel):
    v: int = WIRE_VERSION
    type: Literal["error"] = "error"
    code: str
    text: str


class FeedbackAckMsg(BaseModel):
    """Emitted by the trial loop when a press is folded into the reward,
    carrying the step at which it applied."""
    v: int = WIRE_VERSION
    type: Literal["feedback_ack"] = "feedback_ack"
    value: float
    step: int


class SessionStatusMsg(BaseModel):
    """Broadcast on every phase transition and to each client on connect."""
    v: int = WIRE_VERSION
    type: Literal["session"] = "session"
    session_id: str
    phase: Literal["idle", "running", "paused", "finished", "faulted"]
    step: int
    clients: int


class SessionState(BaseModel):
    """Health/status document, also returned by the REST endpoints."""
    session_id: str
    phase: Literal["idle", "running", "paused", "finished", "faulted"]
    step: int
    clients: int
    mode: str
    max_steps: int


InboundMessage = Annotated[Union[FeedbackMsg, ControlMsg, EmgSampleMsg],
                           Field(discriminator="type")]
INBOUND_ADAPTER: TypeAdapter = TypeAdapter(InboundMessage)


def parse_inbound(text: str) -> InboundMessage:
    """Validate one inbound JSON message; raises pydantic.ValidationError."""
    return INBOUND_ADAPTER.validate_json(text)
