/**
 * Websocket client with automatic reconnection. Incoming messages go
 * straight to the handler; rendering never happens here.
 */
import { parseServerMessage, ServerMessage } from "./wire.js";

export interface SocketHandlers {
  onMessage: (msg: ServerMessage) => void;
  onStatus: (status: "connecting" | "open" | "closed" | "reconnecting") => void;
}

type WebSocketFactory = (url: string) => WebSocket;

const BACKOFF_INITIAL_MS = 250;
const BACKOFF_MAX_MS = 5000;

export class CockpitSocket {
  private ws: WebSocket | null = null;
  private backoffMs = BACKOFF_INITIAL_MS;
  private closedByUser = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly url: string,
    private readonly handlers: SocketHandlers,
    private readonly factory: WebSocketFactory = (u) => new WebSocket(u),
  ) {}

  connect(): void {
    this.closedByUser = false;
    this.open("connecting");
  }

  private open(status: "connecting" | "reconnecting"): void {
    this.handlers.onStatus(status);
    const ws = this.factory(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.backoffMs = BACKOFF_INITIAL_MS;
      this.handlers.onStatus("open");
    };
    ws.onmessage = (event) => {
      const msg = parseServerMessage(String(event.data));
      if (msg) this.handlers.onMessage(msg);
    };
    ws.onclose = () => {
      this.ws = null;
      if (this.closedByUser) {
        this.handlers.onStatus("closed");
        return;
      }
      this.handlers.onStatus("reconnecting");
      this.timer = setTimeout(() => this.open("reconnecting"), this.backoffMs);
      this.backoffMs = Math.min(this.backoffMs * 2, BACKOFF_MAX_MS);
    };
  }

  send(payload: string): boolean {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(payload);
      return true;
    }
    return false;
  }

  close(): void {
    this.closedByUser = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.ws?.close();
  }
}
