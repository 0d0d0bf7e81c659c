// WebSocket client with reconnect and a short-lived offline input queue.
// While disconnected, outgoing inputs are held for up to queueTtlMs
// (default one second) and flushed on reconnect; anything older is
// dropped and counted so the UI can say so.

export interface WsLike {
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  send(data: string): void;
  close(): void;
}

export type WsFactory = (url: string) => WsLike;

export interface GatewayClientOptions {
  reconnectDelayMs?: number;
  queueTtlMs?: number;
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
}

type Status = "disconnected" | "connecting" | "connected";

export class GatewayClient {
  onText: (text: string) => void = () => {};
  onStatus: (status: Status) => void = () => {};

  droppedInputs = 0;
  status: Status = "disconnected";

  private ws: WsLike | null = null;
  private queue: { text: string; at: number }[] = [];
  private closed = false;
  private readonly reconnectDelayMs: number;
  private readonly queueTtlMs: number;
  private readonly now: () => number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;

  constructor(
    private url: string,
    private factory: WsFactory,
    opts: GatewayClientOptions = {},
  ) {
    this.reconnectDelayMs = opts.reconnectDelayMs ?? 1000;
    this.queueTtlMs = opts.queueTtlMs ?? 1000;
    this.now = opts.now ?? (() => Date.now());
    this.setTimer = opts.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
  }

  connect(): void {
    this.closed = false;
    this.setStatus("connecting");
    let ws: WsLike;
    try {
      ws = this.factory(this.url);
    } catch {
      this.scheduleReconnect();
      return;
    }
    this.ws = ws;
    ws.onopen = () => {
      this.setStatus("connected");
      this.flushQueue();
    };
    ws.onmessage = (ev) => this.onText(String(ev.data));
    ws.onerror = () => {};
    ws.onclose = () => {
      this.ws = null;
      if (!this.closed) {
        this.setStatus("disconnected");
        this.scheduleReconnect();
      }
    };
  }

  close(): void {
    this.closed = true;
    this.setStatus("disconnected");
    if (this.ws) {
      this.ws.close();
      this.ws = null;
    }
  }

  // Send now if connected; otherwise hold briefly for the reconnect.
  send(message: object): boolean {
    const text = JSON.stringify(message);
    if (this.status === "connected" && this.ws) {
      this.ws.send(text);
      return true;
    }
    this.pruneQueue();
    this.queue.push({ text, at: this.now() });
    return false;
  }

  queuedCount(): number {
    this.pruneQueue();
    return this.queue.length;
  }

  private pruneQueue(): void {
    const cutoff = this.now() - this.queueTtlMs;
    while (this.queue.length && this.queue[0].at < cutoff) {
      this.queue.shift();
      this.droppedInputs += 1;
    }
  }

  private flushQueue(): void {
    this.pruneQueue();
    const pending = this.queue;
    this.queue = [];
    for (const item of pending) {
      this.ws?.send(item.text);
    }
  }

  private scheduleReconnect(): void {
    if (this.closed) return;
    this.setTimer(() => {
      if (!this.closed) this.connect();
    }, this.reconnectDelayMs);
  }

  private setStatus(status: Status): void {
    this.status = status;
    this.onStatus(status);
  }
}
