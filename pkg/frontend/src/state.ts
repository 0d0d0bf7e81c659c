// Console-side view of the session: the newest accepted snapshot plus
// counters for everything that was skipped. The console never mutates
// simulation truth; it only mirrors what the gateway streams.

import { Hello, ServerMessage, Snapshot, parseServerMessage } from "./protocol.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected";

export class ConsoleState {
  hello: Hello | null = null;
  snapshot: Snapshot | null = null;
  connection: ConnectionStatus = "disconnected";
  parseErrors = 0;
  staleDropped = 0;
  serverErrors: string[] = [];

  // Feed one raw WebSocket text frame; returns the accepted message, if any.
  ingest(text: string): ServerMessage | null {
    const msg = parseServerMessage(text);
    if (msg === null) {
      this.parseErrors += 1;
      return null;
    }
    if (msg.type === "hello") {
      this.hello = msg;
      return msg;
    }
    if (msg.type === "error") {
      this.serverErrors.push(msg.detail);
      if (this.serverErrors.length > 20) this.serverErrors.shift();
      return msg;
    }
    // snapshots must move forward; a late frame is dropped, never reordered
    if (this.snapshot !== null && msg.tick <= this.snapshot.tick) {
      this.staleDropped += 1;
      return null;
    }
    this.snapshot = msg;
    return msg;
  }

  setConnection(status: ConnectionStatus): void {
    this.connection = status;
  }

  reset(): void {
    this.snapshot = null;
    // hello survives: calibration and geometry stay valid across reconnects
  }
}
