import { describe, expect, test } from "vitest";

import { GatewayClient, WsLike } from "../src/net.js";

class FakeSocket implements WsLike {
  onopen: ((ev?: unknown) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  sent: string[] = [];
  closed = false;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }
}

function harness(opts: { ttl?: number } = {}) {
  const sockets: FakeSocket[] = [];
  const timers: (() => void)[] = [];
  let clock = 0;
  const client = new GatewayClient("ws://test", () => {
    const s = new FakeSocket();
    sockets.push(s);
    return s;
  }, {
    queueTtlMs: opts.ttl ?? 1000,
    reconnectDelayMs: 100,
    now: () => clock,
    setTimer: (fn) => {
      timers.push(fn);
      return 0;
    },
  });
  return {
    client,
    sockets,
    timers,
    tick: (ms: number) => {
      clock += ms;
    },
    fireTimers: () => {
      const due = timers.splice(0);
      due.forEach((fn) => fn());
    },
  };
}

describe("GatewayClient", () => {
  test("sends directly while connected", () => {
    const h = harness();
    h.client.connect();
    h.sockets[0].onopen?.();
    expect(h.client.status).toBe("connected");
    expect(h.client.send({ type: "glove_raw", raw: 500 })).toBe(true);
    expect(h.sockets[0].sent).toEqual(['{"type":"glove_raw","raw":500}']);
  });

  test("messages arrive through onText", () => {
    const h = harness();
    const seen: string[] = [];
    h.client.onText = (t) => seen.push(t);
    h.client.connect();
    h.sockets[0].onopen?.();
    h.sockets[0].onmessage?.({ data: '{"type":"error","detail":"x"}' });
    expect(seen).toEqual(['{"type":"error","detail":"x"}']);
  });

  test("queues while disconnected and flushes young messages on reconnect", () => {
    const h = harness();
    h.client.connect();
    h.sockets[0].onopen?.();
    h.sockets[0].close(); // connection drops
    expect(h.client.status).toBe("disconnected");

    expect(h.client.send({ n: 1 })).toBe(false);
    h.tick(300);
    expect(h.client.send({ n: 2 })).toBe(false);
    expect(h.client.queuedCount()).toBe(2);

    h.fireTimers(); // reconnect attempt
    h.sockets[1].onopen?.();
    expect(h.sockets[1].sent).toEqual(['{"n":1}', '{"n":2}']);
    expect(h.client.droppedInputs).toBe(0);
  });

  test("drops queued inputs older than one second, with indication", () => {
    const h = harness();
    h.client.connect();
    h.sockets[0].onopen?.();
    h.sockets[0].close();

    h.client.send({ n: 1 });
    h.tick(1200); // the queued input ages out
    h.client.send({ n: 2 });
    expect(h.client.droppedInputs).toBe(1);
    expect(h.client.queuedCount()).toBe(1);

    h.fireTimers();
    h.sockets[1].onopen?.();
    expect(h.sockets[1].sent).toEqual(['{"n":2}']);
  });

  test("reconnects after a drop until closed deliberately", () => {
    const h = harness();
    h.client.connect();
    h.sockets[0].onopen?.();
    h.sockets[0].close();
    h.fireTimers();
    expect(h.sockets.length).toBe(2);
    h.client.close();
    h.sockets[1].onclose?.();
    h.fireTimers();
    expect(h.sockets.length).toBe(2); // no further attempts after close()
  });

  test("status callbacks fire on every transition", () => {
    const h = harness();
    const transitions: string[] = [];
    h.client.onStatus = (s) => transitions.push(s);
    h.client.connect();
    h.sockets[0].onopen?.();
    h.sockets[0].close();
    expect(transitions).toEqual(["connecting", "connected", "disconnected"]);
  });
});
