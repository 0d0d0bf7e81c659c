"""Standalone UDP leg of the serial-to-UDP bridge.

Listens for datagrams carrying one sensor frame each, CRC-checks them, and
forwards valid frames unchanged to the configured address. Stats (counts
plus mean transit latency) are dumped periodically as JSON lines on stdout.
"""

from __future__ import annotations

import json
import socket
import threading
import time
from typing import Optional

from .wire import SerialUdpBridge


def parse_addr(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    return host or "127.0.0.1", int(port)


def stats_line(bridge: SerialUdpBridge) -> str:
    s = bridge.stats
    return json.dumps(
        {
            "frames_forwarded": s.frames_forwarded,
            "frames_dropped_crc": s.frames_dropped_crc,
            "mean_latency_ms": round(s.mean_latency_ms(), 4),
        }
    )


def run_bridge(
    listen_port: int,
    forward_addr: str,
    stats_interval_s: float = 5.0,
    stop: Optional[threading.Event] = None,
    bind_host: str = "127.0.0.1",
) -> SerialUdpBridge:
    """Forward frames until ``stop`` is set (or forever); returns the bridge."""
    bridge = SerialUdpBridge()
    dest = parse_addr(forward_addr)
    rx = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
    tx = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
    rx.bind((bind_host, listen_port))
    rx.settimeout(0.05)
    last_dump = time.perf_counter()
    try:
        while stop is None or not stop.is_set():
            try:
                datagram, _ = rx.recvfrom(4096)
            except socket.timeout:
                datagram = None
            if datagram is not None:
                ingest_ms = time.perf_counter() * 1000.0
                out = bridge.forward(datagram, ingest_ms)
                if out is not None:
                    tx.sendto(out, dest)
                    # replace the synchronous 0-latency sample with the
                    # measured ingest-to-emit time
                    bridge.stats.latency_samples[-1] = (
                        time.perf_counter() * 1000.0 - ingest_ms
                    )
            now = time.perf_counter()
            if stats_interval_s > 0 and now - last_dump >= stats_interval_s:
                print(stats_line(bridge), flush=True)
                last_dump = now
    finally:
        rx.close()
        tx.close()
    return bridge
