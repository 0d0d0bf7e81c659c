"""Bit-exact wire formats for gripper telemetry and actuation commands.

Sensor frame (gripper potentiometer + grasp button), fixed 8 bytes::

    offset  0     1       2..3          4         5     6..7
            0xA5  len=4   pot_raw u16   button    seq   CRC-16/CCITT-FALSE
                          little-endian 0x00/0x01       over bytes 1..5, LE

Command frame (MAVLink-inspired subset), 9 + payload_len bytes::

    offset  0     1            2     3           4            5..6
            0xFE  payload_len  seq   sysid=0xFF  compid=0x00  msg_id u16 LE
    then    payload bytes, then CRC-16/X.25 over bytes 1..end of payload, LE

Message ids: 1 = SET_SERVO with payload [channel u8][width_us u16 LE];
2 = MANUAL_SETPOINT with payload 6 x i16 LE, milli-units of the [-1, 1]
axes (surge, sway, heave, roll, pitch, yaw), each in [-1000, 1000].

CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final
xor (check value of b"123456789" is 0x29B1). CRC-16/X.25: poly 0x1021
reflected (0x8408), init 0xFFFF, reflected in/out, final xor 0xFFFF
(check value 0x906E).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

SENSOR_SYNC = 0xA5
SENSOR_PAYLOAD_LEN = 4
SENSOR_FRAME_LEN = 8

COMMAND_MAGIC = 0xFE
COMMAND_SYSID = 0xFF
COMMAND_COMPID = 0x00
COMMAND_OVERHEAD = 9  # magic + 6 header bytes + 2 CRC bytes
MAX_COMMAND_PAYLOAD = 64

MSG_SET_SERVO = 1
MSG_MANUAL_SETPOINT = 2
_EXPECTED_PAYLOAD_LEN = {MSG_SET_SERVO: 3, MSG_MANUAL_SETPOINT: 12}

SETPOINT_SCALE = 1000


class FrameError(ValueError):
    """Base class for framing/validation failures."""


class BadSync(FrameError):
    pass


class BadLength(FrameError):
    pass


class BadCrc(FrameError):
    pass


class UnknownMsgId(FrameError):
    pass


class PayloadLengthMismatch(FrameError):
    pass


class BadField(FrameError):
    """A CRC-valid frame carried an out-of-range field value."""


def _make_table_msb(poly: int) -> tuple[int, ...]:
    table = []
    for byte in range(256):
        crc = byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ poly) if crc & 0x8000 else (crc << 1)
        table.append(crc & 0xFFFF)
    return tuple(table)


def _make_table_lsb(poly_reflected: int) -> tuple[int, ...]:
    table = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            crc = ((crc >> 1) ^ poly_reflected) if crc & 1 else (crc >> 1)
        table.append(crc & 0xFFFF)
    return tuple(table)


_CCITT_TABLE = _make_table_msb(0x1021)
_X25_TABLE = _make_table_lsb(0x8408)


def crc16_ccitt_false(data: bytes) -> int:
    """CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, unreflected)."""
    crc = 0xFFFF
    for b in data:
        crc = ((crc << 8) & 0xFFFF) ^ _CCITT_TABLE[((crc >> 8) ^ b) & 0xFF]
    return crc


def crc16_x25(data: bytes) -> int:
    """CRC-16/X.25 (reflected poly 0x8408, init 0xFFFF, final xor 0xFFFF)."""
    crc = 0xFFFF
    for b in data:
        crc = (crc >> 8) ^ _X25_TABLE[(crc ^ b) & 0xFF]
    return crc ^ 0xFFFF


@dataclass(frozen=True)
class SensorFrame:
    """One gripper telemetry sample: wrapping sequence, pot counts, button."""

    seq: int
    pot_raw: int
    button: bool

    def __post_init__(self):
        if not 0 <= self.seq <= 0xFF:
            raise BadField(f"seq={self.seq} outside u8 range")
        if not 0 <= self.pot_raw <= 1023:
            raise BadField(f"pot_raw={self.pot_raw} outside ADC range [0, 1023]")


@dataclass(frozen=True)
class CommandFrame:
    """One actuation command: wrapping sequence, message id, raw payload."""

    seq: int
    msg_id: int
    payload: bytes

    def __post_init__(self):
        if not 0 <= self.seq <= 0xFF:
            raise BadField(f"seq={self.seq} outside u8 range")
        if self.msg_id not in _EXPECTED_PAYLOAD_LEN:
            raise UnknownMsgId(f"msg_id={self.msg_id}")
        if len(self.payload) > MAX_COMMAND_PAYLOAD:
            raise PayloadLengthMismatch(
                f"payload of {len(self.payload)} bytes exceeds {MAX_COMMAND_PAYLOAD}"
            )


def encode_sensor_frame(frame: SensorFrame) -> bytes:
    """Serialize a sensor frame to its fixed 8-byte wire form."""
    body = struct.pack(
        "<BHBB", SENSOR_PAYLOAD_LEN, frame.pot_raw, int(frame.button), frame.seq
    )
    crc = crc16_ccitt_false(body)
    return bytes([SENSOR_SYNC]) + body + struct.pack("<H", crc)


def _parse_sensor_at(buf: bytes, offset: int) -> SensorFrame:
    if len(buf) - offset < SENSOR_FRAME_LEN:
        raise BadLength(
            f"need {SENSOR_FRAME_LEN} bytes from sync, have {len(buf) - offset}"
        )
    if buf[offset] != SENSOR_SYNC:
        raise BadSync(f"expected 0x{SENSOR_SYNC:02X}, got 0x{buf[offset]:02X}")
    if buf[offset + 1] != SENSOR_PAYLOAD_LEN:
        raise BadLength(f"length byte {buf[offset + 1]} != {SENSOR_PAYLOAD_LEN}")
    body = buf[offset + 1 : offset + 6]
    (crc_rx,) = struct.unpack_from("<H", buf, offset + 6)
    crc = crc16_ccitt_false(body)
    if crc != crc_rx:
        raise BadCrc(f"computed 0x{crc:04X}, received 0x{crc_rx:04X}")
    _, pot_raw, button, seq = struct.unpack("<BHBB", body)
    if button > 1:
        raise BadField(f"button byte 0x{button:02X} not 0x00/0x01")
    return SensorFrame(seq=seq, pot_raw=pot_raw, button=bool(button))


def decode_sensor_frame(buf: bytes) -> SensorFrame:
    """Decode the first sensor frame in ``buf``.

    Scans forward to the next 0xA5 on failure, so garbage ahead of a valid
    frame is tolerated. If no valid frame exists, the error from the first
    sync candidate is raised (BadSync when the buffer has no sync byte).
    """
    buf = bytes(buf)
    first_err: FrameError | None = None
    search = 0
    while True:
        pos = buf.find(SENSOR_SYNC, search)
        if pos < 0:
            raise first_err or BadSync("no sync byte in buffer")
        try:
            return _parse_sensor_at(buf, pos)
        except FrameError as err:
            if first_err is None:
                first_err = err
            search = pos + 1


def scan_sensor_frames(buf: bytes) -> list[SensorFrame]:
    """Extract every valid sensor frame from a byte stream, skipping garbage.

    A failed candidate advances the scan by one byte, so frames following
    corrupt or interleaved junk are still recovered.
    """
    buf = bytes(buf)
    frames = []
    pos = 0
    while True:
        pos = buf.find(SENSOR_SYNC, pos)
        if pos < 0:
            return frames
        try:
            frames.append(_parse_sensor_at(buf, pos))
            pos += SENSOR_FRAME_LEN
        except FrameError:
            pos += 1


def encode_command(frame: CommandFrame) -> bytes:
    """Serialize a command frame; the payload must match its message id."""
    expected = _EXPECTED_PAYLOAD_LEN[frame.msg_id]
    if len(frame.payload) != expected:
        raise PayloadLengthMismatch(
            f"msg_id {frame.msg_id} payload must be {expected} bytes, "
            f"got {len(frame.payload)}"
        )
    body = (
        struct.pack(
            "<BBBBH",
            len(frame.payload),
            frame.seq,
            COMMAND_SYSID,
            COMMAND_COMPID,
            frame.msg_id,
        )
        + frame.payload
    )
    crc = crc16_x25(body)
    return bytes([COMMAND_MAGIC]) + body + struct.pack("<H", crc)


def decode_command(buf: bytes) -> CommandFrame:
    """Decode one command datagram; the buffer must hold exactly one frame."""
    buf = bytes(buf)
    if len(buf) < COMMAND_OVERHEAD:
        raise BadLength(f"datagram of {len(buf)} bytes is shorter than a frame")
    if buf[0] != COMMAND_MAGIC:
        raise BadSync(f"expected 0x{COMMAND_MAGIC:02X}, got 0x{buf[0]:02X}")
    payload_len = buf[1]
    if len(buf) != COMMAND_OVERHEAD + payload_len:
        raise BadLength(
            f"datagram of {len(buf)} bytes != {COMMAND_OVERHEAD + payload_len} "
            f"implied by payload_len={payload_len}"
        )
    body = buf[1 : 7 + payload_len]
    (crc_rx,) = struct.unpack_from("<H", buf, 7 + payload_len)
    crc = crc16_x25(body)
    if crc != crc_rx:
        raise BadCrc(f"computed 0x{crc:04X}, received 0x{crc_rx:04X}")
    _, seq, _sysid, _compid, msg_id = struct.unpack_from("<BBBBH", buf, 1)
    if msg_id not in _EXPECTED_PAYLOAD_LEN:
        raise UnknownMsgId(f"msg_id={msg_id}")
    payload = bytes(buf[7 : 7 + payload_len])
    if payload_len != _EXPECTED_PAYLOAD_LEN[msg_id]:
        raise PayloadLengthMismatch(
            f"msg_id {msg_id} expects {_EXPECTED_PAYLOAD_LEN[msg_id]} payload "
            f"bytes, got {payload_len}"
        )
    return CommandFrame(seq=seq, msg_id=msg_id, payload=payload)


def set_servo_payload(channel: int, width_us: int) -> bytes:
    return struct.pack("<BH", channel, width_us)


def parse_set_servo(frame: CommandFrame) -> tuple[int, int]:
    """Return (channel, width_us) from a SET_SERVO frame."""
    if frame.msg_id != MSG_SET_SERVO:
        raise UnknownMsgId(f"not a SET_SERVO frame: msg_id={frame.msg_id}")
    channel, width_us = struct.unpack("<BH", frame.payload)
    return channel, width_us


def manual_setpoint_payload(axes: tuple[float, ...]) -> bytes:
    """Pack six [-1, 1] axes as milli-unit i16 values."""
    if len(axes) != 6:
        raise PayloadLengthMismatch(f"expected 6 axes, got {len(axes)}")
    milli = []
    for a in axes:
        v = int(round(a * SETPOINT_SCALE))
        milli.append(max(-SETPOINT_SCALE, min(SETPOINT_SCALE, v)))
    return struct.pack("<6h", *milli)


def parse_manual_setpoint(frame: CommandFrame) -> tuple[float, ...]:
    """Return the six axes of a MANUAL_SETPOINT frame as floats in [-1, 1]."""
    if frame.msg_id != MSG_MANUAL_SETPOINT:
        raise UnknownMsgId(f"not a MANUAL_SETPOINT frame: msg_id={frame.msg_id}")
    milli = struct.unpack("<6h", frame.payload)
    return tuple(m / SETPOINT_SCALE for m in milli)


@dataclass
class BridgeStats:
    """Forwarding counters; forwarded + dropped equals frames received."""

    frames_forwarded: int = 0
    frames_dropped_crc: int = 0
    latency_samples: list[float] = field(default_factory=list)

    @property
    def frames_received(self) -> int:
        return self.frames_forwarded + self.frames_dropped_crc

    def mean_latency_ms(self) -> float:
        if not self.latency_samples:
            return 0.0
        return sum(self.latency_samples) / len(self.latency_samples)


class SerialUdpBridge:
    """Validates frames off one transport leg and re-emits them on the other.

    Valid frames pass through byte-for-byte, one datagram per frame; frames
    failing validation are counted and dropped, never raised. The decoder
    is pluggable so the same bridge serves the sensor stream and the
    command stream.
    """

    def __init__(self, decoder=decode_sensor_frame, stats: BridgeStats | None = None):
        self._decoder = decoder
        self.stats = stats if stats is not None else BridgeStats()

    def forward(
        self, datagram: bytes, ingest_ms: float, emit_ms: float | None = None
    ) -> bytes | None:
        """Forward one datagram if it validates; record its transit latency.

        ``emit_ms`` defaults to ``ingest_ms`` for synchronous in-process
        forwarding; socket front-ends pass the actual emit time.
        """
        try:
            self._decoder(datagram)
        except FrameError:
            self.stats.frames_dropped_crc += 1
            return None
        self.stats.frames_forwarded += 1
        emit = ingest_ms if emit_ms is None else emit_ms
        self.stats.latency_samples.append(emit - ingest_ms)
        return bytes(datagram)


def bridge_forward(
    datagram: bytes, now_ms: float, stats: BridgeStats
) -> tuple[bytes | None, BridgeStats]:
    """One-shot functional form of SerialUdpBridge.forward for sensor frames."""
    bridge = SerialUdpBridge(stats=stats)
    out = bridge.forward(datagram, now_ms)
    return out, bridge.stats
