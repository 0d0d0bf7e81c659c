"""Wire formats: CRC references, bit-exact layouts, corruption, resync, bridge."""

import binascii
import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rovteleop import wire
from rovteleop.wire import (
    BadCrc,
    BadLength,
    BadSync,
    BridgeStats,
    CommandFrame,
    PayloadLengthMismatch,
    SensorFrame,
    SerialUdpBridge,
    UnknownMsgId,
    bridge_forward,
    crc16_ccitt_false,
    crc16_x25,
    decode_command,
    decode_sensor_frame,
    encode_command,
    encode_sensor_frame,
    manual_setpoint_payload,
    parse_manual_setpoint,
    parse_set_servo,
    scan_sensor_frames,
    set_servo_payload,
)


def x25_reference(data: bytes) -> int:
    """Independent bitwise CRC-16/X.25 (no tables, LSB-first loop)."""
    crc = 0xFFFF
    for b in data:
        crc ^= b
        for _ in range(8):
            crc = (crc >> 1) ^ 0x8408 if crc & 1 else crc >> 1
    return crc ^ 0xFFFF


CRC_VECTORS = [b"123456789", b"", bytes(range(32))]


class TestCrc:
    def test_ccitt_false_check_value(self):
        # the published check value for this CRC variant
        assert crc16_ccitt_false(b"123456789") == 0x29B1

    def test_ccitt_false_matches_binascii(self):
        for vec in CRC_VECTORS:
            assert crc16_ccitt_false(vec) == binascii.crc_hqx(vec, 0xFFFF)

    def test_x25_check_value(self):
        assert crc16_x25(b"123456789") == 0x906E

    def test_x25_matches_reference(self):
        for vec in CRC_VECTORS:
            assert crc16_x25(vec) == x25_reference(vec)

    @given(st.binary(max_size=64))
    def test_crc_implementations_agree_everywhere(self, data):
        assert crc16_ccitt_false(data) == binascii.crc_hqx(data, 0xFFFF)
        assert crc16_x25(data) == x25_reference(data)


class TestSensorFrame:
    def test_zero_frame_layout(self):
        raw = encode_sensor_frame(SensorFrame(seq=0, pot_raw=0, button=False))
        assert len(raw) == 8
        assert raw[:6] == bytes([0xA5, 0x04, 0x00, 0x00, 0x00, 0x00])
        expected_crc = binascii.crc_hqx(raw[1:6], 0xFFFF)
        assert raw[6:] == struct.pack("<H", expected_crc)

    def test_max_frame_layout(self):
        raw = encode_sensor_frame(SensorFrame(seq=7, pot_raw=1023, button=True))
        assert raw[:6] == bytes([0xA5, 0x04, 0xFF, 0x03, 0x01, 0x07])
        expected_crc = binascii.crc_hqx(raw[1:6], 0xFFFF)
        assert raw[6:] == struct.pack("<H", expected_crc)

    def test_pot_raw_out_of_range_rejected(self):
        with pytest.raises(wire.BadField):
            SensorFrame(seq=0, pot_raw=1024, button=False)

    def test_round_trip(self):
        f = SensorFrame(seq=250, pot_raw=513, button=True)
        assert decode_sensor_frame(encode_sensor_frame(f)) == f

    @given(
        st.integers(0, 255), st.integers(0, 1023), st.booleans()
    )
    def test_round_trip_property(self, seq, pot, button):
        f = SensorFrame(seq=seq, pot_raw=pot, button=button)
        assert decode_sensor_frame(encode_sensor_frame(f)) == f

    def test_bit_flip_in_pot_raw_is_bad_crc(self):
        raw = bytearray(encode_sensor_frame(SensorFrame(seq=3, pot_raw=700, button=False)))
        raw[2] ^= 0x10  # low pot byte
        with pytest.raises(BadCrc):
            decode_sensor_frame(bytes(raw))

    def test_every_bit_flip_rejected(self):
        frame = encode_sensor_frame(SensorFrame(seq=9, pot_raw=341, button=True))
        for bit in range(len(frame) * 8):
            corrupted = bytearray(frame)
            corrupted[bit // 8] ^= 1 << (bit % 8)
            with pytest.raises(wire.FrameError):
                decode_sensor_frame(bytes(corrupted))

    def test_resync_over_garbage_prefix(self):
        f = SensorFrame(seq=1, pot_raw=99, button=False)
        stream = b"\x01\x02\x03" + encode_sensor_frame(f)
        assert decode_sensor_frame(stream) == f

    def test_no_sync_byte(self):
        with pytest.raises(BadSync):
            decode_sensor_frame(b"\x00\x01\x02\x03\x04\x05\x06\x07")

    def test_truncated_frame(self):
        raw = encode_sensor_frame(SensorFrame(seq=0, pot_raw=0, button=False))
        with pytest.raises(BadLength):
            decode_sensor_frame(raw[:5])

    def test_wrong_length_byte(self):
        raw = bytearray(encode_sensor_frame(SensorFrame(seq=0, pot_raw=0, button=False)))
        raw[1] = 0x05
        with pytest.raises(BadLength):
            decode_sensor_frame(bytes(raw))

    def test_stream_resilience(self):
        rng = np.random.default_rng(31)
        frames = [
            SensorFrame(
                seq=int(rng.integers(0, 256)),
                pot_raw=int(rng.integers(0, 1024)),
                button=bool(rng.integers(0, 2)),
            )
            for _ in range(25)
        ]
        stream = bytearray()
        for f in frames:
            junk_len = int(rng.integers(0, 12))
            junk = bytes(int(b) for b in rng.integers(0, 255, junk_len) if b != 0xA5)
            stream += junk + encode_sensor_frame(f)
        decoded = scan_sensor_frames(bytes(stream))
        assert decoded == frames

    def test_sequence_surfaced_for_gap_counting(self):
        frames = [SensorFrame(seq=s, pot_raw=0, button=False) for s in (0, 1, 3)]
        decoded = scan_sensor_frames(b"".join(encode_sensor_frame(f) for f in frames))
        assert [f.seq for f in decoded] == [0, 1, 3]


class TestCommandFrame:
    def test_set_servo_round_trip(self):
        f = CommandFrame(seq=5, msg_id=wire.MSG_SET_SERVO, payload=set_servo_payload(9, 1500))
        decoded = decode_command(encode_command(f))
        assert decoded == f
        assert parse_set_servo(decoded) == (9, 1500)

    def test_close_command_payload_bytes(self):
        assert set_servo_payload(9, 1300) == bytes([0x09, 0x14, 0x05])

    def test_manual_setpoint_zeros(self):
        payload = manual_setpoint_payload((0.0,) * 6)
        assert payload == bytes(12)
        f = CommandFrame(seq=0, msg_id=wire.MSG_MANUAL_SETPOINT, payload=payload)
        assert parse_manual_setpoint(decode_command(encode_command(f))) == (0.0,) * 6

    def test_frame_layout(self):
        f = CommandFrame(seq=2, msg_id=wire.MSG_SET_SERVO, payload=set_servo_payload(9, 1700))
        raw = encode_command(f)
        assert raw[0] == 0xFE
        assert raw[1] == 3  # payload length
        assert raw[2] == 2  # seq
        assert raw[3] == 0xFF and raw[4] == 0x00  # sysid, compid
        assert struct.unpack_from("<H", raw, 5)[0] == wire.MSG_SET_SERVO
        assert raw[7:10] == bytes([0x09, 0xA4, 0x06])
        crc = x25_reference(raw[1:10])
        assert raw[10:] == struct.pack("<H", crc)

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(1100, 1900))
    def test_round_trip_property(self, seq, channel, width):
        f = CommandFrame(seq=seq, msg_id=wire.MSG_SET_SERVO, payload=set_servo_payload(channel, width))
        assert decode_command(encode_command(f)) == f

    @given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=6, max_size=6))
    def test_setpoint_round_trip_quantized(self, axes):
        f = CommandFrame(
            seq=0, msg_id=wire.MSG_MANUAL_SETPOINT, payload=manual_setpoint_payload(tuple(axes))
        )
        decoded = parse_manual_setpoint(decode_command(encode_command(f)))
        for a, b in zip(axes, decoded):
            assert abs(a - b) <= 0.0005 + 1e-9

    def test_every_bit_flip_rejected(self):
        f = CommandFrame(seq=77, msg_id=wire.MSG_SET_SERVO, payload=set_servo_payload(9, 1300))
        raw = encode_command(f)
        for bit in range(len(raw) * 8):
            corrupted = bytearray(raw)
            corrupted[bit // 8] ^= 1 << (bit % 8)
            with pytest.raises(wire.FrameError):
                decode_command(bytes(corrupted))

    def test_unknown_msg_id(self):
        body = struct.pack("<BBBBH", 3, 0, 0xFF, 0x00, 42) + b"\x00\x00\x00"
        raw = bytes([0xFE]) + body + struct.pack("<H", crc16_x25(body))
        with pytest.raises(UnknownMsgId):
            decode_command(raw)

    def test_payload_length_mismatch(self):
        # valid CRC, known msg id, but a SET_SERVO payload of 4 bytes
        body = struct.pack("<BBBBH", 4, 0, 0xFF, 0x00, wire.MSG_SET_SERVO) + bytes(4)
        raw = bytes([0xFE]) + body + struct.pack("<H", crc16_x25(body))
        with pytest.raises(PayloadLengthMismatch):
            decode_command(raw)

    def test_bad_magic(self):
        raw = bytearray(encode_command(CommandFrame(0, wire.MSG_SET_SERVO, set_servo_payload(1, 1500))))
        raw[0] = 0xFD
        with pytest.raises(BadSync):
            decode_command(bytes(raw))

    def test_truncated(self):
        raw = encode_command(CommandFrame(0, wire.MSG_SET_SERVO, set_servo_payload(1, 1500)))
        with pytest.raises(BadLength):
            decode_command(raw[:-1])

    def test_constructor_rejects_unknown_id(self):
        with pytest.raises(UnknownMsgId):
            CommandFrame(seq=0, msg_id=3, payload=b"")

    def test_constructor_rejects_oversize_payload(self):
        with pytest.raises(PayloadLengthMismatch):
            CommandFrame(seq=0, msg_id=1, payload=bytes(65))


class TestBridge:
    def _frames(self, n, seed=0):
        rng = np.random.default_rng(seed)
        return [
            encode_sensor_frame(
                SensorFrame(
                    seq=i & 0xFF,
                    pot_raw=int(rng.integers(0, 1024)),
                    button=bool(rng.integers(0, 2)),
                )
            )
            for i in range(n)
        ]

    def test_all_valid_forwarded(self):
        bridge = SerialUdpBridge()
        outs = [bridge.forward(f, now) for now, f in enumerate(self._frames(100))]
        assert all(o is not None for o in outs)
        assert bridge.stats.frames_forwarded == 100
        assert bridge.stats.frames_dropped_crc == 0
        assert bridge.stats.frames_received == 100

    def test_corrupted_dropped(self):
        frames = self._frames(100, seed=3)
        for i in range(0, 100, 10):  # corrupt every tenth
            b = bytearray(frames[i])
            b[4] ^= 0xFF
            frames[i] = bytes(b)
        bridge = SerialUdpBridge()
        outs = [bridge.forward(f, 0.0) for f in frames]
        assert sum(o is not None for o in outs) == 90
        assert bridge.stats.frames_forwarded == 90
        assert bridge.stats.frames_dropped_crc == 10

    def test_forwarded_unchanged(self):
        frame = self._frames(1)[0]
        assert SerialUdpBridge().forward(frame, 1.0) == frame

    def test_latency_sample_per_forwarded_frame(self):
        bridge = SerialUdpBridge()
        for now, f in enumerate(self._frames(20)):
            bridge.forward(f, float(now), emit_ms=float(now) + 2.5)
        assert len(bridge.stats.latency_samples) == bridge.stats.frames_forwarded
        assert bridge.stats.mean_latency_ms() == pytest.approx(2.5)

    def test_functional_form(self):
        stats = BridgeStats()
        out, stats = bridge_forward(self._frames(1)[0], 0.0, stats)
        assert out is not None
        assert stats.frames_forwarded == 1
