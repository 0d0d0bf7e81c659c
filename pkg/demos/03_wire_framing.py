"""Wire formats on display: hexdumps, corruption rejection, stream resync.

Encodes sensor and command frames, shows their exact byte layout, flips a
bit to demonstrate CRC rejection, then pushes a dirty byte stream through
the scanner and a bridge to show recovery and the drop counters.
"""

from rovteleop import wire


def hexdump(label: str, data: bytes) -> None:
    print(f"{label:<28} {' '.join(f'{b:02X}' for b in data)}")


print("-- sensor frames (8 bytes: sync, len, pot u16 LE, button, seq, CRC LE)")
f0 = wire.SensorFrame(seq=0, pot_raw=0, button=False)
f1 = wire.SensorFrame(seq=7, pot_raw=1023, button=True)
hexdump("pot=0 button=0 seq=0:", wire.encode_sensor_frame(f0))
hexdump("pot=1023 button=1 seq=7:", wire.encode_sensor_frame(f1))

print()
print("-- command frames (magic, len, seq, sysid, compid, msg u16 LE, payload, CRC LE)")
servo = wire.CommandFrame(seq=1, msg_id=wire.MSG_SET_SERVO,
                          payload=wire.set_servo_payload(9, 1300))
hexdump("SET_SERVO ch9 1300us:", wire.encode_command(servo))
sp = wire.CommandFrame(seq=2, msg_id=wire.MSG_MANUAL_SETPOINT,
                       payload=wire.manual_setpoint_payload((0.5, 0, 0, 0, 0, -1.0)))
hexdump("MANUAL_SETPOINT:", wire.encode_command(sp))

print()
print("-- corruption is rejected, never mis-decoded")
raw = bytearray(wire.encode_sensor_frame(f1))
raw[2] ^= 0x01  # flip one pot bit
try:
    wire.decode_sensor_frame(bytes(raw))
except wire.BadCrc as err:
    print(f"flipped 1 bit in pot_raw -> BadCrc: {err}")

print()
print("-- a dirty stream still yields every intact frame")
stream = b"\x13\x37" + wire.encode_sensor_frame(f0) + b"\x00\xff\x10" + wire.encode_sensor_frame(f1)
frames = wire.scan_sensor_frames(stream)
print(f"{len(stream)} bytes with junk between frames -> {len(frames)} frames: {frames}")

print()
print("-- the bridge forwards valid frames and counts the rest")
bridge = wire.SerialUdpBridge()
for i, chunk in enumerate([wire.encode_sensor_frame(f0), bytes(raw), wire.encode_sensor_frame(f1)]):
    out = bridge.forward(chunk, ingest_ms=float(i))
    print(f"datagram {i}: {'forwarded' if out else 'dropped'}")
s = bridge.stats
print(f"stats: forwarded={s.frames_forwarded} dropped_crc={s.frames_dropped_crc}")
