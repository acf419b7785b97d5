#!/usr/bin/env python3
"""Writes tests/data/ode_to_joy.mid, a format-0 Standard MIDI File of the
main theme from the fourth movement of Beethoven's ninth symphony (the
melody is long out of copyright). Regenerate with:

    python3 scripts/make_test_midi.py
"""

import pathlib
import struct

TICKS_PER_QUARTER = 480
Q = TICKS_PER_QUARTER
E = Q // 2
H = Q * 2
DQ = Q + E

# (midi_note, duration_ticks); the familiar four-phrase theme in C major.
PHRASE_A = [
    (64, Q), (64, Q), (65, Q), (67, Q),
    (67, Q), (65, Q), (64, Q), (62, Q),
    (60, Q), (60, Q), (62, Q), (64, Q),
    (64, DQ), (62, E), (62, H),
]
PHRASE_B = [
    (64, Q), (64, Q), (65, Q), (67, Q),
    (67, Q), (65, Q), (64, Q), (62, Q),
    (60, Q), (60, Q), (62, Q), (64, Q),
    (62, DQ), (60, E), (60, H),
]
PHRASE_C = [
    (62, Q), (62, Q), (64, Q), (60, Q),
    (62, Q), (64, E), (65, E), (64, Q), (60, Q),
    (62, Q), (64, E), (65, E), (64, Q), (62, Q),
    (60, Q), (62, Q), (55, H),
]
THEME = PHRASE_A + PHRASE_B + PHRASE_C + PHRASE_B

# Simple root-note accompaniment, one tone per measure of 4 quarters.
BASS = [48, 43, 48, 45, 48, 43, 48, 45, 50, 43, 50, 48, 48, 43, 48, 45]


def vlq(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def build_track() -> bytes:
    # absolute-time event list: (tick, priority, message bytes)
    events = []

    def add(tick, msg, priority=1):
        events.append((tick, priority, msg))

    add(0, b"\xff\x51\x03" + struct.pack(">I", 500000)[1:], 0)  # 120 bpm
    add(0, b"\xff\x58\x04\x04\x02\x18\x08", 0)                  # 4/4
    add(0, b"\xc0\x00", 0)                                       # piano

    tick = 0
    measure = 0
    repeats = 3
    for _ in range(repeats):
        quarters_seen = 0
        for note, dur in THEME:
            if quarters_seen % 4 == 0:
                bass = BASS[measure % len(BASS)]
                add(tick, bytes([0x90, bass, 0x40]))
                add(tick + 4 * Q, bytes([0x80, bass, 0x40]), 0)
                measure += 1
            add(tick, bytes([0x90, note, 0x50]))
            add(tick + dur, bytes([0x80, note, 0x40]), 0)
            tick += dur
            quarters_seen += dur / Q

    end_tick = max(t for t, _, _ in events)
    events.sort(key=lambda e: (e[0], e[1]))

    track = bytearray()
    last = 0
    for t, _, msg in events:
        track += vlq(t - last) + msg
        last = t
    track += vlq(end_tick - last) + b"\xff\x2f\x00"
    return bytes(track)


def main() -> None:
    track = build_track()
    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, TICKS_PER_QUARTER)
    chunk = b"MTrk" + struct.pack(">I", len(track)) + track
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "ode_to_joy.mid"
    out.write_bytes(header + chunk)
    print(f"wrote {out} ({out.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
