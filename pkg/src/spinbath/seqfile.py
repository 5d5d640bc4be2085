"""Line-based sequence file format.

UTF-8, one directive per line, '#' starts a comment.  Directives:

    init S | init UD
    lock S <duration>
    evolve <duration> sep|merged
    xpulse pi | xpulse <float>pi | xpulse amp=<float> dur=<duration>
    measure

Durations are a float followed by ns, us, or ms.
"""

from __future__ import annotations

import math

from .sequences import (SEPARATED, MERGED, ExchangePulse, FreeEvolve,
                        InitSinglet, InitUpDown, LockSinglet, MeasureST0,
                        PulseSequence, Segment)

_UNIT_SCALE = {"ns": 1e-9, "us": 1e-6, "ms": 1e-3}


class SequenceParseError(ValueError):
    """Parse or validation failure, carrying the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _parse_duration(tok: str, line: int) -> float:
    for unit, scale in _UNIT_SCALE.items():
        if tok.endswith(unit):
            try:
                value = float(tok[:-len(unit)])
            except ValueError:
                raise SequenceParseError(line, f"malformed duration {tok!r}") from None
            if value < 0:
                raise SequenceParseError(line, f"negative duration {tok!r}")
            return value * scale
    raise SequenceParseError(
        line, f"duration {tok!r} needs a ns/us/ms suffix")


def _parse_xpulse(args: list[str], line: int) -> ExchangePulse:
    if len(args) == 1 and args[0].endswith("pi"):
        head = args[0][:-2]
        if head == "":
            return ExchangePulse(angle=math.pi)
        try:
            return ExchangePulse(angle=float(head) * math.pi)
        except ValueError:
            raise SequenceParseError(line, f"malformed angle {args[0]!r}") from None
    kv = {}
    for tok in args:
        if "=" not in tok:
            raise SequenceParseError(line, f"malformed xpulse argument {tok!r}")
        key, _, val = tok.partition("=")
        kv[key] = val
    if set(kv) != {"amp", "dur"}:
        raise SequenceParseError(
            line, "amplitude pulse needs exactly amp=<float> dur=<duration>")
    try:
        amp = float(kv["amp"])
    except ValueError:
        raise SequenceParseError(line, f"malformed amplitude {kv['amp']!r}") from None
    dur = _parse_duration(kv["dur"], line)
    if dur <= 0:
        raise SequenceParseError(line, "pulse duration must be > 0")
    return ExchangePulse(amplitude=amp, pulse_duration=dur)


def parse_sequence(text: str) -> PulseSequence:
    """Parse the line DSL into a PulseSequence, validating basic structure."""
    segments: list[Segment] = []
    initialized = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        directive, args = toks[0], toks[1:]
        if directive == "init":
            if args == ["S"]:
                segments.append(InitSinglet())
            elif args == ["UD"]:
                segments.append(InitUpDown())
            else:
                raise SequenceParseError(lineno, f"init expects S or UD, got {args}")
            initialized = True
        elif directive == "lock":
            if len(args) != 2 or args[0] != "S":
                raise SequenceParseError(lineno, "usage: lock S <duration>")
            segments.append(LockSinglet(_parse_duration(args[1], lineno)))
            initialized = True
        elif directive == "evolve":
            if len(args) != 2:
                raise SequenceParseError(lineno, "usage: evolve <duration> sep|merged")
            dur = _parse_duration(args[0], lineno)
            if args[1] == "sep":
                segments.append(FreeEvolve(dur, SEPARATED))
            elif args[1] == "merged":
                segments.append(FreeEvolve(dur, MERGED))
            else:
                raise SequenceParseError(
                    lineno, f"electron configuration must be sep or merged, got {args[1]!r}")
        elif directive == "xpulse":
            if not args:
                raise SequenceParseError(lineno, "xpulse needs an angle or amplitude")
            segments.append(_parse_xpulse(args, lineno))
        elif directive == "measure":
            if args:
                raise SequenceParseError(lineno, "measure takes no arguments")
            if not initialized:
                raise SequenceParseError(lineno, "measure before any init")
            segments.append(MeasureST0())
        else:
            raise SequenceParseError(lineno, f"unknown directive {directive!r}")
    if not segments:
        raise SequenceParseError(1, "empty sequence")
    return PulseSequence(tuple(segments))


def _render_duration(seconds: float) -> str:
    if seconds != 0 and abs(seconds) < 1e-6:
        order = ("ns", "us", "ms")
    elif abs(seconds) < 1e-3:
        order = ("us", "ns", "ms")
    else:
        order = ("ms", "us", "ns")
    # pick a representation that parses back to the identical float
    for fmt in (".10g", ".17g"):
        for unit in order:
            text = format(seconds / _UNIT_SCALE[unit], fmt) + unit
            if _parse_duration(text, 0) == seconds:
                return text
    raise ValueError(f"cannot render duration {seconds!r} exactly")


def render_sequence(seq: PulseSequence) -> str:
    """Inverse of parse_sequence for sequences expressible in the DSL."""
    lines = []
    for seg in seq.segments:
        if isinstance(seg, InitSinglet):
            lines.append("init S")
        elif isinstance(seg, InitUpDown):
            lines.append("init UD")
        elif isinstance(seg, LockSinglet):
            lines.append(f"lock S {_render_duration(seg.duration)}")
        elif isinstance(seg, FreeEvolve):
            mode = "sep" if seg.electron == SEPARATED else "merged"
            lines.append(f"evolve {_render_duration(seg.duration)} {mode}")
        elif isinstance(seg, ExchangePulse):
            if seg.angle is not None:
                x = seg.angle / math.pi
                lines.append("xpulse pi" if x == 1.0 else f"xpulse {x:.10g}pi")
            else:
                lines.append(f"xpulse amp={seg.amplitude:.10g} "
                             f"dur={_render_duration(seg.pulse_duration)}")
        elif isinstance(seg, MeasureST0):
            lines.append("measure")
        else:
            raise TypeError(f"cannot render segment {seg!r}")
    return "\n".join(lines) + "\n"
