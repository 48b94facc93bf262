"""Trace CSV serialization.

The column contract is frozen: readers elsewhere key on these exact
names, so the header line must match HEADER byte for byte.  Floats are
written with repr so a read back reproduces the same values, newlines
are LF regardless of platform, and equal runs therefore produce
byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

from .engine import TraceRecord
from .errors import TraceFormatError

HEADER = ("t_s,theta1_rad,theta2_rad,theta_d1_rad,theta_d2_rad,"
          "err1_rad,err2_rad,s_norm,e_norm,triggered,"
          "U_v1_V,U_v2_V,delta1_m,delta2_m,V_x")

_N_COLS = len(HEADER.split(","))


def format_record(rec: TraceRecord) -> str:
    return (
        f"{rec.t!r},{rec.theta[0]!r},{rec.theta[1]!r},"
        f"{rec.theta_d[0]!r},{rec.theta_d[1]!r},"
        f"{rec.err[0]!r},{rec.err[1]!r},"
        f"{rec.s_norm!r},{rec.e_norm!r},{int(rec.triggered)},"
        f"{rec.u_v[0]!r},{rec.u_v[1]!r},"
        f"{rec.delta[0]!r},{rec.delta[1]!r},{rec.v_x!r}"
    )


def trace_text(records: Iterable[TraceRecord]) -> str:
    lines = [HEADER]
    lines.extend(format_record(rec) for rec in records)
    lines.append("")  # trailing newline
    return "\n".join(lines)


def write_trace(path: str | Path, records: Iterable[TraceRecord]) -> None:
    Path(path).write_bytes(trace_text(records).encode("ascii"))


def _parse_line(line: str, lineno: int) -> TraceRecord:
    parts = line.split(",")
    if len(parts) != _N_COLS:
        raise TraceFormatError(
            f"line {lineno}: expected {_N_COLS} columns, got {len(parts)}"
        )
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise TraceFormatError(f"line {lineno}: {exc}") from None
    if parts[9] not in ("0", "1"):
        raise TraceFormatError(
            f"line {lineno}: triggered flag must be 0 or 1, got {parts[9]!r}"
        )
    return TraceRecord(
        t=vals[0], theta=(vals[1], vals[2]), theta_d=(vals[3], vals[4]),
        err=(vals[5], vals[6]), s_norm=vals[7], e_norm=vals[8],
        triggered=parts[9] == "1", u_v=(vals[10], vals[11]),
        delta=(vals[12], vals[13]), v_x=vals[14], x_tilde=math.nan,
    )


def read_trace(path: str | Path) -> list[TraceRecord]:
    """Parse a trace CSV written by :func:`write_trace`.

    Raises
    ------
    TraceFormatError
        If the header deviates from the contract or a row is malformed.
    """
    text = Path(path).read_text(encoding="ascii")
    lines = text.split("\n")
    if not lines or lines[0] != HEADER:
        raise TraceFormatError(f"unexpected header {lines[0][:120]!r}")
    records = []
    for i, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        records.append(_parse_line(line, i))
    if not records:
        raise TraceFormatError("trace holds no records")
    return records
