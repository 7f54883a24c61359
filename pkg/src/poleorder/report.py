"""Check records, report envelopes and their two serializations.

The machine record is JSON with sorted keys.  Integers are written as decimal
strings and fractions as ``"p/q"``; there are no floats.  The run timestamp
appears only in the human-readable text, so that identical configurations
produce byte-identical machine records.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, fields, is_dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

VERDICTS = ("pass", "fail", "info")


@dataclass(frozen=True)
class Expected:
    value: object
    provenance: str


@dataclass
class Check:
    name: str
    verdict: str
    inputs: dict = field(default_factory=dict)
    computed: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)  # name -> Expected
    criterion: int | None = None
    note: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")
        for key, e in self.expected.items():
            if not isinstance(e, Expected) or not e.provenance:
                raise ValueError(f"expected value {key!r} lacks a provenance tag")

    @property
    def failed(self) -> bool:
        return self.verdict == "fail"


def verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


@dataclass
class ReportEnvelope:
    tool_version: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def all_pass(self) -> bool:
        return not any(c.failed for c in self.checks)

    @property
    def exit_status(self) -> int:
        return 0 if self.all_pass else 1

    def counts(self) -> dict[str, int]:
        out = {v: 0 for v in VERDICTS}
        for c in self.checks:
            out[c.verdict] += 1
        return out


def to_plain(obj):
    """Canonical JSON-ready form: exact numbers become strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, str):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.name
    if isinstance(obj, Expected):
        return {"value": to_plain(obj.value), "provenance": obj.provenance}
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return str(obj)


def machine_record(env: ReportEnvelope) -> str:
    doc = {
        "tool_version": env.tool_version,
        "config": to_plain(env.config),
        "checks": [to_plain(c) for c in env.checks],
        "summary": to_plain(env.counts()),
        "all_pass": env.all_pass,
    }
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def _fmt(v) -> str:
    if isinstance(v, Expected):
        return _fmt(v.value)
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    if v is None:
        return "-"
    return str(v)


def human_report(env: ReportEnvelope) -> str:
    lines = [
        f"poleorder {env.tool_version}  run at {env.timestamp}",
        "config: " + ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(env.config.items())),
        "",
    ]
    for c in env.checks:
        tag = f"[{c.criterion}] " if c.criterion is not None else ""
        lines.append(f"{c.verdict.upper():4s}  {tag}{c.name}")
        for k, v in c.computed.items():
            lines.append(f"        computed {k} = {_fmt(v)}")
        for k, e in c.expected.items():
            lines.append(f"        expected {k} = {_fmt(e.value)}  ({e.provenance})")
        if c.note:
            lines.append(f"        note: {c.note}")
    counts = env.counts()
    lines += ["", f"{counts['pass']} pass, {counts['fail']} fail, {counts['info']} info"]
    return "\n".join(lines) + "\n"


def emit_report(env: ReportEnvelope, path) -> None:
    """Machine record at ``path``; human text at ``path`` + ``.txt``."""
    path = Path(path)
    try:
        path.write_text(machine_record(env))
        Path(str(path) + ".txt").write_text(human_report(env))
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
