"""Text formats: loss-table CSV, scenario files, trace CSV and run summaries.

Scenario files are flat ``key = value`` documents; ``#`` starts a comment
line. Unknown and duplicate keys are errors. Floats are written with
``repr`` (shortest round-trip form), booleans as ``0``/``1`` in traces and
``on``/``off`` in scenarios.
"""

from __future__ import annotations

import io
import math
from importlib import resources
from pathlib import Path
from typing import Callable, TextIO

from .channel import LossTable, MobilityProfile, Segment
from .compensator import PredictorParams
from .engine import (
    BASELINE_POLICIES,
    RESAMPLE_MODES,
    ReferenceSpec,
    Scenario,
    SimTrace,
    StepRecord,
    TraceSummary,
)
from .pid import PidParams
from .plant import ContinuousTransferFunction

BUILTIN_PREFIX = "builtin:"
LOSS_HEADER = "distance_m,loss_rate"
TRACE_HEADER = "k,t,distance,rate,lost,r,y,u,predicted,iae"


class FormatError(ValueError):
    """Malformed or invalid input document."""


class LossTableError(FormatError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ScenarioError(FormatError):
    def __init__(self, message: str, key: str | None = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


def fmt_float(x: float) -> str:
    return repr(float(x))


# --------------------------------------------------------------------------
# loss tables


def parse_loss_csv(text: str, source: str = "") -> LossTable:
    entries: dict[float, list[float]] = {}
    meta: dict[str, str] = {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line.replace(" ", "") != LOSS_HEADER:
                raise LossTableError(f"expected header {LOSS_HEADER!r}, got {line!r}", lineno)
            header_seen = True
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise LossTableError(f"expected 2 fields, got {len(fields)}", lineno)
        try:
            d, rate = float(fields[0]), float(fields[1])
        except ValueError:
            raise LossTableError(f"non-numeric field in {line!r}", lineno) from None
        if not (math.isfinite(d) and d >= 0):
            raise LossTableError(f"distance {fields[0]} must be finite and non-negative", lineno)
        if not 0.0 <= rate <= 1.0:
            raise LossTableError(f"loss rate {fields[1]} outside [0, 1]", lineno)
        entries.setdefault(d, []).append(rate)
    if not entries:
        raise LossTableError("loss table has no samples")

    power = None
    if "power_dbm" in meta:
        try:
            power = float(meta["power_dbm"])
        except ValueError:
            raise LossTableError(f"bad power_dbm value {meta['power_dbm']!r}") from None
    return LossTable(entries, power_dbm=power, source=meta.get("source", source))


def format_loss_csv(table: LossTable) -> str:
    out = []
    if table.power_dbm is not None:
        out.append(f"# power_dbm={fmt_float(table.power_dbm)}")
    if table.source:
        out.append(f"# source={table.source}")
    out.append(LOSS_HEADER)
    for d, samples in table.entries.items():
        out.extend(f"{fmt_float(d)},{fmt_float(s)}" for s in samples)
    return "\n".join(out) + "\n"


def _builtin_text(name: str) -> str:
    try:
        return resources.files("wsansim").joinpath("data", name).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FileNotFoundError(f"no built-in resource named {name!r}") from None


def load_loss_table(ref: str, base_dir: Path | None = None) -> LossTable:
    """Load a table from a path or ``builtin:<name>`` reference."""
    if ref.startswith(BUILTIN_PREFIX):
        text = _builtin_text(ref[len(BUILTIN_PREFIX):] + ".csv")
    else:
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        text = path.read_text(encoding="utf-8")
    table = parse_loss_csv(text, source=ref)
    # Echo the reference, not whatever the file's metadata says.
    return LossTable(table.entries, power_dbm=table.power_dbm, source=ref)


def read_scenario_text(ref: str) -> tuple[str, Path | None]:
    """Scenario text and the directory relative table paths resolve against."""
    if ref.startswith(BUILTIN_PREFIX):
        return _builtin_text(ref[len(BUILTIN_PREFIX):] + ".scn"), None
    path = Path(ref)
    return path.read_text(encoding="utf-8"), path.parent


# --------------------------------------------------------------------------
# scenarios

_REQUIRED = (
    "sim.duration",
    "sim.h",
    "plant.num",
    "plant.den",
    "pid.kp",
    "pid.ki",
    "pid.kd",
    "mobility.segments",
    "loss.table",
)

_DEFAULTS = {
    "sim.seed": "0",
    "sim.compensate": "on",
    "sim.baseline_policy": "hold_last",
    "sim.resample": "per_period",
    "sim.y_bound": "1e6",
    "pred.kp": "0.3",
    "pred.ki": "0.2",
    "pred.kd": "0.5",
    "pred.m": "3",
    "ref.period": "2.0",
    "ref.high": "1.0",
    "ref.low": "-1.0",
}

SCENARIO_KEYS = _REQUIRED + tuple(_DEFAULTS)

_ON = {"on", "true", "yes", "1"}
_OFF = {"off", "false", "no", "0"}


def parse_flag(value: str, key: str = "") -> bool:
    v = value.strip().lower()
    if v in _ON:
        return True
    if v in _OFF:
        return False
    raise ScenarioError(f"expected on/off, got {value!r}", key)


def _float(kv, key, positive=False):
    try:
        v = float(kv[key])
    except ValueError:
        raise ScenarioError(f"not a number: {kv[key]!r}", key) from None
    if not math.isfinite(v):
        raise ScenarioError(f"must be finite, got {kv[key]!r}", key)
    if positive and not v > 0:
        raise ScenarioError(f"must be > 0, got {kv[key]!r}", key)
    return v


def _int(kv, key):
    try:
        return int(kv[key], 0)
    except ValueError:
        raise ScenarioError(f"not an integer: {kv[key]!r}", key) from None


def _coeffs(kv, key):
    try:
        return tuple(float(c) for c in kv[key].split(","))
    except ValueError:
        raise ScenarioError(f"expected comma-separated reals, got {kv[key]!r}", key) from None


def _segments(kv, key):
    segs = []
    for item in kv[key].split(","):
        parts = item.strip().split(":")
        if len(parts) != 3:
            raise ScenarioError(f"segment {item.strip()!r} is not t_start:t_end:distance", key)
        try:
            segs.append(Segment(*(float(p) for p in parts)))
        except ValueError:
            raise ScenarioError(f"segment {item.strip()!r} has a non-numeric field", key) from None
    return segs


def _choice(kv, key, allowed):
    v = kv[key].strip()
    if v not in allowed:
        raise ScenarioError(f"must be one of {', '.join(allowed)}, got {v!r}", key)
    return v


def parse_scenario_keys(text: str) -> dict[str, str]:
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in SCENARIO_KEYS:
            raise ScenarioError(f"unknown key (line {lineno})", key)
        if key in kv:
            raise ScenarioError(f"duplicate key (line {lineno})", key)
        kv[key] = value
    return kv


def parse_scenario(
    text: str,
    base_dir: Path | None = None,
    table_loader: Callable[[str, Path | None], LossTable] = load_loss_table,
) -> Scenario:
    """Parse and fully validate a scenario document.

    Raises :class:`ScenarioError` naming the offending key; I/O failures
    while loading the loss table propagate as ``OSError``.
    """
    kv = parse_scenario_keys(text)
    for key in _REQUIRED:
        if key not in kv:
            raise ScenarioError("missing required key", key)
    kv = {**_DEFAULTS, **kv}

    duration = _float(kv, "sim.duration", positive=True)
    h = _float(kv, "sim.h", positive=True)
    seed = _int(kv, "sim.seed")
    if not 0 <= seed < 2**64:
        raise ScenarioError("must be in [0, 2**64)", "sim.seed")
    y_bound = _float(kv, "sim.y_bound", positive=True)
    compensate = parse_flag(kv["sim.compensate"], "sim.compensate")
    baseline = _choice(kv, "sim.baseline_policy", BASELINE_POLICIES)
    resample = _choice(kv, "sim.resample", RESAMPLE_MODES)

    def build(keys, fn):
        try:
            return fn()
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(str(exc), keys) from None

    plant = build(
        "plant.num/plant.den",
        lambda: ContinuousTransferFunction(_coeffs(kv, "plant.num"), _coeffs(kv, "plant.den")),
    )
    pid = build(
        "pid",
        lambda: PidParams(_float(kv, "pid.kp"), _float(kv, "pid.ki"), _float(kv, "pid.kd"), h),
    )
    pred = build(
        "pred",
        lambda: PredictorParams(
            _float(kv, "pred.kp"), _float(kv, "pred.ki"), _float(kv, "pred.kd"), _int(kv, "pred.m")
        ),
    )
    reference = build(
        "ref.period",
        lambda: ReferenceSpec(_float(kv, "ref.period"), _float(kv, "ref.high"), _float(kv, "ref.low")),
    )
    profile = build(
        "mobility.segments", lambda: MobilityProfile(tuple(_segments(kv, "mobility.segments")))
    )
    if profile.t_end < duration:
        raise ScenarioError(
            f"profile ends at {profile.t_end} s, before sim.duration={duration} s",
            "mobility.segments",
        )
    try:
        table = table_loader(kv["loss.table"], base_dir)
    except LossTableError as exc:
        raise ScenarioError(str(exc), "loss.table") from None

    return build(
        "sim.duration",
        lambda: Scenario(
            duration=duration,
            h=h,
            plant=plant,
            pid=pid,
            pred=pred,
            profile=profile,
            table=table,
            compensate=compensate,
            baseline_policy=baseline,
            reference=reference,
            resample=resample,
            seed=seed,
            y_bound=y_bound,
        ),
    )


def scenario_items(sc: Scenario) -> list[tuple[str, str]]:
    """Effective configuration as ordered ``(key, value)`` pairs."""
    segs = ", ".join(
        f"{fmt_float(s.t_start)}:{fmt_float(s.t_end)}:{fmt_float(s.distance)}"
        for s in sc.profile.segments
    )
    return [
        ("sim.duration", fmt_float(sc.duration)),
        ("sim.h", fmt_float(sc.h)),
        ("sim.seed", str(sc.seed)),
        ("sim.compensate", "on" if sc.compensate else "off"),
        ("sim.baseline_policy", sc.baseline_policy),
        ("sim.resample", sc.resample),
        ("sim.y_bound", fmt_float(sc.y_bound)),
        ("plant.num", ", ".join(fmt_float(c) for c in sc.plant.num)),
        ("plant.den", ", ".join(fmt_float(c) for c in sc.plant.den)),
        ("pid.kp", fmt_float(sc.pid.kp)),
        ("pid.ki", fmt_float(sc.pid.ki)),
        ("pid.kd", fmt_float(sc.pid.kd)),
        ("pred.kp", fmt_float(sc.pred.kp_t)),
        ("pred.ki", fmt_float(sc.pred.ki_t)),
        ("pred.kd", fmt_float(sc.pred.kd_t)),
        ("pred.m", str(sc.pred.m)),
        ("ref.period", fmt_float(sc.reference.period)),
        ("ref.high", fmt_float(sc.reference.high)),
        ("ref.low", fmt_float(sc.reference.low)),
        ("mobility.segments", segs),
        ("loss.table", sc.table.source),
    ]


def format_scenario(sc: Scenario) -> str:
    return "".join(f"{k} = {v}\n" for k, v in scenario_items(sc))


# --------------------------------------------------------------------------
# traces and summaries


def _b(flag: bool) -> str:
    return "1" if flag else "0"


def emit_trace(trace: SimTrace, sink: TextIO) -> None:
    sink.write(TRACE_HEADER + "\n")
    for rec in trace.records:
        sink.write(
            ",".join(
                (
                    str(rec.k),
                    fmt_float(rec.t),
                    fmt_float(rec.distance),
                    fmt_float(rec.rate),
                    _b(rec.lost),
                    fmt_float(rec.r),
                    fmt_float(rec.y),
                    fmt_float(rec.u),
                    _b(rec.predicted),
                    fmt_float(rec.iae),
                )
            )
            + "\n"
        )


def trace_to_csv(trace: SimTrace) -> str:
    buf = io.StringIO()
    emit_trace(trace, buf)
    return buf.getvalue()


def read_trace_csv(text: str) -> list[StepRecord]:
    lines = text.splitlines()
    if not lines or lines[0] != TRACE_HEADER:
        raise FormatError("trace CSV is missing its header")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        f = line.split(",")
        if len(f) != 10:
            raise FormatError(f"line {lineno}: expected 10 fields, got {len(f)}")
        records.append(
            StepRecord(
                k=int(f[0]),
                t=float(f[1]),
                distance=float(f[2]),
                rate=float(f[3]),
                lost=f[4] == "1",
                r=float(f[5]),
                y=float(f[6]),
                u=float(f[7]),
                predicted=f[8] == "1",
                iae=float(f[9]),
            )
        )
    return records


def format_summary(summary: TraceSummary, sc: Scenario | None = None) -> str:
    lines = [
        f"final_iae={fmt_float(summary.final_iae)}",
        f"packets_sent={summary.packets_sent}",
        f"packets_lost={summary.packets_lost}",
        f"predictions_made={summary.predictions_made}",
        f"seed={summary.seed}",
        f"max_abs_y={fmt_float(summary.max_abs_y)}",
        f"diverged={_b(summary.diverged)}",
    ]
    if sc is not None:
        lines.append("# effective configuration")
        lines.extend(f"{k}={v}" for k, v in scenario_items(sc))
    return "\n".join(lines) + "\n"


def parse_summary(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line and not line.startswith("#"):
            key, _, value = line.partition("=")
            out[key] = value
    return out
