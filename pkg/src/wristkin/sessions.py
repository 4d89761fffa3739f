"""Tracking sessions: file ingestion, synthetic generation, joint derivation.

A session is an ordered series of end-effector poses expressed in the
optical sensor frame L, plus the per-subject constants needed to map them
into the wrist chain. Sessions come from two places: the documented
CSV + JSON file pair (replacing live capture), or the synthetic generator
that emulates the flexion-extension protocol (smooth cycles from neutral
to extension to flexion and back, a small coupled deviation sinusoid, and
a ground-truth surface for the translation offset d2).

File formats
------------
data CSV    header ``t,px,py,pz,nx,ny,nz,ox,oy,oz,ax,ay,az``; t seconds,
            positions mm, direction cosines dimensionless.
meta JSON   ``subject_id`` (str), ``a4_mm`` (> 0), ``p_lorg_mm`` (3 numbers),
            ``handedness`` ("left"|"right"), optional ``protocol``
            {"cycles", "duration_s"}.

Numbers are written with 12 decimal places; a load/save cycle of a saved
session is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import OrientationError, OutOfReachError, SchemaError
from .regression import DataPoint, RationalQuadricSurface
from .transforms import Pose, invert
from .wrist import (
    JointState,
    SubjectParams,
    _ik_from_matrix,
    forward_kinematics,
    sensor_frame_transform,
)

SESSION_HEADER = "t,px,py,pz,nx,ny,nz,ox,oy,oz,ax,ay,az"
# Gram drift thresholds on loaded rotation columns: below KEEP the matrix is
# stored bit-for-bit, up to REPAIR it is SVD-projected, beyond it is rejected.
DRIFT_KEEP = 1e-9
DRIFT_REPAIR = 1e-3
_FMT = "{:.12f}"


@dataclass(frozen=True)
class SessionProtocol:
    cycles: int
    duration_s: float


@dataclass(frozen=True)
class TrackingSession:
    """Timestamped sensor-frame poses plus subject constants."""

    subject: SubjectParams
    times: np.ndarray
    poses: tuple[Pose, ...]
    protocol: SessionProtocol | None = None
    handedness: str = "right"

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        poses = tuple(self.poses)
        if times.ndim != 1 or times.size != len(poses):
            raise ValueError("times and poses must have matching lengths")
        if times.size and np.any(np.diff(times) <= 0.0):
            raise ValueError("timestamps must be strictly increasing")
        if self.handedness not in ("left", "right"):
            raise ValueError(f"handedness must be 'left' or 'right', got {self.handedness!r}")
        times.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "poses", poses)

    def __len__(self) -> int:
        return len(self.poses)

    @property
    def samples(self) -> list[tuple[float, Pose]]:
        return list(zip(self.times.tolist(), self.poses))


@dataclass(frozen=True)
class JointSeries:
    """Joint states aligned 1:1 with a session's samples."""

    times: np.ndarray
    states: tuple[JointState, ...]

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        if times.size != len(self.states):
            raise ValueError("times and states must have matching lengths")
        times.flags.writeable = False
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def beta3(self) -> np.ndarray:
        return np.array([s.beta3 for s in self.states])

    @property
    def beta4(self) -> np.ndarray:
        return np.array([s.beta4 for s in self.states])

    @property
    def d2(self) -> np.ndarray:
        return np.array([s.d2 for s in self.states])


@dataclass(frozen=True)
class SyntheticConfig:
    """Protocol emulation parameters (angles radians, lengths mm).

    Each subject performs ``cycles_per_subject`` flexion-extension cycles
    in ``duration_s`` seconds: beta4 runs neutral -> extension (negative)
    -> flexion (positive) -> neutral per cycle, spanning
    [-extension_max, +flexion_max]. theta3 is a coupled sinusoid of
    amplitude ``rud_amplitude`` with a per-subject phase. d2 follows
    ``ground_truth`` evaluated at (beta3, beta4) plus Gaussian noise.
    """

    ground_truth: RationalQuadricSurface
    n_subjects: int
    seed: int = 0
    cycles_per_subject: int = 10
    duration_s: float = 40.0
    flexion_max: float = math.radians(30.0)
    extension_max: float = math.radians(10.0)
    rud_amplitude: float = math.radians(5.0)
    noise_sigma_mm: float = 0.0
    a4_range: tuple[float, float] = (90.0, 110.0)
    sample_rate_hz: float = 50.0

    def __post_init__(self):
        if self.flexion_max < 0 or self.extension_max < 0:
            raise ValueError("flexion_max and extension_max must be >= 0")
        if self.noise_sigma_mm < 0:
            raise ValueError("noise_sigma_mm must be >= 0")
        if self.n_subjects < 1:
            raise ValueError("n_subjects must be >= 1")
        lo, hi = self.a4_range
        if not 0 < lo <= hi:
            raise ValueError(f"a4_range must be a positive interval, got {self.a4_range}")
        if self.cycles_per_subject < 1 or self.duration_s <= 0 or self.sample_rate_hz <= 0:
            raise ValueError("cycles, duration and sample rate must be positive")


def _parse_meta(meta_file) -> tuple[SubjectParams, SessionProtocol | None, str]:
    try:
        payload = json.loads(Path(meta_file).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{meta_file}: not valid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise SchemaError(f"{meta_file}: expected a JSON object")
    subject_id = payload.get("subject_id")
    if not isinstance(subject_id, str):
        raise SchemaError(f"{meta_file}: subject_id must be a string")
    a4 = payload.get("a4_mm")
    if not isinstance(a4, (int, float)) or not math.isfinite(a4) or a4 <= 0:
        raise SchemaError(f"{meta_file}: a4_mm must be a positive number")
    p_lorg = payload.get("p_lorg_mm")
    if (
        not isinstance(p_lorg, list)
        or len(p_lorg) != 3
        or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in p_lorg)
    ):
        raise SchemaError(f"{meta_file}: p_lorg_mm must be 3 finite numbers")
    handedness = payload.get("handedness")
    if handedness not in ("left", "right"):
        raise SchemaError(f"{meta_file}: handedness must be 'left' or 'right'")
    protocol = None
    if "protocol" in payload:
        proto = payload["protocol"]
        if (
            not isinstance(proto, dict)
            or not isinstance(proto.get("cycles"), int)
            or proto["cycles"] < 1
            or not isinstance(proto.get("duration_s"), (int, float))
            or proto["duration_s"] <= 0
        ):
            raise SchemaError(
                f"{meta_file}: protocol must hold integer cycles >= 1 and duration_s > 0"
            )
        protocol = SessionProtocol(cycles=proto["cycles"], duration_s=float(proto["duration_s"]))
    subject = SubjectParams(a4=float(a4), p_lorg=np.array(p_lorg, dtype=float), subject_id=subject_id)
    return subject, protocol, handedness


def _rotation_from_row(vals: Sequence[float], where: str) -> np.ndarray:
    r = np.array(
        [
            [vals[0], vals[3], vals[6]],
            [vals[1], vals[4], vals[7]],
            [vals[2], vals[5], vals[8]],
        ]
    )
    det = float(np.linalg.det(r))
    if det <= 0.0:
        raise OrientationError(f"{where}: rotation is a reflection (det = {det:.6f})")
    drift = float(np.abs(r.T @ r - np.eye(3)).max())
    if drift > DRIFT_REPAIR:
        raise OrientationError(f"{where}: orientation drift {drift:.3e} exceeds {DRIFT_REPAIR}")
    if drift > DRIFT_KEEP:
        u, _, vt = np.linalg.svd(r)
        r = u @ vt
    return r


def load_session(data_file, meta_file) -> TrackingSession:
    """Read and validate a session from the documented CSV + JSON pair.

    Rotation columns with Gram drift in (1e-9, 1e-3] are re-orthonormalized
    by SVD projection; larger drift or a reflection raises
    OrientationError. Non-monotonic timestamps and malformed rows raise
    SchemaError.
    """
    subject, protocol, handedness = _parse_meta(meta_file)
    text = Path(data_file).read_text()
    lines = text.splitlines()
    if not lines or lines[0] != SESSION_HEADER:
        raise SchemaError(f"{data_file}: first line must be '{SESSION_HEADER}'")
    if len(lines) < 2:
        raise SchemaError(f"{data_file}: no samples")
    times = []
    poses = []
    prev_t = -math.inf
    for idx, line in enumerate(lines[1:]):
        where = f"{data_file} row {idx}"
        parts = line.split(",")
        if len(parts) != 13:
            raise SchemaError(f"{where}: expected 13 columns, got {len(parts)}")
        try:
            vals = [float(v) for v in parts]
        except ValueError as exc:
            raise SchemaError(f"{where}: non-numeric field ({exc})") from exc
        if not all(math.isfinite(v) for v in vals):
            raise SchemaError(f"{where}: non-finite field")
        t = vals[0]
        if t <= prev_t:
            raise SchemaError(f"{where}: monotonicity violated (t = {t} after {prev_t})")
        prev_t = t
        r = _rotation_from_row(vals[4:13], where)
        poses.append(Pose(r, np.array(vals[1:4])))
        times.append(t)
    return TrackingSession(
        subject=subject,
        times=np.array(times),
        poses=tuple(poses),
        protocol=protocol,
        handedness=handedness,
    )


def save_session(session: TrackingSession, data_file, meta_file) -> None:
    """Write the canonical file pair (12-decimal fixed formatting)."""
    rows = [SESSION_HEADER]
    for t, pose in zip(session.times, session.poses):
        vals = [
            t,
            *pose.p,
            *pose.r[:, 0],
            *pose.r[:, 1],
            *pose.r[:, 2],
        ]
        rows.append(",".join(_FMT.format(v) for v in vals))
    Path(data_file).write_text("\n".join(rows) + "\n")

    meta = {
        "subject_id": session.subject.subject_id,
        "a4_mm": float(session.subject.a4),
        "p_lorg_mm": [float(v) for v in session.subject.p_lorg],
        "handedness": session.handedness,
    }
    if session.protocol is not None:
        meta["protocol"] = {
            "cycles": session.protocol.cycles,
            "duration_s": float(session.protocol.duration_s),
        }
    Path(meta_file).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def derive_joint_series(session: TrackingSession) -> JointSeries:
    """Map every sample to joint space: sensor frame -> base frame -> IK.

    Errors from unreachable or malformed samples are re-raised with the
    offending sample index.
    """
    base = sensor_frame_transform(session.subject)
    r0, p0 = base.r, base.p
    a4 = session.subject.a4
    states = []
    for idx, pose in enumerate(session.poses):
        r = r0 @ pose.r
        p = r0 @ pose.p + p0
        try:
            states.append(_ik_from_matrix(r, p, a4))
        except (OutOfReachError, OrientationError) as exc:
            raise type(exc)(f"sample {idx}: {exc}") from exc
    return JointSeries(times=session.times, states=tuple(states))


def to_data_points(series: JointSeries | Iterable[JointSeries]) -> list[DataPoint]:
    """Flatten joint series into (beta3, beta4, d2) regression points."""
    if isinstance(series, JointSeries):
        series = [series]
    points = []
    for s in series:
        for state in s.states:
            points.append(DataPoint(x=state.beta3, y=state.beta4, z=state.d2))
    return points


def _beta4_trajectory(t: np.ndarray, cycles: int, duration: float,
                      flexion_max: float, extension_max: float) -> np.ndarray:
    # sinusoid spanning [-extension_max, flexion_max], starting at neutral
    # and moving into extension first
    mid = (flexion_max - extension_max) / 2.0
    amp = (flexion_max + extension_max) / 2.0
    if amp == 0.0:
        return np.zeros_like(t)
    omega = 2.0 * math.pi * cycles / duration
    phase = math.asin(mid / amp)
    return mid - amp * np.sin(omega * t + phase)


def synthesize_session(config: SyntheticConfig, subject_index: int) -> TrackingSession:
    """Generate one subject's session; a pure function of (seed, subject_index).

    Draw order (fixed): a4, the three p_lorg components, the deviation
    phase, then the d2 noise vector.
    """
    if not 0 <= subject_index < config.n_subjects:
        raise ValueError(f"subject_index {subject_index} outside 0..{config.n_subjects - 1}")
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(subject_index,)))
    a4 = float(rng.uniform(*config.a4_range))
    p_lorg = rng.uniform(-250.0, 250.0, 3)
    rud_phase = float(rng.uniform(0.0, 2.0 * math.pi))
    subject = SubjectParams(a4=a4, p_lorg=p_lorg, subject_id=f"subject_{subject_index:02d}")

    n = int(round(config.duration_s * config.sample_rate_hz)) + 1
    t = np.arange(n) / config.sample_rate_hz
    omega = 2.0 * math.pi * config.cycles_per_subject / config.duration_s
    theta4 = _beta4_trajectory(
        t, config.cycles_per_subject, config.duration_s,
        config.flexion_max, config.extension_max,
    )
    theta3 = config.rud_amplitude * np.sin(omega * t + rud_phase)
    beta3 = theta3 + math.pi / 2.0
    d2 = np.asarray(config.ground_truth.evaluate(beta3, theta4), dtype=float)
    if config.noise_sigma_mm > 0.0:
        d2 = d2 + rng.normal(0.0, config.noise_sigma_mm, n)

    to_sensor = invert(sensor_frame_transform(subject))
    poses = []
    for k in range(n):
        state = JointState(theta3=float(theta3[k]), theta4=float(theta4[k]), d2=float(d2[k]))
        fk = forward_kinematics(state, subject)
        poses.append(Pose(to_sensor.r @ fk.r, to_sensor.r @ fk.p + to_sensor.p))
    return TrackingSession(
        subject=subject,
        times=t,
        poses=tuple(poses),
        protocol=SessionProtocol(cycles=config.cycles_per_subject, duration_s=config.duration_s),
    )


def synthesize_sessions(config: SyntheticConfig) -> list[TrackingSession]:
    """All subjects of a synthetic cohort."""
    return [synthesize_session(config, i) for i in range(config.n_subjects)]


def subject_split(
    sessions: Sequence[TrackingSession], n_fit: int, seed: int
) -> tuple[list[TrackingSession], list[TrackingSession]]:
    """Seeded random partition into (fit, validation); order-stable within each."""
    if not 0 <= n_fit < len(sessions):
        raise ValueError(f"n_fit must be in [0, {len(sessions) - 1}], got {n_fit}")
    perm = np.random.default_rng(seed).permutation(len(sessions))
    fit_idx = sorted(perm[:n_fit].tolist())
    val_idx = sorted(perm[n_fit:].tolist())
    return [sessions[i] for i in fit_idx], [sessions[i] for i in val_idx]


@dataclass(frozen=True)
class SubjectValidation:
    """Residual summary (d2_predicted - d2_observed, mm) for one subject."""

    subject_id: str
    n: int
    mean_residual: float
    sd_residual: float
    pct_error: float
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    residuals: np.ndarray


@dataclass(frozen=True)
class ValidationSummary:
    subjects: tuple[SubjectValidation, ...]
    pooled_mean: float
    pooled_sd: float
    n_total: int


# samples with |d2| below this are excluded from the percentage error
PCT_ERROR_MIN_D2 = 1.0


def validation_stats(
    surface: RationalQuadricSurface, sessions: Sequence[TrackingSession]
) -> ValidationSummary:
    """Per-subject and pooled residual statistics of a surface on sessions.

    Residuals are predicted minus observed d2. The percentage error is the
    mean of |residual| / |d2| * 100 over samples with |d2| >= 1 mm (nan if
    no sample qualifies).
    """
    if not sessions:
        raise ValueError("no sessions given")
    per_subject = []
    pooled = []
    for session in sessions:
        if len(session) == 0:
            raise ValueError(f"session {session.subject.subject_id!r} has no samples")
        series = derive_joint_series(session)
        observed = series.d2
        predicted = np.asarray(surface.evaluate(series.beta3, series.beta4), dtype=float)
        residual = predicted - observed
        mask = np.abs(observed) >= PCT_ERROR_MIN_D2
        if mask.any():
            pct = float(np.mean(np.abs(residual[mask]) / np.abs(observed[mask])) * 100.0)
        else:
            pct = float("nan")
        q1, median, q3 = np.percentile(residual, [25.0, 50.0, 75.0])
        per_subject.append(
            SubjectValidation(
                subject_id=session.subject.subject_id,
                n=residual.size,
                mean_residual=float(residual.mean()),
                sd_residual=float(residual.std(ddof=1)) if residual.size > 1 else 0.0,
                pct_error=pct,
                minimum=float(residual.min()),
                q1=float(q1),
                median=float(median),
                q3=float(q3),
                maximum=float(residual.max()),
                residuals=residual,
            )
        )
        pooled.append(residual)
    pooled_arr = np.concatenate(pooled)
    return ValidationSummary(
        subjects=tuple(per_subject),
        pooled_mean=float(pooled_arr.mean()),
        pooled_sd=float(pooled_arr.std(ddof=1)) if pooled_arr.size > 1 else 0.0,
        n_total=int(pooled_arr.size),
    )
