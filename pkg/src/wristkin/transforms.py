"""Rigid-body transform algebra for serial kinematic chains.

A :class:`Pose` is a proper rigid transform held as a 3x3 rotation and a
3-vector position (millimeters). The rotation columns are conventionally
called n, o, a. Link transforms follow the modified (proximal) D-H
convention: ``Rot_X(alpha_prev) @ Trans_X(a_prev) @ Rot_Z(theta) @
Trans_Z(d)``. The classic (distal) convention is deliberately not offered.

Angles are radians everywhere; lengths are millimeters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EYE3 = np.eye(3)
ORTHONORMAL_TOL = 1e-9


def _det3(r: np.ndarray) -> float:
    # cofactor expansion; avoids LAPACK overhead for a 3x3
    return float(
        r[0, 0] * (r[1, 1] * r[2, 2] - r[1, 2] * r[2, 1])
        - r[0, 1] * (r[1, 0] * r[2, 2] - r[1, 2] * r[2, 0])
        + r[0, 2] * (r[1, 0] * r[2, 1] - r[1, 1] * r[2, 0])
    )


@dataclass(frozen=True)
class Pose:
    """Proper rigid transform: rotation ``r`` (columns n, o, a) and position ``p`` (mm).

    Construction validates orthonormality (r.T @ r == I within 1e-9
    elementwise) and det(r) == +1 within 1e-9. Arrays are copied and
    frozen so poses behave as immutable values.
    """

    r: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        p = np.array(self.p, dtype=float)
        if r.shape != (3, 3):
            raise ValueError(f"rotation must be 3x3, got {r.shape}")
        if p.shape != (3,):
            raise ValueError(f"position must be a 3-vector, got {p.shape}")
        if not (np.isfinite(r).all() and np.isfinite(p).all()):
            raise ValueError("pose entries must be finite")
        drift = np.abs(r.T @ r - _EYE3).max()
        if drift > ORTHONORMAL_TOL:
            raise ValueError(f"rotation not orthonormal (drift {drift:.3e})")
        det = _det3(r)
        if abs(det - 1.0) > ORTHONORMAL_TOL:
            raise ValueError(f"rotation determinant {det:.12f} != +1 (improper)")
        r.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "p", p)

    # column accessors named after the usual direction-cosine labels
    @property
    def n(self) -> np.ndarray:
        return self.r[:, 0]

    @property
    def o(self) -> np.ndarray:
        return self.r[:, 1]

    @property
    def a(self) -> np.ndarray:
        return self.r[:, 2]

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "Pose":
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"expected 4x4 homogeneous matrix, got {m.shape}")
        if not np.array_equal(m[3], [0.0, 0.0, 0.0, 1.0]):
            raise ValueError("bottom row must be [0, 0, 0, 1]")
        return cls(m[:3, :3], m[:3, 3])

    def as_matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.r
        m[:3, 3] = self.p
        return m

    def apply(self, point: np.ndarray) -> np.ndarray:
        """Map a point (mm, 3-vector) through this transform."""
        return self.r @ np.asarray(point, dtype=float) + self.p


@dataclass(frozen=True)
class DHRow:
    """One modified-D-H table row: alpha_prev, a_prev (link twist/length about
    the previous x axis), then theta, d (rotation about / translation along
    the current z axis). Angles in radians, lengths in mm."""

    alpha_prev: float = 0.0
    a_prev: float = 0.0
    d: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        vals = (self.alpha_prev, self.a_prev, self.d, self.theta)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"D-H row fields must be finite, got {vals}")


def rot_x(angle: float) -> np.ndarray:
    """4x4 rotation about the x axis."""
    c, s = np.cos(angle), np.sin(angle)
    t = np.eye(4)
    t[1, 1], t[1, 2] = c, -s
    t[2, 1], t[2, 2] = s, c
    return t


def rot_z(angle: float) -> np.ndarray:
    """4x4 rotation about the z axis."""
    c, s = np.cos(angle), np.sin(angle)
    t = np.eye(4)
    t[0, 0], t[0, 1] = c, -s
    t[1, 0], t[1, 1] = s, c
    return t


def trans_x(length: float) -> np.ndarray:
    """4x4 translation along the x axis."""
    t = np.eye(4)
    t[0, 3] = length
    return t


def trans_z(length: float) -> np.ndarray:
    """4x4 translation along the z axis."""
    t = np.eye(4)
    t[2, 3] = length
    return t


def dh_link_transform(row: DHRow) -> Pose:
    """Link transform Rot_X(alpha) @ Trans_X(a) @ Rot_Z(theta) @ Trans_Z(d).

    Written in closed form:

        [ c_th        -s_th        0       a      ]
        [ s_th*c_al    c_th*c_al  -s_al   -s_al*d ]
        [ s_th*s_al    c_th*s_al   c_al    c_al*d ]
        [ 0            0           0       1      ]
    """
    c_al, s_al = np.cos(row.alpha_prev), np.sin(row.alpha_prev)
    c_th, s_th = np.cos(row.theta), np.sin(row.theta)
    r = np.array(
        [
            [c_th, -s_th, 0.0],
            [s_th * c_al, c_th * c_al, -s_al],
            [s_th * s_al, c_th * s_al, c_al],
        ]
    )
    p = np.array([row.a_prev, -s_al * row.d, c_al * row.d])
    return Pose(r, p)


def compose(lhs: Pose, rhs: Pose) -> Pose:
    """Homogeneous product lhs @ rhs (rhs expressed in lhs's frame)."""
    return Pose(lhs.r @ rhs.r, lhs.r @ rhs.p + lhs.p)


def compose_chain(poses) -> Pose:
    """Fold compose over a sequence of poses; identity for an empty sequence."""
    out = Pose.identity()
    for t in poses:
        out = compose(out, t)
    return out


def invert(t: Pose) -> Pose:
    """Rigid inverse (r.T, -r.T @ p)."""
    rt = t.r.T
    return Pose(rt, -(rt @ t.p))
