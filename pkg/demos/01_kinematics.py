"""Walk through the wrist chain: link transforms, forward and inverse
kinematics, and the sensor-frame mapping.

The chain has five frames: a fixed 90-degree base rotation, the prismatic
offset d2 along the capitate axis, revolute joints for radio-ulnar
deviation (theta3) and flexion-extension (theta4, positive in flexion),
and the fingertip link a4. Because the rotation center moves, d2 varies
with posture; everything here treats it as an independent input.
"""

import math

import numpy as np

from wristkin import (
    JointState,
    SubjectParams,
    compose_chain,
    forward_kinematics,
    inverse_kinematics,
    link_transforms,
    sensor_frame_transform,
    sensor_to_base,
    invert,
)

np.set_printoptions(precision=4, suppress=True)

subject = SubjectParams(a4=100.0, p_lorg=np.array([-180.0, 40.0, 160.0]), subject_id="demo")
print(f"subject: fingertip link a4 = {subject.a4} mm, sensor origin {subject.p_lorg} mm\n")

print("--- link transforms at 30 degrees flexion, d2 = 20 mm ---")
state = JointState(theta3=0.0, theta4=math.radians(30.0), d2=20.0)
for i, link in enumerate(link_transforms(state, subject), start=1):
    print(f"T_{i - 1}{i}:\n{link.as_matrix()}")

print("\n--- forward kinematics: closed form vs chained product ---")
closed = forward_kinematics(state, subject)
product = compose_chain(link_transforms(state, subject))
print(f"closed-form fingertip position: {closed.p}")
print(f"chained-product position:       {product.p}")
print(f"max elementwise difference:     {np.abs(closed.as_matrix() - product.as_matrix()).max():.2e}")

print("\n--- inverse kinematics recovers the joint state ---")
recovered = inverse_kinematics(closed, subject)
print(f"theta3 {math.degrees(recovered.theta3):+8.4f} deg   (input {math.degrees(state.theta3):+8.4f})")
print(f"theta4 {math.degrees(recovered.theta4):+8.4f} deg   (input {math.degrees(state.theta4):+8.4f})")
print(f"beta3  {math.degrees(recovered.beta3):+8.4f} deg   (theta3 + 90)")
print(f"d2     {recovered.d2:+8.4f} mm    (input {state.d2:+8.4f})")

print("\n--- the offset identity: d2 = p_x - a4 * n_x ---")
for theta3_deg, theta4_deg, d2 in ((10.0, -8.0, 14.0), (-15.0, 25.0, 23.5)):
    q = JointState(math.radians(theta3_deg), math.radians(theta4_deg), d2)
    pose = forward_kinematics(q, subject)
    print(
        f"theta3={theta3_deg:+5.1f} theta4={theta4_deg:+5.1f}: "
        f"p_x - a4*n_x = {pose.p[0] - subject.a4 * pose.r[0, 0]:+9.4f} (d2 = {d2:+9.4f})"
    )

print("\n--- sensor frame: tracked poses live in frame L ---")
fingertip_in_L = compose_chain([invert(sensor_frame_transform(subject)), closed])
print(f"fingertip position seen by the sensor: {fingertip_in_L.p}")
back = sensor_to_base(fingertip_in_L, subject)
print(f"mapped back into the base frame:       {back.p}")
print(f"(matches the forward kinematics above: {closed.p})")
