import dataclasses
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from armforge.kinematics import (
    HomogeneousTransform,
    JointLimitError,
    JointState,
    PointCloud,
    PoseTarget,
    SingularTargetError,
    UnreachableTargetError,
    chain_frames,
    closed_form_position,
    degrees_of_freedom,
    dh_transform,
    forward_kinematics,
    grip_pitch,
    inverse_kinematics,
    point_cloud_to_csv,
    point_cloud_to_ply,
    sample_workspace,
    workspace_extent,
    wrap_deg,
)
from armforge.model import DHRow, default_arm_model, load_arm_config


def random_joint_state(model, rng):
    return JointState(theta=tuple(rng.uniform(lo, hi) for lo, hi in model.joint_limits))


def tip_radial(model, q):
    """Tip's radial coordinate in the vertical plane through theta1."""
    tip = forward_kinematics(model, q).translation
    th1 = math.radians(q.theta[0])
    return tip[0] * math.cos(th1) + tip[1] * math.sin(th1)


def degenerate_model(d1):
    """Chain with a3 = a4 = d5 = 0; bypasses config validation on purpose
    (zero reach fails the model invariant but is a useful analysis case)."""
    base = default_arm_model()
    rows = list(base.dh_table)
    rows[0] = dataclasses.replace(rows[0], d=d1)
    rows[1] = dataclasses.replace(rows[1], a=0.0)
    rows[2] = dataclasses.replace(rows[2], a=0.0)
    rows[4] = dataclasses.replace(rows[4], d=0.0)
    return dataclasses.replace(base, dh_table=tuple(rows))


# --- dh_transform ---------------------------------------------------------


def test_dh_identity():
    row = DHRow(a=0, alpha=0, d=0, theta_offset=0, joint_index=1)
    t = dh_transform(row, 0.0)
    assert np.allclose(t.matrix, np.eye(4))


def test_dh_pure_translation():
    row = DHRow(a=0, alpha=0, d=7.0, theta_offset=0, joint_index=1)
    t = dh_transform(row, 0.0)
    assert np.allclose(t.rotation, np.eye(3))
    assert np.allclose(t.translation, [0, 0, 7.0])


def test_dh_rotated_link():
    row = DHRow(a=1.0, alpha=0, d=0, theta_offset=0, joint_index=1)
    t = dh_transform(row, 90.0)
    assert np.allclose(t.translation, [0, 1, 0], atol=1e-12)
    rot_z_90 = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    assert np.allclose(t.rotation, rot_z_90, atol=1e-12)


def test_dh_theta_offset_applies():
    row = DHRow(a=1.0, alpha=0, d=0, theta_offset=90.0, joint_index=1)
    t = dh_transform(row, 0.0)
    assert np.allclose(t.translation, [0, 1, 0], atol=1e-12)


# --- forward kinematics ---------------------------------------------------


def test_fk_degenerate_geometry_all_zero():
    m = degenerate_model(d1=0.0)
    rng = np.random.default_rng(3)
    for _ in range(25):
        q = random_joint_state(m, rng)
        t = forward_kinematics(m, q)
        assert np.allclose(t.translation, 0.0, atol=1e-12)


def test_fk_straight_pose_reach(model):
    q = JointState(theta=(0.0, 0.0, 0.0, 180.0, 0.0))
    t = forward_kinematics(model, q)
    assert np.hypot(t.translation[0], t.translation[1]) == pytest.approx(41.78, abs=1e-9)
    shoulder = np.array([0.0, 0.0, model.d1])
    assert np.linalg.norm(t.translation - shoulder) == pytest.approx(model.reach, abs=1e-9)


def test_fk_straight_pose_norm_without_base():
    m = load_arm_config(json.dumps({"dh_table": [{"d": 0.0}, {}, {}, {}, {}]}))
    t = forward_kinematics(m, JointState(theta=(0.0, 0.0, 0.0, 180.0, 0.0)))
    assert np.linalg.norm(t.translation) == pytest.approx(41.78, abs=1e-9)


def test_fk_matches_closed_form(model):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        q = random_joint_state(model, rng)
        t = forward_kinematics(model, q)
        worst = max(worst, float(np.abs(t.translation - closed_form_position(model, q)).max()))
    assert worst < 1e-9


def test_fk_transforms_rigid(model):
    rng = np.random.default_rng(12)
    for _ in range(200):
        q = random_joint_state(model, rng)
        for frame in chain_frames(model, q):
            assert frame.rigidity_error() < 1e-9


def test_fk_out_of_limits_raises(model):
    with pytest.raises(JointLimitError):
        forward_kinematics(model, JointState(theta=(0.0, -20.0, 0.0, 90.0, 0.0)))


def test_theta5_does_not_move_tip(model):
    rng = np.random.default_rng(13)
    for _ in range(50):
        q = random_joint_state(model, rng)
        base = forward_kinematics(model, q).translation
        for t5 in (-90.0, -33.5, 0.0, 45.0, 90.0):
            q5 = JointState(theta=q.theta[:4] + (t5,))
            assert np.allclose(forward_kinematics(model, q5).translation, base, atol=1e-9)


def test_closed_form_degenerate_chain_is_base_point(model):
    m = degenerate_model(d1=7.0)
    rng = np.random.default_rng(14)
    for _ in range(25):
        q = random_joint_state(m, rng)
        assert np.allclose(closed_form_position(m, q), [0, 0, m.d1], atol=1e-12)


def test_homogeneous_transform_compose():
    a = HomogeneousTransform(np.eye(3), np.array([1.0, 0, 0]))
    b = dh_transform(DHRow(a=0, alpha=0, d=2.0, theta_offset=0, joint_index=1), 0.0)
    c = a @ b
    assert np.allclose(c.translation, [1, 0, 2])
    with pytest.raises(ValueError):
        HomogeneousTransform(np.eye(4), np.zeros(3))


# --- inverse kinematics ---------------------------------------------------


def test_ik_round_trip_random_targets(model):
    rng = np.random.default_rng(21)
    checked = 0
    while checked < 200:
        q = random_joint_state(model, rng)
        if tip_radial(model, q) < 0.5:
            continue
        checked += 1
        tip = forward_kinematics(model, q).translation
        psi = grip_pitch(model, q)
        target = PoseTarget(position=tuple(tip), psi=psi)
        solutions = []
        for branch in ("elbow-up", "elbow-down"):
            try:
                solutions.append(inverse_kinematics(model, target, branch))
            except (UnreachableTargetError, JointLimitError):
                continue
        assert solutions, f"no feasible branch for {q}"
        for sol in solutions:
            tip2 = forward_kinematics(model, sol).translation
            assert np.linalg.norm(tip2 - tip) < 1e-6
            assert abs(wrap_deg(grip_pitch(model, sol) - psi)) < 1e-6


def test_ik_both_branches_with_wide_limits(model):
    wide = dataclasses.replace(
        model,
        joint_limits=((-180.0, 180.0), (-90.0, 180.0), (-180.0, 180.0), (0.0, 180.0), (-90.0, 90.0)),
    )
    rng = np.random.default_rng(22)
    both = 0
    checked = 0
    while checked < 150:
        q = random_joint_state(model, rng)  # generate within the tighter defaults
        if tip_radial(model, q) < 0.5:
            continue
        checked += 1
        tip = forward_kinematics(model, q).translation
        psi = grip_pitch(model, q)
        target = PoseTarget(position=tuple(tip), psi=psi)
        ok = 0
        for branch in ("elbow-up", "elbow-down"):
            try:
                sol = inverse_kinematics(wide, target, branch)
            except (UnreachableTargetError, JointLimitError):
                continue
            tip2 = forward_kinematics(wide, sol).translation
            assert np.linalg.norm(tip2 - tip) < 1e-6
            assert abs(wrap_deg(grip_pitch(wide, sol) - psi)) < 1e-6
            ok += 1
        if ok == 2:
            both += 1
    assert both > 30  # both branches must be genuinely exercised


def test_ik_full_extension_branches_coincide(model):
    target = PoseTarget(position=(model.reach, 0.0, model.d1), psi=0.0)
    up = inverse_kinematics(model, target, "elbow-up")
    down = inverse_kinematics(model, target, "elbow-down")
    # At the reachability boundary the elbow triangle collapses: both
    # branches give the same straightened chain.
    assert up.theta[1] == pytest.approx(down.theta[1], abs=1e-3)
    assert up.theta[2] == pytest.approx(0.0, abs=1e-3)
    assert down.theta[2] == pytest.approx(0.0, abs=1e-3)
    tip = forward_kinematics(model, up).translation
    assert np.allclose(tip, target.position, atol=1e-4)


def test_ik_unreachable(model):
    with pytest.raises(UnreachableTargetError):
        inverse_kinematics(model, PoseTarget(position=(model.reach + model.d1 + 1.0, 0.0, model.d1), psi=0.0))
    with pytest.raises(UnreachableTargetError):
        inverse_kinematics(model, PoseTarget(position=(100.0, 0.0, 0.0), psi=0.0))
    # Wrist center inside the |a3-a4| annulus hole.
    with pytest.raises(UnreachableTargetError):
        inverse_kinematics(model, PoseTarget(position=(1.0, 0.0, model.d1 + model.d5), psi=90.0))


def test_ik_singular(model):
    with pytest.raises(SingularTargetError, match="theta1 indeterminate"):
        inverse_kinematics(model, PoseTarget(position=(0.0, 0.0, 40.0), psi=-90.0))


def test_ik_limit_violation(model):
    # Reachable wrist, but the grip would have to pitch up from below:
    # the default wrist range cannot fold there.
    target = PoseTarget(position=(20.0, 0.0, 30.0), psi=90.0)
    with pytest.raises(JointLimitError):
        inverse_kinematics(model, target, "elbow-down")


def test_ik_bad_branch_name(model):
    with pytest.raises(ValueError, match="branch"):
        inverse_kinematics(model, PoseTarget(position=(25.0, 0.0, 10.0), psi=-90.0), "sideways")


# --- degrees of freedom ---------------------------------------------------


def test_dof_reference_arm():
    assert degrees_of_freedom(6, 5, 0) == 5


def test_dof_simple_mechanisms():
    assert degrees_of_freedom(2, 1, 0) == 1
    assert degrees_of_freedom(4, 4, 0) == 1


def test_dof_errors():
    with pytest.raises(ValueError):
        degrees_of_freedom(0, 0, 0)
    with pytest.raises(ValueError):
        degrees_of_freedom(3, -1, 0)


@given(
    n=st.integers(min_value=1, max_value=50),
    j1=st.integers(min_value=0, max_value=50),
    j2=st.integers(min_value=0, max_value=50),
)
def test_dof_linear_in_each_argument(n, j1, j2):
    base = degrees_of_freedom(n, j1, j2)
    assert degrees_of_freedom(n + 1, j1, j2) - base == 3
    assert degrees_of_freedom(n, j1 + 1, j2) - base == -2
    assert degrees_of_freedom(n, j1, j2 + 1) - base == -1


# --- workspace ------------------------------------------------------------


def test_workspace_grid_cardinality(model):
    pc = sample_workspace(model, 2, dedup=False)
    assert len(pc) == 16


def test_workspace_requires_two_steps(model):
    with pytest.raises(ValueError):
        sample_workspace(model, 1)


def test_workspace_degenerate_single_point():
    m = degenerate_model(d1=7.0)
    pc = sample_workspace(m, 3)
    assert len(pc) == 1
    assert np.allclose(pc.points[0], [0, 0, 7.0], atol=1e-6)


def test_workspace_points_inside_reach_sphere(model):
    pc = sample_workspace(model, 9)
    center = np.array([0.0, 0.0, model.d1])
    dist = np.linalg.norm(pc.points - center, axis=1)
    assert float(dist.max()) <= model.reach + 1e-6


def test_workspace_extent_small_cases():
    single = PointCloud(points=np.array([[0.0, 0.0, 7.0]]))
    ext = workspace_extent(single)
    assert ext.diameter == 0.0
    two = PointCloud(points=np.array([[5.0, 0.0, 0.0], [-5.0, 0.0, 0.0]]))
    ext = workspace_extent(two)
    assert ext.diameter == pytest.approx(10.0)
    assert ext.max_reach == pytest.approx(5.0)


def test_workspace_extent_dense(model):
    pc = sample_workspace(model, 15)
    ext = workspace_extent(pc)
    assert ext.max_reach == pytest.approx(41.78, abs=1e-6)
    assert ext.diameter <= 2 * model.reach + 1e-6
    spans = pc.points.max(axis=0) - pc.points.min(axis=0)
    assert float(spans.max()) <= 2 * 41.78 + 1e-6


def test_workspace_extent_empty_errors():
    with pytest.raises(ValueError, match="empty"):
        workspace_extent(PointCloud(points=np.empty((0, 3))))


def test_point_cloud_csv_format():
    pc = PointCloud(points=np.array([[1.0, -2.5, 3.25]]))
    text = point_cloud_to_csv(pc)
    lines = text.strip().split("\n")
    assert lines[0] == "x,y,z"
    assert lines[1] == "1.000000,-2.500000,3.250000"


def test_point_cloud_ply_format():
    pc = PointCloud(points=np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]))
    text = point_cloud_to_ply(pc)
    assert text.startswith("ply\nformat ascii 1.0\nelement vertex 2\n")
    assert text.rstrip().endswith("4.000000 5.000000 6.000000")
