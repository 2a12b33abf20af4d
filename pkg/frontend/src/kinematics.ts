/**
 * Minimal forward kinematics over a ModelJson tree.
 *
 * Reimplements the server's conventions exactly (fixed-axis roll-pitch-yaw,
 * joint transforms applied parent -> origin -> joint motion), so the client
 * can pose the scene from joint values alone; the shared-math regression
 * test compares this against server-computed golden poses.
 */

import type { BasePose, ModelJson } from './types.js';

export type Vec3 = [number, number, number];
/** Row-major 3x3. */
export type Mat3 = [number, number, number, number, number, number, number, number, number];

export interface Pose {
  rot: Mat3;
  pos: Vec3;
}

export const IDENTITY: Mat3 = [1, 0, 0, 0, 1, 0, 0, 0, 1];

export function rpyToMatrix(rpy: Vec3): Mat3 {
  const [r, p, y] = rpy;
  const cr = Math.cos(r), sr = Math.sin(r);
  const cp = Math.cos(p), sp = Math.sin(p);
  const cy = Math.cos(y), sy = Math.sin(y);
  return [
    cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
    sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
    -sp, cp * sr, cp * cr,
  ];
}

export function axisAngle(axis: Vec3, angle: number): Mat3 {
  const [x, y, z] = axis;
  const c = Math.cos(angle), s = Math.sin(angle), o = 1 - c;
  return [
    c + o * x * x, o * x * y - s * z, o * x * z + s * y,
    o * x * y + s * z, c + o * y * y, o * y * z - s * x,
    o * x * z - s * y, o * y * z + s * x, c + o * z * z,
  ];
}

export function matMul(a: Mat3, b: Mat3): Mat3 {
  const out = new Array(9) as Mat3;
  for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      out[3 * i + j] =
        a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
    }
  }
  return out;
}

export function matVec(a: Mat3, v: Vec3): Vec3 {
  return [
    a[0] * v[0] + a[1] * v[1] + a[2] * v[2],
    a[3] * v[0] + a[4] * v[1] + a[5] * v[2],
    a[6] * v[0] + a[7] * v[1] + a[8] * v[2],
  ];
}

export function compose(parent: Pose, rot: Mat3, pos: Vec3): Pose {
  const p = matVec(parent.rot, pos);
  return {
    rot: matMul(parent.rot, rot),
    pos: [parent.pos[0] + p[0], parent.pos[1] + p[1], parent.pos[2] + p[2]],
  };
}

/** Names of the non-fixed joints in model (depth-first) order: q indexing. */
export function movableJointNames(model: ModelJson): string[] {
  return model.joints.filter((j) => j.type !== 'fixed').map((j) => j.name);
}

/**
 * World pose of every link (and attached frame) for the given joint vector.
 * Joints arrive in depth-first order, so a single pass suffices.
 */
export function forwardKinematics(
  model: ModelJson,
  q: number[],
  base?: BasePose,
): Map<string, Pose> {
  const poses = new Map<string, Pose>();
  const rootPose: Pose =
    model.floating_base && base
      ? { rot: rpyToMatrix(base.rpy), pos: [...base.pos] }
      : { rot: IDENTITY, pos: [0, 0, 0] };
  poses.set(model.root_link, rootPose);

  let qi = 0;
  for (const joint of model.joints) {
    const parent = poses.get(joint.parent);
    if (!parent) throw new Error(`joint ${joint.name}: parent not yet posed`);
    const originRot = rpyToMatrix(joint.origin.rpy);
    let pose = compose(parent, originRot, joint.origin.xyz);
    if (joint.type === 'revolute') {
      const value = q[qi++] ?? 0;
      pose = { rot: matMul(pose.rot, axisAngle(joint.axis, value)), pos: pose.pos };
    } else if (joint.type === 'prismatic') {
      const value = q[qi++] ?? 0;
      const d = matVec(pose.rot, joint.axis);
      pose = {
        rot: pose.rot,
        pos: [pose.pos[0] + d[0] * value, pose.pos[1] + d[1] * value, pose.pos[2] + d[2] * value],
      };
    }
    poses.set(joint.child, pose);
  }

  for (const frame of model.frames ?? []) {
    const host = poses.get(frame.link);
    if (host) {
      poses.set(frame.name, compose(host, rpyToMatrix(frame.origin.rpy), frame.origin.xyz));
    }
  }
  return poses;
}
