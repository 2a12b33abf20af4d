/** Pinhole projection used by the shared-math FK regression: the server-side
 * golden generator implements the identical camera. */

import type { Mat3, Vec3 } from './kinematics.js';

export interface PinholeCamera {
  eye: Vec3;
  target: Vec3;
  up: Vec3;
  fovYDeg: number;
  width: number;
  height: number;
}

export const DEFAULT_CAMERA: PinholeCamera = {
  eye: [2.2, 1.6, 1.4],
  target: [0, 0, 0.3],
  up: [0, 0, 1],
  fovYDeg: 60,
  width: 1920,
  height: 1080,
};

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(v: Vec3): Vec3 {
  const n = Math.hypot(v[0], v[1], v[2]);
  return [v[0] / n, v[1] / n, v[2] / n];
}

/** World point -> pixel coordinates (x right, y down). */
export function project(cam: PinholeCamera, point: Vec3): [number, number] {
  const zc = normalize(sub(cam.eye, cam.target)); // camera looks down -z
  const xc = normalize(cross(cam.up, zc));
  const yc = cross(zc, xc);
  const d = sub(point, cam.eye);
  const x = xc[0] * d[0] + xc[1] * d[1] + xc[2] * d[2];
  const y = yc[0] * d[0] + yc[1] * d[1] + yc[2] * d[2];
  const z = zc[0] * d[0] + zc[1] * d[1] + zc[2] * d[2];
  const f = 1 / Math.tan((cam.fovYDeg * Math.PI) / 360);
  const aspect = cam.width / cam.height;
  const xn = (f / aspect) * (x / -z);
  const yn = f * (y / -z);
  return [((xn + 1) / 2) * cam.width, (1 - (yn + 1) / 2) * cam.height];
}
