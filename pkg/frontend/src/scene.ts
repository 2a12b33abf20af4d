/**
 * three.js scene graph built from a ModelJson: one node per link posed in
 * world coordinates by the client-side FK (the server streams joint values
 * only). Unknown primitive kinds render as unit bounding boxes and collect
 * a warning badge.
 */

import * as THREE from 'three';

import { forwardKinematics, type Pose } from './kinematics.js';
import type { BasePose, ModelJson, VisualJson } from './types.js';

const LINK_COLOR = 0x7c8fa6;
const CONTACT_COLOR = 0xd97742;

function visualMesh(v: VisualJson, contact: boolean): THREE.Object3D | null {
  let geometry: THREE.BufferGeometry;
  let warned = false;
  switch (v.kind) {
    case 'box':
      geometry = new THREE.BoxGeometry(v.size[0], v.size[1], v.size[2]);
      break;
    case 'cylinder': {
      const [radius, length] = v.size;
      geometry = new THREE.CylinderGeometry(radius, radius, length, 24);
      // three cylinders extend along +y; robot cylinders along +z
      geometry.rotateX(Math.PI / 2);
      break;
    }
    case 'sphere':
      geometry = new THREE.SphereGeometry(v.size[0], 24, 16);
      break;
    default:
      geometry = new THREE.BoxGeometry(0.05, 0.05, 0.05);
      warned = true;
  }
  const material = new THREE.MeshLambertMaterial({
    color: contact ? CONTACT_COLOR : LINK_COLOR,
  });
  const mesh = new THREE.Mesh(geometry, material);
  mesh.position.set(...v.origin.xyz);
  mesh.setRotationFromEuler(
    new THREE.Euler(v.origin.rpy[0], v.origin.rpy[1], v.origin.rpy[2], 'ZYX'),
  );
  mesh.userData.unknownKind = warned ? v.kind : undefined;
  return mesh;
}

export class RobotScene {
  readonly model: ModelJson;
  readonly root = new THREE.Group();
  readonly linkNodes = new Map<string, THREE.Group>();
  readonly warnings: string[] = [];
  private lastT = -Infinity;

  constructor(model: ModelJson) {
    this.model = model;
    for (const link of model.links) {
      const node = new THREE.Group();
      node.name = link.name;
      if (link.visuals.length === 0) {
        node.add(new THREE.AxesHelper(0.08)); // frame axes only
      }
      for (const v of link.visuals) {
        const mesh = visualMesh(v, model.contact_frames.includes(link.name));
        if (mesh) {
          if (mesh.userData.unknownKind) {
            this.warnings.push(
              `link ${link.name}: unknown primitive '${mesh.userData.unknownKind}' drawn as box`,
            );
          }
          node.add(mesh);
        }
      }
      this.linkNodes.set(link.name, node);
      this.root.add(node);
    }
    this.applyConfiguration(new Array(this.dof()).fill(0));
  }

  dof(): number {
    return this.model.joints.filter((j) => j.type !== 'fixed').length;
  }

  /** Pose every link node from joint values (and base pose if floating). */
  applyConfiguration(q: number[], base?: BasePose): void {
    const poses = forwardKinematics(this.model, q, base);
    for (const [name, node] of this.linkNodes) {
      const pose = poses.get(name);
      if (pose) this.poseNode(node, pose);
    }
  }

  /** Apply a streamed state frame; stale frames (older t) are ignored. */
  applyState(frame: { t: number; q: number[]; base?: BasePose }): boolean {
    if (frame.t < this.lastT) return false;
    this.lastT = frame.t;
    this.applyConfiguration(frame.q, frame.base);
    return true;
  }

  private poseNode(node: THREE.Object3D, pose: Pose): void {
    node.position.set(pose.pos[0], pose.pos[1], pose.pos[2]);
    const m = new THREE.Matrix4();
    const r = pose.rot;
    m.set(r[0], r[1], r[2], 0, r[3], r[4], r[5], 0, r[6], r[7], r[8], 0, 0, 0, 0, 1);
    node.setRotationFromMatrix(m);
  }
}
