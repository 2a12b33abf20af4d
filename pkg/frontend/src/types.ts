/** Wire types shared with the server (GET /model and the /ws socket). */

export interface Origin {
  xyz: [number, number, number];
  rpy: [number, number, number];
}

export interface VisualJson {
  kind: string; // box | cylinder | sphere (others render as bounding boxes)
  size: number[];
  origin: Origin;
}

export interface LinkJson {
  name: string;
  mass: number;
  com: [number, number, number];
  inertia: number[][];
  visuals: VisualJson[];
}

export interface JointLimits {
  lower: number;
  upper: number;
  effort: number;
  velocity: number;
}

export interface JointJson {
  name: string;
  type: 'revolute' | 'prismatic' | 'fixed';
  axis: [number, number, number];
  origin: Origin;
  parent: string;
  child: string;
  limits?: JointLimits;
}

export interface FrameJson {
  name: string;
  link: string;
  origin: Origin;
}

export interface ModelJson {
  name: string;
  root_link: string;
  floating_base: boolean;
  contact_frames: string[];
  links: LinkJson[];
  joints: JointJson[];
  frames?: FrameJson[];
}

export interface BasePose {
  pos: [number, number, number];
  rpy: [number, number, number];
}

export interface StateFrame {
  type: 'state';
  t: number;
  q: number[];
  base?: BasePose;
}

export interface HelloFrame {
  type: 'hello';
  mode: 'kin' | 'sim';
  rate: number;
}

export type ServerMessage =
  | StateFrame
  | HelloFrame
  | { type: 'ack'; cmd: string; [k: string]: unknown }
  | { type: 'error'; text: string };

export type ClientMessage =
  | { type: 'set_joint'; name: string; value: number }
  | { type: 'pause' }
  | { type: 'step' }
  | { type: 'reset' };
