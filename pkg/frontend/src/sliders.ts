/** Slider panel logic: one slider per movable joint, bounds from the model
 * limits, values clamped before they ever reach the wire. */

import type { ModelJson } from './types.js';

export interface SliderSpec {
  joint: string;
  min: number;
  max: number;
  value: number;
}

export function sliderSpecs(model: ModelJson): SliderSpec[] {
  return model.joints
    .filter((j) => j.type !== 'fixed')
    .map((j) => {
      const lo = j.limits?.lower ?? -Math.PI;
      const hi = j.limits?.upper ?? Math.PI;
      return { joint: j.name, min: lo, max: hi, value: Math.min(Math.max(0, lo), hi) };
    });
}

export interface SliderChange {
  joint: string;
  value: number;
  clamped: boolean;
}

/** Normalize a slider (or programmatic) input against its bounds. */
export function applySliderInput(spec: SliderSpec, raw: number): SliderChange {
  const value = Math.min(Math.max(raw, spec.min), spec.max);
  return { joint: spec.joint, value, clamped: value !== raw };
}
