/** Message validation and encoding for the /ws socket. */

import type { ClientMessage, ModelJson, ServerMessage } from './types.js';

export class ProtocolError extends Error {}

export function parseServerMessage(raw: string): ServerMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new ProtocolError(`not JSON: ${raw.slice(0, 80)}`);
  }
  if (typeof doc !== 'object' || doc === null || !('type' in doc)) {
    throw new ProtocolError('message without a type field');
  }
  const msg = doc as Record<string, unknown>;
  switch (msg.type) {
    case 'state':
      if (typeof msg.t !== 'number' || !Array.isArray(msg.q)) {
        throw new ProtocolError('malformed state frame');
      }
      return msg as unknown as ServerMessage;
    case 'hello':
      if (msg.mode !== 'kin' && msg.mode !== 'sim') {
        throw new ProtocolError(`unknown mode ${String(msg.mode)}`);
      }
      if (typeof msg.rate !== 'number' || msg.rate <= 0) {
        throw new ProtocolError('hello without a positive rate');
      }
      return msg as unknown as ServerMessage;
    case 'ack':
    case 'error':
      return msg as unknown as ServerMessage;
    default:
      throw new ProtocolError(`unknown message type ${String(msg.type)}`);
  }
}

export function encodeSetJoint(name: string, value: number): string {
  return JSON.stringify({ type: 'set_joint', name, value } satisfies ClientMessage);
}

export function encodeControl(kind: 'pause' | 'step' | 'reset'): string {
  return JSON.stringify({ type: kind } satisfies ClientMessage);
}

/** Structural check of a /model response; throws on anything unusable. */
export function validateModelJson(doc: unknown): ModelJson {
  if (typeof doc !== 'object' || doc === null) {
    throw new ProtocolError('model payload is not an object');
  }
  const m = doc as Record<string, unknown>;
  if (
    typeof m.name !== 'string' ||
    typeof m.root_link !== 'string' ||
    typeof m.floating_base !== 'boolean' ||
    !Array.isArray(m.links) ||
    !Array.isArray(m.joints)
  ) {
    throw new ProtocolError('model payload missing required fields');
  }
  const linkNames = new Set<string>();
  for (const l of m.links as Array<Record<string, unknown>>) {
    if (typeof l.name !== 'string') throw new ProtocolError('link without name');
    linkNames.add(l.name);
  }
  for (const j of m.joints as Array<Record<string, unknown>>) {
    if (typeof j.parent !== 'string' || !linkNames.has(j.parent)) {
      throw new ProtocolError(`joint ${String(j.name)} has unknown parent`);
    }
    if (typeof j.child !== 'string' || !linkNames.has(j.child)) {
      throw new ProtocolError(`joint ${String(j.name)} has unknown child`);
    }
    if (j.type !== 'fixed' && !j.limits) {
      throw new ProtocolError(
        `movable joint ${String(j.name)} has no limits (slider bounds)`,
      );
    }
  }
  return doc as ModelJson;
}
