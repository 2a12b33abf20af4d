/**
 * WebSocket client: hello handshake, state stream with throttle
 * bookkeeping, interaction messages, reconnect with the last state
 * retained. The socket layer is injectable so tests drive a fake.
 */

import { ProtocolError, encodeControl, encodeSetJoint, parseServerMessage } from './protocol.js';
import type { HelloFrame, StateFrame } from './types.js';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((ev: unknown) => void) | null;
  onopen: (() => void) | null;
}

export interface ClientEvents {
  onHello?: (hello: HelloFrame) => void;
  onState?: (frame: StateFrame) => void;
  onError?: (text: string) => void;
  onDisconnect?: () => void;
  onReconnect?: () => void;
}

export class VizClient {
  hello: HelloFrame | null = null;
  lastState: StateFrame | null = null;
  framesReceived = 0;
  errors = 0;
  connected = false;

  private socket: SocketLike | null = null;
  private readonly arrivals: number[] = [];
  private readonly now: () => number;

  constructor(
    private readonly events: ClientEvents = {},
    now: () => number = () => performance.now() / 1000,
  ) {
    this.now = now;
  }

  attach(socket: SocketLike): void {
    const reconnecting = this.socket !== null;
    this.socket = socket;
    socket.onopen = () => {
      this.connected = true;
      if (reconnecting) this.events.onReconnect?.();
    };
    socket.onmessage = (ev) => this.handleRaw(ev.data);
    socket.onclose = () => {
      // Last state is retained for the render loop; the UI shows a banner.
      this.connected = false;
      this.events.onDisconnect?.();
    };
    socket.onerror = () => {
      this.errors += 1;
    };
  }

  handleRaw(raw: string): void {
    let msg;
    try {
      msg = parseServerMessage(raw);
    } catch (e) {
      // Malformed frames surface as a banner, never as a crash.
      this.errors += 1;
      this.events.onError?.(e instanceof ProtocolError ? e.message : String(e));
      return;
    }
    if (msg.type === 'hello') {
      this.hello = msg;
      this.events.onHello?.(msg);
    } else if (msg.type === 'state') {
      this.framesReceived += 1;
      this.arrivals.push(this.now());
      if (this.arrivals.length > 240) this.arrivals.shift();
      this.lastState = msg;
      this.events.onState?.(msg);
    } else if (msg.type === 'error') {
      this.events.onError?.(msg.text);
    }
  }

  /** Measured inbound state rate over the recent window, Hz. */
  measuredRate(): number | null {
    if (this.arrivals.length < 2) return null;
    const span = this.arrivals[this.arrivals.length - 1] - this.arrivals[0];
    return span > 0 ? (this.arrivals.length - 1) / span : null;
  }

  /** True when the stream honors the advertised rate within +-20%. */
  rateWithinAdvertised(): boolean | null {
    const measured = this.measuredRate();
    if (measured === null || this.hello === null) return null;
    return Math.abs(measured - this.hello.rate) <= 0.2 * this.hello.rate;
  }

  setJoint(name: string, value: number): void {
    this.socket?.send(encodeSetJoint(name, value));
  }

  pause(): void {
    this.socket?.send(encodeControl('pause'));
  }

  step(): void {
    this.socket?.send(encodeControl('step'));
  }

  reset(): void {
    this.socket?.send(encodeControl('reset'));
  }

  /** Sim steering controls exist only when the server advertises sim mode. */
  controlsVisible(): boolean {
    return this.hello?.mode === 'sim';
  }

  slidersEnabled(): boolean {
    return this.hello?.mode === 'kin';
  }
}
