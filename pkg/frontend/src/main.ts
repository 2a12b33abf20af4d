/** Browser entry point: fetch the model, build the scene, connect the
 * socket, wire sliders and sim controls, render on the display refresh.
 *
 * Serve alongside the framework's viz server, e.g.
 *   locokit visualize --model arm2 --serve 8080
 * then open index.html with ?server=127.0.0.1:8080.
 */

import * as THREE from 'three';

import { VizClient } from './client.js';
import { validateModelJson } from './protocol.js';
import { RobotScene } from './scene.js';
import { applySliderInput, sliderSpecs, type SliderSpec } from './sliders.js';
import type { StateFrame } from './types.js';

const params = new URLSearchParams(window.location.search);
const server = params.get('server') ?? window.location.host;

function banner(text: string, kind: 'info' | 'error' = 'info'): void {
  const el = document.getElementById('banner');
  if (el) {
    el.textContent = text;
    el.className = kind;
    el.style.display = text ? 'block' : 'none';
  }
}

async function start(): Promise<void> {
  let model;
  try {
    const resp = await fetch(`http://${server}/model`);
    model = validateModelJson(await resp.json());
  } catch (e) {
    banner(`failed to load model: ${e}`, 'error');
    return;
  }

  const robot = new RobotScene(model);
  for (const w of robot.warnings) console.warn(w);

  const scene = new THREE.Scene();
  scene.background = new THREE.Color(0x20242a);
  scene.add(new THREE.AmbientLight(0xffffff, 0.6));
  const sun = new THREE.DirectionalLight(0xffffff, 1.2);
  sun.position.set(2, 3, 4);
  scene.add(sun);
  scene.add(new THREE.GridHelper(4, 20));
  scene.add(robot.root);

  const camera = new THREE.PerspectiveCamera(
    60, window.innerWidth / window.innerHeight, 0.01, 100,
  );
  camera.up.set(0, 0, 1);
  camera.position.set(2.2, 1.6, 1.4);
  camera.lookAt(0, 0, 0.3);

  const renderer = new THREE.WebGLRenderer({ antialias: true });
  renderer.setSize(window.innerWidth, window.innerHeight);
  document.body.appendChild(renderer.domElement);

  // Render loop decoupled from the network rate: draw the latest state.
  let latest: StateFrame | null = null;
  function render(): void {
    if (latest) {
      robot.applyState(latest);
      latest = null;
    }
    renderer.render(scene, camera);
    requestAnimationFrame(render);
  }
  requestAnimationFrame(render);

  const client = new VizClient({
    onState: (frame) => {
      latest = frame;
    },
    onHello: (hello) => {
      banner(`connected (${hello.mode} mode, ${hello.rate} Hz)`);
      setTimeout(() => banner(''), 1500);
      buildPanel();
    },
    onError: (text) => banner(text, 'error'),
    onDisconnect: () => {
      banner('disconnected - reconnecting...', 'error');
      setTimeout(connect, 1000);
    },
  });

  function connect(): void {
    client.attach(new WebSocket(`ws://${server}/ws`) as never);
  }
  connect();

  const specs: SliderSpec[] = sliderSpecs(model);

  function buildPanel(): void {
    const panel = document.getElementById('panel');
    if (!panel) return;
    panel.innerHTML = '';
    if (client.slidersEnabled()) {
      for (const spec of specs) {
        const row = document.createElement('div');
        const label = document.createElement('label');
        label.textContent = spec.joint;
        const input = document.createElement('input');
        input.type = 'range';
        input.min = String(spec.min);
        input.max = String(spec.max);
        input.step = '0.001';
        input.value = String(spec.value);
        input.oninput = () => {
          const change = applySliderInput(spec, Number(input.value));
          client.setJoint(change.joint, change.value);
        };
        row.append(label, input);
        panel.appendChild(row);
      }
    }
    if (client.controlsVisible()) {
      for (const kind of ['pause', 'step', 'reset'] as const) {
        const button = document.createElement('button');
        button.textContent = kind;
        button.onclick = () => client[kind]();
        panel.appendChild(button);
      }
    }
  }

  window.addEventListener('resize', () => {
    camera.aspect = window.innerWidth / window.innerHeight;
    camera.updateProjectionMatrix();
    renderer.setSize(window.innerWidth, window.innerHeight);
  });
}

void start();
