/**
 * Browser entry point: wires the app to a WebGL canvas.
 *
 * Everything interesting lives in App; this file only owns the pieces
 * that need a GPU and a real event loop (renderer, camera, raycaster).
 */

import * as THREE from "three";
import { OrbitControls } from "three/addons/controls/OrbitControls.js";

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { PALETTE } from "./palette.js";
import type { SceneBundle } from "./scene3d.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

const app = new App(document, root, new ApiClient(""));
const host = root.querySelector<HTMLElement>("#mg-scene-host")!;

const renderer = new THREE.WebGLRenderer({ antialias: true });
renderer.setPixelRatio(window.devicePixelRatio);
host.appendChild(renderer.domElement);

const scene = new THREE.Scene();
scene.background = new THREE.Color(PALETTE.background);
scene.add(new THREE.AmbientLight(0xffffff, 0.8));
const sun = new THREE.DirectionalLight(0xffffff, 1.2);
sun.position.set(1, 1, 2);
scene.add(sun);

const camera = new THREE.PerspectiveCamera(55, 1, 0.1, 5000);
camera.position.set(0, 0, 220);
const controls = new OrbitControls(camera, renderer.domElement);
controls.enableDamping = true;

let bundle: SceneBundle | null = null;
app.onSceneChange = (next) => {
  if (bundle) scene.remove(bundle.group);
  bundle = next;
  if (bundle) scene.add(bundle.group);
};

function resize(): void {
  const width = host.clientWidth || window.innerWidth;
  const height = host.clientHeight || Math.round(window.innerHeight * 0.75);
  renderer.setSize(width, height);
  camera.aspect = width / height;
  camera.updateProjectionMatrix();
}
window.addEventListener("resize", resize);
resize();

// Click picking: meshes carry their acronym in userData.
const raycaster = new THREE.Raycaster();
const pointer = new THREE.Vector2();
renderer.domElement.addEventListener("click", (event) => {
  if (!bundle) return;
  const box = renderer.domElement.getBoundingClientRect();
  pointer.x = ((event.clientX - box.left) / box.width) * 2 - 1;
  pointer.y = -((event.clientY - box.top) / box.height) * 2 + 1;
  raycaster.setFromCamera(pointer, camera);
  const hits = raycaster.intersectObjects([...bundle.nodeAt.values()]);
  const first = hits[0];
  if (first) void app.selectNode(first.object.userData.acronym as string);
});

function animate(): void {
  requestAnimationFrame(animate);
  const focus = app.focusPoint();
  if (focus) controls.target.lerp(new THREE.Vector3(focus.x, focus.y, focus.z), 0.08);
  controls.update();
  renderer.render(scene, camera);
}

void app.init().then(animate);
