/**
 * Browser studio: combined modeling space (Xi, Omega, stereo images) with a
 * linked base-sphere inset.  Drag the base point Q on the inset, scrub the
 * angle sliders, toggle image groups, and animate the fiber phase; every
 * rendered vertex comes from the engine's scene documents.
 */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";
import { TAU, anglesFromBasePoint } from "./angles.js";
import { BetaAnimator } from "./animate.js";
import { EngineError, HttpEngine, LatestWins, parseSceneDocument } from "./engine.js";
import { BuiltScene, buildSceneGraph, setSpaceVisible } from "./sceneGraph.js";
import {
  ViewerState,
  clampFiberParams,
  defaultState,
  exportState,
  importState,
  sceneAtInfinity,
  tryParseScene,
} from "./state.js";
import { BuildRequest, SceneDocument, SpaceTag, vertexAt, vertexCount } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

const canvas = byId<HTMLCanvasElement>("view");
const banner = byId<HTMLDivElement>("banner");
const infinityBadge = byId<HTMLDivElement>("infinity-badge");

const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
renderer.setPixelRatio(window.devicePixelRatio);

const mainScene = new THREE.Scene();
mainScene.background = new THREE.Color("#10131a");
const insetScene = new THREE.Scene();
insetScene.background = new THREE.Color("#1a2030");

const camera = new THREE.PerspectiveCamera(45, 1, 0.01, 500);
const insetCamera = new THREE.PerspectiveCamera(45, 1, 0.01, 50);
insetCamera.position.set(0, 1, 3.2);
insetCamera.lookAt(0, 1, 0);

for (const scene of [mainScene, insetScene]) {
  scene.add(new THREE.AmbientLight(0xffffff, 0.8));
  const sun = new THREE.DirectionalLight(0xffffff, 1.2);
  sun.position.set(3, 5, 4);
  scene.add(sun);
}

const controls = new OrbitControls(camera, canvas);

const state: ViewerState = defaultState();
camera.position.set(...state.camera.position);
controls.target.set(...state.camera.target);

let built: BuiltScene | null = null;
let currentDoc: SceneDocument | null = null;

const markers: Partial<Record<SpaceTag, THREE.Mesh>> = {};
for (const tag of ["xi", "omega", "stereo"] as const) {
  const marker = new THREE.Mesh(
    new THREE.SphereGeometry(0.035, 16, 8),
    new THREE.MeshBasicMaterial({ color: "#ffcc00" }),
  );
  marker.visible = false;
  markers[tag] = marker;
  mainScene.add(marker);
}

function showBanner(message: string): void {
  banner.textContent = message;
  banner.style.display = "block";
  window.setTimeout(() => (banner.style.display = "none"), 4000);
}

/** Put the beta marker on the nearest engine-sampled fiber vertex. */
function placeMarkers(beta: number): void {
  for (const tag of ["xi", "omega", "stereo"] as const) {
    const marker = markers[tag];
    if (!marker) continue;
    marker.visible = false;
    if (!currentDoc || !state.visibility[tag]) continue;
    const obj = currentDoc.objects.find(
      (o) => o.space === tag && o.kind === "polyline" && o.meta["group"] === "fiber",
    );
    if (!obj || obj.meta["at_infinity"] === true) continue;
    const n = vertexCount(obj);
    if (n === 0) continue;
    const index = Math.round((beta / TAU) * n) % n;
    marker.position.set(...vertexAt(obj, index));
    marker.visible = true;
  }
}

function applyDocument(doc: SceneDocument): void {
  if (built) {
    mainScene.remove(built.root);
    insetScene.remove(built.inset);
  }
  currentDoc = doc;
  built = buildSceneGraph(doc);
  mainScene.add(built.root);
  insetScene.add(built.inset);
  for (const tag of ["base", "xi", "omega", "stereo"] as const) {
    setSpaceVisible(built, tag, state.visibility[tag]);
  }
  infinityBadge.style.display = sceneAtInfinity(doc) ? "block" : "none";
  placeMarkers(state.beta);
}

let engine = new HttpEngine(
  (byId<HTMLInputElement>("engine-url").value || "http://127.0.0.1:8420").replace(/\/$/, ""),
);

function makeLatestWins(): LatestWins {
  return new LatestWins(
    engine,
    (doc) => applyDocument(doc),
    (error: EngineError) => showBanner(`engine: ${error.message}`),
  );
}

let latestWins = makeLatestWins();

function currentFiberRequest(): BuildRequest {
  const phi = Number(byId<HTMLInputElement>("phi").value);
  const psi = Number(byId<HTMLInputElement>("psi").value);
  const clamped = clampFiberParams(phi, psi);
  return { request: "fiber", phi: clamped.phi, psi: clamped.psi, samples: 256 };
}

function submitFromSliders(): void {
  const request = currentFiberRequest();
  state.request = request;
  latestWins.submit(request);
}

byId<HTMLInputElement>("phi").addEventListener("input", submitFromSliders);
byId<HTMLInputElement>("psi").addEventListener("input", submitFromSliders);
byId<HTMLInputElement>("beta").addEventListener("input", () => {
  state.beta = Number(byId<HTMLInputElement>("beta").value);
  animator.reset(state.beta);
  placeMarkers(state.beta);
});

for (const tag of ["base", "xi", "omega", "stereo"] as const) {
  const box = byId<HTMLInputElement>(`show-${tag}`);
  box.checked = state.visibility[tag];
  box.addEventListener("change", () => {
    state.visibility[tag] = box.checked;
    if (built) setSpaceVisible(built, tag, box.checked);
    placeMarkers(state.beta);
  });
}

byId<HTMLInputElement>("engine-url").addEventListener("change", () => {
  engine = new HttpEngine(byId<HTMLInputElement>("engine-url").value.replace(/\/$/, ""));
  latestWins = makeLatestWins();
  submitFromSliders();
});

byId<HTMLInputElement>("scene-file").addEventListener("change", async (event) => {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  const text = await file.text();
  const parsed = tryParseScene(() => parseSceneDocument(text));
  if (parsed.ok) {
    applyDocument(parsed.doc);
  } else {
    showBanner(`could not load scene: ${parsed.error}`);
  }
});

byId<HTMLButtonElement>("export-state").addEventListener("click", () => {
  state.camera = {
    position: camera.position.toArray() as [number, number, number],
    target: controls.target.toArray() as [number, number, number],
  };
  const blob = new Blob([exportState(state)], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "viewer-state.json";
  a.click();
  URL.revokeObjectURL(a.href);
});

byId<HTMLInputElement>("state-file").addEventListener("change", async (event) => {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  try {
    const imported = importState(await file.text());
    Object.assign(state, imported);
    camera.position.set(...state.camera.position);
    controls.target.set(...state.camera.target);
    for (const tag of ["base", "xi", "omega", "stereo"] as const) {
      byId<HTMLInputElement>(`show-${tag}`).checked = state.visibility[tag];
    }
    latestWins.submit(state.request);
  } catch (e) {
    showBanner(`could not import state: ${e instanceof Error ? e.message : e}`);
  }
});

const animator = new BetaAnimator((beta) => {
  state.beta = beta;
  byId<HTMLInputElement>("beta").value = beta.toFixed(4);
  placeMarkers(beta);
});

byId<HTMLInputElement>("animate").addEventListener("change", () => {
  state.animateBeta = byId<HTMLInputElement>("animate").checked;
});

// ---------------------------------------------------------------------------
// dragging Q on the base-sphere inset
// ---------------------------------------------------------------------------

const raycaster = new THREE.Raycaster();
const INSET = { size: 0.3, margin: 12 };

function insetRect(): { x: number; y: number; w: number; h: number } {
  const w = canvas.clientWidth;
  const h = canvas.clientHeight;
  const side = Math.round(Math.min(w, h) * INSET.size);
  return { x: INSET.margin, y: h - side - INSET.margin, w: side, h: side };
}

let dragging = false;

function dragToBasePoint(event: PointerEvent): void {
  if (!built) return;
  const rect = canvas.getBoundingClientRect();
  const r = insetRect();
  const px = event.clientX - rect.left - r.x;
  const py = event.clientY - rect.top - r.y;
  if (px < 0 || py < 0 || px > r.w || py > r.h) return;
  const ndc = new THREE.Vector2((px / r.w) * 2 - 1, -((py / r.h) * 2 - 1));
  raycaster.setFromCamera(ndc, insetCamera);
  const sphere = built.bySpace.base.getObjectByName("base-sphere");
  if (!sphere) return;
  const hits = raycaster.intersectObject(sphere, false);
  const hit = hits[0];
  if (!hit) return;
  // recenter: B^2 is drawn about (0, 1, 0)
  const q = anglesFromBasePoint(hit.point.x, hit.point.y - 1.0, hit.point.z);
  const clamped = clampFiberParams(q.phi, q.psi);
  byId<HTMLInputElement>("phi").value = clamped.phi.toFixed(4);
  byId<HTMLInputElement>("psi").value = clamped.psi.toFixed(4);
  submitFromSliders();
}

canvas.addEventListener("pointerdown", (event) => {
  const rect = canvas.getBoundingClientRect();
  const r = insetRect();
  const px = event.clientX - rect.left - r.x;
  const py = event.clientY - rect.top - r.y;
  if (px >= 0 && py >= 0 && px <= r.w && py <= r.h) {
    dragging = true;
    controls.enabled = false;
    dragToBasePoint(event);
  }
});
canvas.addEventListener("pointermove", (event) => {
  if (dragging) dragToBasePoint(event);
});
window.addEventListener("pointerup", () => {
  dragging = false;
  controls.enabled = true;
});

// ---------------------------------------------------------------------------
// render loop
// ---------------------------------------------------------------------------

function resize(): void {
  const w = canvas.clientWidth;
  const h = canvas.clientHeight;
  renderer.setSize(w, h, false);
  camera.aspect = w / Math.max(h, 1);
  camera.updateProjectionMatrix();
}
window.addEventListener("resize", resize);
resize();

let lastTime = performance.now();

function frame(now: number): void {
  const dt = now - lastTime;
  lastTime = now;
  if (state.animateBeta) animator.tick(dt);
  controls.update();

  const w = canvas.clientWidth;
  const h = canvas.clientHeight;
  renderer.setScissorTest(false);
  renderer.setViewport(0, 0, w, h);
  renderer.render(mainScene, camera);

  const r = insetRect();
  renderer.setScissorTest(true);
  renderer.setScissor(r.x, INSET.margin, r.w, r.h);
  renderer.setViewport(r.x, INSET.margin, r.w, r.h);
  renderer.render(insetScene, insetCamera);
  renderer.setScissorTest(false);

  requestAnimationFrame(frame);
}

submitFromSliders();
requestAnimationFrame(frame);
