/**
 * Scene-document rendering: every vertex in the three.js graph is copied
 * verbatim from the engine's document (quads are only re-indexed into
 * triangles).  Base-space objects go to a separate inset group; the other
 * three spaces share the combined modeling space with per-space visibility
 * groups.
 */

import * as THREE from "three";
import { SceneDocument, SceneObject, SpaceTag, isAtInfinity } from "./types.js";

export interface BuiltScene {
  root: THREE.Group;
  bySpace: Record<SpaceTag, THREE.Group>;
  inset: THREE.Group;
  atInfinity: boolean;
}

function geometryFrom(object: SceneObject): THREE.BufferGeometry {
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute(
    "position",
    new THREE.BufferAttribute(new Float32Array(object.vertices), 3),
  );
  return geometry;
}

function materialColor(object: SceneObject): THREE.Color {
  return new THREE.Color(object.style.color);
}

function buildObject(object: SceneObject): THREE.Object3D {
  let built: THREE.Object3D;
  if (object.kind === "polyline") {
    const material = new THREE.LineBasicMaterial({
      color: materialColor(object),
      transparent: object.style.opacity < 1,
      opacity: object.style.opacity,
    });
    const geometry = geometryFrom(object);
    built =
      object.meta["closed"] === true
        ? new THREE.LineLoop(geometry, material)
        : new THREE.Line(geometry, material);
  } else if (object.kind === "point") {
    const material = new THREE.PointsMaterial({
      color: materialColor(object),
      size: 0.06,
    });
    built = new THREE.Points(geometryFrom(object), material);
  } else if (object.kind === "mesh") {
    const geometry = geometryFrom(object);
    const index: number[] = [];
    for (const quad of object.faces ?? []) {
      const [a, b, c, d] = quad as unknown as [number, number, number, number];
      index.push(a, b, c, a, c, d);
    }
    geometry.setIndex(index);
    geometry.computeVertexNormals();
    const material = new THREE.MeshStandardMaterial({
      color: materialColor(object),
      transparent: object.style.opacity < 1,
      opacity: object.style.opacity,
      side: THREE.DoubleSide,
    });
    built = new THREE.Mesh(geometry, material);
  } else {
    // sphere: one center vertex plus meta.radius
    const radius = Number(object.meta["radius"] ?? 1);
    const material = new THREE.MeshStandardMaterial({
      color: materialColor(object),
      transparent: true,
      opacity: Math.min(object.style.opacity, 0.25),
      side: THREE.DoubleSide,
    });
    const mesh = new THREE.Mesh(new THREE.SphereGeometry(radius, 32, 16), material);
    const [x, y, z] = object.vertices;
    mesh.position.set(x ?? 0, y ?? 0, z ?? 0);
    built = mesh;
  }
  built.name = object.id;
  built.userData = { ...object.meta, space: object.space, kind: object.kind };
  return built;
}

export function buildSceneGraph(doc: SceneDocument): BuiltScene {
  const root = new THREE.Group();
  root.name = "hopf4d-scene";
  const bySpace: Record<SpaceTag, THREE.Group> = {
    base: new THREE.Group(),
    xi: new THREE.Group(),
    omega: new THREE.Group(),
    stereo: new THREE.Group(),
  };
  for (const tag of ["xi", "omega", "stereo"] as const) {
    bySpace[tag].name = `space-${tag}`;
    root.add(bySpace[tag]);
  }
  bySpace.base.name = "space-base";
  const inset = new THREE.Group();
  inset.name = "base-inset";
  inset.add(bySpace.base);

  let atInfinity = false;
  for (const object of doc.objects) {
    bySpace[object.space].add(buildObject(object));
    if (object.space === "stereo" && isAtInfinity(object)) {
      atInfinity = true;
    }
  }
  return { root, bySpace, inset, atInfinity };
}

export function setSpaceVisible(scene: BuiltScene, tag: SpaceTag, visible: boolean): void {
  scene.bySpace[tag].visible = visible;
}

/** Group names present in the rendered graph (one per meta.group). */
export function renderedGroups(scene: BuiltScene): Set<string> {
  const names = new Set<string>();
  for (const space of Object.values(scene.bySpace)) {
    for (const child of space.children) {
      names.add(String(child.userData["group"] ?? ""));
    }
  }
  return names;
}
