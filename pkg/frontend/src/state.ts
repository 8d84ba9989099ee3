/**
 * Viewer state: the current build request, per-space visibility, camera pose,
 * and the beta animation flag.  Exporting and re-importing the state
 * reproduces the same request and visibility flags.
 */

import { z } from "zod";
import { reduceAngle } from "./angles.js";
import { BuildRequest, SceneDocument, isAtInfinity } from "./types.js";

// Slider values this close to the singular psi = 0 configuration snap to the
// exact degenerate branch (rendered as a line with an at-infinity badge);
// anything in between would blow up the stereographic image scale.
export const PSI_SNAP = 1e-4;

export const VisibilitySchema = z.object({
  base: z.boolean(),
  xi: z.boolean(),
  omega: z.boolean(),
  stereo: z.boolean(),
});
export type Visibility = z.infer<typeof VisibilitySchema>;

export const ViewerStateSchema = z.object({
  request: z.record(z.string(), z.unknown()),
  visibility: VisibilitySchema,
  camera: z.object({
    position: z.array(z.number()).length(3),
    target: z.array(z.number()).length(3),
  }),
  animateBeta: z.boolean(),
  beta: z.number(),
});

export interface ViewerState {
  request: BuildRequest;
  visibility: Visibility;
  camera: { position: [number, number, number]; target: [number, number, number] };
  animateBeta: boolean;
  beta: number;
}

export function defaultState(): ViewerState {
  return {
    request: { request: "fiber", phi: 0.9, psi: 1.1, samples: 256 },
    visibility: { base: true, xi: true, omega: true, stereo: true },
    camera: { position: [4, 3, 5], target: [0, 0, 0] },
    animateBeta: false,
    beta: 0,
  };
}

/** Clamp dragged/slid fiber parameters into the engine's valid ranges. */
export function clampFiberParams(phi: number, psi: number): { phi: number; psi: number } {
  let p = Math.min(Math.max(psi, 0), Math.PI);
  if (p < PSI_SNAP) p = 0;
  if (Math.PI - p < PSI_SNAP) p = Math.PI;
  return { phi: reduceAngle(phi), psi: p };
}

export function exportState(state: ViewerState): string {
  return JSON.stringify(state);
}

export function importState(text: string): ViewerState {
  const parsed = ViewerStateSchema.parse(JSON.parse(text));
  return parsed as unknown as ViewerState;
}

/** True when the scene's stereo image degenerates to a line at infinity. */
export function sceneAtInfinity(doc: SceneDocument): boolean {
  return doc.objects.some((o) => o.space === "stereo" && isAtInfinity(o));
}

/** Parse wrapper that never throws: the UI keeps the previous scene on error. */
export function tryParseScene(
  parse: () => SceneDocument,
): { ok: true; doc: SceneDocument } | { ok: false; error: string } {
  try {
    return { ok: true, doc: parse() };
  } catch (e) {
    return { ok: false, error: e instanceof Error ? e.message : String(e) };
  }
}
