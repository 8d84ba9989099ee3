/**
 * Wire types shared with the geometry engine: scene documents (canonical
 * JSON) and build requests.  The viewer consumes these verbatim; all geometry
 * lives on the engine side.
 */

import { z } from "zod";

export const SpaceTagSchema = z.enum(["base", "xi", "omega", "stereo"]);
export type SpaceTag = z.infer<typeof SpaceTagSchema>;

export const MetaValueSchema = z.union([z.string(), z.number(), z.boolean()]);
export type MetaValue = z.infer<typeof MetaValueSchema>;

export const SceneObjectSchema = z
  .object({
    id: z.string().min(1),
    kind: z.enum(["point", "polyline", "mesh", "sphere"]),
    space: SpaceTagSchema,
    vertices: z.array(z.number()),
    faces: z.array(z.array(z.number().int().nonnegative()).length(4)).optional(),
    style: z.object({
      color: z.string().regex(/^#[0-9a-f]{6}$/),
      opacity: z.number().min(0).max(1),
    }),
    meta: z.record(z.string(), MetaValueSchema),
  })
  .refine((o) => o.vertices.length % 3 === 0, {
    message: "vertices must be flat [x,y,z,...] triples",
  })
  .refine((o) => (o.kind === "mesh") === (o.faces !== undefined), {
    message: "exactly mesh objects carry faces",
  });
export type SceneObject = z.infer<typeof SceneObjectSchema>;

export const SceneDocumentSchema = z.object({
  version: z.literal(1),
  frame: z.object({
    sphere_center: z.array(z.number()).length(4),
    projection_center: z.array(z.number()).length(4),
    tangent_point: z.array(z.number()).length(4),
  }),
  objects: z.array(SceneObjectSchema),
});
export type SceneDocument = z.infer<typeof SceneDocumentSchema>;

export interface FiberRequest {
  request: "fiber";
  phi: number;
  psi: number;
  samples?: number;
}

export interface TorusRequest {
  request: "torus";
  mode: "kappa" | "mu";
  psi?: number;
  phi?: number;
  grid?: [number, number];
}

export interface NestedRequest {
  request: "nested";
  family: "xy" | "z";
  count?: number;
  grid?: [number, number];
}

export interface ModulationRequest {
  request: "modulation";
  poly: string;
  m: number;
  beta_offset?: number;
}

export interface PackingRequest {
  request: "packing";
  poly: string;
  radius?: number;
  samples?: number;
}

export type BuildRequest =
  | FiberRequest
  | TorusRequest
  | NestedRequest
  | ModulationRequest
  | PackingRequest;

export function groupOf(object: SceneObject): string {
  return String(object.meta["group"] ?? "");
}

export function isAtInfinity(object: SceneObject): boolean {
  return object.meta["at_infinity"] === true;
}

/** Number of (x, y, z) vertices carried by an object. */
export function vertexCount(object: SceneObject): number {
  return object.vertices.length / 3;
}

export function vertexAt(object: SceneObject, index: number): [number, number, number] {
  const base = index * 3;
  return [
    object.vertices[base] ?? 0,
    object.vertices[base + 1] ?? 0,
    object.vertices[base + 2] ?? 0,
  ];
}
