/**
 * Test-only geometry oracles used to verify engine responses; the viewer
 * proper never computes geometry.
 */

export type Vec3 = [number, number, number];
export type Vec4 = [number, number, number, number];

export function hopfMap(p: Vec4): Vec3 {
  const [x, y, z, w] = p;
  return [2 * (x * z + y * w), 2 * (y * z - x * w), x * x + y * y - (z * z + w * w)];
}

export function sphericalPoint(phi: number, psi: number): Vec3 {
  return [Math.sin(psi) * Math.cos(phi), Math.sin(psi) * Math.sin(phi), Math.cos(psi)];
}

export function sub3(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function norm3(a: Vec3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

export function norm4(a: Vec4): number {
  return Math.hypot(a[0], a[1], a[2], a[3]);
}

/** 20 deterministic drag targets spread over the base sphere (golden spiral). */
export function scriptedDragPositions(count = 20): Vec3[] {
  const out: Vec3[] = [];
  const golden = Math.PI * (3 - Math.sqrt(5));
  for (let k = 0; k < count; k++) {
    const z = 1 - (2 * (k + 0.5)) / count;
    const rho = Math.sqrt(Math.max(0, 1 - z * z));
    const phi = golden * k;
    out.push([rho * Math.cos(phi), rho * Math.sin(phi), z]);
  }
  return out;
}
