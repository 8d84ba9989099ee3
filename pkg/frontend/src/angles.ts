/**
 * Interaction math: turning a dragged point on the base-sphere inset into the
 * (phi, psi) request parameters the engine expects.  This is the only
 * numeric conversion owned by the viewer; rendered vertices always come from
 * the engine.
 */

export const TAU = 2 * Math.PI;

export interface DerivedAngles {
  phi: number;
  psi: number;
  poleDegenerate: boolean;
}

export function reduceAngle(angle: number): number {
  let a = angle % TAU;
  if (a < 0) a += TAU;
  return a >= TAU ? 0 : a;
}

/**
 * Spherical angles of a (not necessarily normalized) direction; matches the
 * engine convention: phi in [0, 2pi), psi in [0, pi], and phi = 0 with a
 * degeneracy flag at the poles.
 */
export function anglesFromBasePoint(x: number, y: number, z: number): DerivedAngles {
  const rho = Math.hypot(x, y);
  if (rho < 1e-12) {
    return { phi: 0, psi: z >= 0 ? 0 : Math.PI, poleDegenerate: true };
  }
  return { phi: reduceAngle(Math.atan2(y, x)), psi: Math.atan2(rho, z), poleDegenerate: false };
}
