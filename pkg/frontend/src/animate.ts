/**
 * Beta animation: fixed parameter-space stepping at a fixed update rate, so a
 * sweep is reproducible regardless of frame timing.
 */

import { TAU, reduceAngle } from "./angles.js";

export class BetaAnimator {
  private accumulatorMs = 0;
  beta = 0;

  constructor(
    private readonly onStep: (beta: number) => void,
    readonly updatesPerSecond = 30,
    readonly stepSize = TAU / 240,
  ) {}

  /** Advance by a wall-clock delta; emits zero or more fixed steps. */
  tick(deltaMs: number): void {
    this.accumulatorMs += deltaMs;
    const interval = 1000 / this.updatesPerSecond;
    while (this.accumulatorMs >= interval) {
      this.accumulatorMs -= interval;
      this.beta = reduceAngle(this.beta + this.stepSize);
      this.onStep(this.beta);
    }
  }

  reset(beta = 0): void {
    this.beta = reduceAngle(beta);
    this.accumulatorMs = 0;
  }
}
