import { describe, expect, it } from "vitest";

import { TAU, anglesFromBasePoint } from "../src/angles.js";
import { BetaAnimator } from "../src/animate.js";
import { EngineBoundary, LatestWins, StaticEngine } from "../src/engine.js";
import {
  clampFiberParams,
  defaultState,
  exportState,
  importState,
} from "../src/state.js";
import { BuildRequest, SceneDocument } from "../src/types.js";

describe("viewer state", () => {
  it("round-trips through export/import", () => {
    const state = defaultState();
    state.request = { request: "fiber", phi: 1.25, psi: 0.75, samples: 64 };
    state.visibility.omega = false;
    state.beta = 2.5;
    const back = importState(exportState(state));
    expect(back.request).toEqual(state.request);
    expect(back.visibility).toEqual(state.visibility);
    expect(back.beta).toBe(state.beta);
    expect(back.camera).toEqual(state.camera);
  });

  it("rejects malformed state", () => {
    expect(() => importState("{}")).toThrow();
  });

  it("clamps slider parameters into valid ranges", () => {
    expect(clampFiberParams(TAU + 0.5, 1.0).phi).toBeCloseTo(0.5, 12);
    expect(clampFiberParams(0, -0.2).psi).toBe(0);
    expect(clampFiberParams(0, 5.0).psi).toBe(Math.PI);
    // near-singular configurations snap to the exact degenerate branch
    expect(clampFiberParams(0, 5e-5).psi).toBe(0);
    expect(clampFiberParams(0, Math.PI - 5e-5).psi).toBe(Math.PI);
    expect(clampFiberParams(0, 0.5).psi).toBe(0.5);
  });
});

describe("drag angle derivation", () => {
  it("matches the engine convention at reference points", () => {
    expect(anglesFromBasePoint(1, 0, 0)).toEqual({ phi: 0, psi: Math.PI / 2, poleDegenerate: false });
    const north = anglesFromBasePoint(0, 0, 1);
    expect(north.poleDegenerate).toBe(true);
    expect(north.phi).toBe(0);
    expect(north.psi).toBe(0);
    const q = anglesFromBasePoint(0, 1, 0);
    expect(q.phi).toBeCloseTo(Math.PI / 2, 12);
    expect(q.psi).toBeCloseTo(Math.PI / 2, 12);
  });
});

function fakeDocument(tag: string): SceneDocument {
  return {
    version: 1,
    frame: {
      sphere_center: [0, 1, 0, 1],
      projection_center: [0, 2, 0, 1],
      tangent_point: [0, 0, 0, 1],
    },
    objects: [
      {
        id: tag,
        kind: "point",
        space: "base",
        vertices: [0, 1, 0],
        style: { color: "#555555", opacity: 1 },
        meta: { group: "fiber" },
      },
    ],
  };
}

describe("latest-wins request coalescing", () => {
  it("keeps at most one request in flight and applies the newest", async () => {
    const calls: number[] = [];
    const applied: number[] = [];
    const slowEngine: EngineBoundary = {
      async buildScene(request: BuildRequest) {
        const phi = (request as { phi: number }).phi;
        calls.push(phi);
        await new Promise((resolve) => setTimeout(resolve, 20));
        return fakeDocument(`doc-${phi}`);
      },
    };
    const latest = new LatestWins(slowEngine, (doc) => {
      applied.push(Number(doc.objects[0]!.id.split("-")[1]));
    });
    for (let k = 0; k < 6; k++) {
      latest.submit({ request: "fiber", phi: k, psi: 1 });
      await new Promise((resolve) => setTimeout(resolve, 2));
    }
    await new Promise((resolve) => setTimeout(resolve, 120));
    // first request went out immediately; intermediates were coalesced
    expect(calls.length).toBeLessThan(6);
    expect(applied[applied.length - 1]).toBe(5);
  });
});

describe("static engine", () => {
  it("serves registered documents and fails cleanly otherwise", async () => {
    const fixture = fakeDocument("doc");
    const engine = new StaticEngine();
    const request: BuildRequest = { request: "fiber", phi: 0, psi: 1 };
    engine.register(request, fixture);
    await expect(engine.buildScene(request)).resolves.toBe(fixture);
    await expect(
      engine.buildScene({ request: "fiber", phi: 2, psi: 1 }),
    ).rejects.toThrow("Unavailable");
  });
});

describe("beta animator", () => {
  it("advances by fixed parameter-space steps, independent of frame timing", () => {
    const seen: number[] = [];
    // 20 updates/s gives an exactly representable 50 ms interval
    const animator = new BetaAnimator((beta) => seen.push(beta), 20, 0.1);
    animator.tick(50);
    expect(seen.length).toBe(1);
    expect(seen[0]).toBeCloseTo(0.1, 12);
    animator.tick(1000); // one long frame still emits exactly 20 fixed steps
    expect(seen.length).toBe(21);
    expect(seen[seen.length - 1]).toBeCloseTo(2.1, 12);
    // many short frames emit the same sequence
    const seenShort: number[] = [];
    const other = new BetaAnimator((beta) => seenShort.push(beta), 20, 0.1);
    for (let k = 0; k < 105; k++) other.tick(10);
    expect(seenShort).toEqual(seen);
  });
});
