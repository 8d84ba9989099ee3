import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseSceneDocument } from "../src/engine.js";
import { buildSceneGraph, renderedGroups, setSpaceVisible } from "../src/sceneGraph.js";
import { sceneAtInfinity, tryParseScene } from "../src/state.js";

const here = dirname(fileURLToPath(import.meta.url));
const goldenText = readFileSync(join(here, "..", "fixtures", "golden_fiber.json"), "utf-8");

describe("golden fiber scene", () => {
  it("parses and validates", () => {
    const doc = parseSceneDocument(goldenText);
    expect(doc.version).toBe(1);
    expect(doc.objects.map((o) => o.id)).toContain("fiber-stereo");
  });

  it("renders all groups with one three.js object per scene object", () => {
    const doc = parseSceneDocument(goldenText);
    const built = buildSceneGraph(doc);
    expect(renderedGroups(built)).toEqual(new Set(["frame", "fiber"]));
    const names = new Set<string>();
    for (const group of Object.values(built.bySpace)) {
      for (const child of group.children) names.add(child.name);
    }
    expect(names).toEqual(new Set(doc.objects.map((o) => o.id)));
    // base objects live in the inset, the other spaces in the combined root
    expect(built.inset.getObjectByName("base-sphere")).toBeDefined();
    expect(built.root.getObjectByName("fiber-xi")).toBeDefined();
    expect(built.root.getObjectByName("base-sphere")).toBeUndefined();
    expect(built.atInfinity).toBe(false);
  });

  it("copies engine vertices verbatim into render buffers", () => {
    const doc = parseSceneDocument(goldenText);
    const built = buildSceneGraph(doc);
    const obj = doc.objects.find((o) => o.id === "fiber-xi")!;
    const line = built.root.getObjectByName("fiber-xi") as {
      geometry: { getAttribute(name: string): { array: ArrayLike<number> } };
    };
    const rendered = line.geometry.getAttribute("position").array;
    expect(rendered.length).toBe(obj.vertices.length);
    for (let i = 0; i < obj.vertices.length; i++) {
      expect(rendered[i]).toBeCloseTo(obj.vertices[i]!, 6); // Float32 copy
    }
  });

  it("space visibility toggles work per group", () => {
    const built = buildSceneGraph(parseSceneDocument(goldenText));
    expect(built.bySpace.omega.visible).toBe(true);
    setSpaceVisible(built, "omega", false);
    expect(built.bySpace.omega.visible).toBe(false);
    expect(built.bySpace.xi.visible).toBe(true);
  });
});

describe("robustness", () => {
  it("corrupted documents fail non-fatally and keep the previous scene", () => {
    const good = parseSceneDocument(goldenText);
    let current = good;
    const attempt = tryParseScene(() => parseSceneDocument(goldenText.slice(0, 200)));
    expect(attempt.ok).toBe(false);
    if (!attempt.ok) {
      expect(attempt.error).toContain("ParseError");
    } else {
      current = attempt.doc;
    }
    expect(current).toBe(good);
  });

  it("rejects documents with unknown version", () => {
    const doc = JSON.parse(goldenText) as { version: number };
    doc.version = 2;
    const attempt = tryParseScene(() => parseSceneDocument(JSON.stringify(doc)));
    expect(attempt.ok).toBe(false);
  });

  it("flags at-infinity stereo images", () => {
    const doc = parseSceneDocument(goldenText);
    expect(sceneAtInfinity(doc)).toBe(false);
    const patched = {
      ...doc,
      objects: doc.objects.map((o) =>
        o.id === "fiber-stereo" ? { ...o, meta: { ...o.meta, at_infinity: true } } : o,
      ),
    };
    expect(sceneAtInfinity(patched)).toBe(true);
  });
});
