import { describe, expect, it } from "vitest";
import * as THREE from "three";

import { PALETTE } from "../src/palette.js";
import { buildGraphScene } from "../src/scene3d.js";
import { validateLayoutPayload, type LayoutPayload } from "../src/types.js";

function payload(): LayoutPayload {
  return {
    nodes: [
      { id: "A", name: "Alpha", area: "x", flag: false, x: 0, y: 0, z: 0 },
      { id: "B", name: "Beta", area: "x", flag: true, x: 10, y: 0, z: 0 },
      { id: "C", name: "Gamma", area: "y", flag: false, x: 0, y: 10, z: 5 },
    ],
    links: [
      { source: "B", target: "A", kind: "direct" },
      { source: "C", target: "A", kind: "conceptual" },
    ],
  };
}

function meshColor(mesh: THREE.Mesh): string {
  return `#${(mesh.material as THREE.MeshLambertMaterial).color.getHexString()}`;
}

describe("3D scene construction", () => {
  it("creates one mesh per node positioned at the layout coordinates", () => {
    const bundle = buildGraphScene(payload());
    expect(bundle.nodeAt.size).toBe(3);
    const beta = bundle.nodeAt.get("B")!;
    expect(beta.position.toArray()).toEqual([10, 0, 0]);
    expect(beta.userData.acronym).toBe("B");
  });

  it("paints flagged nodes with the flag color and the rest with the base color", () => {
    const bundle = buildGraphScene(payload());
    expect(meshColor(bundle.nodeAt.get("B")!)).toBe(PALETTE.flagged);
    expect(meshColor(bundle.nodeAt.get("A")!)).toBe(PALETTE.node);
  });

  it("overrides colors for highlighted nodes and scales the selection", () => {
    const bundle = buildGraphScene(payload(), { selected: "A", highlighted: new Set(["B"]) });
    expect(meshColor(bundle.nodeAt.get("B")!)).toBe(PALETTE.highlight);
    expect(bundle.nodeAt.get("A")!.scale.x).toBeGreaterThan(1);
  });

  it("splits direct and conceptual links, dashing the conceptual group", () => {
    const bundle = buildGraphScene(payload());
    const direct = bundle.group.getObjectByName("direct-links") as THREE.LineSegments;
    const conceptual = bundle.group.getObjectByName("conceptual-links") as THREE.LineSegments;
    expect(direct.geometry.getAttribute("position").count).toBe(2);
    expect(conceptual.geometry.getAttribute("position").count).toBe(2);
    expect(conceptual.material).toBeInstanceOf(THREE.LineDashedMaterial);
  });

  it("omits conceptual links when asked to hide them", () => {
    const bundle = buildGraphScene(payload(), { showConceptual: false });
    expect(bundle.group.getObjectByName("conceptual-links")).toBeUndefined();
    expect(bundle.group.getObjectByName("direct-links")).toBeDefined();
  });
});

describe("layout payload validation", () => {
  it("accepts a well-formed payload and reports its dimensionality", () => {
    const checked = validateLayoutPayload(payload());
    expect(checked.ok).toBe(true);
    if (checked.ok) expect(checked.dimensions).toBe(3);
  });

  it("accepts an empty graph", () => {
    const checked = validateLayoutPayload({ nodes: [], links: [] });
    expect(checked.ok).toBe(true);
  });

  it("rejects links that point at nodes the payload does not carry", () => {
    const bad = payload();
    bad.links.push({ source: "A", target: "GHOST", kind: "direct" });
    const checked = validateLayoutPayload(bad);
    expect(checked.ok).toBe(false);
    if (!checked.ok) expect(checked.error).toContain("GHOST");
  });

  it("rejects payloads that mix 2D and 3D nodes", () => {
    const bad = payload();
    delete bad.nodes[2]!.z;
    expect(validateLayoutPayload(bad).ok).toBe(false);
  });

  it("rejects duplicate node ids", () => {
    const bad = payload();
    bad.nodes.push({ ...bad.nodes[0]! });
    expect(validateLayoutPayload(bad).ok).toBe(false);
  });

  it("rejects non-finite coordinates and unknown link kinds", () => {
    const nan = payload();
    nan.nodes[0]!.x = Number.NaN;
    expect(validateLayoutPayload(nan).ok).toBe(false);

    const weird = payload();
    weird.links[0] = { source: "B", target: "A", kind: "psychic" as never };
    expect(validateLayoutPayload(weird).ok).toBe(false);
  });

  it("rejects things that are not payload objects at all", () => {
    expect(validateLayoutPayload(null).ok).toBe(false);
    expect(validateLayoutPayload([1, 2]).ok).toBe(false);
    expect(validateLayoutPayload({ nodes: "x", links: [] }).ok).toBe(false);
  });
});
