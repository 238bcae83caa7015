/**
 * THREE scene construction for the 3D view. Pure data-to-objects: no
 * renderer, no camera, no DOM, so it runs (and is tested) headless.
 * The browser bootstrap owns the WebGL side.
 */

import * as THREE from "three";

import { NODE_RADIUS, PALETTE } from "./palette.js";
import type { GraphLink, LayoutPayload } from "./types.js";

export interface SceneOptions {
  selected?: string | null;
  highlighted?: ReadonlySet<string>;
  showConceptual?: boolean;
}

export interface SceneBundle {
  group: THREE.Group;
  /** Node meshes by acronym, for raycasting and camera targeting. */
  nodeAt: Map<string, THREE.Mesh>;
}

const SPHERE = new THREE.SphereGeometry(NODE_RADIUS, 24, 16);

function nodeColor(flag: boolean, highlighted: boolean): THREE.Color {
  if (highlighted) return new THREE.Color(PALETTE.highlight);
  return new THREE.Color(flag ? PALETTE.flagged : PALETTE.node);
}

function segmentPositions(
  links: GraphLink[],
  kind: "direct" | "conceptual",
  points: Map<string, THREE.Vector3>,
): Float32Array {
  const wanted = links.filter((l) => l.kind === kind);
  const positions = new Float32Array(wanted.length * 6);
  wanted.forEach((link, i) => {
    const a = points.get(link.source)!;
    const b = points.get(link.target)!;
    positions.set([a.x, a.y, a.z, b.x, b.y, b.z], i * 6);
  });
  return positions;
}

export function buildGraphScene(payload: LayoutPayload, options: SceneOptions = {}): SceneBundle {
  const highlighted = options.highlighted ?? new Set<string>();
  const group = new THREE.Group();
  group.name = "method-graph";

  const points = new Map<string, THREE.Vector3>();
  const nodeAt = new Map<string, THREE.Mesh>();
  const nodes = new THREE.Group();
  nodes.name = "nodes";
  for (const node of payload.nodes) {
    const point = new THREE.Vector3(node.x, node.y, node.z ?? 0);
    points.set(node.id, point);
    const material = new THREE.MeshLambertMaterial({
      color: nodeColor(node.flag, highlighted.has(node.id)),
    });
    if (node.id === options.selected) material.emissive = new THREE.Color(PALETTE.selected);
    const mesh = new THREE.Mesh(SPHERE, material);
    mesh.position.copy(point);
    mesh.name = node.id;
    mesh.userData = { acronym: node.id, flag: node.flag };
    if (node.id === options.selected) mesh.scale.setScalar(1.5);
    nodes.add(mesh);
    nodeAt.set(node.id, mesh);
  }
  group.add(nodes);

  const direct = new THREE.LineSegments(
    new THREE.BufferGeometry().setAttribute(
      "position",
      new THREE.BufferAttribute(segmentPositions(payload.links, "direct", points), 3),
    ),
    new THREE.LineBasicMaterial({ color: PALETTE.edge }),
  );
  direct.name = "direct-links";
  group.add(direct);

  if (options.showConceptual !== false) {
    const conceptual = new THREE.LineSegments(
      new THREE.BufferGeometry().setAttribute(
        "position",
        new THREE.BufferAttribute(segmentPositions(payload.links, "conceptual", points), 3),
      ),
      new THREE.LineDashedMaterial({ color: PALETTE.edge, dashSize: 3, gapSize: 2 }),
    );
    conceptual.computeLineDistances();
    conceptual.name = "conceptual-links";
    group.add(conceptual);
  }

  return { group, nodeAt };
}
