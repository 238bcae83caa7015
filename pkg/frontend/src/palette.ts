/** Node and edge colors. The data contract fixes only "flagged is red";
 * the rest is house style. */
export const PALETTE = {
  node: "#1f77b4",
  flagged: "#d62728",
  highlight: "#ffb300",
  selected: "#111111",
  edge: "#555555",
  background: "#fafafa",
} as const;

export const NODE_RADIUS = 3;
export const LABEL_LIMIT = 60;
