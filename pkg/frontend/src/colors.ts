// Color classes shared by the graph views and the VideoData charts.

export const NODE_COLORS = {
  /** course and association nodes (the skeleton) */
  skeleton: "#C39EFF",
  /** hidden prerequisite nodes */
  prerequisite: "#888888",
  /** a marked skeleton node turns light orange */
  skeletonMarked: "#FFC46C",
  /** a marked prerequisite node turns dark orange */
  prerequisiteMarked: "#FF9F6C",
} as const;

export const CHART_COLORS = {
  plays: "#C39EFF",
  pauses: "#00AEEC",
  speed: "#FF9897",
  comments: "#888888",
} as const;

export const SCORE_LEGEND: { score: number; label: string; color: string }[] = [
  { score: 3, label: "Never heard before or Unfamiliar", color: "#FF4D4F" },
  { score: 2, label: "Familiar but not Proficient", color: "#FAAD14" },
  { score: 1, label: "Basic Comprehend", color: "#8C8C8C" },
  { score: 0, label: "Completely Mastered", color: "#52C41A" },
];

/** Shade a concept hexagon from its aggregate: intensity picks the hue
 * position between white and a deep purple, alpha the opacity. Unmarked
 * concepts (alpha 0) render in the base skeleton color. */
export function aggregateShade(intensity: number, alpha: number): { fill: string; opacity: number } {
  if (alpha <= 0) {
    return { fill: NODE_COLORS.skeleton, opacity: 1.0 };
  }
  const clamp = (v: number) => Math.max(0, Math.min(1, v));
  const t = clamp(intensity);
  const from = { r: 0xf3, g: 0xeb, b: 0xff };
  const to = { r: 0x5b, g: 0x21, b: 0xb5 };
  const mix = (a: number, b: number) => Math.round(a + (b - a) * t);
  const hex = (v: number) => v.toString(16).padStart(2, "0");
  return {
    fill: `#${hex(mix(from.r, to.r))}${hex(mix(from.g, to.g))}${hex(mix(from.b, to.b))}`,
    opacity: clamp(alpha),
  };
}
