// Deterministic color assignment for segment labels, plus the linear
// value-to-color ramp used for the point ("yield mapping") view.

const PALETTE = [
  "#2f7d31", // field green
  "#9467bd",
  "#1f77b4",
  "#d62728",
  "#ff7f0e",
  "#17becf",
  "#8c564b",
  "#e377c2",
];

export const TRANSFER_COLOR = "#9e9e9e";

/** Stable color per label: transfer is always gray, fields cycle the
 * palette in first-appearance order. */
export function labelColors(labels: string[]): Map<string, string> {
  const colors = new Map<string, string>();
  let next = 0;
  for (const label of labels) {
    if (colors.has(label)) continue;
    if (label === "transfer") {
      colors.set(label, TRANSFER_COLOR);
    } else {
      colors.set(label, PALETTE[next % PALETTE.length]);
      next += 1;
    }
  }
  return colors;
}

/** Linear ramp between blue (min) and red (max); degenerate ranges render
 * at the midpoint. */
export function rampColor(value: number, min: number, max: number): string {
  const t = max > min ? (value - min) / (max - min) : 0.5;
  const clamped = Math.max(0, Math.min(1, t));
  const from = [33, 102, 172]; // blue
  const to = [178, 24, 43]; // red
  const rgb = from.map((f, i) => Math.round(f + (to[i] - f) * clamped));
  return `rgb(${rgb[0]}, ${rgb[1]}, ${rgb[2]})`;
}
