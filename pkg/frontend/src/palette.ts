// Categorical hues for dominant products; index -1 is the no-product grey.

const HUES = [210, 30, 120, 280, 0, 170, 60, 330, 95, 250, 200, 15];

export const FALLBACK_COLOUR = "#9aa3ab";

export function colourFor(index: number, opacity = 1): string {
  if (index < 0) return FALLBACK_COLOUR;
  const hue = HUES[index % HUES.length];
  return `hsla(${hue}, 68%, 58%, ${opacity})`;
}
