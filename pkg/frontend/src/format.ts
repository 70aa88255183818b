/** Display formatting. Fractions arrive from the service; the UI shows
 * whole percents and reveals full precision in tooltips. Nothing here
 * derives new quantities. */

export function wholePercent(fraction: number): string {
  return `${Math.round(fraction * 100)}%`;
}

export function tooltipPrecision(fraction: number): string {
  return String(fraction);
}

export function formatCategory(index: number): string {
  return `C${index}`;
}

export function formatOptional(fraction: number | null): string {
  return fraction === null ? "–" : wholePercent(fraction);
}

export function formatLambdaInterval([lo, hi, category]: [number, number, number]): string {
  return `(${lo.toFixed(3)}, ${hi.toFixed(3)}] → ${formatCategory(category)}`;
}
