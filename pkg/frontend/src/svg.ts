/** Minimal SVG assembly: enough for dots, bars and axis frames. */

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

export const UNASSIGNED_COLOR = "#999999";

export function colorFor(label: number): string {
  if (label < 0) return UNASSIGNED_COLOR;
  return PALETTE[label % PALETTE.length];
}

export interface Frame {
  width: number;
  height: number;
  margin: number;
}

export const DEFAULT_FRAME: Frame = { width: 640, height: 480, margin: 50 };

export class LinearScale {
  constructor(
    readonly lo: number,
    readonly hi: number,
    readonly out0: number,
    readonly out1: number,
  ) {}

  map(x: number): number {
    const span = this.hi - this.lo;
    const t = span === 0 ? 0.5 : (x - this.lo) / span;
    return this.out0 + t * (this.out1 - this.out0);
  }
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  return [lo, hi];
}

export function circle(cx: number, cy: number, r: number, fill: string): string {
  return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}" fill-opacity="0.75"/>`;
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  fill: string,
): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`;
}

export function text(x: number, y: number, s: string, size = 12): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" font-family="sans-serif">${escapeXml(s)}</text>`;
}

export function axes(frame: Frame, xlab: string, ylab: string): string {
  const { width: w, height: h, margin: m } = frame;
  return [
    `<line x1="${m}" y1="${h - m}" x2="${w - m}" y2="${h - m}" stroke="black"/>`,
    `<line x1="${m}" y1="${m}" x2="${m}" y2="${h - m}" stroke="black"/>`,
    text(w / 2, h - m / 4, xlab),
    `<text x="${m / 4}" y="${h / 2}" font-size="12" font-family="sans-serif" transform="rotate(-90 ${m / 4} ${h / 2})">${escapeXml(ylab)}</text>`,
  ].join("\n");
}

/** Numeric labels at both ends of each axis. */
export function axisEndLabels(
  frame: Frame,
  xr: [number, number],
  yr: [number, number],
): string {
  const { width: w, height: h, margin: m } = frame;
  return [
    text(m, h - m + 16, short(xr[0]), 10),
    text(w - m - 30, h - m + 16, short(xr[1]), 10),
    text(m - 44, h - m, short(yr[0]), 10),
    text(m - 44, m + 4, short(yr[1]), 10),
  ].join("\n");
}

function short(x: number): string {
  if (x === 0) return "0";
  const a = Math.abs(x);
  if (a >= 0.01 && a < 10000) return x.toPrecision(3);
  return x.toExponential(1);
}

/** Color swatches for each label present, top-right corner. */
export function legend(frame: Frame, labels: number[]): string {
  const seen = [...new Set(labels)].sort((a, b) => a - b);
  const x = frame.width - frame.margin - 90;
  const parts: string[] = [];
  seen.forEach((lab, i) => {
    const y = frame.margin + 14 * i;
    parts.push(rect(x, y - 8, 10, 10, colorFor(lab)));
    parts.push(text(x + 14, y, lab < 0 ? "unassigned" : `community ${lab}`, 10));
  });
  return parts.join("\n");
}

export function document(frame: Frame, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" viewBox="0 0 ${frame.width} ${frame.height}">`,
    `<rect width="100%" height="100%" fill="white"/>`,
    ...body,
    `</svg>`,
  ].join("\n");
}

function fmt(x: number): string {
  return Number.isInteger(x) ? String(x) : x.toFixed(2);
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
