/**
 * Histogram of eigenvector values restricted to [lo, hi], bars stacked by
 * community label. An empty selection is a warning, not an error: the
 * output is an empty frame and the caller sees the flag.
 */

import { EigvecData, checkConsistent } from "./csv.js";
import {
  DEFAULT_FRAME,
  Frame,
  LinearScale,
  axes,
  axisEndLabels,
  colorFor,
  legend,
  document,
  rect,
  text,
} from "./svg.js";

export interface HistogramOptions {
  frame?: Frame;
  bins?: number;
  column?: number; // 1-based eigenvector column
  title?: string;
}

export interface HistogramResult {
  svg: string;
  counts: number[][]; // counts[label_index][bin]
  labelsSeen: number[];
  warning?: string;
}

export function histogramRestricted(
  data: EigvecData,
  labels: number[],
  lo: number,
  hi: number,
  opts: HistogramOptions = {},
): HistogramResult {
  if (!(lo < hi)) throw new Error("need lo < hi");
  checkConsistent(data, labels);
  const col = (opts.column ?? 1) - 1;
  if (col < 0 || col >= data.columns.length) {
    throw new Error(`column ${opts.column} out of range`);
  }
  const values = data.columns[col];
  const nbins = opts.bins ?? 40;
  const labelsSeen = [...new Set(labels)].sort((a, b) => a - b);
  const index = new Map(labelsSeen.map((lab, i) => [lab, i]));
  const counts = labelsSeen.map(() => new Array<number>(nbins).fill(0));
  let selected = 0;
  for (let i = 0; i < values.length; i++) {
    const v = values[i];
    if (v < lo || v > hi) continue;
    selected++;
    let b = Math.floor(((v - lo) / (hi - lo)) * nbins);
    if (b === nbins) b = nbins - 1; // v == hi lands in the last bin
    counts[index.get(labels[i])!][b]++;
  }
  const frame = opts.frame ?? DEFAULT_FRAME;
  const body = [axes(frame, `value in [${lo}, ${hi}]`, "count")];
  if (opts.title) body.push(text(frame.margin, frame.margin / 2, opts.title));
  let warning: string | undefined;
  if (selected === 0) {
    warning = `no values inside [${lo}, ${hi}]`;
    body.push(text(frame.width / 2 - 60, frame.height / 2, "(empty selection)"));
    return { svg: document(frame, body), counts, labelsSeen, warning };
  }
  const m = frame.margin;
  const totals = new Array<number>(nbins).fill(0);
  for (const row of counts) row.forEach((c, b) => (totals[b] += c));
  const maxCount = Math.max(...totals);
  body.push(axisEndLabels(frame, [lo, hi], [0, maxCount]));
  body.push(legend(frame, labels));
  const sy = new LinearScale(0, maxCount, frame.height - m, m);
  const barW = (frame.width - 2 * m) / nbins;
  for (let b = 0; b < nbins; b++) {
    let yBase = frame.height - m;
    for (let li = 0; li < labelsSeen.length; li++) {
      const c = counts[li][b];
      if (c === 0) continue;
      const h = frame.height - m - sy.map(c);
      body.push(rect(m + b * barW, yBase - h, barW * 0.92, h, colorFor(labelsSeen[li])));
      yBase -= h;
    }
  }
  return { svg: document(frame, body), counts, labelsSeen, warning };
}
