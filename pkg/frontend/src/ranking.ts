/**
 * Ranking plot: nodes sorted by increasing eigenvector value (ties broken
 * by ascending node index), one dot per node at (rank, value), colored by
 * label. Community structure shows up as label runs along the rank axis.
 */

import { EigvecData, checkConsistent } from "./csv.js";
import {
  DEFAULT_FRAME,
  Frame,
  LinearScale,
  axes,
  axisEndLabels,
  circle,
  legend,
  colorFor,
  document,
  extent,
  text,
} from "./svg.js";

export interface RankingOptions {
  frame?: Frame;
  column?: number; // 1-based
  title?: string;
}

export interface RankedNode {
  node: number;
  rank: number; // 1-based
  value: number;
  label: number;
}

export function rankNodes(
  data: EigvecData,
  labels: number[],
  column = 1,
): RankedNode[] {
  checkConsistent(data, labels);
  const col = column - 1;
  if (col < 0 || col >= data.columns.length) {
    throw new Error(`column ${column} out of range`);
  }
  const values = data.columns[col];
  const order = values
    .map((v, i) => i)
    .sort((a, b) => values[a] - values[b] || a - b);
  return order.map((node, pos) => ({
    node,
    rank: pos + 1,
    value: values[node],
    label: labels[node],
  }));
}

export function rankingPlot(
  data: EigvecData,
  labels: number[],
  opts: RankingOptions = {},
): string {
  const ranked = rankNodes(data, labels, opts.column ?? 1);
  const frame = opts.frame ?? DEFAULT_FRAME;
  const m = frame.margin;
  const sx = new LinearScale(1, Math.max(ranked.length, 2), m, frame.width - m);
  const [vlo, vhi] = extent(ranked.map((r) => r.value));
  const sy = new LinearScale(vlo, vhi, frame.height - m, m);
  const body = [
    axes(frame, "rank", "eigenvector value"),
    axisEndLabels(frame, [1, ranked.length], [vlo, vhi]),
  ];
  body.push(legend(frame, labels));
  if (opts.title) body.push(text(frame.margin, frame.margin / 2, opts.title));
  for (const r of ranked) {
    body.push(circle(sx.map(r.rank), sy.map(r.value), 2, colorFor(r.label)));
  }
  return document(frame, body);
}
