/**
 * Eigenvector scatter: one dot per node at (x_u, y_u), colored by label.
 *
 * For population-matrix input the rows are block-constant, so the plot
 * must collapse to one dot per community; assertMaxDistinct verifies that
 * numerically before anything is rendered and fails loudly otherwise.
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

export interface ScatterOptions {
  frame?: Frame;
  /** fail before rendering if the distinct-row count exceeds this */
  assertMaxDistinct?: number;
  /** coordinate tolerance for row distinctness */
  tol?: number;
  title?: string;
}

export function distinctCoordinatePairs(
  xs: number[],
  ys: number[],
  tol: number,
): number {
  const reps: Array<[number, number]> = [];
  for (let i = 0; i < xs.length; i++) {
    let found = false;
    for (const [rx, ry] of reps) {
      if (Math.abs(xs[i] - rx) <= tol && Math.abs(ys[i] - ry) <= tol) {
        found = true;
        break;
      }
    }
    if (!found) reps.push([xs[i], ys[i]]);
  }
  return reps.length;
}

export function scatterEigvecs(
  data: EigvecData,
  labels: number[],
  opts: ScatterOptions = {},
): string {
  if (data.columns.length < 2) {
    throw new Error("scatter needs two eigenvector columns");
  }
  checkConsistent(data, labels);
  const [xs, ys] = [data.columns[0], data.columns[1]];
  const tol = opts.tol ?? 1e-6;
  if (opts.assertMaxDistinct !== undefined) {
    const count = distinctCoordinatePairs(xs, ys, tol);
    if (count > opts.assertMaxDistinct) {
      throw new Error(
        `expected at most ${opts.assertMaxDistinct} distinct coordinate pairs ` +
          `at tolerance ${tol}, found ${count}`,
      );
    }
  }
  const frame = opts.frame ?? DEFAULT_FRAME;
  const m = frame.margin;
  const [xlo, xhi] = extent(xs);
  const [ylo, yhi] = extent(ys);
  const sx = new LinearScale(xlo, xhi, m, frame.width - m);
  const sy = new LinearScale(ylo, yhi, frame.height - m, m);
  const body = [
    axes(frame, "eigenvector 1", "eigenvector 2"),
    axisEndLabels(frame, [xlo, xhi], [ylo, yhi]),
  ];
  body.push(legend(frame, labels));
  if (opts.title) body.push(text(frame.margin, frame.margin / 2, opts.title));
  for (let i = 0; i < xs.length; i++) {
    body.push(circle(sx.map(xs[i]), sy.map(ys[i]), 3, colorFor(labels[i])));
  }
  return document(frame, body);
}
