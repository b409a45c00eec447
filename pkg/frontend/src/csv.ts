/**
 * Readers for the CSV and label files emitted by the dcsbm CLI.
 *
 * Eigenvector CSVs carry a schema comment line ("# dcsbm-csv v1 ...")
 * followed by a header row (node,value1[,value2,...]) and numeric rows.
 * Label files are "vertex label" lines; '#' starts a comment.
 */

export const SCHEMA_PREFIX = "# dcsbm-csv v1";

export interface EigvecData {
  nodes: number[];
  /** column-major: columns[j][i] is value j+1 of node i */
  columns: number[][];
}

export function parseEigvecCsv(text: string): EigvecData {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length < 2 || !lines[0].startsWith(SCHEMA_PREFIX)) {
    throw new Error(`missing schema line "${SCHEMA_PREFIX} ..."`);
  }
  const header = lines[1].split(",");
  if (header[0] !== "node") {
    throw new Error(`unexpected header ${lines[1]}`);
  }
  const ncols = header.length - 1;
  const nodes: number[] = [];
  const columns: number[][] = Array.from({ length: ncols }, () => []);
  for (const line of lines.slice(2)) {
    const parts = line.split(",");
    if (parts.length !== ncols + 1) {
      throw new Error(`row has ${parts.length} fields, expected ${ncols + 1}: ${line}`);
    }
    nodes.push(parseInt(parts[0], 10));
    for (let j = 0; j < ncols; j++) {
      const v = Number(parts[j + 1]);
      if (!Number.isFinite(v)) throw new Error(`non-numeric value in row: ${line}`);
      columns[j].push(v);
    }
  }
  return { nodes, columns };
}

export function parseLabels(text: string, n?: number): number[] {
  const pairs = new Map<number, number>();
  for (const raw of text.split(/\r?\n/)) {
    const line = raw.split("#", 1)[0].trim();
    if (!line) continue;
    const parts = line.split(/\s+/);
    if (parts.length !== 2) throw new Error(`expected "vertex label": ${raw}`);
    pairs.set(parseInt(parts[0], 10), parseInt(parts[1], 10));
  }
  const size = n ?? (pairs.size ? Math.max(...pairs.keys()) + 1 : 0);
  const out = new Array<number>(size).fill(-1);
  for (const [u, lab] of pairs) {
    if (u < 0 || u >= size) throw new Error(`vertex ${u} outside 0..${size - 1}`);
    out[u] = lab;
  }
  return out;
}

export function checkConsistent(data: EigvecData, labels: number[]): void {
  if (labels.length !== data.nodes.length) {
    throw new Error(
      `node count mismatch: ${data.nodes.length} eigenvector rows, ${labels.length} labels`,
    );
  }
}
