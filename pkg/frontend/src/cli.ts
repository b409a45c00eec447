#!/usr/bin/env node
/**
 * dcsbm-figs <scatter|histogram|ranking> --eigvecs FILE --labels FILE --out FILE
 *
 * scatter:   --assert-max-distinct N  --tol 1e-6
 * histogram: --lo X --hi Y  --bins N  --col K
 * ranking:   --col K
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseEigvecCsv, parseLabels } from "./csv.js";
import { histogramRestricted } from "./histogram.js";
import { rankingPlot } from "./ranking.js";
import { scatterEigvecs } from "./scatter.js";

interface Args {
  positional: string[];
  flags: Map<string, string>;
}

function parseArgs(argv: string[]): Args {
  const positional: string[] = [];
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith("--")) {
      flags.set(a.slice(2), argv[++i] ?? "");
    } else {
      positional.push(a);
    }
  }
  return { positional, flags };
}

function need(args: Args, name: string): string {
  const v = args.flags.get(name);
  if (v === undefined) throw new Error(`missing --${name}`);
  return v;
}

export function run(argv: string[]): number {
  const args = parseArgs(argv);
  const command = args.positional[0];
  if (!command) {
    console.error("usage: dcsbm-figs <scatter|histogram|ranking> ...");
    return 2;
  }
  const data = parseEigvecCsv(readFileSync(need(args, "eigvecs"), "utf8"));
  const labels = parseLabels(
    readFileSync(need(args, "labels"), "utf8"),
    data.nodes.length,
  );
  const out = need(args, "out");
  let svg: string;
  if (command === "scatter") {
    const maxDistinct = args.flags.get("assert-max-distinct");
    svg = scatterEigvecs(data, labels, {
      assertMaxDistinct: maxDistinct === undefined ? undefined : Number(maxDistinct),
      tol: Number(args.flags.get("tol") ?? 1e-6),
    });
  } else if (command === "histogram") {
    const res = histogramRestricted(
      data,
      labels,
      Number(need(args, "lo")),
      Number(need(args, "hi")),
      {
        bins: Number(args.flags.get("bins") ?? 40),
        column: Number(args.flags.get("col") ?? 1),
      },
    );
    if (res.warning) console.warn(`warning: ${res.warning}`);
    svg = res.svg;
  } else if (command === "ranking") {
    svg = rankingPlot(data, labels, {
      column: Number(args.flags.get("col") ?? 1),
    });
  } else {
    console.error(`unknown command ${command}`);
    return 2;
  }
  writeFileSync(out, svg);
  console.log(`wrote ${out}`);
  return 0;
}

const isMain =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isMain) {
  try {
    process.exit(run(process.argv.slice(2)));
  } catch (err) {
    console.error(String(err));
    process.exit(1);
  }
}
