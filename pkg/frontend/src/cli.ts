#!/usr/bin/env node
/**
 * hoisim-plots render --kind {profile,fringe,sweep} --in data.csv [--in2 other.csv] --out plot.svg
 *
 * Exit codes: 0 rendered, 1 schema/usage failure (no file written).
 */

import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { readCsv } from "./csv.js";
import { PlotKind, renderPlot } from "./render.js";

export function runCli(argv: string[]): number {
  const parsed = yargs(argv)
    .command("render", "render a CSV file to an SVG image", (cmd) =>
      cmd
        .option("kind", {
          choices: ["profile", "fringe", "sweep"] as const,
          demandOption: true,
        })
        .option("in", { type: "string", demandOption: true })
        .option("in2", { type: "string" })
        .option("out", { type: "string", demandOption: true }),
    )
    .demandCommand(1)
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    })
    .parseSync();

  const inputs = [parsed["in"] as string];
  if (parsed["in2"]) inputs.push(parsed["in2"] as string);
  const tables = inputs.map((path) => readCsv(path));
  const svg = renderPlot(parsed["kind"] as PlotKind, tables);
  writeFileSync(parsed["out"] as string, svg);
  console.log(parsed["out"]);
  return 0;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("hoisim-plots")) {
  try {
    process.exitCode = runCli(hideBin(process.argv));
  } catch (error) {
    console.error(String(error instanceof Error ? error.message : error));
    process.exitCode = 1;
  }
}
