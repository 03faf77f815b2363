/**
 * Plot builders for the three CSV kinds the simulator emits.  The renderer is
 * a pure consumer of the CSV schema: it never recomputes physics, only reads
 * columns and metadata.
 */

import { DataTable, SchemaError, column } from "./csv.js";
import { fitCosine } from "./fit.js";
import { ChartSpec, Series, renderChart } from "./svg.js";

export type PlotKind = "profile" | "fringe" | "sweep";

function speciesLabel(table: DataTable): { label: string; attractive: boolean } {
  const a = Number(table.metadata["scattering_length_m"] ?? "NaN");
  const atoms = table.metadata["atoms"] ?? "?";
  if (Number.isNaN(a)) return { label: `${atoms} atoms`, attractive: false };
  const sign = a < 0 ? "attractive" : "repulsive";
  return { label: `${sign}, ${atoms} atoms`, attractive: a < 0 };
}

/** Condensate third-order profile; a second input overlays the other species
 *  with the repulsive curve solid and the attractive curve dashed. */
export function profileChart(tables: DataTable[]): ChartSpec {
  const series: Series[] = tables.map((table) => {
    const { label, attractive } = speciesLabel(table);
    return {
      x: column(table, "x_um"),
      y: column(table, "i3"),
      label,
      dashed: attractive,
    };
  });
  series.sort((a, b) => Number(a.dashed) - Number(b.dashed));
  return {
    title: "Third-order interference profile",
    xLabel: "x (um)",
    yLabel: "I3 (1/m)",
    series,
  };
}

export function fringeChart(table: DataTable): ChartSpec {
  const phaseColumn = table.columns.find((c) => c.startsWith("phi"));
  if (!phaseColumn) {
    throw new SchemaError("fringe plots need a phi* column");
  }
  const valueColumn = table.columns.includes("sorkin") ? "sorkin" : "value";
  const x = column(table, phaseColumn);
  const y = column(table, valueColumn);
  const fit = fitCosine(x, y);
  const dense: number[] = [];
  const lo = Math.min(...x);
  const hi = Math.max(...x);
  for (let i = 0; i <= 200; i++) dense.push(lo + ((hi - lo) * i) / 200);
  return {
    title: "Interference fringe",
    xLabel: `${phaseColumn.replace("_rad", "")} (rad)`,
    yLabel: valueColumn,
    series: [
      {
        x: dense,
        y: dense.map((v) => fit.mean + fit.amplitude * Math.cos(v - fit.offset)),
        label: "cosine fit",
      },
      { x, y, label: "data", markers: true, color: "#c01c28" },
    ],
    annotations: [
      `amplitude = ${fit.amplitude.toPrecision(6)}`,
      `offset = ${fit.offset.toPrecision(6)} rad`,
      `max residual = ${fit.maxResidual.toExponential(2)}`,
    ],
  };
}

export function sweepChart(table: DataTable): ChartSpec {
  const [xColumn, yColumn] = table.columns;
  if (!xColumn || !yColumn) {
    throw new SchemaError("sweep plots need at least two columns");
  }
  return {
    title: `Sweep of ${xColumn}`,
    xLabel: xColumn,
    yLabel: yColumn,
    series: [{ x: column(table, xColumn), y: column(table, yColumn), markers: true }],
  };
}

export function renderPlot(kind: PlotKind, tables: DataTable[]): string {
  if (tables.length === 0) {
    throw new SchemaError("at least one input table is required");
  }
  if (kind === "profile") return renderChart(profileChart(tables));
  if (kind === "fringe") return renderChart(fringeChart(tables[0]));
  if (kind === "sweep") return renderChart(sweepChart(tables[0]));
  throw new SchemaError(`unknown plot kind '${kind}'`);
}
