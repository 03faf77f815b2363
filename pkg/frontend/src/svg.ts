/**
 * Minimal deterministic SVG chart builder: no DOM, no randomness, identical
 * input yields byte-identical output.
 */

export interface Series {
  x: number[];
  y: number[];
  label?: string;
  dashed?: boolean;
  color?: string;
  markers?: boolean;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  annotations?: string[];
  width?: number;
  height?: number;
}

const MARGIN = { top: 42, right: 24, bottom: 48, left: 76 };
const COLORS = ["#1a5fb4", "#c01c28", "#26a269", "#e66100"];

function fmt(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) return value.toExponential(2);
  return Number(value.toPrecision(6)).toString();
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) {
    hi = lo + 1;
    lo = lo - 1;
  }
  const span = hi - lo;
  const step0 = span / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((s) => span / s <= count) ?? candidates[candidates.length - 1];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 720;
  const height = spec.height ?? 440;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = spec.series.flatMap((s) => s.x);
  const ys = spec.series.flatMap((s) => s.y);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys, 0);
  let yHi = Math.max(...ys, 0);
  if (yLo === yHi) {
    yLo -= 1;
    yHi += 1;
  }
  const yPad = (yHi - yLo) * 0.06;
  yLo -= yPad;
  yHi += yPad;

  const sx = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW;
  const sy = (v: number) => MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">${spec.title}</text>`,
  );

  for (const tick of niceTicks(xLo, xHi)) {
    const px = fmt(sx(tick));
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top}" x2="${px}" y2="${MARGIN.top + plotH}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${px}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" font-size="11">` +
        `${fmt(tick)}</text>`,
    );
  }
  for (const tick of niceTicks(yLo, yHi)) {
    const py = fmt(sy(tick));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + plotW}" y2="${py}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${MARGIN.left - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="11">${fmt(tick)}</text>`,
    );
  }
  if (yLo < 0 && yHi > 0) {
    const zero = fmt(sy(0));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${zero}" x2="${MARGIN.left + plotW}" y2="${zero}" ` +
        `stroke="#999999" stroke-width="1"/>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333"/>`,
  );

  spec.series.forEach((series, index) => {
    const color = series.color ?? COLORS[index % COLORS.length];
    const dash = series.dashed ? ' stroke-dasharray="7 5"' : "";
    const points = series.x.map((v, i) => `${fmt(sx(v))},${fmt(sy(series.y[i]))}`);
    parts.push(
      `<polyline points="${points.join(" ")}" fill="none" stroke="${color}" ` +
        `stroke-width="1.6"${dash}/>`,
    );
    if (series.markers) {
      for (const pt of points) {
        const [cx, cy] = pt.split(",");
        parts.push(`<circle cx="${cx}" cy="${cy}" r="2.6" fill="${color}"/>`);
      }
    }
    if (series.label) {
      const ly = MARGIN.top + 16 + 16 * index;
      const lx = MARGIN.left + plotW - 170;
      parts.push(
        `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 26}" y2="${ly - 4}" stroke="${color}" ` +
          `stroke-width="1.6"${dash}/>`,
        `<text x="${lx + 32}" y="${ly}" font-size="11">${series.label}</text>`,
      );
    }
  });

  (spec.annotations ?? []).forEach((note, index) => {
    parts.push(
      `<text x="${MARGIN.left + 8}" y="${MARGIN.top + 16 + 14 * index}" font-size="11" ` +
        `fill="#444444">${note}</text>`,
    );
  });

  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 12}" text-anchor="middle" ` +
      `font-size="12">${spec.xLabel}</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${spec.yLabel}</text>`,
    "</svg>",
  );
  return parts.join("\n") + "\n";
}
