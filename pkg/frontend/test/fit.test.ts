import { describe, expect, it } from "vitest";

import { fitCosine } from "../src/fit.js";

describe("fitCosine", () => {
  it("recovers amplitude, offset, and mean of a clean cosine", () => {
    const amplitude = 0.8647;
    const offset = -0.4;
    const mean = 0.25;
    const x = Array.from({ length: 24 }, (_, i) => (2 * Math.PI * i) / 24);
    const y = x.map((v) => mean + amplitude * Math.cos(v - offset));
    const fit = fitCosine(x, y);
    expect(fit.amplitude).toBeCloseTo(amplitude, 9);
    expect(fit.offset).toBeCloseTo(offset, 9);
    expect(fit.mean).toBeCloseTo(mean, 9);
    expect(fit.maxResidual).toBeLessThan(1e-12);
  });

  it("reports residuals for non-cosine data", () => {
    const x = [0, 1, 2, 3, 4, 5];
    const y = x.map((v) => v * v);
    const fit = fitCosine(x, y);
    expect(fit.maxResidual).toBeGreaterThan(0.1);
  });

  it("needs at least three samples", () => {
    expect(() => fitCosine([0, 1], [1, 2])).toThrow();
  });
});
