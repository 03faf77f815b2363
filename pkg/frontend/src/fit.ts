/** Least-squares cosine fit y ~ c0 + A cos(x - offset), used to annotate fringe scans. */

export interface CosineFit {
  mean: number;
  amplitude: number;
  offset: number;
  maxResidual: number;
}

/** Solve the 3x3 normal equations for the basis {1, cos x, sin x}. */
export function fitCosine(x: number[], y: number[]): CosineFit {
  if (x.length !== y.length || x.length < 3) {
    throw new Error("cosine fit needs at least three matching samples");
  }
  const basis = x.map((v) => [1, Math.cos(v), Math.sin(v)]);
  const ata = [
    [0, 0, 0],
    [0, 0, 0],
    [0, 0, 0],
  ];
  const aty = [0, 0, 0];
  for (let row = 0; row < x.length; row++) {
    for (let i = 0; i < 3; i++) {
      aty[i] += basis[row][i] * y[row];
      for (let j = 0; j < 3; j++) {
        ata[i][j] += basis[row][i] * basis[row][j];
      }
    }
  }
  const coef = solve3(ata, aty);
  const amplitude = Math.hypot(coef[1], coef[2]);
  const offset = Math.atan2(coef[2], coef[1]);
  let maxResidual = 0;
  for (let row = 0; row < x.length; row++) {
    const model = coef[0] + coef[1] * Math.cos(x[row]) + coef[2] * Math.sin(x[row]);
    maxResidual = Math.max(maxResidual, Math.abs(y[row] - model));
  }
  return { mean: coef[0], amplitude, offset, maxResidual };
}

function solve3(a: number[][], b: number[]): number[] {
  // Gaussian elimination with partial pivoting on a copy
  const m = a.map((row, i) => [...row, b[i]]);
  for (let col = 0; col < 3; col++) {
    let pivot = col;
    for (let row = col + 1; row < 3; row++) {
      if (Math.abs(m[row][col]) > Math.abs(m[pivot][col])) pivot = row;
    }
    if (Math.abs(m[pivot][col]) < 1e-300) {
      throw new Error("singular system in cosine fit");
    }
    [m[col], m[pivot]] = [m[pivot], m[col]];
    for (let row = 0; row < 3; row++) {
      if (row === col) continue;
      const factor = m[row][col] / m[col][col];
      for (let k = col; k < 4; k++) m[row][k] -= factor * m[col][k];
    }
  }
  return [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
}
