/**
 * Binary32 reference semantics of the vertex stages, built on Math.fround.
 * Used by the tests to pin what the GLSL is specified to compute; every
 * operation here rounds to binary32 exactly where the shader would.
 */

const f = Math.fround;

export type Pair = [high: number, low: number];
export type Vec3 = [number, number, number];
export type Mat4 = number[][]; // row-major [row][col]

/** Decompose a binary64 value into a (high, low) binary32 pair. */
export function split(value: number): Pair {
  if (Number.isNaN(value) || Math.abs(value) > 3.4028234663852886e38) {
    throw new RangeError(`value ${value} is outside binary32 range`);
  }
  const high = f(value);
  const low = f(value - high);
  return [high, low];
}

export function recombine(pair: Pair): number {
  return pair[0] + pair[1];
}

/** Emulated vertex stage as shipped: the pair recombines in binary32
 * BEFORE the multiply, and the matrix itself is binary32. */
export function emulatedVertex(
  highPos: Vec3,
  lowPos: Vec3,
  mvp32: Mat4,
): [number, number, number, number] {
  const pos: Vec3 = [
    f(highPos[0] + lowPos[0]),
    f(highPos[1] + lowPos[1]),
    f(highPos[2] + lowPos[2]),
  ];
  return matvec32(mvp32, pos);
}

/** Plain binary32 vertex stage. */
export function plainVertex(
  pos: Vec3,
  mvp32: Mat4,
): [number, number, number, number] {
  return matvec32(mvp32, [f(pos[0]), f(pos[1]), f(pos[2])]);
}

function matvec32(m: Mat4, v: Vec3): [number, number, number, number] {
  const out = [0, 0, 0, 0] as [number, number, number, number];
  for (let row = 0; row < 4; row++) {
    const a = f(m[row][0] * v[0]);
    const b = f(m[row][1] * v[1]);
    const c = f(m[row][2] * v[2]);
    out[row] = f(f(f(a + b) + c) + m[row][3]);
  }
  return out;
}

export function narrowMatrix(m: Mat4): Mat4 {
  return m.map((row) => row.map((x) => f(x)));
}

// -- compensated building blocks (the corrected in-shader variant) ----------

export function twoSum(a: number, b: number): Pair {
  const s = f(a + b);
  const bb = f(s - a);
  const err = f(f(a - f(s - bb)) + f(b - bb));
  return [s, err];
}

export function fastTwoSum(a: number, b: number): Pair {
  const s = f(a + b);
  return [s, f(b - f(s - a))];
}

export function twoProd(a: number, b: number): Pair {
  const p = f(a * b);
  const [ah, al] = splitHalf(a);
  const [bh, bl] = splitHalf(b);
  // one rounding per operation, left to right, as the shader evaluates it
  const t1 = f(f(ah * bh) - p);
  const t2 = f(t1 + f(ah * bl));
  const t3 = f(t2 + f(al * bh));
  const err = f(t3 + f(al * bl));
  return [p, err];
}

function splitHalf(a: number): Pair {
  const c = f(4097.0 * a);
  const hi = f(c - f(c - a));
  return [hi, f(a - hi)];
}

export function pairAdd(a: Pair, b: Pair): Pair {
  const s = twoSum(a[0], b[0]);
  const t = twoSum(a[1], b[1]);
  const v = fastTwoSum(s[0], f(s[1] + t[0]));
  return fastTwoSum(v[0], f(v[1] + t[1]));
}

export function pairMul(a: Pair, b: Pair): Pair {
  const p = twoProd(a[0], b[0]);
  const cross = f(f(a[0] * b[1]) + f(a[1] * b[0]));
  return fastTwoSum(p[0], f(p[1] + cross));
}
