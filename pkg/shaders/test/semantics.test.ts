/**
 * Semantic pins for the shader programs, computed with Math.fround so every
 * operation rounds exactly where the GPU would in binary32.
 */

import { describe, expect, it } from "vitest";

import {
  Mat4,
  Pair,
  Vec3,
  emulatedVertex,
  narrowMatrix,
  pairAdd,
  pairMul,
  plainVertex,
  recombine,
  split,
  twoProd,
  twoSum,
} from "../src/emulate.js";

const REL_44 = 2 ** -44;

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("pair split", () => {
  it("zero and one decompose trivially", () => {
    expect(split(0)).toEqual([0, 0]);
    expect(split(1)).toEqual([1, 0]);
  });

  it("pi splits into the binary32 value and a negative correction", () => {
    const [high, low] = split(Math.PI);
    expect(high).toBe(Math.fround(Math.PI));
    expect(low).toBeLessThan(0);
    expect(Math.abs(Math.PI - (high + low))).toBeLessThanOrEqual(REL_44 * Math.PI);
  });

  it("reconstructs 10^4 random values to 44 bits", () => {
    const rnd = mulberry32(42);
    for (let i = 0; i < 10_000; i++) {
      const exponent = rnd() * 60 - 30;
      const v = (rnd() < 0.5 ? -1 : 1) * (1 + rnd()) * 2 ** exponent;
      const err = Math.abs(v - recombine(split(v)));
      expect(err).toBeLessThanOrEqual(REL_44 * Math.abs(v));
    }
  });

  it("rejects NaN and out-of-range magnitudes", () => {
    expect(() => split(Number.NaN)).toThrow(RangeError);
    expect(() => split(1e39)).toThrow(RangeError);
  });
});

describe("error-free transforms", () => {
  it("twoSum is exact for random binary32 pairs", () => {
    const rnd = mulberry32(7);
    for (let i = 0; i < 5_000; i++) {
      const a = Math.fround(rnd() * 2e6 - 1e6);
      const b = Math.fround(rnd() * 2e6 - 1e6);
      const [s, e] = twoSum(a, b);
      expect(s + e).toBe(a + b); // both sides round the same real value
    }
  });

  it("twoProd is exact for random binary32 pairs", () => {
    const rnd = mulberry32(8);
    for (let i = 0; i < 5_000; i++) {
      const a = Math.fround(rnd() * 2e3 - 1e3);
      const b = Math.fround(rnd() * 2e3 - 1e3);
      const [p, e] = twoProd(a, b);
      expect(p + e).toBe(a * b);
    }
  });
});

describe("pair arithmetic", () => {
  it("add and mul stay within 2^-44 of binary64", () => {
    const rnd = mulberry32(9);
    for (let i = 0; i < 2_000; i++) {
      const va = rnd() * 2e6 - 1e6;
      const vb = rnd() * 2e6 - 1e6;
      const a = split(va);
      const b = split(vb);
      const sum = recombine(pairAdd(a, b));
      const prod = recombine(pairMul(a, b));
      const refSum = recombine(a) + recombine(b);
      const refProd = recombine(a) * recombine(b);
      expect(Math.abs(sum - refSum)).toBeLessThanOrEqual(
        REL_44 * Math.max(Math.abs(refSum), 1e-30),
      );
      expect(Math.abs(prod - refProd)).toBeLessThanOrEqual(
        REL_44 * Math.max(Math.abs(refProd), 1e-30),
      );
    }
  });
});

describe("vertex stage semantics", () => {
  const mvp64: Mat4 = [
    [1.1, 0.2, -0.3, 4.0],
    [-0.7, 0.9, 0.05, -2.5],
    [0.0, 0.1, 1.3, 0.75],
    [0.0, 0.0, -1.0, 0.0],
  ];
  const mvp32 = narrowMatrix(mvp64);

  it("zero lows collapse to the plain binary32 pipeline bit-for-bit", () => {
    const rnd = mulberry32(11);
    for (let i = 0; i < 2_000; i++) {
      const p: Vec3 = [rnd() * 2 - 1, rnd() * 2 - 1, rnd() * 2 - 1];
      const high: Vec3 = [Math.fround(p[0]), Math.fround(p[1]), Math.fround(p[2])];
      const emulated = emulatedVertex(high, [0, 0, 0], mvp32);
      const plain = plainVertex(high, mvp32);
      expect(emulated).toEqual(plain);
    }
  });

  it("the recombination before the multiply collapses to binary32", () => {
    // high + low rounds back to binary32, so the shipped vertex stage cannot
    // beat plain binary32 positions; the pair must survive to do better.
    const v = 0.1234567890123456;
    const [high, low] = split(v);
    const emulated = emulatedVertex([high, high, high], [low, low, low], mvp32);
    const plain = plainVertex([Math.fround(v), Math.fround(v), Math.fround(v)], mvp32);
    expect(emulated).toEqual(plain);
  });

  it("pairwise accumulation retains sub-binary32 offsets", () => {
    // translation of 10^6 against coordinates near 1: the pair path keeps
    // the low-order digits the single-float sum throws away
    const translate = 1e6;
    const v = 1.000000123456789;
    const [high, low] = split(v);
    const direct: Pair = pairAdd(pairMul(split(1.0), [high, low]), split(translate));
    const got = recombine(direct);
    const want = v + translate;
    expect(Math.abs(got - want)).toBeLessThanOrEqual(2 ** -40 * want);
    const collapsed = Math.fround(Math.fround(v) + translate);
    expect(Math.abs(collapsed - want)).toBeGreaterThan(Math.abs(got - want) * 100);
  });
});
