/**
 * GLSL 450 sources for the point-cloud pipelines, compiled offline to
 * SPIR-V (see compile.ts) and loaded by the renderer from its shader
 * directory.
 *
 * Two precision paths exist as shader programs:
 *
 *  - emulated: vertex attributes carry (high, low) binary32 pairs; the
 *    vertex stage recombines `highPos + lowPos` in binary32 before the
 *    matrix multiply against a 64-byte binary32 push-constant matrix.
 *    The recombination deliberately happens before the multiply; the
 *    in-shader pairwise variant below exists behind a build flag for
 *    cross-checking what that surrender costs.
 *  - native: binary64 attributes, 128-byte binary64 matrix, narrowed to
 *    binary32 only at the final clip-position assignment.  Requires
 *    GL_ARB_gpu_shader_fp64; 64-bit inter-stage variables must be flat.
 *
 * plain is the binary32 baseline the emulated path must match bit-for-bit
 * when its low attributes are zero.
 */

export const EMULATED_VERT = `#version 450
layout(push_constant) uniform PushConstants {
    mat4 mvp;
} pc;
layout(location = 0) in vec3 highPos;
layout(location = 1) in vec3 lowPos;
layout(location = 2) in vec3 highColor;
layout(location = 3) in vec3 lowColor;
layout(location = 0) out vec3 outHighColor;
layout(location = 1) out vec3 outLowColor;
void main() {
    outHighColor = highColor;
    outLowColor = lowColor;
    gl_Position = pc.mvp * vec4(highPos + lowPos, 1.0);
    gl_PointSize = 1.0;
}
`;

export const EMULATED_FRAG = `#version 450
layout(location = 0) in vec3 outHighColor;
layout(location = 1) in vec3 outLowColor;
layout(location = 0) out vec4 fragColor;
void main() {
    vec3 fullColor = outHighColor + outLowColor;
    fragColor = vec4(fullColor, 1.0);
}
`;

export const NATIVE_VERT = `#version 450
#extension GL_ARB_gpu_shader_fp64 : enable
layout(push_constant) uniform PushConstants {
    dmat4 mvp;
} pc;
layout(location = 0) in dvec3 pos;
layout(location = 2) in dvec3 color;
layout(location = 0) out flat dvec3 fragColor;
void main() {
    gl_Position = vec4(pc.mvp * dvec4(pos, 1.0));
    fragColor = color;
    gl_PointSize = 1.0;
}
`;

export const NATIVE_FRAG = `#version 450
#extension GL_ARB_gpu_shader_fp64 : enable
layout(location = 0) in flat dvec3 fragColor;
layout(location = 0) out vec4 outColor;
void main() {
    outColor = vec4(vec3(fragColor), 1.0);
}
`;

export const PLAIN_VERT = `#version 450
layout(push_constant) uniform PushConstants {
    mat4 mvp;
} pc;
layout(location = 0) in vec3 pos;
layout(location = 1) in vec3 color;
layout(location = 0) out vec3 vColor;
void main() {
    vColor = color;
    gl_Position = pc.mvp * vec4(pos, 1.0);
    gl_PointSize = 1.0;
}
`;

export const PLAIN_FRAG = `#version 450
layout(location = 0) in vec3 vColor;
layout(location = 0) out vec4 fragColor;
void main() {
    fragColor = vec4(vColor, 1.0);
}
`;

/**
 * Pairwise-arithmetic vertex stage (build flag `corrected`): performs the
 * matrix product in compensated (high, low) arithmetic and narrows at the
 * end instead of collapsing the pair before the multiply.  The push block
 * carries the split matrix, still within the 128-byte floor.  `precise`
 * keeps compilers from contracting the error-free transforms away.
 */
export const EMULATED_DF64_VERT = `#version 450
layout(push_constant) uniform PushConstants {
    mat4 mvpHigh;
    mat4 mvpLow;
} pc;
layout(location = 0) in vec3 highPos;
layout(location = 1) in vec3 lowPos;
layout(location = 2) in vec3 highColor;
layout(location = 3) in vec3 lowColor;
layout(location = 0) out vec3 outHighColor;
layout(location = 1) out vec3 outLowColor;

vec2 twoSum(float a, float b) {
    precise float s = a + b;
    precise float bb = s - a;
    precise float err = (a - (s - bb)) + (b - bb);
    return vec2(s, err);
}

vec2 fastTwoSum(float a, float b) {
    precise float s = a + b;
    precise float err = b - (s - a);
    return vec2(s, err);
}

vec2 splitHalf(float a) {
    precise float c = 4097.0 * a;
    precise float hi = c - (c - a);
    return vec2(hi, a - hi);
}

vec2 twoProd(float a, float b) {
    precise float p = a * b;
    vec2 aa = splitHalf(a);
    vec2 bb = splitHalf(b);
    precise float err = ((aa.x * bb.x - p) + aa.x * bb.y + aa.y * bb.x) + aa.y * bb.y;
    return vec2(p, err);
}

vec2 pairAdd(vec2 a, vec2 b) {
    vec2 s = twoSum(a.x, b.x);
    vec2 t = twoSum(a.y, b.y);
    vec2 v = fastTwoSum(s.x, s.y + t.x);
    return fastTwoSum(v.x, v.y + t.y);
}

vec2 pairMul(vec2 a, vec2 b) {
    vec2 p = twoProd(a.x, b.x);
    precise float cross = a.x * b.y + a.y * b.x;
    return fastTwoSum(p.x, p.y + cross);
}

void main() {
    vec2 px = vec2(highPos.x, lowPos.x);
    vec2 py = vec2(highPos.y, lowPos.y);
    vec2 pz = vec2(highPos.z, lowPos.z);
    vec4 clip;
    for (int row = 0; row < 4; ++row) {
        vec2 acc = pairMul(vec2(pc.mvpHigh[0][row], pc.mvpLow[0][row]), px);
        acc = pairAdd(acc, pairMul(vec2(pc.mvpHigh[1][row], pc.mvpLow[1][row]), py));
        acc = pairAdd(acc, pairMul(vec2(pc.mvpHigh[2][row], pc.mvpLow[2][row]), pz));
        acc = pairAdd(acc, vec2(pc.mvpHigh[3][row], pc.mvpLow[3][row]));
        clip[row] = acc.x + acc.y;
    }
    outHighColor = highColor;
    outLowColor = lowColor;
    gl_Position = clip;
    gl_PointSize = 1.0;
}
`;

export interface ShaderModule {
  /** file stem the renderer looks up, e.g. "emulated.vert" */
  name: string;
  stage: "vert" | "frag";
  source: string;
  /** only emitted when the corrected-arithmetic flag is set */
  corrected?: boolean;
}

export const MODULES: ShaderModule[] = [
  { name: "emulated.vert", stage: "vert", source: EMULATED_VERT },
  { name: "emulated.frag", stage: "frag", source: EMULATED_FRAG },
  { name: "native.vert", stage: "vert", source: NATIVE_VERT },
  { name: "native.frag", stage: "frag", source: NATIVE_FRAG },
  { name: "plain.vert", stage: "vert", source: PLAIN_VERT },
  { name: "plain.frag", stage: "frag", source: PLAIN_FRAG },
  { name: "emulated_df64.vert", stage: "vert", source: EMULATED_DF64_VERT, corrected: true },
];
