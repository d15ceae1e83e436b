/**
 * Interface descriptors the pipelines are built against: attribute slot
 * maps, push-constant budgets, and inter-stage variables with their
 * interpolation qualifiers.  These mirror the renderer's vertex layouts
 * slot for slot; the tests parse the GLSL and fail on any drift.
 */

export type Scalar = "f32" | "f64";

export interface AttributeSlot {
  name: string;
  location: number;
  components: number;
  scalar: Scalar;
}

export interface InterStageVar {
  name: string;
  location: number;
  type: string;
  flat: boolean;
}

export interface ShaderInterface {
  variant: "emulated64" | "native64" | "plain32";
  vertexModule: string;
  fragmentModule: string;
  attributes: AttributeSlot[];
  pushConstantBytes: number;
  interStage: InterStageVar[];
}

/** Locations consumed by one attribute: 64-bit vectors wider than two
 * components spill into the next slot. */
export function locationsUsed(slot: AttributeSlot): number {
  return slot.scalar === "f64" && slot.components > 2 ? 2 : 1;
}

export const INTERFACES: ShaderInterface[] = [
  {
    variant: "emulated64",
    vertexModule: "emulated.vert",
    fragmentModule: "emulated.frag",
    attributes: [
      { name: "highPos", location: 0, components: 3, scalar: "f32" },
      { name: "lowPos", location: 1, components: 3, scalar: "f32" },
      { name: "highColor", location: 2, components: 3, scalar: "f32" },
      { name: "lowColor", location: 3, components: 3, scalar: "f32" },
    ],
    pushConstantBytes: 64,
    interStage: [
      { name: "outHighColor", location: 0, type: "vec3", flat: false },
      { name: "outLowColor", location: 1, type: "vec3", flat: false },
    ],
  },
  {
    variant: "native64",
    vertexModule: "native.vert",
    fragmentModule: "native.frag",
    attributes: [
      { name: "pos", location: 0, components: 3, scalar: "f64" },
      // location 1 is consumed by pos; color starts at 2
      { name: "color", location: 2, components: 3, scalar: "f64" },
    ],
    pushConstantBytes: 128,
    interStage: [{ name: "fragColor", location: 0, type: "dvec3", flat: true }],
  },
  {
    variant: "plain32",
    vertexModule: "plain.vert",
    fragmentModule: "plain.frag",
    attributes: [
      { name: "pos", location: 0, components: 3, scalar: "f32" },
      { name: "color", location: 1, components: 3, scalar: "f32" },
    ],
    pushConstantBytes: 64,
    interStage: [{ name: "vColor", location: 0, type: "vec3", flat: false }],
  },
];

export function byVariant(variant: ShaderInterface["variant"]): ShaderInterface {
  const found = INTERFACES.find((i) => i.variant === variant);
  if (!found) throw new Error(`no interface for variant ${variant}`);
  return found;
}
