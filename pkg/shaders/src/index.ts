export * from "./sources.js";
export * from "./interface.js";
export * from "./emulate.js";
export { compileAll, findGlslang, writeGlsl } from "./compile.js";
