export { column, MissingColumnsError, readTable, requireColumns } from "./csv.js";
export type { Table } from "./csv.js";
export {
  buildOption,
  convergenceOption,
  energyTraceOption,
  FIGURE_KINDS,
  orbitOption,
} from "./figures.js";
export type { FigureKind } from "./figures.js";
export { DEFAULT_SIZE, renderSvg, renderToFile } from "./render.js";
export { runCli } from "./cli.js";
