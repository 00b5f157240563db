/** plot_savflow <kind> <csv...> -o <figure>
 *
 * kind: orbit | energy-trace | convergence.  Output format follows the
 * output extension: .svg writes vector output, anything else a PNG.
 * Exit codes: 0 image written, 1 read/render error (including missing
 * columns), 2 usage error.
 */
import { parseArgs } from "node:util";
import { readTable } from "./csv.js";
import { buildOption, FIGURE_KINDS, FigureKind } from "./figures.js";
import { DEFAULT_SIZE, renderToFile } from "./render.js";

const USAGE = `usage: plot_savflow <${FIGURE_KINDS.join("|")}> <csv...> -o <figure.(png|svg)> [--width N] [--height N]`;

function usageError(message: string): 2 {
  process.stderr.write(`${message}\n${USAGE}\n`);
  return 2;
}

export function runCli(argv: string[]): number {
  let positionals: string[];
  let values: { out?: string; width?: string; height?: string };
  try {
    ({ positionals, values } = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        out: { type: "string", short: "o" },
        width: { type: "string" },
        height: { type: "string" },
      },
    }));
  } catch (err) {
    return usageError((err as Error).message);
  }

  const [kind, ...csvPaths] = positionals;
  if (!kind || !(FIGURE_KINDS as readonly string[]).includes(kind)) {
    return usageError(`unknown figure kind ${kind ?? "(none)"}`);
  }
  if (csvPaths.length === 0) return usageError("no input CSV files given");
  if (!values.out) return usageError("missing -o/--out output path");
  const width = values.width ? Number(values.width) : DEFAULT_SIZE.width;
  const height = values.height ? Number(values.height) : DEFAULT_SIZE.height;
  if (!Number.isFinite(width) || width <= 0 || !Number.isFinite(height) || height <= 0) {
    return usageError("width and height must be positive numbers");
  }

  try {
    const tables = csvPaths.map(readTable);
    const option = buildOption(kind as FigureKind, tables);
    renderToFile(option, values.out, { width, height });
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
  process.stdout.write(`${values.out}\n`);
  return 0;
}
