/** Server-side rendering: echarts SVG, rasterized to PNG unless the output
 * name asks for .svg.  The output file is written only after a successful
 * render, so an exit status of 0 implies an image on disk.
 */
import { writeFileSync } from "node:fs";
import { Resvg } from "@resvg/resvg-js";
import * as echarts from "echarts";
import type { EChartsOption } from "echarts";

export interface RenderSize {
  width: number;
  height: number;
}

export const DEFAULT_SIZE: RenderSize = { width: 840, height: 600 };

export function renderSvg(option: EChartsOption, size: RenderSize = DEFAULT_SIZE): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: size.width,
    height: size.height,
  });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

export function renderToFile(
  option: EChartsOption,
  outPath: string,
  size: RenderSize = DEFAULT_SIZE,
): void {
  const svg = renderSvg(option, size);
  if (outPath.toLowerCase().endsWith(".svg")) {
    writeFileSync(outPath, svg);
    return;
  }
  // render at double width for a crisper raster
  const png = new Resvg(svg, { fitTo: { mode: "width", value: 2 * size.width } });
  writeFileSync(outPath, png.render().asPng());
}
