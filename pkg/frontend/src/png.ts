/** Optional SVG -> PNG rasterization via @resvg/resvg-js. */

export async function svgToPng(svgText: string): Promise<Uint8Array> {
  let resvg: typeof import('@resvg/resvg-js');
  try {
    resvg = await import('@resvg/resvg-js');
  } catch (err) {
    throw new Error(
      `PNG output needs the optional @resvg/resvg-js rasterizer (npm install @resvg/resvg-js): ${err}`,
    );
  }
  const rendered = new resvg.Resvg(svgText, { background: 'white' }).render();
  return rendered.asPng();
}
