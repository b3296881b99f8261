/** Minimal deterministic SVG builder: plain string assembly, no DOM. */

export function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function numAttr(v: number): string {
  // Fixed short decimals keep output stable and diff-friendly.
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

export type Attrs = Record<string, string | number>;

export function tag(name: string, attrs: Attrs, children?: string[]): string {
  const parts = Object.entries(attrs).map(
    ([k, v]) => `${k}="${typeof v === 'number' ? numAttr(v) : esc(v)}"`,
  );
  const open = `<${name}${parts.length ? ' ' + parts.join(' ') : ''}`;
  if (children === undefined || children.length === 0) {
    return `${open}/>`;
  }
  return `${open}>${children.join('')}</${name}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return tag('text', { x, y, 'font-family': 'sans-serif', ...attrs }, [esc(content)]);
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs = {}): string {
  return tag('line', { x1, y1, x2, y2, ...attrs });
}

export function rect(x: number, y: number, w: number, h: number, attrs: Attrs = {}): string {
  return tag('rect', { x, y, width: w, height: h, ...attrs });
}

export function polyline(points: Array<[number, number]>, attrs: Attrs = {}): string {
  const pts = points.map(([x, y]) => `${numAttr(x)},${numAttr(y)}`).join(' ');
  return tag('polyline', { points: pts, fill: 'none', ...attrs });
}

export function circle(cx: number, cy: number, r: number, attrs: Attrs = {}): string {
  return tag('circle', { cx, cy, r, ...attrs });
}

export function document(width: number, height: number, children: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    rect(0, 0, width, height, { fill: 'white' }),
    ...children,
    '</svg>',
  ].join('\n');
}
