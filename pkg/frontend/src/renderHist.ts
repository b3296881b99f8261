/**
 * Histogram bar charts for the geometry distribution studies, with the
 * reference value from the markers file drawn as a labeled vertical line.
 */

import { HistBin, MarkerRow } from './csv.js';
import { fmtTick, linearScale } from './scales.js';
import * as svg from './svg.js';

export interface HistRenderOptions {
  width?: number;
  height?: number;
  title?: string;
  /** x-axis window; defaults to the bin extent, except the normalized
   * minimum-range study which is conventionally clipped to [0.9, 1]. */
  xmin?: number;
  xmax?: number;
}

const MARGIN = { left: 56, right: 16, top: 26, bottom: 40 };

export function renderHist(bins: HistBin[], markers: MarkerRow[], options: HistRenderOptions = {}): string {
  if (bins.length === 0) {
    throw new Error('histogram csv contains no bins');
  }
  const width = options.width ?? 520;
  const height = options.height ?? 340;

  const isRminStudy = markers.some((m) => m.marker_name === 'rmin_lower_bound');
  let xmin = options.xmin ?? Math.min(...bins.map((b) => b.bin_left));
  let xmax = options.xmax ?? Math.max(...bins.map((b) => b.bin_right));
  if (options.xmin === undefined && options.xmax === undefined && isRminStudy) {
    xmin = 0.9;
    xmax = 1.0;
  }
  if (!(xmax > xmin)) {
    // Degenerate single-point histogram (e.g. monostatic sin(beta) = 0):
    // give it a nominal window so the lone bar is visible.
    const pad = Math.max(Math.abs(xmin), 1.0) * 0.05;
    xmin -= pad;
    xmax += pad + (xmax === xmin ? pad : 0);
  }
  const ymax = Math.max(...bins.map((b) => b.count)) * 1.05 || 1;

  const x = linearScale([xmin, xmax], [MARGIN.left, width - MARGIN.right]);
  const y = linearScale([0, ymax], [height - MARGIN.bottom, MARGIN.top]);

  const body: string[] = [];
  body.push(
    svg.rect(MARGIN.left, MARGIN.top, width - MARGIN.left - MARGIN.right, height - MARGIN.top - MARGIN.bottom, {
      fill: 'none',
      stroke: '#333',
    }),
  );
  for (const t of x.ticks()) {
    const px = x.map(t);
    body.push(svg.line(px, height - MARGIN.bottom, px, height - MARGIN.bottom + 4, { stroke: '#333' }));
    body.push(svg.text(px, height - MARGIN.bottom + 16, fmtTick(t), { 'font-size': 10, 'text-anchor': 'middle' }));
  }
  for (const t of y.ticks()) {
    const py = y.map(t);
    body.push(svg.line(MARGIN.left - 4, py, MARGIN.left, py, { stroke: '#333' }));
    body.push(svg.text(MARGIN.left - 6, py + 3, fmtTick(t), { 'font-size': 10, 'text-anchor': 'end' }));
  }

  const nominalBarWidth = (x.range[1] - x.range[0]) / Math.max(bins.length, 10);
  for (const bin of bins) {
    const left = x.map(Math.max(bin.bin_left, xmin));
    const right = x.map(Math.min(bin.bin_right, xmax));
    let barX = left;
    let barW = right - left;
    if (!(barW > 0)) {
      barX = x.map(bin.bin_left) - nominalBarWidth / 2; // zero-width bin
      barW = nominalBarWidth;
    }
    const top = y.map(bin.count);
    body.push(
      svg.rect(barX, top, barW, y.map(0) - top, {
        fill: '#1f77b4',
        stroke: 'white',
        'stroke-width': 0.5,
        class: 'hist-bar',
      }),
    );
  }

  for (const marker of markers) {
    if (!Number.isFinite(marker.marker_value)) continue;
    if (marker.marker_value < xmin || marker.marker_value > xmax) continue;
    const px = x.map(marker.marker_value);
    body.push(
      svg.line(px, y.map(0), px, MARGIN.top, { stroke: '#d62728', 'stroke-dasharray': '4 3', class: 'marker-line' }),
    );
    body.push(
      svg.text(px + 3, MARGIN.top + 10, `${marker.marker_name}=${fmtTick(marker.marker_value)}`, {
        'font-size': 9,
        fill: '#d62728',
        class: 'marker-label',
      }),
    );
  }

  if (options.title) {
    body.push(svg.text(width / 2, 14, options.title, { 'font-size': 12, 'text-anchor': 'middle', 'font-weight': 'bold' }));
  }
  body.push(svg.text((x.range[0] + x.range[1]) / 2, height - 8, 'value', { 'font-size': 11, 'text-anchor': 'middle' }));
  body.push(
    svg.tag(
      'text',
      {
        x: 14,
        y: (y.range[0] + y.range[1]) / 2,
        'font-size': 11,
        'text-anchor': 'middle',
        'font-family': 'sans-serif',
        transform: `rotate(-90 14 ${(y.range[0] + y.range[1]) / 2})`,
      },
      ['count'],
    ),
  );
  return svg.document(width, height, body);
}
