/**
 * Sweep figures: Monte Carlo points with interval bars over the analytic
 * curve, one subplot per figure panel, design markers as labeled vertical
 * lines. Output is a pure function of the parsed CSV content.
 */

import { MarkerRow, SweepRow } from './csv.js';
import { Scale, ScaleKind, fmtTick, makeScale } from './scales.js';
import * as svg from './svg.js';

export interface SweepRenderOptions {
  xscale?: ScaleKind; // override for every panel
  yscale?: ScaleKind;
  subplotWidth?: number;
  subplotHeight?: number;
  columns?: number;
}

const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];
const MARGIN = { left: 62, right: 16, top: 30, bottom: 44 };

/** Default axis kinds by figure panel: temperature sweeps are linear in x,
 * the range sweep is read on doubly logarithmic axes. */
function defaultScales(panelLetter: string): { x: ScaleKind; y: ScaleKind } {
  const x: ScaleKind = panelLetter === 'e' ? 'linear' : 'log';
  const y: ScaleKind = panelLetter === 'a' ? 'log' : 'linear';
  return { x, y };
}

function panelLetter(panelId: string): string {
  return panelId.split('/')[0];
}

interface Series {
  id: string;
  label: string;
  rows: SweepRow[];
}

interface PanelGroup {
  letter: string;
  series: Series[];
  markers: MarkerRow[];
}

function groupPanels(rows: SweepRow[], markers: MarkerRow[]): PanelGroup[] {
  const order: string[] = [];
  const byLetter = new Map<string, Map<string, SweepRow[]>>();
  for (const row of rows) {
    const letter = panelLetter(row.panel);
    if (!byLetter.has(letter)) {
      byLetter.set(letter, new Map());
      order.push(letter);
    }
    const seriesMap = byLetter.get(letter)!;
    if (!seriesMap.has(row.panel)) seriesMap.set(row.panel, []);
    seriesMap.get(row.panel)!.push(row);
  }
  return order.map((letter) => ({
    letter,
    series: [...byLetter.get(letter)!.entries()].map(([id, seriesRows]) => ({
      id,
      label: id.includes('/') ? id.slice(id.indexOf('/') + 1) : id,
      rows: seriesRows,
    })),
    markers: markers.filter((m) => panelLetter(m.panel) === letter && Number.isFinite(m.marker_value)),
  }));
}

function finiteExtent(values: number[], logOnly: boolean): [number, number] | null {
  const ok = values.filter((v) => Number.isFinite(v) && (!logOnly || v > 0));
  if (ok.length === 0) return null;
  return [Math.min(...ok), Math.max(...ok)];
}

function drawAxes(body: string[], x: Scale, y: Scale, width: number, height: number): void {
  const [x0, x1] = x.range;
  const [y1, y0] = [y.range[0], y.range[1]]; // y range is [bottom, top]
  body.push(svg.rect(x0, y0, x1 - x0, y1 - y0, { fill: 'none', stroke: '#333', 'stroke-width': 1 }));
  for (const t of x.ticks()) {
    const px = x.map(t);
    body.push(svg.line(px, y1, px, y1 + 4, { stroke: '#333' }));
    body.push(svg.text(px, y1 + 16, fmtTick(t), { 'font-size': 10, 'text-anchor': 'middle', class: 'tick' }));
    body.push(svg.line(px, y0, px, y1, { stroke: '#eee' }));
  }
  for (const t of y.ticks()) {
    const py = y.map(t);
    body.push(svg.line(x0 - 4, py, x0, py, { stroke: '#333' }));
    body.push(
      svg.text(x0 - 6, py + 3, fmtTick(t), { 'font-size': 10, 'text-anchor': 'end', class: 'tick' }),
    );
    body.push(svg.line(x0, py, x1, py, { stroke: '#eee' }));
  }
}

function renderPanel(
  group: PanelGroup,
  originX: number,
  originY: number,
  width: number,
  height: number,
  options: SweepRenderOptions,
): string[] {
  const defaults = defaultScales(group.letter);
  const xkind = options.xscale ?? defaults.x;
  const ykind = options.yscale ?? defaults.y;

  const allRows = group.series.flatMap((s) => s.rows);
  const xext = finiteExtent(allRows.map((r) => r.swept_value), xkind === 'log');
  const yvalues = allRows.flatMap((r) => [r.pdc_analytic, r.pdc_mc, r.ci_low, r.ci_high]);
  let yext = finiteExtent(yvalues, ykind === 'log');
  if (xext === null || yext === null) {
    return [svg.text(originX + 10, originY + 20, `panel ${group.letter}: no plottable data`, { 'font-size': 11 })];
  }
  if (ykind === 'linear') {
    yext = [Math.min(0, yext[0]), Math.max(1, yext[1]) * 1.02];
  } else if (yext[0] === yext[1]) {
    yext = [yext[0] / 10, yext[1] * 10];
  }

  const plotX: [number, number] = [originX + MARGIN.left, originX + width - MARGIN.right];
  const plotY: [number, number] = [originY + height - MARGIN.bottom, originY + MARGIN.top];
  const x = makeScale(xkind, xext, plotX);
  const y = makeScale(ykind, yext, [plotY[0], plotY[1]]);

  const body: string[] = [];
  drawAxes(body, x, y, width, height);

  const sweptName = allRows[0]?.swept_name ?? '';
  body.push(
    svg.text(originX + width / 2, originY + 14, `panel ${group.letter}`, {
      'font-size': 12,
      'text-anchor': 'middle',
      'font-weight': 'bold',
    }),
  );
  body.push(
    svg.text((plotX[0] + plotX[1]) / 2, originY + height - 8, `${sweptName}${xkind === 'log' ? ' (log)' : ''}`, {
      'font-size': 11,
      'text-anchor': 'middle',
    }),
  );
  body.push(
    svg.tag(
      'text',
      {
        x: originX + 14,
        y: (plotY[0] + plotY[1]) / 2,
        'font-size': 11,
        'text-anchor': 'middle',
        'font-family': 'sans-serif',
        transform: `rotate(-90 ${originX + 14} ${(plotY[0] + plotY[1]) / 2})`,
      },
      [svg.esc(`coverage probability${ykind === 'log' ? ' (log)' : ''}`)],
    ),
  );

  const inY = (v: number) => Number.isFinite(v) && (ykind !== 'log' || v > 0);
  const inX = (v: number) => Number.isFinite(v) && (xkind !== 'log' || v > 0);

  group.series.forEach((series, i) => {
    const color = PALETTE[i % PALETTE.length];
    const curve = series.rows
      .filter((r) => inX(r.swept_value) && inY(r.pdc_analytic))
      .map((r) => [x.map(r.swept_value), y.map(r.pdc_analytic)] as [number, number]);
    if (curve.length >= 2) {
      body.push(svg.polyline(curve, { stroke: color, 'stroke-width': 1.5, class: 'analytic' }));
    }
    for (const r of series.rows) {
      if (!inX(r.swept_value) || !inY(r.pdc_mc)) continue;
      const px = x.map(r.swept_value);
      const py = y.map(r.pdc_mc);
      if (inY(r.ci_low) && inY(r.ci_high)) {
        body.push(
          svg.line(px, y.map(r.ci_low), px, y.map(r.ci_high), {
            stroke: color,
            'stroke-width': 1,
            class: 'errorbar',
          }),
        );
      }
      body.push(svg.circle(px, py, 2.2, { fill: color, class: 'mc-point' }));
    }
    body.push(
      svg.text(plotX[0] + 6, plotY[1] + 12 + 12 * i, series.label, {
        'font-size': 10,
        fill: color,
        class: 'legend',
      }),
    );
  });

  for (const marker of group.markers) {
    const v = marker.marker_value;
    if (!inX(v) || v < x.domain[0] || v > x.domain[1]) continue;
    const px = x.map(v);
    body.push(
      svg.line(px, plotY[0], px, plotY[1], {
        stroke: '#555',
        'stroke-dasharray': '4 3',
        class: 'marker-line',
      }),
    );
    body.push(
      svg.text(px + 3, plotY[1] + 10, `${marker.marker_name}=${fmtTick(v)}`, {
        'font-size': 9,
        fill: '#555',
        class: 'marker-label',
      }),
    );
  }
  return body;
}

export function renderSweep(rows: SweepRow[], markers: MarkerRow[], options: SweepRenderOptions = {}): string {
  const groups = groupPanels(rows, markers);
  if (groups.length === 0) {
    throw new Error('sweep csv contains no rows');
  }
  const w = options.subplotWidth ?? 460;
  const h = options.subplotHeight ?? 320;
  const cols = options.columns ?? Math.min(2, groups.length);
  const rowsCount = Math.ceil(groups.length / cols);
  const body: string[] = [];
  groups.forEach((group, i) => {
    const cx = (i % cols) * w;
    const cy = Math.floor(i / cols) * h;
    body.push(...renderPanel(group, cx, cy, w, h, options));
  });
  return svg.document(w * cols, h * rowsCount, body);
}
