#!/usr/bin/env node
/**
 * plots: render simulation CSVs to figures.
 *
 *   plots sweep --csv a.csv [--csv b.csv ...] [--markers a.markers.csv ...]
 *               --out fig.svg [--xscale log|linear] [--yscale log|linear]
 *   plots hist  --csv sinbeta.csv [--markers sinbeta.markers.csv]
 *               --out sinbeta.svg [--title "..."] [--xmin v] [--xmax v]
 *   plots --job job.json          # same fields as flags, in one document
 *
 * Output format follows the --out extension: .svg, or .png when the optional
 * rasterizer is installed. Exit codes: 0 ok, 1 usage, 2 schema/content
 * error, 3 I/O error.
 */

import { readFileSync, writeFileSync } from 'node:fs';
import { pathToFileURL } from 'node:url';
import { parseArgs } from 'node:util';

import { MarkerRow, SchemaError, parseHistCsv, parseMarkersCsv, parseSweepCsv } from './csv.js';
import { svgToPng } from './png.js';
import { renderHist } from './renderHist.js';
import { renderSweep } from './renderSweep.js';
import { ScaleKind } from './scales.js';

interface Job {
  command: 'sweep' | 'hist';
  csv: string[];
  markers: string[];
  out: string;
  xscale?: ScaleKind;
  yscale?: ScaleKind;
  title?: string;
  xmin?: number;
  xmax?: number;
}

class UsageError extends Error {}

function parseScale(value: string | undefined, flag: string): ScaleKind | undefined {
  if (value === undefined) return undefined;
  if (value === 'log' || value === 'linear') return value;
  throw new UsageError(`${flag} must be "log" or "linear", got "${value}"`);
}

function jobFromArgv(argv: string[]): Job {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      job: { type: 'string' },
      csv: { type: 'string', multiple: true },
      markers: { type: 'string', multiple: true },
      out: { type: 'string' },
      xscale: { type: 'string' },
      yscale: { type: 'string' },
      title: { type: 'string' },
      xmin: { type: 'string' },
      xmax: { type: 'string' },
    },
  });

  if (values.job !== undefined) {
    const doc = JSON.parse(readFileSync(values.job, 'utf-8'));
    if (doc.command !== 'sweep' && doc.command !== 'hist') {
      throw new UsageError(`job file: command must be "sweep" or "hist", got ${JSON.stringify(doc.command)}`);
    }
    if (!Array.isArray(doc.csv) || doc.csv.length === 0 || typeof doc.out !== 'string') {
      throw new UsageError('job file needs "csv" (non-empty array) and "out" (string)');
    }
    return {
      command: doc.command,
      csv: doc.csv,
      markers: doc.markers ?? [],
      out: doc.out,
      xscale: parseScale(doc.xscale, 'xscale'),
      yscale: parseScale(doc.yscale, 'yscale'),
      title: doc.title,
      xmin: doc.xmin,
      xmax: doc.xmax,
    };
  }

  const command = positionals[0];
  if (command !== 'sweep' && command !== 'hist') {
    throw new UsageError(`expected subcommand "sweep" or "hist" (or --job file), got ${JSON.stringify(command)}`);
  }
  if (!values.csv || values.csv.length === 0) {
    throw new UsageError('--csv is required at least once');
  }
  if (!values.out) {
    throw new UsageError('--out is required');
  }
  return {
    command,
    csv: values.csv,
    markers: values.markers ?? [],
    out: values.out,
    xscale: parseScale(values.xscale, '--xscale'),
    yscale: parseScale(values.yscale, '--yscale'),
    title: values.title,
    xmin: values.xmin === undefined ? undefined : Number(values.xmin),
    xmax: values.xmax === undefined ? undefined : Number(values.xmax),
  };
}

function readInputs(job: Job): { texts: string[]; markers: MarkerRow[] } {
  const texts = job.csv.map((p) => readFileSync(p, 'utf-8'));
  const markers = job.markers.flatMap((p) => parseMarkersCsv(readFileSync(p, 'utf-8')));
  return { texts, markers };
}

async function writeOutput(out: string, svgText: string): Promise<void> {
  if (out.endsWith('.png')) {
    writeFileSync(out, await svgToPng(svgText));
  } else {
    writeFileSync(out, svgText, 'utf-8');
  }
}

export async function run(argv: string[]): Promise<number> {
  let job: Job;
  try {
    job = jobFromArgv(argv);
  } catch (err) {
    console.error(`usage error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  try {
    const { texts, markers } = readInputs(job);
    let svgText: string;
    if (job.command === 'sweep') {
      const rows = texts.flatMap(parseSweepCsv);
      svgText = renderSweep(rows, markers, { xscale: job.xscale, yscale: job.yscale });
    } else {
      if (texts.length !== 1) {
        throw new UsageError('hist takes exactly one --csv');
      }
      svgText = renderHist(parseHistCsv(texts[0]), markers, {
        title: job.title,
        xmin: job.xmin,
        xmax: job.xmax,
      });
    }
    await writeOutput(job.out, svgText);
    console.log(`wrote ${job.out}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 1;
    }
    if (err instanceof SchemaError || err instanceof SyntaxError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && 'code' in err) {
      console.error(`I/O error: ${err.message}`);
      return 3;
    }
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(entry).href) {
  run(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
