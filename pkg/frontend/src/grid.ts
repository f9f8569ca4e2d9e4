// Result grid model: rows are uploaded inputs, columns the top-k classes;
// each cell pairs the rendered map with a "label probability" header at
// three decimals.

import type { JobResult, UploadedImage } from './types.js';

export interface GridCell {
  label: string;
  probability: number;
  header: string;
  pngUrl: string;
}

export interface GridRow {
  imageId: string;
  imageName: string;
  thumbUrl: string | null;
  cells: GridCell[];
}

export interface ResultGridModel {
  jobId: string;
  visualizer: string;
  settings: Record<string, number | string>;
  rows: GridRow[];
}

export function buildResultGrid(
  job: JobResult,
  images: UploadedImage[],
  sessionId: string,
  artifactUrl: (sessionId: string, pngId: string) => string,
): ResultGridModel {
  const byId = new Map(images.map((img) => [img.imageId, img]));
  const rows = job.inputs.map((input) => {
    const meta = byId.get(input.image_id);
    return {
      imageId: input.image_id,
      imageName: meta?.name ?? input.image_id,
      thumbUrl: meta?.thumbUrl ?? null,
      cells: input.results.map((r) => ({
        label: r.label,
        probability: r.probability,
        header: `${r.label} ${r.probability.toFixed(3)}`,
        pngUrl: artifactUrl(sessionId, r.png_id),
      })),
    };
  });
  return {
    jobId: job.job_id,
    visualizer: job.visualizer,
    settings: job.settings,
    rows,
  };
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderGridHtml(grid: ResultGridModel): string {
  const rows = grid.rows.map((row) => {
    const thumb = row.thumbUrl
      ? `<img class="thumb" src="${escapeHtml(row.thumbUrl)}" `
        + `alt="${escapeHtml(row.imageName)}">`
      : `<span class="thumb-name">${escapeHtml(row.imageName)}</span>`;
    const cells = row.cells.map((cell) =>
      `<figure class="cell">`
      + `<figcaption class="cell-header">${escapeHtml(cell.header)}</figcaption>`
      + `<img src="${escapeHtml(cell.pngUrl)}" alt="${escapeHtml(cell.label)}">`
      + `</figure>`).join('');
    return `<div class="grid-row"><div class="grid-input">${thumb}</div>`
      + `<div class="grid-cells">${cells}</div></div>`;
  });
  const settings = Object.entries(grid.settings)
    .map(([k, v]) => `${escapeHtml(k)}=${escapeHtml(String(v))}`)
    .join(' ');
  return `<div class="grid" data-job="${escapeHtml(grid.jobId)}">`
    + `<div class="grid-caption">${escapeHtml(grid.visualizer)} · ${settings}</div>`
    + rows.join('') + `</div>`;
}
