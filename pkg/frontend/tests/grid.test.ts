import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import { buildResultGrid, renderGridHtml } from '../src/grid.js';
import type { JobResult } from '../src/types.js';

const job = JSON.parse(readFileSync(
  new URL('./fixtures/job_result.json', import.meta.url), 'utf-8'),
) as JobResult;

const images = job.inputs.map((input, i) => ({
  imageId: input.image_id,
  name: `upload-${i}.png`,
  thumbUrl: i === 0 ? 'blob:thumb-0' : null,
}));

describe('buildResultGrid', () => {
  it('maps inputs to rows and results to cells with artifact urls', () => {
    const grid = buildResultGrid(job, images, 'sess-1',
      (sid, pngId) => `/api/sessions/${sid}/artifacts/${pngId}`);
    expect(grid.jobId).toBe(job.job_id);
    expect(grid.visualizer).toBe(job.visualizer);
    expect(grid.rows.map((r) => r.imageId))
      .toEqual(job.inputs.map((i) => i.image_id));
    const firstCell = grid.rows[0].cells[0];
    expect(firstCell.pngUrl)
      .toBe(`/api/sessions/sess-1/artifacts/${job.inputs[0].results[0].png_id}`);
    expect(grid.rows[0].thumbUrl).toBe('blob:thumb-0');
    expect(grid.rows[1].thumbUrl).toBeNull();
    expect(grid.rows[0].imageName).toBe('upload-0.png');
  });

  it('falls back to the image id when the upload metadata is gone', () => {
    // page reload with a known session: artifacts are still fetchable even
    // though local upload state (names, thumbnails) is not
    const grid = buildResultGrid(job, [], 'sess-1', (s, p) => `${s}/${p}`);
    expect(grid.rows[0].imageName).toBe(job.inputs[0].image_id);
    expect(grid.rows[0].cells.every((c) => c.pngUrl.startsWith('sess-1/')))
      .toBe(true);
  });

  it('cell count per row equals the job entry count', () => {
    const grid = buildResultGrid(job, images, 's', (s, p) => p);
    grid.rows.forEach((row, i) => {
      expect(row.cells).toHaveLength(job.inputs[i].results.length);
    });
  });
});

describe('renderGridHtml', () => {
  it('renders thumbnails, caption and escaped settings', () => {
    const grid = buildResultGrid(job, images, 's', (s, p) => p);
    const html = renderGridHtml(grid);
    expect(html).toContain('blob:thumb-0');
    expect(html).toContain('grid-caption');
    expect(html).toContain(job.visualizer);
    for (const [key, value] of Object.entries(job.settings)) {
      expect(html).toContain(`${key}=${value}`);
    }
  });
});
