// Acceptance: schema-driven form controls, default-submit fidelity, and the
// 2-image x top-3 result grid with 3-decimal probability headers. Fixtures
// are captured verbatim from the running service (see tests/fixtures/).

import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import { buildSettingsForm, collectValues } from '../src/form.js';
import { buildResultGrid, renderGridHtml } from '../src/grid.js';
import type { JobResult, VisualizerJson } from '../src/types.js';

function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, 'utf-8')) as T;
}

const visualizers = fixture<VisualizerJson[]>('visualizers.json');
const job = fixture<JobResult>('job_result.json');

describe('criterion 8: schema-driven form and result grid', () => {
  it('renders the occlusion schema as number controls', () => {
    const occlusion = visualizers.find((v) => v.name === 'occlusion')!;
    const form = buildSettingsForm(occlusion.settings);
    expect(form.ok).toBe(true);
    if (!form.ok) return;
    expect(form.controls.map((c) => [c.key, c.kind])).toEqual([
      ['window', 'number'],
      ['stride', 'number'],
      ['occlusion_value', 'number'],
      ['class_selection', 'number'],
    ]);
    const byKey = Object.fromEntries(form.controls.map((c) => [c.key, c]));
    expect(byKey.window.step).toBe('1'); // int controls step by 1
    expect(byKey.occlusion_value.step).toBe('any'); // float control
    expect(byKey.window.min).toBe(1);
    expect(byKey.window.max).toBe(8);
  });

  it('renders the saliency schema with enum selects', () => {
    const saliency = visualizers.find((v) => v.name === 'saliency')!;
    const form = buildSettingsForm(saliency.settings);
    expect(form.ok).toBe(true);
    if (!form.ok) return;
    expect(form.controls.map((c) => [c.key, c.kind])).toEqual([
      ['score_source', 'select'],
      ['channel_reduce', 'select'],
      ['class_selection', 'number'],
    ]);
    expect(form.controls[0].options).toEqual(['logit', 'probability']);
    expect(form.controls[1].options).toEqual(['max_abs', 'mean_abs']);
  });

  it('submitting the untouched form sends exactly the server-side defaults', () => {
    for (const viz of visualizers) {
      const form = buildSettingsForm(viz.settings);
      expect(form.ok).toBe(true);
      const serverDefaults = Object.fromEntries(
        viz.settings.map((s) => [s.key, s.default]));
      expect(collectValues(form)).toEqual(serverDefaults);
    }
  });

  it('a 2-image k=3 run renders a 2x3 grid with 3-decimal headers', () => {
    const images = job.inputs.map((input, i) => ({
      imageId: input.image_id,
      name: `img${i}.png`,
      thumbUrl: null,
    }));
    const grid = buildResultGrid(job, images, 'sess',
      (sid, pngId) => `/api/sessions/${sid}/artifacts/${pngId}`);
    expect(grid.rows).toHaveLength(2);
    for (const row of grid.rows) {
      expect(row.cells).toHaveLength(3);
      for (const cell of row.cells) {
        expect(cell.header).toMatch(/^\S+ \d\.\d{3}$/);
        expect(cell.header).toBe(`${cell.label} ${cell.probability.toFixed(3)}`);
      }
    }
    // anchor one value against the captured probability 0.4540932...
    expect(grid.rows[0].cells[0].header.endsWith('0.454')).toBe(true);

    const html = renderGridHtml(grid);
    const headers = html.match(/class="cell-header"/g) ?? [];
    expect(headers).toHaveLength(6);
    for (const row of grid.rows) {
      for (const cell of row.cells) {
        expect(html).toContain(cell.header);
        expect(html).toContain(cell.pngUrl);
      }
    }
    process.stdout.write('\nACCEPTANCE 8 schema-driven form and grid: PASS\n');
  });
});
