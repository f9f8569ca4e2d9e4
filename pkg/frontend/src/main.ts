// Browser wiring: upload images, pick a visualizer, tune settings in the
// auto-generated form, run, and walk the history of result grids.

import { ApiError, Client } from './api.js';
import {
  FormModel,
  applyServerError,
  buildSettingsForm,
  collectValues,
  formIsValid,
  renderFormHtml,
  setControlValue,
} from './form.js';
import { buildResultGrid, renderGridHtml } from './grid.js';
import { RunHistory } from './history.js';
import type { UploadedImage, VisualizerJson } from './types.js';

const client = new Client('');
const history = new RunHistory();

const el = {
  model: document.getElementById('model-info') as HTMLElement,
  visualizer: document.getElementById('visualizer-select') as HTMLSelectElement,
  description: document.getElementById('visualizer-description') as HTMLElement,
  settings: document.getElementById('settings-panel') as HTMLElement,
  upload: document.getElementById('upload-input') as HTMLInputElement,
  images: document.getElementById('image-list') as HTMLElement,
  run: document.getElementById('run-button') as HTMLButtonElement,
  status: document.getElementById('status-line') as HTMLElement,
  grid: document.getElementById('grid-panel') as HTMLElement,
  historyStrip: document.getElementById('history-strip') as HTMLElement,
};

let sessionId = '';
let visualizers: VisualizerJson[] = [];
let form: FormModel = { ok: true, controls: [] };
let uploads: UploadedImage[] = [];
let running = false;

function setStatus(text: string, isError = false): void {
  el.status.textContent = text;
  el.status.classList.toggle('error', isError);
}

function currentVisualizer(): VisualizerJson | undefined {
  return visualizers.find((v) => v.name === el.visualizer.value);
}

function refreshRunButton(): void {
  el.run.disabled = running || uploads.length === 0 || !formIsValid(form);
}

function renderForm(): void {
  el.settings.innerHTML = renderFormHtml(form);
  for (const input of el.settings.querySelectorAll<HTMLInputElement>('[data-key]')) {
    input.addEventListener('change', () => {
      form = setControlValue(form, input.dataset.key ?? '', input.value);
      renderForm();
    });
  }
  refreshRunButton();
}

function rebuildForm(): void {
  const viz = currentVisualizer();
  el.description.textContent = viz?.description ?? '';
  form = buildSettingsForm(viz?.settings ?? []);
  renderForm();
}

function renderImageList(): void {
  el.images.innerHTML = uploads
    .map((img) => `<li>${img.thumbUrl ? `<img src="${img.thumbUrl}" alt="">` : ''}`
      + `<span>${img.name}</span></li>`)
    .join('');
  refreshRunButton();
}

function renderHistory(activeJobId: string | null): void {
  el.historyStrip.innerHTML = history.list()
    .map((g, i) => `<button data-job="${g.jobId}" `
      + `class="${g.jobId === activeJobId ? 'active' : ''}">`
      + `#${history.count() - i} ${g.visualizer}</button>`)
    .join('');
  for (const btn of el.historyStrip.querySelectorAll<HTMLButtonElement>('[data-job]')) {
    btn.addEventListener('click', () => {
      const grid = history.get(btn.dataset.job ?? '');
      if (grid) {
        el.grid.innerHTML = renderGridHtml(grid);
        renderHistory(grid.jobId);
      }
    });
  }
}

async function onUpload(files: FileList | null): Promise<void> {
  if (!files || files.length === 0) {
    return;
  }
  for (const file of Array.from(files)) {
    try {
      const imageId = await client.uploadImage(sessionId, file, file.name);
      uploads.push({ imageId, name: file.name, thumbUrl: URL.createObjectURL(file) });
    } catch (err) {
      setStatus(err instanceof ApiError ? err.body.message : String(err), true);
      return;
    }
  }
  setStatus(`${uploads.length} image(s) in session`);
  renderImageList();
}

async function onRun(): Promise<void> {
  const viz = currentVisualizer();
  if (!viz || running || !formIsValid(form)) {
    return;
  }
  running = true;
  refreshRunButton();
  setStatus(`running ${viz.name}...`);
  try {
    const job = await client.runJob(sessionId, viz.name, collectValues(form),
      uploads.map((u) => u.imageId));
    const grid = buildResultGrid(job, uploads, sessionId,
      (sid, pngId) => client.artifactUrl(sid, pngId));
    history.push(grid);
    el.grid.innerHTML = renderGridHtml(grid);
    renderHistory(grid.jobId);
    setStatus(`job ${job.job_id}: ${grid.rows.length} input(s)`);
  } catch (err) {
    if (err instanceof ApiError && applyServerError(form, err.body)) {
      renderForm(); // inline message next to the offending control
      setStatus('fix the highlighted setting and re-run', true);
    } else {
      setStatus(err instanceof ApiError ? err.body.message : String(err), true);
    }
  } finally {
    running = false;
    refreshRunButton();
  }
}

async function boot(): Promise<void> {
  try {
    const health = await client.health();
    el.model.textContent =
      `${health.model} · ${health.input_shape.join('x')} · `
      + `${health.class_count} classes`;
    visualizers = await client.visualizers();
    el.visualizer.innerHTML = visualizers
      .map((v) => `<option value="${v.name}">${v.name}</option>`)
      .join('');
    sessionId = await client.createSession();
    rebuildForm();
    setStatus('session ready; upload PNG images to begin');
  } catch (err) {
    setStatus(err instanceof ApiError ? err.body.message : String(err), true);
  }
}

el.visualizer.addEventListener('change', rebuildForm);
el.upload.addEventListener('change', () => void onUpload(el.upload.files));
el.run.addEventListener('click', () => void onRun());
void boot();
