// Settings form model, generated from a visualizer's settings schema.
//
// Control kinds map 1:1 from schema types (int/float -> number input,
// enum -> select) and keep schema order. An untouched form collects to
// exactly the schema defaults; client-side checks mirror the server's
// constraints, but the server stays authoritative.

import type { ApiErrorBody, SettingJson } from './types.js';

export type ControlKind = 'number' | 'select';

export interface FormControl {
  key: string;
  kind: ControlKind;
  type: 'int' | 'float' | 'enum';
  label: string;
  value: string; // raw input value; typed on collect
  min: number | null;
  max: number | null;
  step: '1' | 'any' | null;
  options: string[] | null;
  error: string | null;
}

export type FormModel =
  | { ok: true; controls: FormControl[] }
  | { ok: false; error: string };

function isSetting(entry: unknown): entry is SettingJson {
  if (typeof entry !== 'object' || entry === null) {
    return false;
  }
  const s = entry as Record<string, unknown>;
  if (typeof s.key !== 'string' || typeof s.label !== 'string') {
    return false;
  }
  if (s.type === 'int' || s.type === 'float') {
    return typeof s.default === 'number';
  }
  if (s.type === 'enum') {
    return typeof s.default === 'string' && Array.isArray(s.values)
      && s.values.length > 0 && s.values.every((v) => typeof v === 'string');
  }
  return false;
}

export function buildSettingsForm(schema: unknown): FormModel {
  if (!Array.isArray(schema)) {
    return { ok: false, error: 'malformed settings schema' };
  }
  const controls: FormControl[] = [];
  for (const entry of schema) {
    if (!isSetting(entry)) {
      return { ok: false, error: 'malformed settings schema' };
    }
    controls.push({
      key: entry.key,
      kind: entry.type === 'enum' ? 'select' : 'number',
      type: entry.type,
      label: entry.label,
      value: String(entry.default),
      min: entry.min ?? null,
      max: entry.max ?? null,
      step: entry.type === 'int' ? '1' : entry.type === 'float' ? 'any' : null,
      options: entry.values ?? null,
      error: null,
    });
  }
  return { ok: true, controls };
}

function checkControl(control: FormControl): string | null {
  if (control.type === 'enum') {
    return control.options && control.options.includes(control.value)
      ? null
      : `must be one of [${(control.options ?? []).join(', ')}]`;
  }
  const text = control.value.trim();
  if (control.type === 'int') {
    if (!/^-?\d+$/.test(text)) {
      return 'must be an integer';
    }
  } else if (text === '' || !Number.isFinite(Number(text))) {
    return 'must be a number';
  }
  const value = Number(text);
  if (control.min !== null && value < control.min) {
    return `must be >= ${control.min}`;
  }
  if (control.max !== null && value > control.max) {
    return `must be <= ${control.max}`;
  }
  return null;
}

export function setControlValue(model: FormModel, key: string, raw: string): FormModel {
  if (!model.ok) {
    return model;
  }
  const controls = model.controls.map((c) =>
    c.key === key ? { ...c, value: raw, error: null } : c,
  );
  const target = controls.find((c) => c.key === key);
  if (target) {
    target.error = checkControl(target);
  }
  return { ok: true, controls };
}

export function formIsValid(model: FormModel): boolean {
  return model.ok && model.controls.every((c) => checkControl(c) === null);
}

/** Typed values for submission; only call when formIsValid. */
export function collectValues(model: FormModel): Record<string, number | string> {
  if (!model.ok) {
    throw new Error('cannot collect from a failed form');
  }
  const values: Record<string, number | string> = {};
  for (const control of model.controls) {
    if (control.type === 'enum') {
      values[control.key] = control.value;
    } else if (control.type === 'int') {
      values[control.key] = parseInt(control.value, 10);
    } else {
      values[control.key] = Number(control.value);
    }
  }
  return values;
}

/** Attach a server-side validation error to its control; true if keyed. */
export function applyServerError(model: FormModel, error: ApiErrorBody): boolean {
  if (!model.ok || !error.key) {
    return false;
  }
  const target = model.controls.find((c) => c.key === error.key);
  if (!target) {
    return false;
  }
  target.error = error.message;
  return true;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderFormHtml(model: FormModel): string {
  if (!model.ok) {
    return `<div class="form-error" role="alert">${escapeHtml(model.error)}</div>`;
  }
  if (model.controls.length === 0) {
    return '<p class="form-empty">No settings for this visualizer.</p>';
  }
  const rows = model.controls.map((c) => {
    let input: string;
    if (c.kind === 'select') {
      const options = (c.options ?? [])
        .map((o) => `<option value="${escapeHtml(o)}"${o === c.value ? ' selected' : ''}>`
          + `${escapeHtml(o)}</option>`)
        .join('');
      input = `<select data-key="${escapeHtml(c.key)}">${options}</select>`;
    } else {
      const attrs = [
        `type="number"`,
        `data-key="${escapeHtml(c.key)}"`,
        `value="${escapeHtml(c.value)}"`,
        c.step ? `step="${c.step}"` : '',
        c.min !== null ? `min="${c.min}"` : '',
        c.max !== null ? `max="${c.max}"` : '',
      ].filter(Boolean).join(' ');
      input = `<input ${attrs}>`;
    }
    const error = c.error
      ? `<span class="control-error" data-error-key="${escapeHtml(c.key)}">`
        + `${escapeHtml(c.error)}</span>`
      : '';
    return `<label class="control"><span>${escapeHtml(c.label)}</span>`
      + `${input}${error}</label>`;
  });
  return rows.join('\n');
}
