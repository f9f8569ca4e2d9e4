// Client-side strip of past runs so setting changes can be compared.

import type { ResultGridModel } from './grid.js';

export class RunHistory {
  private items: ResultGridModel[] = [];

  /** Newest first. */
  push(grid: ResultGridModel): void {
    this.items.unshift(grid);
  }

  list(): readonly ResultGridModel[] {
    return this.items;
  }

  latest(): ResultGridModel | null {
    return this.items[0] ?? null;
  }

  get(jobId: string): ResultGridModel | null {
    return this.items.find((g) => g.jobId === jobId) ?? null;
  }

  count(): number {
    return this.items.length;
  }
}
