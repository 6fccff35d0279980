/**
 * Ranked-cuts table model and rendering.
 *
 * The table shows the service's cut ranking verbatim (persistent loop
 * count descending, then dim-1 distance ascending); invalid cuts (ones
 * that would disconnect the graph or have no well-defined plane) sink to
 * the bottom with their metrics blank.
 */

import { CutSummary } from './api.js';

export interface CutRow {
  index: number;
  label: string;
  valid: boolean;
  pb1: string;
  wd1: string;
  rv: string;
  removed: number;
}

function metric(value: number | null, digits = 4): string {
  return value === null ? '–' : value.toPrecision(digits);
}

/** Flatten ranked results into display rows, preserving service order. */
export function cutRows(results: CutSummary[]): CutRow[] {
  return results.map((r, index) => ({
    index,
    label: `(${r.cut.edge[0]}, ${r.cut.edge[1]}) @ t=${r.cut.t}`,
    valid: r.valid,
    pb1: r.pb1 === null ? '–' : String(r.pb1),
    wd1: metric(r.wd1),
    rv: metric(r.rv),
    removed: r.removed_count,
  }));
}

export class CutsView {
  onSelect: ((index: number) => void) | null = null;

  constructor(private table: HTMLTableElement) {}

  render(results: CutSummary[], selected: number | null): void {
    const rows = cutRows(results);
    const body = this.table.tBodies[0] ?? this.table.createTBody();
    body.innerHTML = '';
    for (const row of rows) {
      const tr = body.insertRow();
      tr.className = row.valid ? '' : 'invalid';
      if (row.index === selected) tr.classList.add('selected');
      for (const cell of [row.label, row.pb1, row.wd1, row.rv, String(row.removed)]) {
        tr.insertCell().textContent = cell;
      }
      if (row.valid) {
        tr.addEventListener('click', () => this.onSelect?.(row.index));
      }
    }
  }
}
