import { describe, expect, it } from 'vitest';
import { CutSummary } from './api.js';
import { cutRows } from './cuts.js';

const valid: CutSummary = {
  cut: { edge: [2, 5], t: 0.5, radius: 'auto' },
  valid: true,
  pb1: 3,
  wd1: 0.123456,
  rv: 0.045678,
  removed_count: 14,
};

const invalid: CutSummary = {
  cut: { edge: [0, 1], t: 0.5, radius: 'auto' },
  valid: false,
  pb1: null,
  wd1: null,
  rv: null,
  removed_count: 0,
};

describe('cutRows', () => {
  it('preserves service ranking order', () => {
    const rows = cutRows([valid, invalid]);
    expect(rows.map((r) => r.index)).toEqual([0, 1]);
    expect(rows[0].label).toBe('(2, 5) @ t=0.5');
  });

  it('formats metrics to 4 significant digits', () => {
    const [row] = cutRows([valid]);
    expect(row.pb1).toBe('3');
    expect(row.wd1).toBe('0.1235');
    expect(row.rv).toBe('0.04568');
    expect(row.removed).toBe(14);
  });

  it('blanks every metric on invalid cuts', () => {
    const [row] = cutRows([invalid]);
    expect(row.valid).toBe(false);
    expect(row.pb1).toBe('–');
    expect(row.wd1).toBe('–');
    expect(row.rv).toBe('–');
  });
});
