import { describe, expect, it } from 'vitest';
import { scoreColor } from './sphere.js';

describe('scoreColor', () => {
  it('maps the best score to green and the worst to red', () => {
    expect(scoreColor(0, 0, 1)).toBe('hsl(120, 70%, 45%)');
    expect(scoreColor(1, 0, 1)).toBe('hsl(0, 70%, 45%)');
  });

  it('interpolates the hue linearly in between', () => {
    expect(scoreColor(0.5, 0, 1)).toBe('hsl(60, 70%, 45%)');
  });

  it('falls back to green when all scores are equal', () => {
    expect(scoreColor(3, 3, 3)).toBe('hsl(120, 70%, 45%)');
  });
});
