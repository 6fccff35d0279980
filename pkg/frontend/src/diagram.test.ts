import { describe, expect, it } from 'vitest';
import { DiagramBody } from './api.js';
import { diagramGeometry } from './diagram.js';

function body(
  dim0: [number, number | null][],
  dim1: [number, number | null][],
  threshold = 0,
): DiagramBody {
  return {
    hash: 'h',
    dim0: { dim: 0, pairs: dim0, scale_cap: null },
    dim1: { dim: 1, pairs: dim1, scale_cap: null },
    betti1: { dim: 1, count: 1, threshold, gap_width: 0, ambiguous: false },
  };
}

describe('diagramGeometry', () => {
  it('collects points from both dimensions with their dim tag', () => {
    const geo = diagramGeometry(body([[0, 1], [0, 2]], [[1, 1.5]]));
    expect(geo.points).toHaveLength(3);
    expect(geo.points.filter(([, , dim]) => dim === 1)).toEqual([[1, 1.5, 1]]);
  });

  it('clamps infinite deaths to the plot limit', () => {
    const geo = diagramGeometry(body([[0, null]], []));
    const [, death] = geo.points[0];
    expect(death).toBe(geo.limit);
    expect(Number.isFinite(death)).toBe(true);
  });

  it('sets the limit above the largest finite value', () => {
    const geo = diagramGeometry(body([[0, 2]], [[1, 4]]));
    expect(geo.limit).toBeGreaterThan(4);
    expect(geo.limit).toBeCloseTo(4.2, 10);
  });

  it('emits a threshold band only when the threshold is positive', () => {
    expect(diagramGeometry(body([], [], 0)).band).toBeNull();
    expect(diagramGeometry(body([], [[0, 1]], 0.25)).band).toEqual([0, 0.25]);
  });

  it('handles empty diagrams without NaN', () => {
    const geo = diagramGeometry(body([], []));
    expect(geo.points).toEqual([]);
    expect(Number.isFinite(geo.limit)).toBe(true);
  });
});
