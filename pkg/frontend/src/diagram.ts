/**
 * Persistence diagram panel: birth/death scatter above the diagonal, with
 * the widest-gap threshold band behind the dim-1 points so the surviving
 * feature count can be read directly off the plot.
 */

import { DiagramBody, DiagramJson } from './api.js';

export interface DiagramGeometry {
  /** Upper bound of the plotted square in filtration units. */
  limit: number;
  /** [birth, death, dim] triples; infinite deaths clamped to limit. */
  points: [number, number, number][];
  /** Persistence band [low, high] split by the dim-1 threshold. */
  band: [number, number] | null;
}

function finiteMax(diagram: DiagramJson): number {
  let m = 0;
  for (const [b, d] of diagram.pairs) {
    if (b > m) m = b;
    if (d !== null && d > m) m = d;
  }
  return m;
}

/** Pure layout computation, kept separate from canvas work for testing. */
export function diagramGeometry(body: DiagramBody): DiagramGeometry {
  const limit = 1.05 * Math.max(finiteMax(body.dim0), finiteMax(body.dim1), 1e-9);
  const points: [number, number, number][] = [];
  for (const dg of [body.dim0, body.dim1]) {
    for (const [b, d] of dg.pairs) {
      points.push([b, d === null ? limit : d, dg.dim]);
    }
  }
  const band: [number, number] | null =
    body.betti1.threshold > 0 ? [0, body.betti1.threshold] : null;
  return { limit, points, band };
}

export class DiagramView {
  constructor(private canvas: HTMLCanvasElement, private caption: HTMLElement) {}

  render(body: DiagramBody): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    const { width, height } = this.canvas;
    const geo = diagramGeometry(body);
    const margin = 30;
    const span = Math.min(width, height) - 2 * margin;
    const sx = (v: number) => margin + (v / geo.limit) * span;
    const sy = (v: number) => height - margin - (v / geo.limit) * span;

    ctx.clearRect(0, 0, width, height);

    if (geo.band) {
      // Points whose persistence falls inside the band die before the
      // threshold; everything above the shaded strip counts toward betti1.
      ctx.fillStyle = 'rgba(243, 156, 18, 0.15)';
      ctx.beginPath();
      ctx.moveTo(sx(0), sy(0));
      ctx.lineTo(sx(0), sy(geo.band[1]));
      ctx.lineTo(sx(geo.limit - geo.band[1]), sy(geo.limit));
      ctx.lineTo(sx(geo.limit), sy(geo.limit));
      ctx.closePath();
      ctx.fill();
    }

    ctx.strokeStyle = '#999';
    ctx.beginPath();
    ctx.moveTo(sx(0), sy(0));
    ctx.lineTo(sx(geo.limit), sy(geo.limit));
    ctx.stroke();
    ctx.strokeRect(margin, margin, span, span);

    for (const [b, d, dim] of geo.points) {
      ctx.fillStyle = dim === 0 ? 'rgba(70, 110, 180, 0.7)' : '#c0392b';
      ctx.beginPath();
      ctx.arc(sx(b), sy(d), dim === 0 ? 2.5 : 4, 0, 2 * Math.PI);
      ctx.fill();
    }

    const betti = body.betti1;
    this.caption.textContent =
      `β₁ = ${betti.count} at threshold ${betti.threshold.toPrecision(3)}` +
      (betti.ambiguous ? ' (ambiguous gap)' : '');
  }
}
