/**
 * Projection-direction panel: the ranked unit vectors from the direction
 * search drawn on an orthographic sphere, colored by score (best = green).
 * Clicking a direction requests the corresponding linear projection.
 */

import { DirectionScore } from './api.js';
import { projectPoint, fitTransform, pickEdge, Point2 } from './scatter.js';

function scalarScore(score: number | number[]): number {
  return Array.isArray(score) ? score[0] : score;
}

/** Map a score to a green-to-red hue by rank within [lo, hi]. */
export function scoreColor(score: number, lo: number, hi: number): string {
  const t = hi > lo ? (score - lo) / (hi - lo) : 0;
  const hue = 120 * (1 - t);
  return `hsl(${hue.toFixed(0)}, 70%, 45%)`;
}

export class SphereView {
  yaw = 0.6;
  pitch = 0.4;
  directions: DirectionScore[] = [];
  onPick: ((direction: DirectionScore) => void) | null = null;

  private placed: Point2[] = [];
  private visible: DirectionScore[] = [];
  private dragging = false;
  private lastX = 0;
  private lastY = 0;

  constructor(private canvas: HTMLCanvasElement) {
    canvas.addEventListener('mousedown', (e) => {
      this.dragging = true;
      this.lastX = e.offsetX;
      this.lastY = e.offsetY;
    });
    canvas.addEventListener('mousemove', (e) => {
      if (!this.dragging) return;
      this.yaw += (e.offsetX - this.lastX) * 0.01;
      this.pitch += (e.offsetY - this.lastY) * 0.01;
      this.lastX = e.offsetX;
      this.lastY = e.offsetY;
      this.render();
    });
    window.addEventListener('mouseup', () => { this.dragging = false; });
    canvas.addEventListener('click', (e) => {
      if (!this.onPick) return;
      const hit = pickEdge(this.placed, e.offsetX, e.offsetY, 8);
      if (hit !== null) this.onPick(this.visible[hit]);
    });
  }

  setDirections(directions: DirectionScore[]): void {
    this.directions = directions;
    this.render();
  }

  render(): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    this.placed = [];
    this.visible = [];
    if (this.directions.length === 0) return;

    const scores = this.directions.map((d) => scalarScore(d.score));
    const lo = Math.min(...scores);
    const hi = Math.max(...scores);

    const shell = [
      { x: -1, y: -1 }, { x: 1, y: 1 },
    ];
    const fit = fitTransform(shell, width, height);
    const center = fit({ x: 0, y: 0 });
    const rim = fit({ x: 1, y: 0 });
    const radius = rim.x - center.x;

    ctx.strokeStyle = '#bbb';
    ctx.beginPath();
    ctx.arc(center.x, center.y, radius, 0, 2 * Math.PI);
    ctx.stroke();

    // Draw back-hemisphere points dimmed, front on top and clickable.
    const layered = this.directions.map((d) => {
      const p = projectPoint(d.vector, this.yaw, this.pitch);
      const z = (d.vector[2] ?? 0);
      const cy = Math.cos(this.yaw), sy = Math.sin(this.yaw);
      const front = (-sy * (d.vector[0] ?? 0) + cy * z) >= 0;
      return { d, q: fit(p), front };
    });
    for (const pass of [false, true]) {
      for (const { d, q, front } of layered) {
        if (front !== pass) continue;
        ctx.globalAlpha = front ? 1 : 0.25;
        ctx.fillStyle = scoreColor(scalarScore(d.score), lo, hi);
        ctx.beginPath();
        ctx.arc(q.x, q.y, d.rank === 0 ? 6 : 3.5, 0, 2 * Math.PI);
        ctx.fill();
        if (front) {
          this.placed.push(q);
          this.visible.push(d);
        }
      }
    }
    ctx.globalAlpha = 1;
  }
}
