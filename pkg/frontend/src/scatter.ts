/**
 * Canvas scatter rendering for point clouds and embeddings.
 *
 * Points in 3 or more dimensions are rotated by a pair of drag-controlled
 * angles and orthographically projected; 2-D embeddings render directly.
 * The skeleton overlay draws centroids and nerve edges on top of the cloud
 * so cuts can be picked by clicking near an edge midpoint.
 */

export interface Point2 {
  x: number;
  y: number;
}

export interface SkeletonOverlay {
  /** Centroid coordinates, same dimensionality as the cloud. */
  centroids: number[][];
  /** Pairs of indices into centroids. */
  edges: [number, number][];
}

/** Rotate about the y axis by yaw, then the x axis by pitch; drop z. */
export function projectPoint(p: number[], yaw: number, pitch: number): Point2 {
  const x = p[0] ?? 0;
  const y = p[1] ?? 0;
  const z = p[2] ?? 0;
  const cy = Math.cos(yaw);
  const sy = Math.sin(yaw);
  const cp = Math.cos(pitch);
  const sp = Math.sin(pitch);
  const x1 = cy * x + sy * z;
  const z1 = -sy * x + cy * z;
  return { x: x1, y: cp * y - sp * z1 };
}

/** Fit projected points into a width x height box with a margin. */
export function fitTransform(
  points: Point2[], width: number, height: number, margin = 20,
): (p: Point2) => Point2 {
  let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
  for (const p of points) {
    if (p.x < minX) minX = p.x;
    if (p.x > maxX) maxX = p.x;
    if (p.y < minY) minY = p.y;
    if (p.y > maxY) maxY = p.y;
  }
  if (!Number.isFinite(minX)) {
    minX = -1; maxX = 1; minY = -1; maxY = 1;
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const cx = (minX + maxX) / 2;
  const cy = (minY + maxY) / 2;
  return (p: Point2) => ({
    x: width / 2 + (p.x - cx) * scale,
    y: height / 2 - (p.y - cy) * scale,
  });
}

/** Index of the skeleton edge whose midpoint is nearest to (x, y), or null. */
export function pickEdge(
  midpoints: Point2[], x: number, y: number, tolerance = 12,
): number | null {
  let best: number | null = null;
  let bestDist = tolerance * tolerance;
  midpoints.forEach((m, i) => {
    const d = (m.x - x) ** 2 + (m.y - y) ** 2;
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  });
  return best;
}

export class ScatterView {
  yaw = 0.6;
  pitch = 0.4;
  points: number[][] = [];
  overlay: SkeletonOverlay | null = null;
  selectedEdge: number | null = null;
  onEdgePick: ((edge: number) => void) | null = null;

  private edgeMidpoints: Point2[] = [];
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
      if (!this.onEdgePick || this.edgeMidpoints.length === 0) return;
      const hit = pickEdge(this.edgeMidpoints, e.offsetX, e.offsetY);
      if (hit !== null) this.onEdgePick(hit);
    });
  }

  setData(points: number[][], overlay: SkeletonOverlay | null = null): void {
    this.points = points;
    this.overlay = overlay;
    this.render();
  }

  render(): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    this.edgeMidpoints = [];
    if (this.points.length === 0) return;

    const projected = this.points.map((p) => projectPoint(p, this.yaw, this.pitch));
    const centroids = this.overlay
      ? this.overlay.centroids.map((p) => projectPoint(p, this.yaw, this.pitch))
      : [];
    const fit = fitTransform(projected.concat(centroids), width, height);

    ctx.fillStyle = 'rgba(70, 110, 180, 0.6)';
    for (const p of projected) {
      const q = fit(p);
      ctx.fillRect(q.x - 1.5, q.y - 1.5, 3, 3);
    }

    if (this.overlay) {
      const placed = centroids.map(fit);
      ctx.strokeStyle = '#c0392b';
      ctx.lineWidth = 2;
      this.overlay.edges.forEach(([u, v], i) => {
        const a = placed[u];
        const b = placed[v];
        if (!a || !b) return;
        ctx.beginPath();
        ctx.moveTo(a.x, a.y);
        ctx.lineTo(b.x, b.y);
        ctx.stroke();
        const mid = { x: (a.x + b.x) / 2, y: (a.y + b.y) / 2 };
        this.edgeMidpoints.push(mid);
        ctx.fillStyle = i === this.selectedEdge ? '#f39c12' : '#c0392b';
        ctx.beginPath();
        ctx.arc(mid.x, mid.y, 4, 0, 2 * Math.PI);
        ctx.fill();
      });
      ctx.fillStyle = '#922b21';
      for (const c of placed) {
        ctx.beginPath();
        ctx.arc(c.x, c.y, 5, 0, 2 * Math.PI);
        ctx.fill();
      }
    }
  }
}
