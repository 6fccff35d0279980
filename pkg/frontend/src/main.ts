/**
 * DOM wiring: one page with four panels (cloud + skeleton, embedding,
 * persistence diagram, projection sphere) plus the cut controls and the
 * ranked-cuts table.  All numbers are service values verbatim; the page
 * state lives in the URL hash so a reload replays the same requests and
 * the service cache restores every view.
 */

import {
  Client, ServiceError, SkeletonBody, EmbedBody, RankBody, TearBody,
  DirectionScore,
} from './api.js';
import { Store, ViewState, decodeState, encodeState } from './state.js';
import { ScatterView, SkeletonOverlay } from './scatter.js';
import { DiagramView } from './diagram.js';
import { SphereView } from './sphere.js';
import { CutsView } from './cuts.js';

const client = new Client();
const store = new Store(decodeState(location.hash));

const $ = <T extends HTMLElement>(id: string) => document.getElementById(id) as T;

const cloudView = new ScatterView($<HTMLCanvasElement>('cloud-canvas'));
const embedView = new ScatterView($<HTMLCanvasElement>('embed-canvas'));
const diagramView = new DiagramView(
  $<HTMLCanvasElement>('diagram-canvas'), $('diagram-caption'),
);
const sphereView = new SphereView($<HTMLCanvasElement>('sphere-canvas'));
const cutsView = new CutsView($<HTMLTableElement>('cuts-table'));

let skeleton: SkeletonBody | null = null;
let baseline: EmbedBody | null = null;
let ranked: RankBody | null = null;
let cloudPoints: number[][] = [];

function showError(message: string): void {
  const box = $('error-box');
  box.textContent = message;
  box.hidden = message === '';
}

async function guarded<T>(work: () => Promise<T>): Promise<T | null> {
  showError('');
  document.body.classList.add('busy');
  try {
    return await work();
  } catch (err) {
    showError(err instanceof ServiceError ? err.detail : String(err));
    return null;
  } finally {
    document.body.classList.remove('busy');
  }
}

function overlayFromSkeleton(body: SkeletonBody): SkeletonOverlay {
  const byId = new Map<number, number[]>();
  for (const node of body.nodes) byId.set(node.id, cloudPoints[node.centroid]);
  return {
    centroids: body.nodes.map((node) => byId.get(node.id)!),
    edges: body.edges.map(([u, v]) => {
      const iu = body.nodes.findIndex((node) => node.id === u);
      const iv = body.nodes.findIndex((node) => node.id === v);
      return [iu, iv] as [number, number];
    }),
  };
}

function metricRow(label: string, base: string, torn: string): string {
  return `<tr><td>${label}</td><td>${base}</td><td>${torn}</td></tr>`;
}

function renderMetrics(torn: TearBody | null): void {
  const q = baseline?.quality;
  const fmt = (v: number | null | undefined) =>
    v === null || v === undefined ? '–' : Number(v).toPrecision(4);
  $('metrics-body').innerHTML =
    metricRow('RV', fmt(q?.rv), fmt(torn?.rv)) +
    metricRow('WD₁', fmt(q?.wd1), fmt(torn?.wd1)) +
    metricRow('PB₁ after', q ? String(q.pb1_after) : '–',
      torn && torn.pb1 !== null ? String(torn.pb1) : '–') +
    metricRow('removed edges', '–', torn ? String(torn.removed_count) : '–');
}

function pushState(patch: Partial<ViewState>): void {
  store.update(patch);
  location.hash = encodeState(store.state);
}

async function loadSession(sid: string): Promise<void> {
  const body = await client.sessionPoints(sid);
  cloudPoints = body.points;
  cloudView.setData(cloudPoints, null);
  $('session-label').textContent =
    `session ${sid} · ${cloudPoints.length} points · dim ${cloudPoints[0]?.length ?? 0}`;
}

async function newSession(): Promise<void> {
  const shape = $<HTMLSelectElement>('shape').value;
  const n = Number($<HTMLInputElement>('n').value);
  const seed = Number($<HTMLInputElement>('seed').value);
  await guarded(async () => {
    const info = await client.createSession({ shape, n, seed });
    skeleton = null;
    baseline = null;
    ranked = null;
    pushState({
      session: info.id, shape, n, seed,
      skeletonHash: null, embedHash: null, selectedCut: null,
    });
    await loadSession(info.id);
  });
}

async function computeSkeleton(): Promise<void> {
  const sid = store.state.session;
  if (!sid) return;
  await guarded(async () => {
    skeleton = await client.skeleton(sid, {
      k: Number($<HTMLInputElement>('sk-k').value),
      n: Number($<HTMLInputElement>('sk-n').value),
      p: Number($<HTMLInputElement>('sk-p').value),
      eps: $<HTMLInputElement>('sk-eps').value || 'auto',
      minpts: Number($<HTMLInputElement>('sk-minpts').value),
    });
    pushState({ skeletonHash: skeleton.hash });
    cloudView.setData(cloudPoints, overlayFromSkeleton(skeleton));
    $('skeleton-label').textContent =
      `${skeleton.nodes.length} nodes · ${skeleton.edges.length} edges · ` +
      `cycle rank ${skeleton.cycle_rank} · ${skeleton.landmarks.length} landmarks`;
  });
}

async function computeEmbedding(): Promise<void> {
  const sid = store.state.session;
  if (!sid) return;
  const method = $<HTMLSelectElement>('method').value;
  await guarded(async () => {
    baseline = await client.embed(sid, { method, d: 2 });
    pushState({ method, embedHash: baseline.hash });
    embedView.setData(baseline.coords, null);
    renderMetrics(null);
    await showDiagram(`embedding:${baseline.hash}`);
  });
}

async function showDiagram(target: string): Promise<void> {
  const sid = store.state.session;
  if (!sid) return;
  await guarded(async () => {
    const body = await client.persistence(sid, target);
    pushState({ diagramTarget: target });
    diagramView.render(body);
  });
}

async function rankCuts(): Promise<void> {
  const sid = store.state.session;
  if (!sid) return;
  await guarded(async () => {
    ranked = await client.tearRank(sid);
    cutsView.render(ranked.results, store.state.selectedCut);
  });
}

async function applyCut(index: number): Promise<void> {
  const sid = store.state.session;
  if (!sid || !ranked) return;
  const cut = ranked.results[index].cut;
  await guarded(async () => {
    const torn = await client.tear(sid, {
      edge: cut.edge, t: cut.t, radius: cut.radius,
    });
    pushState({ selectedCut: index });
    cutsView.render(ranked!.results, index);
    embedView.setData(torn.coords, null);
    renderMetrics(torn);
    await showDiagram(`embedding:${torn.hash}`);
  });
}

async function applyManualCut(): Promise<void> {
  const sid = store.state.session;
  if (!sid || !skeleton || cloudView.selectedEdge === null) return;
  const [u, v] = skeleton.edges[cloudView.selectedEdge];
  const t = Number($<HTMLInputElement>('cut-t').value);
  await guarded(async () => {
    const torn = await client.tear(sid, { edge: [u, v], t });
    embedView.setData(torn.coords, null);
    renderMetrics(torn);
    await showDiagram(`embedding:${torn.hash}`);
  });
}

async function searchDirections(): Promise<void> {
  const sid = store.state.session;
  if (!sid) return;
  await guarded(async () => {
    const body = await client.projectSearch(sid, 100);
    sphereView.setDirections(body.directions);
  });
}

async function pickDirection(direction: DirectionScore): Promise<void> {
  const sid = store.state.session;
  if (!sid) return;
  await guarded(async () => {
    const body = await client.project(sid, direction.vector);
    embedView.setData(body.coords, null);
    await showDiagram(`embedding:${body.hash}`);
  });
}

async function restore(): Promise<void> {
  const state = store.state;
  if (!state.session) return;
  const alive = await guarded(() => client.sessionInfo(state.session!));
  if (!alive) {
    pushState({ session: null, skeletonHash: null, embedHash: null });
    showError('stored session no longer exists; create a new one');
    return;
  }
  await loadSession(state.session);
  if (state.skeletonHash) await computeSkeleton();
  if (state.embedHash) await computeEmbedding();
  if (state.diagramTarget === 'input') await showDiagram('input');
}

function wire(): void {
  $('new-session').addEventListener('click', newSession);
  $('compute-skeleton').addEventListener('click', computeSkeleton);
  $('compute-embed').addEventListener('click', computeEmbedding);
  $('rank-cuts').addEventListener('click', rankCuts);
  $('apply-cut').addEventListener('click', applyManualCut);
  $('search-dirs').addEventListener('click', searchDirections);
  $('show-input-diagram').addEventListener('click', () => showDiagram('input'));
  cutsView.onSelect = applyCut;
  sphereView.onPick = pickDirection;
  cloudView.onEdgePick = (edge) => {
    cloudView.selectedEdge = edge;
    cloudView.render();
    if (skeleton) {
      const [u, v] = skeleton.edges[edge];
      $('cut-label').textContent = `edge (${u}, ${v})`;
    }
  };
  $<HTMLSelectElement>('shape').value = store.state.shape;
  $<HTMLInputElement>('n').value = String(store.state.n);
  $<HTMLInputElement>('seed').value = String(store.state.seed);
  $<HTMLSelectElement>('method').value = store.state.method;
}

wire();
restore();
