/**
 * View state shared across panels, with URL-hash persistence.
 *
 * The hash stores only identifiers (session id, result hashes, panel
 * parameters), never data.  On reload the app replays the stored
 * requests; the service's parameter-hash cache answers them from memory,
 * so restoring a view is cheap and reproduces identical bodies.
 */

export interface ViewState {
  session: string | null;
  shape: string;
  n: number;
  seed: number;
  skeletonHash: string | null;
  embedHash: string | null;
  method: string;
  diagramTarget: string;
  selectedCut: number | null;
}

export const DEFAULT_STATE: ViewState = {
  session: null,
  shape: 'circle',
  n: 400,
  seed: 0,
  skeletonHash: null,
  embedHash: null,
  method: 'l-isomap-homology',
  diagramTarget: 'input',
  selectedCut: null,
};

/** Serialize the state into a URL hash fragment (without the leading '#'). */
export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  for (const [key, value] of Object.entries(state)) {
    if (value === null) continue;
    params.set(key, String(value));
  }
  return params.toString();
}

/** Parse a hash fragment back into a full state, filling gaps with defaults. */
export function decodeState(fragment: string): ViewState {
  const params = new URLSearchParams(fragment.replace(/^#/, ''));
  const state: ViewState = { ...DEFAULT_STATE };
  const str = (key: keyof ViewState) => {
    const value = params.get(key);
    if (value !== null) (state as any)[key] = value;
  };
  const num = (key: keyof ViewState) => {
    const value = params.get(key);
    if (value !== null && Number.isFinite(Number(value))) {
      (state as any)[key] = Number(value);
    }
  };
  str('session');
  str('shape');
  num('n');
  num('seed');
  str('skeletonHash');
  str('embedHash');
  str('method');
  str('diagramTarget');
  num('selectedCut');
  return state;
}

export type Listener = (state: ViewState) => void;

/** Minimal observable store; every mutation goes through update(). */
export class Store {
  private listeners: Listener[] = [];

  constructor(public state: ViewState = { ...DEFAULT_STATE }) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }
}
