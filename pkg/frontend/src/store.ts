/** Tiny observable state container; the whole app shares one instance. */

import type { CatalogDoc, ReportDoc } from './types.js';

export type Step = 'intro' | 'devices' | 'questions' | 'results';
export type Scheme = 'calm' | 'slate';

export interface SessionState {
  step: Step;
  catalog: CatalogDoc | null;
  displayName: string;
  scheme: Scheme;
  devices: string[];
  connections: Array<[string, string]>;
  answers: Record<string, boolean>;
  report: ReportDoc | null;
  dismissed: number[];
  loading: boolean;
  blockingError: string | null;
  fieldError: string | null;
  glossaryOpen: boolean;
  glossaryQuery: string;
  guidanceOpen: boolean;
}

export function initialState(): SessionState {
  return {
    step: 'intro',
    catalog: null,
    displayName: '',
    scheme: 'calm',
    devices: [],
    connections: [],
    answers: {},
    report: null,
    dismissed: [],
    loading: false,
    blockingError: null,
    fieldError: null,
    glossaryOpen: false,
    glossaryQuery: '',
    guidanceOpen: false,
  };
}

type Listener = () => void;

export class Store {
  private state: SessionState;
  private listeners: Listener[] = [];

  constructor(state: SessionState = initialState()) {
    this.state = state;
  }

  get(): SessionState {
    return this.state;
  }

  set(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners.slice()) listener();
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      const at = this.listeners.indexOf(listener);
      if (at >= 0) this.listeners.splice(at, 1);
    };
  }

  /** Back to the intro, keeping the catalog and the user's preferences. */
  startOver(): void {
    const { catalog, displayName, scheme } = this.state;
    this.set({ ...initialState(), catalog, displayName, scheme });
  }
}

export const store = new Store();
