// View-model: everything the UI decides without touching the DOM.
// The controller owns one session id and serializes mutations; state is
// otherwise reconstructed from the service on demand.

import { FireResult, NetView, SessionView } from './api.js';

// the slice of the client the controller needs; SessionApi satisfies it
export interface StepperApi {
  getState(id: string): Promise<SessionView>;
  getNet(id: string, radius: number): Promise<NetView>;
  fire(id: string, transition: string): Promise<FireResult>;
  undo(id: string): Promise<FireResult>;
}

export interface ReplayApi extends StepperApi {
  createSession(term: string): Promise<{ id: string; state: SessionView }>;
  deleteSession(id: string): Promise<void>;
}

export interface MenuEntry {
  name: string;
  direction: 'fwd' | 'bwd';
  label: string;
}

export function menuEntries(state: SessionView): MenuEntry[] {
  return [...state.enabled].sort((a, b) =>
    a.direction === b.direction
      ? a.name.localeCompare(b.name)
      : a.direction === 'fwd'
        ? -1
        : 1,
  );
}

export function forwardNames(state: SessionView): string[] {
  return menuEntries(state)
    .filter((e) => e.direction === 'fwd')
    .map((e) => e.name);
}

export function backwardNames(state: SessionView): string[] {
  return menuEntries(state)
    .filter((e) => e.direction === 'bwd')
    .map((e) => e.name);
}

export class StepperController {
  state: SessionView | null = null;
  net: NetView | null = null;
  radius = 1;
  private inflight = false;

  constructor(
    readonly api: StepperApi,
    readonly sessionId: string,
    readonly onChange: () => void,
  ) {}

  get busy(): boolean {
    return this.inflight;
  }

  async refresh(): Promise<void> {
    this.state = await this.api.getState(this.sessionId);
    this.net = await this.api.getNet(this.sessionId, this.radius);
    this.onChange();
  }

  async setRadius(radius: number): Promise<void> {
    this.radius = radius;
    this.net = await this.api.getNet(this.sessionId, this.radius);
    this.onChange();
  }

  // at most one mutation in flight; a stale answer (another tab moved the
  // session) degrades to a refetch
  async fire(name: string): Promise<void> {
    if (this.inflight) return;
    this.inflight = true;
    try {
      const result: FireResult = await this.api.fire(this.sessionId, name);
      if (result.kind === 'ok') {
        this.state = result.state;
        this.net = await this.api.getNet(this.sessionId, this.radius);
        this.onChange();
      } else {
        await this.refresh();
      }
    } finally {
      this.inflight = false;
    }
  }

  async undo(): Promise<void> {
    if (this.inflight) return;
    this.inflight = true;
    try {
      const result = await this.api.undo(this.sessionId);
      if (result.kind === 'ok') {
        this.state = result.state;
        this.net = await this.api.getNet(this.sessionId, this.radius);
        this.onChange();
      } else {
        await this.refresh();
      }
    } finally {
      this.inflight = false;
    }
  }
}

// Replay a recorded history on a fresh session of the same term; used by
// the end-to-end test to confirm every state shown is reachable by the
// recorded names.
export async function replayHistory(
  api: ReplayApi,
  term: string,
  history: string[],
): Promise<SessionView> {
  const { id } = await api.createSession(term);
  try {
    let state = await api.getState(id);
    for (const name of history) {
      const result = await api.fire(id, name);
      if (result.kind !== 'ok') {
        throw new Error(`replay diverged at ${name}`);
      }
      state = result.state;
    }
    return state;
  } finally {
    await api.deleteSession(id);
  }
}
