// Typed client for the session service. Transition names are opaque
// identifiers that must round-trip unchanged into /fire.

export interface EnabledTransition {
  name: string;
  direction: 'fwd' | 'bwd';
  label: string;
}

export interface SessionView {
  'term-rendering': string;
  'rccs-rendering': string;
  marking: string[];
  enabled: EnabledTransition[];
  history: string[];
}

export interface NetPlace {
  id: string;
  kind: 'proc' | 'key' | 'synckey';
  marked: boolean;
}

export interface NetTransition {
  id: string;
  direction: 'fwd' | 'bwd';
  label: string;
  enabled: boolean;
  preset: string[];
  postset: string[];
}

export interface NetView {
  places: NetPlace[];
  transitions: NetTransition[];
}

export type FireResult =
  | { kind: 'ok'; state: SessionView }
  | { kind: 'stale' };

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function expectJson(resp: Response): Promise<any> {
  if (!resp.ok) {
    throw new ApiError(resp.status, await resp.text());
  }
  return resp.json();
}

export class SessionApi {
  constructor(readonly base: string = '') {}

  async createSession(term: string): Promise<{ id: string; state: SessionView }> {
    const resp = await fetch(`${this.base}/sessions`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ term }),
    });
    return expectJson(resp);
  }

  async getState(id: string): Promise<SessionView> {
    return expectJson(await fetch(`${this.base}/sessions/${id}`));
  }

  // A 409 means another tab advanced the session first; the caller should
  // refetch rather than crash.
  async fire(id: string, transition: string): Promise<FireResult> {
    const resp = await fetch(`${this.base}/sessions/${id}/fire`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ transition }),
    });
    if (resp.status === 409) {
      return { kind: 'stale' };
    }
    return { kind: 'ok', state: await expectJson(resp) };
  }

  async undo(id: string): Promise<FireResult> {
    const resp = await fetch(`${this.base}/sessions/${id}/undo`, {
      method: 'POST',
    });
    if (resp.status === 409) {
      return { kind: 'stale' };
    }
    return { kind: 'ok', state: await expectJson(resp) };
  }

  async getNet(id: string, radius: number): Promise<NetView> {
    return expectJson(
      await fetch(`${this.base}/sessions/${id}/net?radius=${radius}`),
    );
  }

  async deleteSession(id: string): Promise<void> {
    await fetch(`${this.base}/sessions/${id}`, { method: 'DELETE' });
  }
}
