import { describe, expect, it } from 'vitest';

import { FireResult, NetView, SessionView } from '../src/api.js';
import {
  backwardNames,
  forwardNames,
  menuEntries,
  replayHistory,
  StepperApi,
  StepperController,
} from '../src/model.js';

function view(partial: Partial<SessionView>): SessionView {
  return {
    'term-rendering': 'a',
    'rccs-rendering': '<> |> a',
    marking: ['a'],
    enabled: [],
    history: [],
    ...partial,
  };
}

const emptyNet: NetView = { places: [], transitions: [] };

describe('menu shaping', () => {
  const state = view({
    enabled: [
      { name: '<-x?', direction: 'bwd', label: 'x?' },
      { name: '->b?', direction: 'fwd', label: 'b?' },
      { name: '->a?', direction: 'fwd', label: 'a?' },
    ],
  });

  it('puts forward options first, sorted by name', () => {
    expect(menuEntries(state).map((e) => e.name)).toEqual([
      '->a?',
      '->b?',
      '<-x?',
    ]);
  });

  it('splits forward and backward names', () => {
    expect(forwardNames(state)).toEqual(['->a?', '->b?']);
    expect(backwardNames(state)).toEqual(['<-x?']);
  });
});

class FakeApi implements StepperApi {
  states: SessionView[];
  fires: string[] = [];
  stale = false;
  pendingResolvers: Array<() => void> = [];

  constructor(states: SessionView[]) {
    this.states = states;
  }

  async getState(): Promise<SessionView> {
    return this.states[0];
  }

  async getNet(): Promise<NetView> {
    return emptyNet;
  }

  async fire(_id: string, transition: string): Promise<FireResult> {
    this.fires.push(transition);
    if (this.stale) return { kind: 'stale' };
    this.states.shift();
    return { kind: 'ok', state: this.states[0] };
  }

  async undo(): Promise<FireResult> {
    return { kind: 'ok', state: this.states[0] };
  }
}

describe('StepperController', () => {
  it('advances state on a successful fire', async () => {
    const s0 = view({ enabled: [{ name: '->a?', direction: 'fwd', label: 'a?' }] });
    const s1 = view({ history: ['->a?'] });
    const api = new FakeApi([s0, s1]);
    let renders = 0;
    const ctl = new StepperController(api, 'sid', () => renders++);
    await ctl.refresh();
    await ctl.fire('->a?');
    expect(ctl.state).toEqual(s1);
    expect(api.fires).toEqual(['->a?']);
    expect(renders).toBe(2);
  });

  it('refetches on a stale fire instead of crashing', async () => {
    const current = view({ history: ['someone-else'] });
    const api = new FakeApi([current]);
    api.stale = true;
    const ctl = new StepperController(api, 'sid', () => {});
    await ctl.fire('->a?');
    expect(ctl.state).toEqual(current);
  });

  it('allows at most one in-flight mutation', async () => {
    const s0 = view({ enabled: [{ name: '->a?', direction: 'fwd', label: 'a?' }] });
    const s1 = view({ history: ['->a?'] });
    const api = new FakeApi([s0, s1, view({ history: ['->a?', '->a?'] })]);
    const ctl = new StepperController(api, 'sid', () => {});
    await Promise.all([ctl.fire('->a?'), ctl.fire('->a?')]);
    expect(api.fires).toEqual(['->a?']);
  });
});

describe('replayHistory', () => {
  it('replays the recorded names on a fresh session', async () => {
    const s0 = view({});
    const s1 = view({ history: ['->a?'] });
    const s2 = view({ history: ['->a?', '->b?'] });
    const seq = [s0, s1, s2];
    let created = 0;
    let deleted = 0;
    const api = {
      async createSession() {
        created++;
        return { id: 'fresh', state: seq[0] };
      },
      async deleteSession() {
        deleted++;
      },
      async getState() {
        return seq[0];
      },
      async getNet() {
        return emptyNet;
      },
      async fire(_id: string, _t: string) {
        seq.shift();
        return { kind: 'ok' as const, state: seq[0] };
      },
      async undo() {
        return { kind: 'ok' as const, state: seq[0] };
      },
    };
    const final = await replayHistory(api, 'a.b', ['->a?', '->b?']);
    expect(final.history).toEqual(['->a?', '->b?']);
    expect(created).toBe(1);
    expect(deleted).toBe(1);
  });
});
