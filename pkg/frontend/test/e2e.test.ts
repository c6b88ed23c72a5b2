// End-to-end stepper flow against the real session service.
//
// The recursive composition from the interactive walkthrough drives the
// scenario: two forward transitions initially (one output, one
// synchronisation; the bare input and output on the restricted channel
// are hidden), three options after firing the output (its reversing twin
// appears), and the reversing click restores the initial menu.

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, ChildProcess } from 'node:child_process';

import { SessionApi } from '../src/api.js';
import { backwardNames, forwardNames, replayHistory } from '../src/model.js';

const PORT = 8765 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;
const TERM = '(rec X. a.X | rec Y. (~b.Y + ~a.Y))\\a';

let service: ChildProcess;

async function up(): Promise<boolean> {
  try {
    const resp = await fetch(`${BASE}/sessions/ping`);
    return resp.status === 404;
  } catch {
    return false;
  }
}

beforeAll(async () => {
  service = spawn(
    'python3',
    ['-m', 'rccsnet.cli', 'serve', '--port', String(PORT)],
    { stdio: 'ignore' },
  );
  for (let i = 0; i < 100; i++) {
    if (await up()) return;
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error('service did not come up');
}, 30_000);

afterAll(() => {
  service.kill();
});

describe('stepper end to end', () => {
  const api = new SessionApi(BASE);

  it('walks the recursive composition forward and back', async () => {
    const { id, state } = await api.createSession(TERM);

    const initialMenu = forwardNames(state);
    expect(initialMenu).toHaveLength(2);
    expect(backwardNames(state)).toHaveLength(0);
    const output = '->(|1:+0:b!)\\a';
    expect(initialMenu).toContain(output);
    expect(initialMenu.some((n) => n.includes('*'))).toBe(true);

    const fired = await api.fire(id, output);
    expect(fired.kind).toBe('ok');
    if (fired.kind !== 'ok') return;
    const afterFirst = fired.state;
    expect(afterFirst.enabled).toHaveLength(3);
    const reversing = backwardNames(afterFirst);
    expect(reversing).toHaveLength(1);
    expect(reversing[0]).toBe('<-(|1:+0:b!)\\a');

    const undone = await api.fire(id, reversing[0]);
    expect(undone.kind).toBe('ok');
    if (undone.kind !== 'ok') return;
    expect(new Set(forwardNames(undone.state))).toEqual(new Set(initialMenu));
    expect(backwardNames(undone.state)).toHaveLength(0);

    await api.deleteSession(id);
  }, 30_000);

  it('replaying the recorded history reproduces the final view', async () => {
    const { id, state } = await api.createSession(TERM);
    let current = state;
    for (let i = 0; i < 4; i++) {
      const names = forwardNames(current);
      const result = await api.fire(id, names[i % names.length]);
      expect(result.kind).toBe('ok');
      if (result.kind !== 'ok') return;
      current = result.state;
    }
    const replayed = await replayHistory(api, TERM, current.history);
    expect(replayed.marking).toEqual(current.marking);
    expect(replayed.enabled).toEqual(current.enabled);
    expect(replayed['rccs-rendering']).toEqual(current['rccs-rendering']);
    await api.deleteSession(id);
  }, 30_000);

  it('a reloaded view is identical to the live one', async () => {
    const { id } = await api.createSession(TERM);
    const fired = await api.fire(id, '->(|1:+0:b!)\\a');
    expect(fired.kind).toBe('ok');
    const reloaded = await api.getState(id);
    if (fired.kind === 'ok') {
      expect(reloaded).toEqual(fired.state);
    }
    await api.deleteSession(id);
  }, 30_000);

  it('stale clicks from a second tab are conflicts, not crashes', async () => {
    const { id, state } = await api.createSession(TERM);
    const name = forwardNames(state)[0];
    const first = await api.fire(id, name);
    expect(first.kind).toBe('ok');
    const second = await api.fire(id, name); // the same button in an old tab
    expect(second.kind).toBe('stale');
    await api.deleteSession(id);
  }, 30_000);

  it('net view marks exactly the current marking and flags reversing moves', async () => {
    const { id, state } = await api.createSession(TERM);
    const view = await api.getNet(id, 2);
    const marked = view.places.filter((p) => p.marked).map((p) => p.id);
    expect(new Set(marked)).toEqual(new Set(state.marking));
    const enabledIds = view.transitions.filter((t) => t.enabled).map((t) => t.id);
    expect(new Set(enabledIds)).toEqual(new Set(state.enabled.map((e) => e.name)));
    await api.deleteSession(id);
  }, 30_000);
});
