// Page wiring: one input box to start a session, then a stateless view of
// it (term, memories, marking, clickable transition menu, net window with
// a radius slider, history timeline). Reloading with ?session=<id>
// reconstructs the identical view from the service.

import { SessionApi } from './api.js';
import { menuEntries, StepperController } from './model.js';
import { renderNet } from './render.js';

const api = new SessionApi('');

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  text?: string,
  cls?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) node.textContent = text;
  if (cls !== undefined) node.className = cls;
  return node;
}

function draw(controller: StepperController): void {
  const stateBox = document.getElementById('state')!;
  const netBox = document.getElementById('net')!;
  stateBox.textContent = '';
  netBox.textContent = '';
  const state = controller.state;
  if (!state) return;

  stateBox.appendChild(el('h2', state['term-rendering']));
  stateBox.appendChild(el('pre', state['rccs-rendering'], 'rccs'));
  stateBox.appendChild(el('h3', 'Marking'));
  const marking = el('ul');
  for (const place of state.marking) {
    marking.appendChild(el('li', place));
  }
  stateBox.appendChild(marking);

  stateBox.appendChild(el('h3', 'Enabled transitions'));
  const menu = el('div', undefined, 'menu');
  for (const entry of menuEntries(state)) {
    const button = el(
      'button',
      entry.name,
      entry.direction === 'bwd' ? 'reversing' : 'forward',
    );
    button.disabled = controller.busy;
    button.addEventListener('click', () => void controller.fire(entry.name));
    menu.appendChild(button);
  }
  stateBox.appendChild(menu);

  stateBox.appendChild(el('h3', 'History'));
  const history = el('ol', undefined, 'history');
  for (const name of state.history) {
    history.appendChild(el('li', name));
  }
  stateBox.appendChild(history);
  const undoButton = el('button', 'undo last');
  undoButton.disabled = state.history.length === 0 || controller.busy;
  undoButton.addEventListener('click', () => void controller.undo());
  stateBox.appendChild(undoButton);

  if (controller.net) {
    netBox.appendChild(renderNet(controller.net, (name) => {
      // clicking a box fires it forward or backward as drawn
      const directed = controller.net!.transitions.find((t) => t.id === name);
      if (directed && directed.enabled) void controller.fire(name);
    }));
  }
}

async function startSession(term: string): Promise<void> {
  const { id } = await api.createSession(term);
  const url = new URL(window.location.href);
  url.searchParams.set('session', id);
  window.history.replaceState(null, '', url.toString());
  await attach(id);
}

async function attach(id: string): Promise<void> {
  const controller = new StepperController(api, id, () => draw(controller));
  const slider = document.getElementById('radius') as HTMLInputElement;
  slider.onchange = () => void controller.setRadius(Number(slider.value));
  controller.radius = Number(slider.value);
  await controller.refresh();
}

function init(): void {
  const form = document.getElementById('start') as HTMLFormElement;
  const input = document.getElementById('term') as HTMLInputElement;
  form.addEventListener('submit', (ev) => {
    ev.preventDefault();
    void startSession(input.value).catch((err) => {
      document.getElementById('error')!.textContent = String(err);
    });
  });
  const existing = new URL(window.location.href).searchParams.get('session');
  if (existing) {
    void attach(existing);
  }
}

init();
