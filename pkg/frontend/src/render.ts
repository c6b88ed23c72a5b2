// SVG rendering of the net window: places as circles (key places filled,
// tokens as dots), forward transitions as plain boxes, reversing ones in
// the highlighted red style; enabled transitions are clickable, the rest
// grayed out.

import { NetView } from './api.js';
import { layoutNet } from './layout.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function svg(tag: string, attrs: Record<string, string>): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) {
    el.setAttribute(k, v);
  }
  return el;
}

function short(id: string): string {
  return id.length > 26 ? id.slice(0, 24) + '…' : id;
}

export function renderNet(
  view: NetView,
  onFire: (name: string) => void,
): SVGSVGElement {
  const layout = layoutNet(view);
  const root = svg('svg', {
    width: String(layout.width),
    height: String(layout.height),
    viewBox: `0 0 ${layout.width} ${layout.height}`,
  }) as SVGSVGElement;

  const pos = new Map(layout.nodes.map((n) => [n.id, n]));
  for (const edge of layout.edges) {
    const from = pos.get(edge.from);
    const to = pos.get(edge.to);
    if (!from || !to) continue;
    root.appendChild(
      svg('line', {
        x1: String(from.x),
        y1: String(from.y),
        x2: String(to.x),
        y2: String(to.y),
        stroke: '#999',
        'marker-end': 'url(#arrow)',
      }),
    );
  }
  const defs = svg('defs', {});
  const marker = svg('marker', {
    id: 'arrow',
    viewBox: '0 0 10 10',
    refX: '22',
    refY: '5',
    markerWidth: '6',
    markerHeight: '6',
    orient: 'auto-start-reverse',
  });
  marker.appendChild(svg('path', { d: 'M 0 0 L 10 5 L 0 10 z', fill: '#999' }));
  defs.appendChild(marker);
  root.appendChild(defs);

  for (const place of view.places) {
    const node = pos.get(place.id);
    if (!node) continue;
    const fill =
      place.kind === 'proc' ? 'white' : place.kind === 'key' ? '#bcd9f5' : '#a9c7ef';
    const circle = svg('circle', {
      cx: String(node.x),
      cy: String(node.y),
      r: '14',
      fill,
      stroke: '#222',
      'stroke-width': place.marked ? '3' : '1',
    });
    const title = svg('title', {});
    title.textContent = place.id;
    circle.appendChild(title);
    root.appendChild(circle);
    if (place.marked) {
      root.appendChild(
        svg('circle', {
          cx: String(node.x),
          cy: String(node.y),
          r: '5',
          fill: '#222',
          class: 'token',
        }),
      );
    }
    const label = svg('text', {
      x: String(node.x),
      y: String(node.y + 28),
      'text-anchor': 'middle',
      'font-size': '9',
    });
    label.textContent = short(place.id);
    root.appendChild(label);
  }

  for (const t of view.transitions) {
    const node = pos.get(t.id);
    if (!node) continue;
    const reversing = t.direction === 'bwd';
    const group = svg('g', {
      class: `transition ${t.enabled ? 'enabled' : 'disabled'}`,
    });
    const rect = svg('rect', {
      x: String(node.x - 16),
      y: String(node.y - 12),
      width: '32',
      height: '24',
      fill: reversing ? '#f6c8c8' : 'white',
      stroke: reversing ? '#c0392b' : '#222',
      'stroke-width': reversing ? '2' : '1',
      opacity: t.enabled ? '1' : '0.35',
    });
    const title = svg('title', {});
    title.textContent = t.id;
    rect.appendChild(title);
    group.appendChild(rect);
    const label = svg('text', {
      x: String(node.x),
      y: String(node.y + 4),
      'text-anchor': 'middle',
      'font-size': '10',
      opacity: t.enabled ? '1' : '0.35',
    });
    label.textContent = t.label;
    group.appendChild(label);
    const caption = svg('text', {
      x: String(node.x),
      y: String(node.y + 26),
      'text-anchor': 'middle',
      'font-size': '9',
      opacity: t.enabled ? '1' : '0.4',
    });
    caption.textContent = short(t.id);
    group.appendChild(caption);
    if (t.enabled) {
      (group as unknown as HTMLElement).style.cursor = 'pointer';
      group.addEventListener('click', () => onFire(t.id));
    }
    root.appendChild(group);
  }
  return root;
}
