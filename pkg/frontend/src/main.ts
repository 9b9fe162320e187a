/** Browser entry point: wires the store to an SVG canvas and side panel. */

import { Client } from "./api.js";
import { buildDrawList, DrawEdge, DrawNode } from "./render.js";
import { ExplorerStore } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function drawEdge(
  svg: SVGElement,
  edge: DrawEdge,
  nodes: Map<number, DrawNode>,
): void {
  const a = nodes.get(edge.src);
  const b = nodes.get(edge.tgt);
  if (!a || !b) {
    return;
  }
  const mx = (a.x + b.x) / 2;
  const my = (a.y + b.y) / 2;
  const nx = -(b.y - a.y) * edge.bend;
  const ny = (b.x - a.x) * edge.bend;
  const path = svgEl("path", {
    d: `M ${a.x} ${a.y} Q ${mx + nx} ${my + ny} ${b.x} ${b.y}`,
    fill: "none",
    stroke: edge.frozen ? "#4a7bd0" : "#333",
    "stroke-width": edge.frozen ? "2.5" : "1.5",
    "stroke-dasharray": edge.frozen ? "7 3" : "",
    "marker-end": edge.frozen ? "url(#arrow-frozen)" : "url(#arrow)",
  });
  svg.appendChild(path);
  if (edge.multiplicity > 1) {
    const label = svgEl("text", {
      x: String(mx + nx),
      y: String(my + ny - 4),
      "font-size": "11",
      "text-anchor": "middle",
      fill: "#666",
    });
    label.textContent = `×${edge.multiplicity}`;
    svg.appendChild(label);
  }
}

function drawNode(
  svg: SVGElement,
  node: DrawNode,
  store: ExplorerStore,
): void {
  const group = svgEl("g", { cursor: node.greyed ? "not-allowed" : "pointer" });
  const common = {
    fill: node.greyed ? "#e8e8e8" : node.frozen ? "#dfe9fb" : "#fdf6dd",
    stroke: node.selected ? "#d04a4a" : node.frozen ? "#4a7bd0" : "#777",
    "stroke-width": node.selected ? "3" : "1.5",
  };
  // frozen vertices render boxed, unfrozen as discs
  const shape = node.frozen
    ? svgEl("rect", {
        x: String(node.x - 18),
        y: String(node.y - 14),
        width: "36",
        height: "28",
        rx: "3",
        ...common,
      })
    : svgEl("circle", {
        cx: String(node.x),
        cy: String(node.y),
        r: "16",
        ...common,
      });
  group.appendChild(shape);
  const label = svgEl("text", {
    x: String(node.x),
    y: String(node.y + 4),
    "text-anchor": "middle",
    "font-size": "12",
  });
  label.textContent = node.pending ? "…" : node.name;
  group.appendChild(label);
  if (node.error) {
    const badge = svgEl("text", {
      x: String(node.x),
      y: String(node.y - 22),
      "text-anchor": "middle",
      "font-size": "10",
      fill: "#c0392b",
    });
    badge.textContent = node.error;
    group.appendChild(badge);
  }
  group.addEventListener("click", () => {
    void store.clickVertex(node.id);
  });
  svg.appendChild(group);
}

function renderPanel(store: ExplorerStore, panel: HTMLElement): void {
  panel.replaceChildren();
  const snapshot = store.state.snapshot;
  if (!snapshot) {
    return;
  }
  panel.appendChild(
    el("div", { class: "address" },
       `address: [${snapshot.current.treeAddress.join(", ")}]`),
  );
  for (const line of store.state.panel) {
    const row = el("div", { class: "panel-line" });
    row.appendChild(el("span", { class: "label" }, line.label + " = "));
    row.appendChild(el("span", { class: "value" }, line.value));
    if (line.frozenFactor) {
      row.appendChild(
        el("span", { class: "frozen-factor" },
           ` (frozen denominator: ${line.frozenFactor})`),
      );
    }
    panel.appendChild(row);
  }
}

function render(store: ExplorerStore): void {
  const svg = document.getElementById("quiver") as unknown as SVGElement;
  const panel = document.getElementById("panel")!;
  const hintBox = document.getElementById("hint")!;
  const drawList = buildDrawList(store.state);
  while (svg.lastChild && (svg.lastChild as Element).tagName !== "defs") {
    svg.removeChild(svg.lastChild);
  }
  if (drawList.reconnect) {
    hintBox.textContent = "session lost; reconnect with a session id";
    return;
  }
  hintBox.textContent = drawList.hint ?? "";
  const byId = new Map(drawList.nodes.map((n) => [n.id, n]));
  for (const edge of drawList.edges) {
    drawEdge(svg, edge, byId);
  }
  for (const node of drawList.nodes) {
    drawNode(svg, node, store);
  }
  renderPanel(store, panel);
  const undoButton = document.getElementById("undo") as HTMLButtonElement;
  undoButton.disabled = store.state.historyStack.length === 0
    || store.state.pending;
}

async function boot(): Promise<void> {
  const base = (document.getElementById("base") as HTMLInputElement);
  const quiverBox = (document.getElementById("quiver-json") as
                     HTMLTextAreaElement);
  const potentialBox = (document.getElementById("potential-json") as
                        HTMLTextAreaElement);
  let store = new ExplorerStore(new Client(base.value));

  document.getElementById("connect")!.addEventListener("click", () => {
    store = new ExplorerStore(new Client(base.value));
    store.onChange = () => render(store);
    const quiver = JSON.parse(quiverBox.value);
    const potential = potentialBox.value.trim()
      ? JSON.parse(potentialBox.value) : undefined;
    void store.connect(quiver, potential).then(() => render(store));
  });
  document.getElementById("undo")!.addEventListener("click", () => {
    void store.undo();
  });
  document.getElementById("export")!.addEventListener("click", () => {
    const blob = store.exportSessionJson();
    const out = document.getElementById("export-out")!;
    out.textContent = blob;
  });
  store.onChange = () => render(store);
}

if (typeof document !== "undefined") {
  void boot();
}
