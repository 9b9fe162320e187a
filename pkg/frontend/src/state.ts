/**
 * View state and interaction logic for the explorer.
 *
 * The store owns: the session id, the pinned vertex layout, the selected
 * vertex, the variable-panel contents, and the undo history stack.  Every
 * polynomial it exposes came from a server response; the store only formats.
 */

import { ApiError, Client } from "./api.js";
import { canonicalJson } from "./canonical.js";
import { forceLayout, Layout } from "./layout.js";
import { fractionDisplay, ratioText } from "./poly.js";
import type {
  MutationResult,
  QuiverJson,
  SessionSnapshot,
} from "./types.js";

export type FrozenRole = "frozenSource" | "frozenSink" | null;

/** Combinatorial role of a frozen vertex (graph inspection, no algebra). */
export function frozenRole(quiver: QuiverJson, vertex: number): FrozenRole {
  const frozenIn = quiver.arrows.some((a) => a.frozen && a.tgt === vertex);
  const frozenOut = quiver.arrows.some((a) => a.frozen && a.src === vertex);
  const unfrozenIn = quiver.arrows.some((a) => !a.frozen && a.tgt === vertex);
  const unfrozenOut = quiver.arrows.some((a) => !a.frozen && a.src === vertex);
  if (!frozenIn && !unfrozenOut) {
    return "frozenSource";
  }
  if (!frozenOut && !unfrozenIn) {
    return "frozenSink";
  }
  return null;
}

export interface PanelLine {
  label: string;
  value: string;
  frozenFactor?: string;
}

export interface ViewState {
  sessionId: string | null;
  snapshot: SessionSnapshot | null;
  layout: Layout;
  selected: number | null;
  pending: boolean;
  lostSession: boolean;
  vertexErrors: Map<number, string>;
  panel: PanelLine[];
  historyStack: SessionSnapshot[];
}

export function emptyState(): ViewState {
  return {
    sessionId: null,
    snapshot: null,
    layout: new Map(),
    selected: null,
    pending: false,
    lostSession: false,
    vertexErrors: new Map(),
    panel: [],
    historyStack: [],
  };
}

function unfrozenCount(quiver: QuiverJson): number {
  return quiver.vertices.filter((v) => !v.frozen).length;
}

export class ExplorerStore {
  state: ViewState = emptyState();
  onChange: (() => void) | null = null;

  constructor(private readonly client: Client) {}

  private emit(): void {
    if (this.onChange) {
      this.onChange();
    }
  }

  async connect(quiver: unknown, potential?: unknown): Promise<void> {
    const { id } = await this.client.createSession(quiver, potential);
    const snapshot = await this.client.getSession(id);
    this.state = emptyState();
    this.state.sessionId = id;
    this.state.snapshot = snapshot;
    // positions are computed once and pinned: only arrows change afterwards
    this.state.layout = forceLayout(snapshot.current.quiver);
    this.state.panel = this.yhatPanel(snapshot);
    this.emit();
  }

  async resume(id: string): Promise<void> {
    const snapshot = await this.client.getSession(id);
    this.state = emptyState();
    this.state.sessionId = id;
    this.state.snapshot = snapshot;
    this.state.layout = forceLayout(snapshot.current.quiver);
    this.state.panel = this.yhatPanel(snapshot);
    this.emit();
  }

  private yhatPanel(snapshot: SessionSnapshot): PanelLine[] {
    const names = snapshot.current.names;
    const r = unfrozenCount(snapshot.current.quiver);
    return Object.entries(snapshot.yhat)
      .sort(([a], [b]) => Number(a) - Number(b))
      .map(([vertex, ratio]) => ({
        label: `ŷ${vertex}`,
        value: ratioText(names, ratio.num, ratio.den, r),
      }));
  }

  private mutationPanel(
    snapshot: SessionSnapshot,
    result: MutationResult,
  ): PanelLine[] {
    const names = snapshot.current.names;
    const r = unfrozenCount(snapshot.current.quiver);
    const lines: PanelLine[] = [];
    if (result.kind === "exchange") {
      const added = fractionDisplay(names, result.added, r);
      lines.push({
        label: `x${result.vertex}'`,
        value: added.text,
        frozenFactor: added.denominatorFrozenPart,
      });
      lines.push({
        label: "exchange",
        value: `${fractionDisplay(names, result.plusTerm, r).text} + ${
          fractionDisplay(names, result.minusTerm, r).text
        }`,
      });
    } else {
      for (const [name, image] of Object.entries(result.psi).sort()) {
        const display = fractionDisplay(names, image, r);
        lines.push({
          label: `ψ(${name})`,
          value: display.text,
          frozenFactor: display.denominatorFrozenPart,
        });
      }
    }
    return lines.concat(this.yhatPanel(snapshot));
  }

  /** Whether clicking the vertex can mutate (frozen non-source/sink greys out). */
  clickable(vertex: number): boolean {
    const snapshot = this.state.snapshot;
    if (!snapshot || this.state.pending) {
      return false;
    }
    const quiver = snapshot.current.quiver;
    const meta = quiver.vertices.find((v) => v.id === vertex);
    if (!meta) {
      return false;
    }
    if (!meta.frozen) {
      return true;
    }
    return frozenRole(quiver, vertex) !== null;
  }

  async clickVertex(vertex: number): Promise<void> {
    const { snapshot, sessionId } = this.state;
    if (!snapshot || !sessionId || this.state.pending) {
      return;
    }
    if (!this.clickable(vertex)) {
      return;
    }
    this.state.selected = vertex;
    this.state.pending = true;
    this.state.vertexErrors.delete(vertex);
    this.emit();
    try {
      const response = await this.client.mutate(sessionId, vertex);
      this.state.historyStack.push(snapshot);
      this.state.snapshot = response.session;
      this.state.panel = this.mutationPanel(response.session, response.result);
      this.state.vertexErrors.clear();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.state.vertexErrors.set(vertex, error.message);
      } else if (error instanceof ApiError && error.status === 404) {
        this.state.lostSession = true;
      } else {
        this.state.lostSession = true;
      }
    } finally {
      this.state.pending = false;
      this.emit();
    }
  }

  async undo(): Promise<void> {
    const { sessionId } = this.state;
    if (!sessionId || this.state.pending || !this.state.historyStack.length) {
      return;
    }
    this.state.pending = true;
    this.emit();
    try {
      const response = await this.client.undo(sessionId);
      this.state.historyStack.pop();
      this.state.snapshot = response.session;
      this.state.panel = this.yhatPanel(response.session);
      this.state.vertexErrors.clear();
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.state.lostSession = true;
      }
    } finally {
      this.state.pending = false;
      this.emit();
    }
  }

  /** Canonical JSON of the current seed, as served; byte-stable across clients. */
  exportSessionJson(): string {
    if (!this.state.snapshot) {
      throw new Error("no session to export");
    }
    // re-serialized canonically (sorted keys, python separators) so the
    // export matches any other driver of the same server byte for byte
    return canonicalJson(this.state.snapshot.current);
  }
}
