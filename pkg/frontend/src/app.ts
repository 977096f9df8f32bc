// DOM wiring for the solitaire board. All game logic stays on the server;
// this file renders state and forwards clicks.

import { ApiError, SolitaireClient } from "./client.js";
import {
  BoardState,
  boardFromSession,
  cellKey,
  componentLabel,
  confirm as confirmState,
  exportHistory,
  highlightedCells,
  independenceLabel,
  optimisticApply,
  previewsFor,
  rollback,
  viewportFor,
} from "./board.js";
import type { Cell, CreateSessionBody } from "./types.js";

const DEFAULT_BODY: CreateSessionBody = {
  group: { kind: "lattice", d: 2 },
  shape: [
    [0, 0],
    [1, 0],
    [0, 1],
  ],
  support: [
    [0, 0],
    [1, 0],
    [2, 0],
  ],
};

export class BoardApp {
  private state: BoardState | null = null;
  private inFlight = false;

  constructor(
    private client: SolitaireClient,
    private root: HTMLElement,
  ) {}

  async start(body: CreateSessionBody = DEFAULT_BODY): Promise<void> {
    try {
      const session = await this.client.createSession(body);
      this.state = boardFromSession(body, session);
      await this.refreshMoves();
    } catch (err) {
      this.banner(`server unreachable: ${String(err)}`, true);
      return;
    }
    this.render();
  }

  private async refreshMoves(): Promise<void> {
    if (this.state === null) return;
    this.state.moves = await this.client.listMoves(this.state.sessionId);
  }

  private banner(text: string, retry = false): void {
    const el = document.createElement("div");
    el.className = "banner";
    el.textContent = text;
    if (retry) {
      const button = document.createElement("button");
      button.textContent = "retry";
      button.onclick = () => void this.start();
      el.appendChild(button);
    }
    this.root.replaceChildren(el);
  }

  private async clickCell(cell: Cell): Promise<void> {
    if (this.state === null || this.inFlight) return;
    const previews = previewsFor(this.state.moves, cell);
    if (previews.length === 0) return;
    const chosen = previews[0].move;
    this.inFlight = true;
    this.state = optimisticApply(this.state, chosen);
    this.render();
    try {
      const server = await this.client.applyMove(this.state.sessionId, chosen);
      this.state = confirmState(this.state, server);
    } catch (err) {
      this.state = rollback(this.state);
      if (err instanceof ApiError && err.status === 409) {
        this.toast("move rejected by the server; board restored");
      } else {
        this.toast(String(err));
      }
    } finally {
      this.inFlight = false;
      await this.refreshMoves();
      this.render();
    }
  }

  async undo(): Promise<void> {
    if (this.state === null || this.inFlight) return;
    this.inFlight = true;
    try {
      const server = await this.client.undo(this.state.sessionId);
      this.state = confirmState(this.state, server);
    } catch (err) {
      this.toast(String(err));
    } finally {
      this.inFlight = false;
      await this.refreshMoves();
      this.render();
    }
  }

  async probe(): Promise<void> {
    if (this.state === null) return;
    const id = this.state.sessionId;
    const badge = document.getElementById("independence");
    if (badge !== null) {
      try {
        const independent = await this.client.independence(id);
        badge.textContent = independenceLabel(independent);
      } catch (err) {
        badge.textContent =
          err instanceof ApiError && err.status === 413
            ? independenceLabel("too-large")
            : String(err);
      }
    }
    const widget = document.getElementById("component");
    if (widget !== null) {
      widget.textContent = "running...";
      const job = await this.client.componentJob(id);
      const result = await this.client.pollJob(id, job);
      widget.textContent = componentLabel(result);
    }
  }

  exportJson(): string {
    if (this.state === null) throw new Error("no session");
    return exportHistory(this.state);
  }

  private toast(text: string): void {
    const el = document.createElement("div");
    el.className = "toast";
    el.textContent = text;
    this.root.appendChild(el);
    setTimeout(() => el.remove(), 2500);
  }

  private render(): void {
    if (this.state === null) return;
    const support = new Set(this.state.support.map(cellKey));
    const highlighted = highlightedCells(this.state.moves);
    const entering = new Set(
      this.state.moves
        .map((m) => m.entering)
        .map(cellKey),
    );
    const view = viewportFor(this.state.support);
    const grid = document.createElement("div");
    grid.className = "grid";
    grid.style.gridTemplateColumns = `repeat(${view.width}, 24px)`;
    for (let row = view.height - 1; row >= 0; row--) {
      for (let col = 0; col < view.width; col++) {
        const cell: Cell = [view.x0 + col, view.y0 + row];
        const key = cellKey(cell);
        const el = document.createElement("div");
        el.className = "cell";
        if (support.has(key)) el.classList.add("filled");
        if (highlighted.has(key)) el.classList.add("highlight");
        if (entering.has(key) && !support.has(key)) el.classList.add("target");
        el.onclick = () => void this.clickCell(cell);
        el.onmouseenter = () => {
          for (const p of previewsFor(this.state?.moves ?? [], cell)) {
            const leave = grid.querySelector(
              `[data-key="${cellKey(p.leaving)}"]`,
            );
            const enter = grid.querySelector(
              `[data-key="${cellKey(p.entering)}"]`,
            );
            leave?.classList.add("dim");
            enter?.classList.add("glow");
          }
        };
        el.onmouseleave = () => {
          grid
            .querySelectorAll(".dim, .glow")
            .forEach((n) => n.classList.remove("dim", "glow"));
        };
        el.dataset.key = key;
        grid.appendChild(el);
      }
    }
    const history = document.createElement("ol");
    history.className = "history";
    for (const m of this.state.history) {
      const item = document.createElement("li");
      item.textContent = `g=${cellKey(m.g)} swap ${cellKey(m.a)} / ${cellKey(m.b)}`;
      history.appendChild(item);
    }
    this.root.replaceChildren(grid, history);
  }
}

export function mount(baseUrl: string, root: HTMLElement): BoardApp {
  const app = new BoardApp(new SolitaireClient(baseUrl), root);
  document.addEventListener("keydown", (ev) => {
    if ((ev.ctrlKey || ev.metaKey) && ev.key === "z") void app.undo();
  });
  void app.start();
  return app;
}
