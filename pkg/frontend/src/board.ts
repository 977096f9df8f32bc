// View-model logic for the solitaire board. Everything here is pure so it
// can be unit tested without a DOM; rendering lives in app.ts.

import type {
  AnnotatedMove,
  Cell,
  ComponentResult,
  CreateSessionBody,
  MoveJson,
  SessionState,
} from "./types.js";
import type { SolitaireClient } from "./client.js";

export function cellKey(c: Cell): string {
  return `${c[0]},${c[1]}`;
}

export function sameCell(a: Cell, b: Cell): boolean {
  return a[0] === b[0] && a[1] === b[1];
}

export interface Viewport {
  x0: number;
  y0: number;
  width: number;
  height: number;
}

/** Bounding box of the given cells plus a margin ring for entering cells. */
export function viewportFor(cells: Cell[], margin = 1): Viewport {
  if (cells.length === 0) {
    return { x0: -margin, y0: -margin, width: 2 * margin + 1, height: 2 * margin + 1 };
  }
  const xs = cells.map((c) => c[0]);
  const ys = cells.map((c) => c[1]);
  const x0 = Math.min(...xs) - margin;
  const y0 = Math.min(...ys) - margin;
  return {
    x0,
    y0,
    width: Math.max(...xs) + margin - x0 + 1,
    height: Math.max(...ys) + margin - y0 + 1,
  };
}

/** Cells participating in at least one legal move (both endpoints). */
export function highlightedCells(moves: AnnotatedMove[]): Set<string> {
  const out = new Set<string>();
  for (const m of moves) {
    out.add(cellKey(m.a));
    out.add(cellKey(m.b));
  }
  return out;
}

export interface MovePreview {
  move: AnnotatedMove;
  leaving: Cell;
  entering: Cell;
}

/** Moves touching a hovered cell, with their leaving/entering cells. */
export function previewsFor(moves: AnnotatedMove[], cell: Cell): MovePreview[] {
  return moves
    .filter((m) => sameCell(m.a, cell) || sameCell(m.b, cell))
    .map((m) => ({ move: m, leaving: m.leaving, entering: m.entering }));
}

export interface BoardState {
  sessionId: string;
  body: CreateSessionBody;
  support: Cell[];
  history: MoveJson[];
  moves: AnnotatedMove[];
  /** Snapshot taken before an optimistic apply; null when settled. */
  pending: { support: Cell[]; history: MoveJson[] } | null;
}

export function boardFromSession(
  body: CreateSessionBody,
  state: SessionState,
): BoardState {
  return {
    sessionId: state.id,
    body,
    support: state.support.members,
    history: state.history,
    moves: [],
    pending: null,
  };
}

/** Apply a move locally before the server answers. */
export function optimisticApply(state: BoardState, move: AnnotatedMove): BoardState {
  const support = state.support
    .filter((c) => !sameCell(c, move.leaving))
    .concat([move.entering]);
  return {
    ...state,
    support,
    history: state.history.concat([{ g: move.g, a: move.a, b: move.b }]),
    moves: [],
    pending: { support: state.support, history: state.history },
  };
}

/** Server confirmed: adopt its state verbatim. */
export function confirm(state: BoardState, server: SessionState): BoardState {
  return {
    ...state,
    support: server.support.members,
    history: server.history,
    pending: null,
  };
}

/** Server rejected (409): restore the snapshot. */
export function rollback(state: BoardState): BoardState {
  if (state.pending === null) return state;
  return {
    ...state,
    support: state.pending.support,
    history: state.pending.history,
    pending: null,
  };
}

export function componentLabel(result: ComponentResult): string {
  return result.exhausted
    ? String(result.size)
    : `budget exhausted at ${result.size}`;
}

export function independenceLabel(value: boolean | "too-large"): string {
  if (value === "too-large") return "too large for budget";
  return value ? "independent" : "not independent";
}

export interface HistoryExport {
  body: CreateSessionBody;
  history: MoveJson[];
}

/** The session recipe as JSON: enough to reproduce the final support. */
export function exportHistory(state: BoardState): string {
  const data: HistoryExport = { body: state.body, history: state.history };
  return JSON.stringify(data);
}

/** Rebuild a session from an export by replaying it through the API. */
export async function replayHistory(
  client: SolitaireClient,
  exported: string,
): Promise<SessionState> {
  const data = JSON.parse(exported) as HistoryExport;
  let state = await client.createSession(data.body);
  for (const move of data.history) {
    state = await client.applyMove(state.id, move);
  }
  return state;
}
