// Payload shapes of the solitaire session API.

export type Cell = [number, number];

export interface GroupSpec {
  kind: string;
  d?: number;
  n?: number;
}

export interface ShapeJson {
  group: GroupSpec;
  members: Cell[];
}

export interface MoveJson {
  g: Cell;
  a: Cell;
  b: Cell;
}

/** A server-listed move, annotated with which cell leaves and enters. */
export interface AnnotatedMove extends MoveJson {
  leaving: Cell;
  entering: Cell;
}

export interface SessionState {
  id: string;
  shape: ShapeJson;
  moveCells: ShapeJson;
  support: ShapeJson;
  history: MoveJson[];
  hasFamily: boolean;
}

export interface ComponentResult {
  size: number;
  exhausted: boolean;
  budget: number;
}

export interface CreateSessionBody {
  group: GroupSpec;
  shape: Cell[];
  support: Cell[];
  moveCells?: Cell[];
  family?: unknown;
}
