// Wire types for the play service's JSON snapshots.

export type Side = "A" | "B";
export type VoterColor = "brick" | "apple";

export interface Placement {
  i: number;
  player: Side;
  color: VoterColor;
}

export interface DistrictSnapshot {
  bricks: number;
  apples: number;
  placed: Placement[];
}

export interface LegalMove {
  district: number;
  color: VoterColor;
}

export interface Outline {
  i: number;
  outline: "green" | "red";
}

export interface Snapshot {
  config: {
    j: number;
    m: number;
    n: number;
    v: number;
    capacity: number;
    b_is_minority: boolean;
  };
  districts: DistrictSnapshot[];
  pools: { bricks: number; apples: number };
  to_move: Side | null;
  move_count: number;
  terminal: boolean;
  outcome: { b_districts: number; a_districts: number } | null;
  score: {
    q: number;
    total: number;
    u: number | null;
    witness: number[] | null;
  };
  fairness: { p: number; E: string | null };
  bounds: { q: number; f: string; n_guarantee: number } | null;
  legal_moves: LegalMove[];
  display: { row_order: number[]; outlines: Outline[] };
  human_side: Side;
  engine: string;
}

export interface CreateGameRequest {
  j: number;
  m: number;
  n: number;
  human_side: Side;
  engine: { kind: string; q?: number; seed?: number };
  score_q?: number;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}

export interface Hint {
  district: number;
  color: VoterColor;
  tag: string;
}
