// Board rendering: snapshots (or replay files) become a grid of cells.
//
// Conventions: one row per district, rows ordered by the server-provided
// display block (most bricks first, then fewest empty spaces); bricks fill
// from the left in play order, apples from the right; every voter shows the
// turn number it was played on (1-based); a brick played by A gets a green
// outline and an apple played by B a red one. The only client-side "logic"
// is masking clicks to the server's legal-move list.

import type {
  DistrictSnapshot,
  LegalMove,
  Placement,
  Snapshot,
  VoterColor,
} from "./types.js";

export class MalformedSnapshotError extends Error {}

export interface Cell {
  kind: VoterColor | "empty";
  moveNumber: number | null; // 1-based turn, voters only
  outline: "green" | "red" | null;
  clickable: boolean; // empty and legal for the selected color
}

export interface BoardRow {
  district: number;
  bricks: number;
  apples: number;
  cells: Cell[];
}

export interface BoardModel {
  capacity: number;
  rows: BoardRow[];
}

function isRecord(x: unknown): x is Record<string, unknown> {
  return typeof x === "object" && x !== null;
}

export function validateSnapshot(x: unknown): Snapshot {
  if (!isRecord(x)) throw new MalformedSnapshotError("snapshot is not an object");
  const config = x["config"];
  if (!isRecord(config)) throw new MalformedSnapshotError("missing config block");
  for (const key of ["j", "m", "n", "v", "capacity"]) {
    if (typeof config[key] !== "number") {
      throw new MalformedSnapshotError(`config.${key} missing or not a number`);
    }
  }
  const districts = x["districts"];
  if (!Array.isArray(districts) || districts.length !== config["j"]) {
    throw new MalformedSnapshotError("districts block does not match j");
  }
  for (const d of districts) {
    if (!isRecord(d) || typeof d["bricks"] !== "number" || !Array.isArray(d["placed"])) {
      throw new MalformedSnapshotError("bad district entry");
    }
  }
  const display = x["display"];
  if (!isRecord(display) || !Array.isArray(display["row_order"])) {
    throw new MalformedSnapshotError("missing display block");
  }
  if (!Array.isArray(x["legal_moves"])) {
    throw new MalformedSnapshotError("missing legal move mask");
  }
  return x as unknown as Snapshot;
}

function outlineFor(placement: Placement): "green" | "red" | null {
  if (placement.player === "A" && placement.color === "brick") return "green";
  if (placement.player === "B" && placement.color === "apple") return "red";
  return null;
}

function rowCells(
  district: DistrictSnapshot,
  capacity: number,
  clickable: boolean,
): Cell[] {
  const cells: Cell[] = Array.from({ length: capacity }, () => ({
    kind: "empty" as const,
    moveNumber: null,
    outline: null,
    clickable,
  }));
  const bricks = district.placed
    .filter((p) => p.color === "brick")
    .sort((a, b) => a.i - b.i);
  const apples = district.placed
    .filter((p) => p.color === "apple")
    .sort((a, b) => a.i - b.i);
  bricks.forEach((p, index) => {
    cells[index] = {
      kind: "brick",
      moveNumber: p.i + 1,
      outline: outlineFor(p),
      clickable: false,
    };
  });
  apples.forEach((p, index) => {
    cells[capacity - 1 - index] = {
      kind: "apple",
      moveNumber: p.i + 1,
      outline: outlineFor(p),
      clickable: false,
    };
  });
  return cells;
}

/** Same row comparator the service uses; needed when rendering replay
 * files, where no display block is available. */
export function displayRowOrder(
  districts: { bricks: number; apples: number }[],
  capacity: number,
): number[] {
  return districts
    .map((d, index) => index)
    .sort((a, b) => {
      const da = districts[a]!;
      const db = districts[b]!;
      if (db.bricks !== da.bricks) return db.bricks - da.bricks;
      const emptyA = capacity - da.bricks - da.apples;
      const emptyB = capacity - db.bricks - db.apples;
      if (emptyA !== emptyB) return emptyA - emptyB;
      return a - b;
    });
}

export function boardModel(
  snapshot: Snapshot,
  selectedColor: VoterColor,
): BoardModel {
  const capacity = snapshot.config.capacity;
  const legal = new Set(
    snapshot.legal_moves
      .filter((mv: LegalMove) => mv.color === selectedColor)
      .map((mv) => mv.district),
  );
  const humanTurn = !snapshot.terminal && snapshot.to_move === snapshot.human_side;
  const rows = snapshot.display.row_order.map((district) => {
    const d = snapshot.districts[district];
    if (d === undefined) {
      throw new MalformedSnapshotError(`row order names district ${district}`);
    }
    return {
      district,
      bricks: d.bricks,
      apples: d.apples,
      cells: rowCells(d, capacity, humanTurn && legal.has(district)),
    };
  });
  return { capacity, rows };
}

/** Board model straight from a replay document (header + mv lines), for
 * the replay viewer. Cell and row assignment match the live rendering of
 * the same game exactly. */
export function replayToModel(text: string): BoardModel {
  let j = -1;
  let m = -1;
  const placed: Placement[][] = [];
  for (const rawLine of text.split("\n")) {
    const line = rawLine.trim();
    if (!line || line.startsWith("#")) continue;
    const [kind, ...tokens] = line.split(/\s+/);
    const fields = new Map<string, string>();
    for (const token of tokens) {
      const eq = token.indexOf("=");
      if (eq < 0) throw new MalformedSnapshotError(`bad replay field ${token}`);
      fields.set(token.slice(0, eq), token.slice(eq + 1));
    }
    if (kind === "cfg") {
      j = Number(fields.get("j"));
      m = Number(fields.get("m"));
      if (!Number.isInteger(j) || !Number.isInteger(m)) {
        throw new MalformedSnapshotError("bad replay header");
      }
      for (let index = 0; index < j; index += 1) placed.push([]);
    } else if (kind === "mv") {
      const district = Number(fields.get("d"));
      const bucket = placed[district];
      if (bucket === undefined) {
        throw new MalformedSnapshotError(`replay move names district ${district}`);
      }
      bucket.push({
        i: Number(fields.get("i")),
        player: fields.get("p") as Placement["player"],
        color: fields.get("c") as VoterColor,
      });
    }
  }
  if (j < 0) throw new MalformedSnapshotError("replay has no cfg line");
  const capacity = 2 * m + 1;
  const districts = placed.map((list) => ({
    bricks: list.filter((p) => p.color === "brick").length,
    apples: list.filter((p) => p.color === "apple").length,
    placed: list,
  }));
  const rows = displayRowOrder(districts, capacity).map((district) => ({
    district,
    bricks: districts[district]!.bricks,
    apples: districts[district]!.apples,
    cells: rowCells(districts[district]!, capacity, false),
  }));
  return { capacity, rows };
}

export interface RenderHandlers {
  onCellClick?: (district: number) => void;
  onIllegalClick?: (district: number) => void;
}

export function renderBoard(
  container: HTMLElement,
  model: BoardModel,
  handlers: RenderHandlers = {},
): void {
  container.textContent = "";
  for (const row of model.rows) {
    const rowEl = container.ownerDocument.createElement("div");
    rowEl.className = "board-row";
    rowEl.dataset["district"] = String(row.district);
    for (const cell of row.cells) {
      const cellEl = container.ownerDocument.createElement("div");
      cellEl.className = `cell ${cell.kind}`;
      if (cell.outline) cellEl.classList.add(`outline-${cell.outline}`);
      if (cell.clickable) cellEl.classList.add("legal");
      if (cell.moveNumber !== null) {
        const label = container.ownerDocument.createElement("span");
        label.className = "move-number";
        label.textContent = String(cell.moveNumber);
        cellEl.appendChild(label);
      }
      if (cell.kind === "empty") {
        cellEl.addEventListener("click", () => {
          if (cell.clickable) {
            handlers.onCellClick?.(row.district);
          } else {
            handlers.onIllegalClick?.(row.district);
          }
        });
      }
      rowEl.appendChild(cellEl);
    }
    container.appendChild(rowEl);
  }
}
