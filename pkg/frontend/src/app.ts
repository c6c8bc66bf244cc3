// Interactive play: new-game form, clickable board, hint, live panels,
// replay download and replay viewing. The app is a pure renderer over
// server snapshots plus an input mapper; one request is in flight at a
// time and input is disabled until the snapshot lands.

import { GameClient, ServiceError } from "./api.js";
import {
  boardModel,
  MalformedSnapshotError,
  renderBoard,
  replayToModel,
  validateSnapshot,
} from "./board.js";
import type { Snapshot, VoterColor } from "./types.js";

const ENGINE_KINDS = [
  "crack-majority",
  "ghost-minority",
  "mirror",
  "random",
  "first-legal",
];

export class GameApp {
  readonly root: HTMLElement;
  readonly client: GameClient;
  gameId: string | null = null;
  snapshot: Snapshot | null = null;
  selectedColor: VoterColor = "brick";
  busy = false;
  private pending: Promise<void> = Promise.resolve();
  private els!: {
    form: HTMLFormElement;
    banner: HTMLElement;
    status: HTMLElement;
    board: HTMLElement;
    panels: HTMLElement;
    colorPicker: HTMLElement;
    hintButton: HTMLButtonElement;
    hintLabel: HTMLElement;
    downloadButton: HTMLButtonElement;
    replayInput: HTMLInputElement;
  };

  constructor(root: HTMLElement, options: { baseUrl?: string; fetchImpl?: typeof fetch } = {}) {
    this.root = root;
    this.client = new GameClient(
      options.baseUrl ?? "",
      options.fetchImpl ?? fetch.bind(globalThis),
    );
    this.buildSkeleton();
  }

  /** Resolves once no request is in flight (test hook). */
  idle(): Promise<void> {
    return this.pending;
  }

  private get doc(): Document {
    return this.root.ownerDocument;
  }

  private buildSkeleton(): void {
    this.root.classList.add("rg-app");
    this.root.innerHTML = `
      <h1>Redistricting Ghost</h1>
      <form class="new-game">
        <label>districts <input name="j" type="number" value="4" min="1"></label>
        <label>m <input name="m" type="number" value="5" min="0"></label>
        <label>bricks <input name="n" type="number" value="19" min="0"></label>
        <label>you play
          <select name="side"><option value="B">B (bricks)</option><option value="A">A (apples)</option></select>
        </label>
        <label>engine
          <select name="engine">${ENGINE_KINDS.map((k) => `<option>${k}</option>`).join("")}</select>
        </label>
        <label>engine q <input name="q" type="number" placeholder="auto"></label>
        <label>seed <input name="seed" type="number" placeholder="-"></label>
        <button type="submit">new game</button>
      </form>
      <div class="banner" hidden></div>
      <div class="status"></div>
      <div class="color-picker" hidden>
        place:
        <label><input type="radio" name="color" value="brick" checked> brick <span class="pool-bricks"></span></label>
        <label><input type="radio" name="color" value="apple"> apple <span class="pool-apples"></span></label>
      </div>
      <div class="board"></div>
      <div class="panels"></div>
      <div class="toolbar" hidden>
        <button class="hint" type="button">hint</button>
        <span class="hint-label"></span>
        <button class="download" type="button">download replay</button>
        <label class="upload">view replay file <input type="file" accept=".replay,.txt"></label>
      </div>
    `;
    this.els = {
      form: this.root.querySelector(".new-game") as HTMLFormElement,
      banner: this.root.querySelector(".banner") as HTMLElement,
      status: this.root.querySelector(".status") as HTMLElement,
      board: this.root.querySelector(".board") as HTMLElement,
      panels: this.root.querySelector(".panels") as HTMLElement,
      colorPicker: this.root.querySelector(".color-picker") as HTMLElement,
      hintButton: this.root.querySelector(".hint") as HTMLButtonElement,
      hintLabel: this.root.querySelector(".hint-label") as HTMLElement,
      downloadButton: this.root.querySelector(".download") as HTMLButtonElement,
      replayInput: this.root.querySelector(".upload input") as HTMLInputElement,
    };
    this.els.form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.track(() => this.startGame());
    });
    this.els.colorPicker.addEventListener("change", () => {
      const checked = this.els.colorPicker.querySelector(
        "input[name=color]:checked",
      ) as HTMLInputElement;
      this.selectedColor = checked.value as VoterColor;
      this.renderSnapshot();
    });
    this.els.hintButton.addEventListener("click", () => {
      this.track(() => this.showHint());
    });
    this.els.downloadButton.addEventListener("click", () => {
      this.track(() => this.downloadReplay());
    });
    this.els.replayInput.addEventListener("change", () => {
      const file = this.els.replayInput.files?.[0];
      if (file) {
        this.track(async () => this.viewReplay(await file.text()));
      }
    });
  }

  private track(job: () => Promise<void> | void): Promise<void> {
    const run = async () => {
      this.busy = true;
      try {
        await job();
      } finally {
        this.busy = false;
      }
    };
    this.pending = this.pending.then(run, run);
    return this.pending;
  }

  private showError(code: string, message: string): void {
    this.els.banner.hidden = false;
    this.els.banner.textContent = `${code}: ${message}`;
  }

  private clearError(): void {
    this.els.banner.hidden = true;
    this.els.banner.textContent = "";
  }

  private async startGame(): Promise<void> {
    this.clearError();
    const data = new FormData(this.els.form);
    const engine: { kind: string; q?: number; seed?: number } = {
      kind: String(data.get("engine")),
    };
    if (data.get("q")) engine.q = Number(data.get("q"));
    if (data.get("seed")) engine.seed = Number(data.get("seed"));
    try {
      const created = await this.client.createGame({
        j: Number(data.get("j")),
        m: Number(data.get("m")),
        n: Number(data.get("n")),
        human_side: String(data.get("side")) as "A" | "B",
        engine,
      });
      this.gameId = created.id;
      this.acceptSnapshot(created.snapshot);
    } catch (error) {
      this.handleFailure(error);
    }
  }

  private acceptSnapshot(raw: unknown): void {
    try {
      this.snapshot = validateSnapshot(raw);
    } catch (error) {
      if (error instanceof MalformedSnapshotError) {
        this.showError("MALFORMED_SNAPSHOT", error.message);
        return; // error banner, no partial render
      }
      throw error;
    }
    this.renderSnapshot();
  }

  clickCell(district: number): Promise<void> {
    return this.track(async () => {
      if (!this.gameId || !this.snapshot || this.snapshot.terminal) return;
      this.clearError();
      try {
        const snapshot = await this.client.postMove(
          this.gameId,
          district,
          this.selectedColor,
        );
        this.acceptSnapshot(snapshot);
      } catch (error) {
        this.handleFailure(error, district);
      }
    });
  }

  private handleFailure(error: unknown, district?: number): void {
    if (error instanceof ServiceError) {
      this.showError(error.code, error.message);
      if (district !== undefined) this.shakeRow(district);
      return;
    }
    throw error;
  }

  private shakeRow(district: number): void {
    const row = this.els.board.querySelector(`[data-district="${district}"]`);
    row?.classList.add("shake");
  }

  private localIllegal(district: number): void {
    // click outside the legal mask: never construct the request
    const d = this.snapshot?.districts[district];
    const full =
      d !== undefined &&
      this.snapshot !== null &&
      d.bricks + d.apples >= this.snapshot.config.capacity;
    this.showError(
      full ? "DISTRICT_FULL" : "ILLEGAL_TARGET",
      full
        ? `district ${district} is full`
        : `no legal ${this.selectedColor} placement in district ${district}`,
    );
    this.shakeRow(district);
  }

  private async showHint(): Promise<void> {
    if (!this.gameId) return;
    this.clearError();
    try {
      const hint = await this.client.getHint(this.gameId);
      this.els.hintLabel.textContent =
        `suggests ${hint.color} in district ${hint.district} (${hint.tag})`;
    } catch (error) {
      this.handleFailure(error);
    }
  }

  private async downloadReplay(): Promise<void> {
    if (!this.gameId) return;
    try {
      const text = await this.client.getReplay(this.gameId);
      const doc = this.doc;
      const blob = new Blob([text], { type: "text/plain" });
      const anchor = doc.createElement("a");
      anchor.href = URL.createObjectURL(blob);
      anchor.download = `game-${this.gameId}.replay`;
      anchor.click();
      URL.revokeObjectURL(anchor.href);
    } catch (error) {
      this.handleFailure(error);
    }
  }

  viewReplay(text: string): void {
    this.clearError();
    try {
      const model = replayToModel(text);
      renderBoard(this.els.board, model, {});
      this.els.status.textContent = "viewing replay file (read-only)";
    } catch (error) {
      if (error instanceof MalformedSnapshotError) {
        this.showError("BAD_REPLAY", error.message);
        return;
      }
      throw error;
    }
  }

  private renderSnapshot(): void {
    const snapshot = this.snapshot;
    if (!snapshot) return;
    const model = boardModel(snapshot, this.selectedColor);
    renderBoard(this.els.board, model, {
      onCellClick: (district) => {
        if (!this.busy) void this.clickCell(district);
      },
      onIllegalClick: (district) => {
        if (!this.busy) this.localIllegal(district);
      },
    });
    this.els.board.classList.toggle("busy", this.busy);

    const pools = snapshot.pools;
    (this.els.colorPicker.querySelector(".pool-bricks") as HTMLElement).textContent =
      `(${pools.bricks} left)`;
    (this.els.colorPicker.querySelector(".pool-apples") as HTMLElement).textContent =
      `(${pools.apples} left)`;
    this.els.colorPicker.hidden = false;
    (this.root.querySelector(".toolbar") as HTMLElement).hidden = false;

    if (snapshot.terminal && snapshot.outcome) {
      const q = snapshot.outcome.b_districts;
      this.els.status.innerHTML =
        `<strong class="final-q">game over: B wins ${q} of ${snapshot.config.j}</strong>` +
        ` — proportional share p=${snapshot.fairness.p},` +
        ` efficiency gap E=${snapshot.fairness.E ?? "?"}`;
    } else {
      const turn = snapshot.to_move === snapshot.human_side ? "your turn" : "engine thinking";
      this.els.status.textContent =
        `move ${snapshot.move_count} of ${snapshot.config.v} — ${turn} ` +
        `(you are ${snapshot.human_side}, engine: ${snapshot.engine})`;
    }

    const score = snapshot.score;
    const bounds = snapshot.bounds;
    this.els.panels.innerHTML = `
      <div class="panel score">score toward q=${score.q}: <b>${score.total}</b>` +
      (score.u !== null ? ` (u=${score.u})` : "") +
      (score.witness ? ` Q={${score.witness.join(",")}}` : "") +
      `</div>
      <div class="panel fairness">p=${snapshot.fairness.p}` +
      (snapshot.fairness.E !== null ? `, E=${snapshot.fairness.E}` : "") +
      `</div>` +
      (bounds
        ? `<div class="panel bounds">q=${bounds.q}: denial below ${bounds.f}, guarantee at ${bounds.n_guarantee} bricks</div>`
        : "");
  }
}

/** Entry point for the browser bundle. */
export function mount(root: HTMLElement, baseUrl = ""): GameApp {
  return new GameApp(root, { baseUrl });
}
