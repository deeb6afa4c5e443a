/** Browser driver: wires the replay engine to the DOM and the service. */

import { ApiClient, OnePassRefusal } from "./api.js";
import { ReplayEngine } from "./replay.js";
import type { ClickLog, SessionPackage } from "./types.js";

const VISIBLE_LINES = 3;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class RaterApp {
  private api = new ApiClient("");
  private engine: ReplayEngine | null = null;
  private lines: string[] = [];
  private raf = 0;
  private startedAt = 0;

  private status = el<HTMLDivElement>("status");
  private captions = el<HTMLDivElement>("captions");
  private evaluatorInput = el<HTMLInputElement>("evaluator");
  private startButton = el<HTMLButtonElement>("start");
  private buttons = Array.from(
    document.querySelectorAll<HTMLButtonElement>("button[data-value]"),
  );

  constructor() {
    this.startButton.addEventListener("click", () => void this.startNext());
    for (const button of this.buttons) {
      button.addEventListener("click", () =>
        this.press(Number(button.dataset.value)),
      );
    }
    document.addEventListener("keydown", (event) => {
      if (event.target === this.evaluatorInput) return;
      const value = Number(event.key);
      if (value >= 1 && value <= 4) this.press(value);
    });
  }

  private setStatus(text: string) {
    this.status.textContent = text;
  }

  private press(value: number) {
    if (this.engine?.press(value)) {
      this.setStatus(`rated ${value} at ${(this.engine.clock / 1000).toFixed(1)} s`);
    }
  }

  private renderCaption(text: string) {
    this.lines.push(text);
    const tail = this.lines.slice(-VISIBLE_LINES);
    this.captions.replaceChildren(
      ...tail.map((line) => {
        const p = document.createElement("p");
        p.textContent = line;
        return p;
      }),
    );
  }

  private async startNext() {
    const evaluator = this.evaluatorInput.value.trim();
    if (!evaluator) {
      this.setStatus("enter your evaluator id first");
      return;
    }
    this.startButton.disabled = true;
    try {
      const pkg = await this.api.fetchPackage(evaluator);
      this.replay(pkg);
    } catch (err) {
      this.startButton.disabled = false;
      if (err instanceof OnePassRefusal) {
        this.setStatus(`refused: ${err.message} (each document can be seen once)`);
      } else {
        this.setStatus(`could not fetch a session: ${String(err)}`);
      }
    }
  }

  private replay(pkg: SessionPackage) {
    this.lines = [];
    this.captions.replaceChildren();
    this.setStatus(
      `rating ${pkg.doc_id} / ${pkg.system} / ${pkg.latency} — press 1 (worst) to 4 (best)`,
    );
    this.engine = new ReplayEngine(pkg, {
      onCaption: (text) => this.renderCaption(text),
    });
    this.engine.start();
    this.startedAt = performance.now();
    const step = () => {
      const log = this.engine!.tick(performance.now() - this.startedAt);
      if (log) {
        void this.finish(log);
        return;
      }
      this.raf = requestAnimationFrame(step);
    };
    this.raf = requestAnimationFrame(step);
  }

  private async finish(log: ClickLog) {
    cancelAnimationFrame(this.raf);
    this.engine = null;
    if (log.clicks.length === 0) {
      this.setStatus("document ended with no ratings; nothing submitted");
      this.startButton.disabled = false;
      return;
    }
    this.setStatus("document ended, submitting…");
    await this.submitWithRetry(log);
    this.startButton.disabled = false;
  }

  private async submitWithRetry(log: ClickLog, attempts = 5) {
    for (let attempt = 1; attempt <= attempts; attempt += 1) {
      try {
        if (await this.api.submitLog(log)) {
          this.setStatus(`submitted ${log.clicks.length} ratings — thank you`);
          return;
        }
      } catch (err) {
        this.setStatus(`submission rejected: ${String(err)}`);
        return;
      }
      this.setStatus(`submission failed, retrying (${attempt}/${attempts})…`);
      await new Promise((resolve) => setTimeout(resolve, 1000 * attempt));
    }
    this.setStatus("submission failed; a local draft is kept for retry");
  }
}

new RaterApp();
