/**
 * Replay engine: advances a session package's captions against a clock and
 * records 1-4 ratings with timestamps. Deliberately DOM-free so a scripted
 * clock can drive it in tests; the browser driver feeds it
 * requestAnimationFrame ticks.
 *
 * One-pass semantics: no pause, no rewind, no re-showing past captions.
 */

import type { ClickLog, RatingClick, ReplayPhase, SessionPackage } from "./types.js";

export const DEBOUNCE_MS = 150;

export interface ReplayListeners {
  /** New caption became visible. */
  onCaption?: (text: string, index: number) => void;
  onPhase?: (phase: ReplayPhase) => void;
  /** A click was accepted (after debouncing). */
  onClick?: (click: RatingClick) => void;
}

export class ReplayEngine {
  private readonly pkg: SessionPackage;
  private readonly listeners: ReplayListeners;
  private clockMs = 0;
  private nextEvent = 0;
  private phase: ReplayPhase = "idle";
  private clicks: RatingClick[] = [];

  constructor(pkg: SessionPackage, listeners: ReplayListeners = {}) {
    this.pkg = pkg;
    this.listeners = listeners;
  }

  get currentPhase(): ReplayPhase {
    return this.phase;
  }

  get clock(): number {
    return this.clockMs;
  }

  /** Captions shown so far, oldest first. */
  get visibleCaptions(): string[] {
    return this.pkg.events.slice(0, this.nextEvent).map((e) => e.text);
  }

  start(): void {
    if (this.phase !== "idle") return;
    this.phase = "playing";
    this.listeners.onPhase?.("playing");
    this.tick(0);
  }

  /**
   * Advance the clock to `nowMs` (milliseconds since start). Emits every
   * caption whose time has come; the clock never moves backwards. Returns
   * the finished log when the document ends, null while playing.
   */
  tick(nowMs: number): ClickLog | null {
    if (this.phase !== "playing") return this.phase === "done" ? this.log() : null;
    this.clockMs = Math.max(this.clockMs, nowMs);
    const events = this.pkg.events;
    while (this.nextEvent < events.length && events[this.nextEvent].t_ms <= this.clockMs) {
      this.listeners.onCaption?.(events[this.nextEvent].text, this.nextEvent);
      this.nextEvent += 1;
    }
    if (this.clockMs >= this.pkg.duration_ms) {
      this.phase = "done";
      this.listeners.onPhase?.("done");
      return this.log();
    }
    return null;
  }

  /**
   * Record a rating press. Values outside 1..4 are ignored, as is any
   * press outside the playing phase. Presses within DEBOUNCE_MS of the
   * previous one replace it (last wins), keeping click times strictly
   * increasing.
   */
  press(value: number): boolean {
    if (this.phase !== "playing") return false;
    if (!Number.isInteger(value) || value < 1 || value > 4) return false;
    const t = Math.min(Math.round(this.clockMs), this.pkg.duration_ms);
    const last = this.clicks[this.clicks.length - 1];
    if (last && t - last.t_ms < DEBOUNCE_MS) {
      this.clicks[this.clicks.length - 1] = { t_ms: Math.max(t, last.t_ms), value };
    } else {
      this.clicks.push({ t_ms: t, value });
    }
    this.listeners.onClick?.(this.clicks[this.clicks.length - 1]);
    return true;
  }

  /** The click log in the service's record schema. */
  log(): ClickLog {
    return {
      evaluator: this.pkg.evaluator,
      doc_id: this.pkg.doc_id,
      system: this.pkg.system,
      latency: this.pkg.latency,
      duration_ms: this.pkg.duration_ms,
      clicks: [...this.clicks],
    };
  }
}

/** Plain average of the click values (the CR definition). */
export function cr(log: ClickLog): number {
  if (log.clicks.length === 0) throw new Error("unrated session");
  return log.clicks.reduce((acc, c) => acc + c.value, 0) / log.clicks.length;
}

/**
 * Interval-weighted average (the CRi definition): each value holds until
 * the next click, the last until the end of the document.
 */
export function cri(log: ClickLog): number {
  const clicks = log.clicks;
  if (clicks.length === 0) throw new Error("unrated session");
  const tFirst = clicks[0].t_ms;
  if (tFirst >= log.duration_ms) return clicks[clicks.length - 1].value;
  let weighted = 0;
  for (let i = 0; i < clicks.length - 1; i += 1) {
    weighted += (clicks[i + 1].t_ms - clicks[i].t_ms) * clicks[i].value;
  }
  weighted += (log.duration_ms - clicks[clicks.length - 1].t_ms) * clicks[clicks.length - 1].value;
  return weighted / (log.duration_ms - tFirst);
}
