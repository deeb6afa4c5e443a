/** Wire types shared with the rating service (line-delimited JSON schemas). */

export interface CaptionEvent {
  t_ms: number;
  text: string;
}

export interface SessionPackage {
  evaluator: string;
  doc_id: string;
  system: string;
  latency: string;
  duration_ms: number;
  events: CaptionEvent[];
}

export interface RatingClick {
  t_ms: number;
  value: number;
}

/** Byte-compatible with the rating-log record the analysis pipeline reads. */
export interface ClickLog {
  evaluator: string;
  doc_id: string;
  system: string;
  latency: string;
  duration_ms: number;
  clicks: RatingClick[];
}

export interface Assignment {
  doc_id: string;
  system: string;
  latency: string;
}

export type ReplayPhase = "idle" | "playing" | "done";
