/**
 * Client for the rating service endpoints. Submission keeps a durable
 * draft until the server acknowledges, so a network failure never loses a
 * finished session; the draft storage is injectable (localStorage in the
 * browser, a Map in tests).
 */

import type { Assignment, ClickLog, SessionPackage } from "./types.js";

export interface DraftStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export class OnePassRefusal extends Error {}

export class ApiClient {
  private readonly base: string;
  private readonly drafts: DraftStore;
  private readonly fetchFn: typeof fetch;

  constructor(base = "", drafts: DraftStore = localStorage, fetchFn: typeof fetch = fetch) {
    this.base = base.replace(/\/$/, "");
    this.drafts = drafts;
    this.fetchFn = fetchFn;
  }

  async assignments(evaluator: string): Promise<Assignment[]> {
    const resp = await this.fetchFn(
      `${this.base}/api/assignments?evaluator=${encodeURIComponent(evaluator)}`,
    );
    if (!resp.ok) throw new Error(`assignments failed: ${resp.status}`);
    const payload = await resp.json();
    return payload.pending as Assignment[];
  }

  /**
   * Fetch the next (or a specific) session package. A 409 means the
   * one-pass rule refused the document; surfaced as OnePassRefusal so the
   * UI can show a terminal message instead of retrying.
   */
  async fetchPackage(evaluator: string, assignment?: Assignment): Promise<SessionPackage> {
    const resp = await this.fetchFn(`${this.base}/api/package`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ evaluator, ...(assignment ?? {}) }),
    });
    if (resp.status === 409) {
      const payload = await resp.json().catch(() => ({ error: "document already seen" }));
      throw new OnePassRefusal(payload.error);
    }
    if (!resp.ok) throw new Error(`package fetch failed: ${resp.status}`);
    return (await resp.json()) as SessionPackage;
  }

  private draftKey(log: ClickLog): string {
    return `ssteval-draft:${log.evaluator}:${log.doc_id}:${log.system}:${log.latency}`;
  }

  /**
   * Submit a finished click log. The draft is stored before the request
   * and removed only on acknowledgement; returns true when the server took
   * it, false when it must be retried later (draft retained).
   */
  async submitLog(log: ClickLog): Promise<boolean> {
    const key = this.draftKey(log);
    this.drafts.setItem(key, JSON.stringify(log));
    try {
      const resp = await this.fetchFn(`${this.base}/api/ratings`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(log),
      });
      if (!resp.ok) {
        if (resp.status >= 400 && resp.status < 500) {
          // the server rejected the record itself; keep the draft for
          // inspection but report the reason
          const payload = await resp.json().catch(() => ({ error: `status ${resp.status}` }));
          throw new Error(payload.error);
        }
        return false;
      }
      this.drafts.removeItem(key);
      return true;
    } catch (err) {
      if (err instanceof Error && !(err instanceof TypeError)) throw err;
      return false; // network failure: draft stays for retry
    }
  }

  /** Drafts left over from failed submissions. */
  pendingDrafts(keys: string[]): ClickLog[] {
    const logs: ClickLog[] = [];
    for (const key of keys) {
      const raw = this.drafts.getItem(key);
      if (raw) logs.push(JSON.parse(raw) as ClickLog);
    }
    return logs;
  }
}
