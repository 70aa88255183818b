/** Session state: active project, per-officer deck drafts (autosaved), the
 * pending what-if overlay and the last report. One what-if request is in
 * flight at a time; stale responses are discarded by sequence number. */

import type { ApiClient } from "./api.js";
import type { DeckPayload, WhatIfRequest, WhatIfResponse } from "./types.js";

export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export class MemoryStorage implements KeyValueStorage {
  private store = new Map<string, string>();
  getItem(key: string): string | null {
    return this.store.has(key) ? this.store.get(key)! : null;
  }
  setItem(key: string, value: string): void {
    this.store.set(key, value);
  }
  removeItem(key: string): void {
    this.store.delete(key);
  }
}

export interface OverlayState {
  dm: string | null;
  veto: Record<string, number>;
  evaluations: Record<string, Record<string, number | [number, number]>>;
  lambda: [number, number] | null;
  rule: string | null;
  seed: number | null;
  draws: number | null;
}

export function emptyOverlay(): OverlayState {
  return { dm: null, veto: {}, evaluations: {}, lambda: null, rule: null, seed: null, draws: null };
}

/** The overlay is always serializable to the what-if endpoint schema. */
export function overlayToRequest(overlay: OverlayState): WhatIfRequest {
  const body: WhatIfRequest = {};
  if (overlay.dm !== null) body.dm = overlay.dm;
  if (Object.keys(overlay.veto).length > 0) body.veto = { ...overlay.veto };
  if (Object.keys(overlay.evaluations).length > 0) {
    body.evaluations = Object.fromEntries(
      Object.entries(overlay.evaluations).map(([alt, patch]) => [alt, { ...patch }]),
    );
  }
  if (overlay.lambda !== null) body.lambda = [...overlay.lambda];
  if (overlay.rule !== null) body.rule = overlay.rule;
  if (overlay.seed !== null) body.seed = overlay.seed;
  if (overlay.draws !== null) body.draws = overlay.draws;
  return body;
}

export class Session {
  overlay: OverlayState = emptyOverlay();
  lastResponse: WhatIfResponse | null = null;
  /** sequence number of the most recent request; stale responses lose */
  private sequence = 0;
  private applied = 0;

  constructor(
    private readonly client: ApiClient,
    public projectId: string,
    private readonly storage: KeyValueStorage = new MemoryStorage(),
  ) {}

  // ---- deck drafts -------------------------------------------------------

  private deckKey(dm: string): string {
    return `risksort/${this.projectId}/deck/${dm}`;
  }

  saveDeckDraft(dm: string, deck: DeckPayload): void {
    this.storage.setItem(this.deckKey(dm), JSON.stringify(deck));
  }

  loadDeckDraft(dm: string): DeckPayload | null {
    const raw = this.storage.getItem(this.deckKey(dm));
    return raw === null ? null : (JSON.parse(raw) as DeckPayload);
  }

  discardDeckDraft(dm: string): void {
    this.storage.removeItem(this.deckKey(dm));
  }

  // ---- what-if steering --------------------------------------------------

  setVeto(criterion: string, threshold: number | null): void {
    if (threshold === null) {
      delete this.overlay.veto[criterion];
    } else {
      this.overlay.veto[criterion] = threshold;
    }
  }

  patchEvaluation(alternative: string, criterion: string,
                  value: number | [number, number] | null): void {
    const byAlt = this.overlay.evaluations;
    if (value === null) {
      if (byAlt[alternative]) {
        delete byAlt[alternative]![criterion];
        if (Object.keys(byAlt[alternative]!).length === 0) delete byAlt[alternative];
      }
      return;
    }
    (byAlt[alternative] ??= {})[criterion] = value;
  }

  setLambda(range: [number, number] | null): void {
    this.overlay.lambda = range;
  }

  setRule(rule: string | null): void {
    this.overlay.rule = rule;
  }

  /** Fire the pending overlay; resolves null when superseded by a newer
   * request (the stale response is discarded, state untouched). */
  async runWhatIf(): Promise<WhatIfResponse | null> {
    const ticket = ++this.sequence;
    const response = await this.client.whatif(this.projectId, overlayToRequest(this.overlay));
    if (ticket < this.sequence || ticket <= this.applied) {
      return null; // a newer overlay already went out
    }
    this.applied = ticket;
    this.lastResponse = response;
    return response;
  }
}
