import type { AlternativeDoc, GroundResponse } from "./types";

export interface HistoryEntry {
  statement: string;
  verdict: GroundResponse;
  accepted?: AlternativeDoc;
}

/** One scene/region conversation.  Every entry is one /ground call. */
export class ConsoleSession {
  readonly history: HistoryEntry[] = [];

  constructor(
    readonly sceneId: string,
    readonly regionId: string,
  ) {}

  // append-only: entries are never removed or reordered
  record(statement: string, verdict: GroundResponse): HistoryEntry {
    const entry: HistoryEntry = { statement, verdict };
    this.history.push(entry);
    return entry;
  }
}
