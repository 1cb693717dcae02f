import type { CatalogDoc, ReportPayload } from "./types.js";

export type TabName = "assessment" | "histogram" | "summarize";

export interface ClientState {
  user: string | null;
  sessionId: string | null;
  catalog: CatalogDoc | null;
  draftScores: Record<string, number>;
  lastReport: ReportPayload | null;
  activeTab: TabName;
  histogramLevel: "domain" | "control";
  serverError: string | null;
}

export function createState(): ClientState {
  return {
    user: null,
    sessionId: null,
    catalog: null,
    draftScores: {},
    lastReport: null,
    activeTab: "assessment",
    histogramLevel: "domain",
    serverError: null,
  };
}

// progress text comes from the server's own counts, not a local tally
export function progressText(state: ClientState): string {
  const report = state.lastReport;
  if (!report) return "loading...";
  return `${report.scored_leaves}/${report.total_leaves} answered`;
}
