// Payload shapes for the readiness service API. Every rational value arrives
// both as a 2-decimal display string and as exact numerator/denominator
// fields; the client renders the strings and only uses num/den for bar
// geometry, never for arithmetic of its own.

export type NodeKind = "root" | "domain" | "class" | "control" | "issue";

export interface CatalogNode {
  id: string;
  name: string;
  kind: NodeKind;
  description?: string;
  children?: CatalogNode[];
}

export interface CatalogDoc {
  name: string;
  version: string;
  scale_max: number;
  root: CatalogNode;
}

export interface NodeScorePayload {
  node_id: string;
  achievement: string;
  achievement_num: number;
  achievement_den: number;
  priority: string;
  priority_num: number;
  priority_den: number;
  scored_leaves: number;
  total_leaves: number;
}

export interface AdviceEntry {
  node_id: string;
  label: string;
  achievement?: string;
  priority?: string;
}

export interface AdvicePayload {
  strongest_domains: AdviceEntry[];
  weakest_domains: AdviceEntry[];
  flagged_controls: AdviceEntry[];
  narrative: string;
}

export interface ReportPayload {
  catalog: { name: string; version: string };
  complete: boolean;
  scored_leaves: number;
  total_leaves: number;
  overall: NodeScorePayload | null;
  percentage: string | null;
  predicate: string | null;
  per_node: Record<string, NodeScorePayload>;
  advice: AdvicePayload;
}

export interface SessionSummary {
  session_id: string;
  user: string;
  catalog: { name: string; version: string };
  created_at: string;
  updated_at: string;
  experiments: number;
}

export interface ExperimentSummary {
  index: number;
  started_at: string;
  finished_at: string;
  duration_minutes: string;
  complete: boolean;
  grade: string | null;
}

export interface SessionDetail extends Omit<SessionSummary, "experiments"> {
  draft_scores: Record<string, number>;
  experiments: ExperimentSummary[];
}

export interface ScoresResponse {
  draft_scores: Record<string, number>;
  report: ReportPayload;
}

export interface FinishResponse {
  experiment: ExperimentSummary;
  report: ReportPayload;
}

export interface ProgressionRow {
  index: number;
  finished_at: string;
  grade: string | null;
  grade_num: number | null;
  grade_den: number | null;
  delta: string | null;
}

export interface HistogramBar {
  node_id: string;
  label: string;
  achievement: string | null;
  achievement_num: number | null;
  achievement_den: number | null;
  priority: string | null;
  priority_num: number | null;
  priority_den: number | null;
}

export interface HistogramPayload {
  level: "domain" | "control";
  bars: HistogramBar[];
}

// the five scale points, in answer order
export const SCALE_OPTIONS = [
  "0 = not implementing",
  "1 = below average",
  "2 = average",
  "3 = above average",
  "4 = excellent",
] as const;

export const PREDICATE_LABELS: Record<string, string> = {
  not_implementing: "not implementing",
  below_average: "below average",
  average: "average",
  above_average: "above average",
  excellent: "excellent",
};
