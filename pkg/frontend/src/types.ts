/** Wire types mirroring the review service's JSON payloads. */

export const CATEGORIES = [
  "UsefulInteresting",
  "UsefulNotInteresting",
  "Nonsensical",
] as const;

export type Category = (typeof CATEGORIES)[number];

export interface Candidate {
  text: string;
  confidence: number;
}

export interface ReviewItem {
  version: number;
  query_id: string;
  surface: string;
  kind: string;
  state: string;
  rule_reason: string | null;
  confidence: number | null;
  candidate: Candidate | null;
  answer: string | null;
  reverse_ok: boolean | null;
  matched_terms: string[];
  position: number;
  total: number;
}

export interface Coverage {
  theta: number;
  total: number;
  high_conf: number;
  coverage: number;
}

export interface Precision {
  attempted: number;
  correct: number;
  point: number;
  lo: number;
  hi: number;
  z: number;
}

export interface Metrics {
  coverage: Coverage;
  precision: Precision | null;
  utility_breakdown: Record<string, number>;
  rule_disagreements: number;
  gaps_count: number;
}

export interface Ack extends Metrics {
  version: number;
  ok: boolean;
}

export interface LabelPayload {
  query_id: string;
  category: Category;
  answer_correct: boolean | null;
  reviewer: string;
}
