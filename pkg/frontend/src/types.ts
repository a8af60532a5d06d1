/** Wire types mirroring the annotation service's JSON schemas. */

export type Stage = "verify" | "ems" | "dms_select" | "adjudicate";

export type Category = "metaphor" | "idiom";
export type Scope = "se_specific" | "general";
export type DmsChoice = "c1" | "c2" | "c3" | "c4" | "none";

export interface Expression {
  surface: string;
  span: [number, number];
  category: Category;
  scope: Scope;
  verified: boolean;
}

export interface Item {
  id: string;
  original: string;
  expressions: Expression[];
  ems: string | null;
  dms: string | null;
  dms_candidates: string[];
  dms_choice: string | null;
  status: string;
  version: number;
}

export interface Task {
  task_id: string;
  item_id: string;
  stage: Stage;
  assignee: string;
  lease_expiry: number;
  item: Item;
}

export interface VerdictPayload {
  span: [number, number];
  is_figurative: boolean;
  category?: Category | null;
  scope?: Scope | null;
}

export interface VerifyRequest {
  annotator: string;
  verdicts: VerdictPayload[];
  expected_version?: number | null;
}

export interface EmsRequest {
  annotator: string;
  ems: string;
  expected_version?: number | null;
}

export interface DmsRequest {
  annotator: string;
  choice: DmsChoice;
  custom_text?: string | null;
  expected_version?: number | null;
}

export interface Guidelines {
  verify: string;
  ems: string;
  dms_select: string;
}

export interface StatsPayload {
  status_counts: Record<string, number>;
  open_adjudications: number;
  disagreement_count: number;
  adjudication_count: number;
  dataset: Record<string, number>;
  event_count: number;
}
