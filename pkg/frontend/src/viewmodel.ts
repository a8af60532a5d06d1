/**
 * Task payload -> view model. All rendering decisions live here so the DOM
 * layer stays a dumb projector and the logic is testable headlessly.
 *
 * The service stays the single source of truth: the view model never
 * advances workflow state locally, it only shapes the current task and
 * validates form state before a submit round-trips.
 */

import { firstViolation } from "./rules.js";
import type { Category, DmsChoice, Scope, Stage, Task, VerdictPayload } from "./types.js";

export interface TextSegment {
  text: string;
  highlighted: boolean;
  spanIndex: number | null;
}

export interface VerdictControl {
  span: [number, number];
  surface: string;
  isFigurative: boolean;
  category: Category | null;
  scope: Scope | null;
  /** Category/scope selectors appear only once the span is marked figurative. */
  showDetailSelectors: boolean;
}

export interface DmsCard {
  choice: DmsChoice;
  text: string;
  /** 1 = literal-use strategy, 2 = replacement strategy, null = None card. */
  strategyType: 1 | 2 | null;
  label: string;
}

export interface TaskViewModel {
  kind: "task";
  taskId: string;
  itemId: string;
  stage: Stage;
  segments: TextSegment[];
  verdicts: VerdictControl[];
  emsText: string;
  dmsCards: DmsCard[];
  guidelineKey: "verify" | "ems" | "dms_select";
  version: number;
}

export interface ErrorBanner {
  kind: "error";
  message: string;
}

export interface EmptyQueue {
  kind: "empty";
}

export type ViewState = TaskViewModel | ErrorBanner | EmptyQueue;

export type FormState =
  | {
      kind: "verify";
      taskId: string;
      verdicts: VerdictPayload[];
      candidateSpans: [number, number][];
    }
  | { kind: "ems"; taskId: string; text: string }
  | {
      kind: "dms";
      taskId: string;
      stage: "dms_select" | "adjudicate";
      choice: DmsChoice | null;
      customText: string;
    };

const STAGES: Stage[] = ["verify", "ems", "dms_select", "adjudicate"];

function validTask(payload: unknown): payload is Task {
  if (typeof payload !== "object" || payload === null) return false;
  const task = payload as Record<string, unknown>;
  if (typeof task.task_id !== "string" || typeof task.item_id !== "string") return false;
  if (!STAGES.includes(task.stage as Stage)) return false;
  const item = task.item as Record<string, unknown> | undefined;
  if (!item || typeof item.original !== "string" || !Array.isArray(item.expressions)) {
    return false;
  }
  for (const raw of item.expressions) {
    const expr = raw as Record<string, unknown>;
    const span = expr.span as unknown;
    if (
      !Array.isArray(span) ||
      span.length !== 2 ||
      typeof span[0] !== "number" ||
      typeof span[1] !== "number" ||
      span[0] < 0 ||
      span[1] <= span[0] ||
      span[1] > (item.original as string).length
    ) {
      return false;
    }
  }
  if (task.stage === "dms_select" || task.stage === "adjudicate") {
    if (!Array.isArray(item.dms_candidates) || item.dms_candidates.length !== 4) return false;
  }
  return true;
}

/** Split the sentence into plain and highlighted segments, in text order. */
export function highlightSegments(text: string, spans: [number, number][]): TextSegment[] {
  const ordered = spans
    .map((span, index) => ({ span, index }))
    .sort((a, b) => a.span[0] - b.span[0]);
  const segments: TextSegment[] = [];
  let cursor = 0;
  for (const { span, index } of ordered) {
    const [start, end] = span;
    if (start > cursor) {
      segments.push({ text: text.slice(cursor, start), highlighted: false, spanIndex: null });
    }
    segments.push({ text: text.slice(start, end), highlighted: true, spanIndex: index });
    cursor = Math.max(cursor, end);
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), highlighted: false, spanIndex: null });
  }
  return segments;
}

/**
 * Build the interactive view for one task payload. A payload that does not
 * match the service schema yields an error banner and nothing renders.
 */
export function renderTask(payload: unknown): ViewState {
  if (payload === null) return { kind: "empty" };
  if (!validTask(payload)) {
    return { kind: "error", message: "Task payload does not match the service schema." };
  }
  const task = payload;
  const spans = task.item.expressions.map((e) => e.span);
  const segments = highlightSegments(task.item.original, spans);

  const verdicts: VerdictControl[] = task.item.expressions.map((expr) => ({
    span: expr.span,
    surface: expr.surface,
    isFigurative: false,
    category: null,
    scope: null,
    showDetailSelectors: false,
  }));

  const dmsCards: DmsCard[] = [];
  if (task.stage === "dms_select" || task.stage === "adjudicate") {
    // Candidates arrive in strategy order: two literal-use, two replacement.
    task.item.dms_candidates.forEach((text, i) => {
      const strategyType = i < 2 ? 1 : 2;
      dmsCards.push({
        choice: `c${i + 1}` as DmsChoice,
        text,
        strategyType,
        label: `Type ${strategyType}`,
      });
    });
    dmsCards.push({ choice: "none", text: "", strategyType: null, label: "None (write your own)" });
  }

  return {
    kind: "task",
    taskId: task.task_id,
    itemId: task.item_id,
    stage: task.stage,
    segments,
    verdicts,
    emsText: "",
    dmsCards,
    guidelineKey: task.stage === "adjudicate" ? "dms_select" : task.stage,
    version: task.item.version,
  };
}

export interface Validation {
  canSubmit: boolean;
  rule: string | null;
  message: string | null;
}

/** Client-side pre-check mirroring the service's validation rules. */
export function validateForm(form: FormState): Validation {
  const violation = firstViolation(form);
  if (violation) return { canSubmit: false, rule: violation.rule, message: violation.message };
  if (form.kind === "dms" && form.choice === null) {
    return { canSubmit: false, rule: null, message: "Pick a candidate or None." };
  }
  return { canSubmit: true, rule: null, message: null };
}

/** Form state as the DOM would assemble it from a view model's controls. */
export function initialForm(view: TaskViewModel): FormState {
  if (view.stage === "verify") {
    return {
      kind: "verify",
      taskId: view.taskId,
      verdicts: view.verdicts.map((v) => ({
        span: v.span,
        is_figurative: v.isFigurative,
        category: v.category,
        scope: v.scope,
      })),
      candidateSpans: view.verdicts.map((v) => v.span),
    };
  }
  if (view.stage === "ems") {
    return { kind: "ems", taskId: view.taskId, text: view.emsText };
  }
  return {
    kind: "dms",
    taskId: view.taskId,
    stage: view.stage === "adjudicate" ? "adjudicate" : "dms_select",
    choice: null,
    customText: "",
  };
}

/** Toggle helper keeping detail selectors in sync with the figurative flag. */
export function setFigurative(control: VerdictControl, figurative: boolean): VerdictControl {
  return {
    ...control,
    isFigurative: figurative,
    showDetailSelectors: figurative,
    category: figurative ? control.category : null,
    scope: figurative ? control.scope : null,
  };
}
