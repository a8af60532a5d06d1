/**
 * Input intents: both mouse handlers and keyboard shortcuts reduce to the
 * same intent stream, so either input path drives identical form mutations
 * and, downstream, identical service POSTs.
 */

import type { Category, DmsChoice, Scope } from "./types.js";
import type { FormState, TaskViewModel } from "./viewmodel.js";

export type Intent =
  | { type: "toggle_figurative"; spanIndex: number; value: boolean }
  | { type: "set_category"; spanIndex: number; value: Category }
  | { type: "set_scope"; spanIndex: number; value: Scope }
  | { type: "set_ems_text"; value: string }
  | { type: "choose_card"; choice: DmsChoice }
  | { type: "set_custom_text"; value: string }
  | { type: "submit" };

/** Pure reducer from (form, intent) to the next form state. */
export function applyIntent(form: FormState, intent: Intent): FormState {
  switch (intent.type) {
    case "toggle_figurative": {
      if (form.kind !== "verify") return form;
      const verdicts = form.verdicts.map((v, i) =>
        i === intent.spanIndex
          ? {
              ...v,
              is_figurative: intent.value,
              category: intent.value ? v.category : null,
              scope: intent.value ? v.scope : null,
            }
          : v,
      );
      return { ...form, verdicts };
    }
    case "set_category": {
      if (form.kind !== "verify") return form;
      const verdicts = form.verdicts.map((v, i) =>
        i === intent.spanIndex ? { ...v, category: intent.value } : v,
      );
      return { ...form, verdicts };
    }
    case "set_scope": {
      if (form.kind !== "verify") return form;
      const verdicts = form.verdicts.map((v, i) =>
        i === intent.spanIndex ? { ...v, scope: intent.value } : v,
      );
      return { ...form, verdicts };
    }
    case "set_ems_text":
      return form.kind === "ems" ? { ...form, text: intent.value } : form;
    case "choose_card":
      return form.kind === "dms" ? { ...form, choice: intent.choice } : form;
    case "set_custom_text":
      return form.kind === "dms" ? { ...form, customText: intent.value } : form;
    case "submit":
      return form;
  }
}

/**
 * Map a keyboard event to an intent. Digits 1-4 pick candidate cards, 0 or n
 * picks the None card, f toggles the focused span, Ctrl+Enter submits.
 */
export function keyboardIntent(
  key: string,
  ctrl: boolean,
  view: TaskViewModel,
  focusedSpan: number,
): Intent | null {
  if (ctrl && key === "Enter") return { type: "submit" };
  if (view.stage === "dms_select" || view.stage === "adjudicate") {
    if (key >= "1" && key <= "4") {
      return { type: "choose_card", choice: `c${key}` as DmsChoice };
    }
    if (key === "0" || key.toLowerCase() === "n") {
      return { type: "choose_card", choice: "none" };
    }
  }
  if (view.stage === "verify") {
    if (key.toLowerCase() === "f") {
      return { type: "toggle_figurative", spanIndex: focusedSpan, value: true };
    }
    if (key.toLowerCase() === "r") {
      return { type: "toggle_figurative", spanIndex: focusedSpan, value: false };
    }
    if (key.toLowerCase() === "m") {
      return { type: "set_category", spanIndex: focusedSpan, value: "metaphor" };
    }
    if (key.toLowerCase() === "i") {
      return { type: "set_category", spanIndex: focusedSpan, value: "idiom" };
    }
    if (key.toLowerCase() === "s") {
      return { type: "set_scope", spanIndex: focusedSpan, value: "se_specific" };
    }
    if (key.toLowerCase() === "g") {
      return { type: "set_scope", spanIndex: focusedSpan, value: "general" };
    }
  }
  return null;
}
