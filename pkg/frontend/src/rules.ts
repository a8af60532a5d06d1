/**
 * Client-side pre-checks, one per service validation rule.
 *
 * The ids must stay in set equality with the service's GET /rules manifest;
 * the e2e suite asserts exactly that, so a rule added on either side
 * without its twin fails the build.
 */

import type { FormState } from "./viewmodel.js";

export interface RuleCheck {
  id: string;
  stage: string;
  /** Returns an error message when the form state violates the rule. */
  check(form: FormState): string | null;
}

export const CLIENT_RULES: RuleCheck[] = [
  {
    id: "dms_choice_none_requires_custom_text",
    stage: "dms_select",
    check(form) {
      if (form.kind !== "dms") return null;
      if (form.choice === "none" && form.customText.trim() === "") {
        return "Choosing None requires writing your own sentence.";
      }
      return null;
    },
  },
  {
    id: "dms_choice_candidate_forbids_custom_text",
    stage: "dms_select",
    check(form) {
      if (form.kind !== "dms") return null;
      if (form.choice !== null && form.choice !== "none" && form.customText.trim() !== "") {
        return "Custom text is only allowed with the None card.";
      }
      return null;
    },
  },
  {
    id: "verify_verdict_span_must_match_candidate",
    stage: "verify",
    check(form) {
      if (form.kind !== "verify") return null;
      for (const verdict of form.verdicts) {
        const known = form.candidateSpans.some(
          (s) => s[0] === verdict.span[0] && s[1] === verdict.span[1],
        );
        if (!known) return `Span ${verdict.span.join("-")} is not a candidate.`;
      }
      return null;
    },
  },
  {
    id: "verify_figurative_requires_category_and_scope",
    stage: "verify",
    check(form) {
      if (form.kind !== "verify") return null;
      for (const verdict of form.verdicts) {
        if (verdict.is_figurative && (!verdict.category || !verdict.scope)) {
          return "Pick a category and a scope for every figurative span.";
        }
      }
      return null;
    },
  },
  {
    id: "ems_text_required_nonempty",
    stage: "ems",
    check(form) {
      if (form.kind !== "ems") return null;
      if (form.text.trim() === "") return "Enter the rephrased sentence.";
      return null;
    },
  },
];

export const CLIENT_RULE_IDS = CLIENT_RULES.map((rule) => rule.id);

/** First violated rule's message, or null when the form passes all checks. */
export function firstViolation(form: FormState): { rule: string; message: string } | null {
  for (const rule of CLIENT_RULES) {
    const message = rule.check(form);
    if (message !== null) return { rule: rule.id, message };
  }
  return null;
}
