/**
 * DOM projection of the view model. Every interactive element dispatches an
 * intent; no workflow state lives here.
 */

import type { Intent } from "./intents.js";
import { validateForm, type FormState, type TaskViewModel, type ViewState } from "./viewmodel.js";

export type Dispatch = (intent: Intent) => void;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderView(
  root: HTMLElement,
  view: ViewState,
  form: FormState | null,
  guideline: string,
  banner: string | null,
  dispatch: Dispatch,
): void {
  root.replaceChildren();
  if (banner) {
    root.appendChild(el("div", "banner", banner));
  }
  if (view.kind === "error") {
    root.appendChild(el("div", "banner error", view.message));
    return; // schema mismatch: no partial render
  }
  if (view.kind === "empty") {
    root.appendChild(el("div", "empty", "No tasks pending. Well done!"));
    return;
  }
  const task = view;
  root.appendChild(el("h2", "stage", `Stage: ${task.stage} — item ${task.itemId}`));

  const sentence = el("p", "sentence");
  for (const segment of task.segments) {
    if (segment.highlighted) {
      const mark = el("mark", "span-highlight", segment.text);
      mark.dataset.spanIndex = String(segment.spanIndex);
      sentence.appendChild(mark);
    } else {
      sentence.appendChild(document.createTextNode(segment.text));
    }
  }
  root.appendChild(sentence);

  if (form) {
    root.appendChild(renderControls(task, form, dispatch));
    const validation = validateForm(form);
    const submit = el("button", "submit", "Submit");
    submit.disabled = !validation.canSubmit;
    if (validation.message) {
      root.appendChild(el("div", "field-error", validation.message));
    }
    submit.addEventListener("click", () => dispatch({ type: "submit" }));
    root.appendChild(submit);
  }

  const panel = el("details", "guidelines");
  panel.appendChild(el("summary", undefined, "Guidelines"));
  const pre = el("pre");
  pre.textContent = guideline;
  panel.appendChild(pre);
  root.appendChild(panel);
}

function renderControls(task: TaskViewModel, form: FormState, dispatch: Dispatch): HTMLElement {
  const box = el("div", "controls");
  if (form.kind === "verify") {
    form.verdicts.forEach((verdict, index) => {
      const row = el("div", "verdict-row");
      row.appendChild(el("span", "surface", task.verdicts[index].surface));
      const toggle = el("input") as HTMLInputElement;
      toggle.type = "checkbox";
      toggle.checked = verdict.is_figurative;
      toggle.addEventListener("change", () =>
        dispatch({ type: "toggle_figurative", spanIndex: index, value: toggle.checked }),
      );
      row.appendChild(toggle);
      if (verdict.is_figurative) {
        // Category and scope selectors only for spans marked figurative.
        row.appendChild(
          select(["metaphor", "idiom"], verdict.category ?? null, (value) =>
            dispatch({ type: "set_category", spanIndex: index, value: value as never }),
          ),
        );
        row.appendChild(
          select(["se_specific", "general"], verdict.scope ?? null, (value) =>
            dispatch({ type: "set_scope", spanIndex: index, value: value as never }),
          ),
        );
      }
      box.appendChild(row);
    });
  } else if (form.kind === "ems") {
    const area = el("textarea", "ems-input") as HTMLTextAreaElement;
    area.value = form.text;
    area.placeholder = "Rephrase without the figurative expression";
    area.addEventListener("input", () => dispatch({ type: "set_ems_text", value: area.value }));
    box.appendChild(area);
  } else {
    for (const card of task.dmsCards) {
      const button = el("button", "dms-card");
      button.dataset.choice = card.choice;
      if (form.choice === card.choice) button.classList.add("selected");
      button.appendChild(el("div", "card-label", card.label));
      if (card.text) button.appendChild(el("div", "card-text", card.text));
      button.addEventListener("click", () => dispatch({ type: "choose_card", choice: card.choice }));
      box.appendChild(button);
      if (card.choice === "none" && form.choice === "none") {
        const custom = el("textarea", "custom-input") as HTMLTextAreaElement;
        custom.value = form.customText;
        custom.placeholder = "Write your own different-meaning sentence";
        custom.addEventListener("input", () =>
          dispatch({ type: "set_custom_text", value: custom.value }),
        );
        box.appendChild(custom);
      }
    }
  }
  return box;
}

function select(
  options: string[],
  current: string | null,
  onChange: (value: string) => void,
): HTMLSelectElement {
  const node = document.createElement("select");
  const placeholder = document.createElement("option");
  placeholder.value = "";
  placeholder.textContent = "choose…";
  placeholder.disabled = true;
  placeholder.selected = current === null;
  node.appendChild(placeholder);
  for (const option of options) {
    const item = document.createElement("option");
    item.value = option;
    item.textContent = option;
    item.selected = option === current;
    node.appendChild(item);
  }
  node.addEventListener("change", () => onChange(node.value));
  return node;
}
