/** Browser bootstrap: one active task per tab, driven by the controller. */

import { AnnotationApi } from "./api.js";
import { SessionController } from "./controller.js";
import { renderView } from "./dom.js";
import { applyIntent, keyboardIntent, type Intent } from "./intents.js";
import type { Guidelines } from "./types.js";
import { initialForm, type FormState, type ViewState } from "./viewmodel.js";

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("service") ?? "";
  const annotator = params.get("annotator") ?? "annotator-a";
  const root = document.getElementById("app")!;
  const api = new AnnotationApi(base);
  const controller = new SessionController(api, annotator);
  const guidelines: Guidelines = await api.guidelines();

  let view: ViewState = await controller.fetchNext();
  let form: FormState | null = view.kind === "task" ? initialForm(view) : null;
  let banner: string | null = null;
  let focusedSpan = 0;

  const redraw = () => {
    const key = view.kind === "task" ? view.guidelineKey : "verify";
    renderView(root, view, form, guidelines[key], banner, dispatch);
  };

  const dispatch = (intent: Intent) => {
    if (view.kind !== "task" || form === null) return;
    if (intent.type === "submit") {
      void submit();
      return;
    }
    form = applyIntent(form, intent);
    redraw();
  };

  const submit = async () => {
    if (view.kind !== "task" || form === null) return;
    const outcome = await controller.submitAndAdvance(form);
    banner = null;
    if (outcome.kind === "advanced") {
      view = outcome.next;
      form = view.kind === "task" ? initialForm(view) : null;
    } else if (outcome.kind === "conflict") {
      banner = outcome.message;
      view = await controller.fetchNext();
      form = view.kind === "task" ? initialForm(view) : null;
    } else if (outcome.kind === "retry") {
      banner = outcome.message;
      form = outcome.form; // preserved input
    } else {
      banner = outcome.message;
    }
    redraw();
  };

  window.addEventListener("keydown", (event) => {
    if (view.kind !== "task") return;
    if (event.target instanceof HTMLTextAreaElement) return;
    const intent = keyboardIntent(event.key, event.ctrlKey, view, focusedSpan);
    if (intent) {
      event.preventDefault();
      dispatch(intent);
    }
    if (event.key === "Tab" && view.verdicts.length > 0) {
      focusedSpan = (focusedSpan + 1) % view.verdicts.length;
    }
  });

  redraw();
}

void boot();
