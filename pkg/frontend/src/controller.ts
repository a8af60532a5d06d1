/**
 * Session controller: fetch a task, validate the form locally, submit to the
 * matching endpoint, advance to the next task. DOM-free, so both the browser
 * shell and the test suites drive the exact same logic.
 */

import { AnnotationApi, ApiError, NetworkError } from "./api.js";
import type { DmsRequest, Stage, VerifyRequest } from "./types.js";
import { renderTask, validateForm, type FormState, type ViewState } from "./viewmodel.js";

export type SubmitOutcome =
  | { kind: "advanced"; next: ViewState }
  | { kind: "blocked"; rule: string | null; message: string }
  | { kind: "conflict"; message: string }
  | { kind: "retry"; message: string; form: FormState };

export interface TransportLogEntry {
  method: string;
  path: string;
  body: unknown;
}

export class SessionController {
  /** Chronological record of successful POST bodies (for transcript tests). */
  readonly transcript: TransportLogEntry[] = [];

  constructor(
    private readonly api: AnnotationApi,
    readonly annotator: string,
  ) {}

  async fetchNext(stage?: Stage): Promise<ViewState> {
    const task = await this.api.nextTask(this.annotator, stage);
    return renderTask(task);
  }

  /**
   * Validate locally, POST to the endpoint matching the form's stage, and
   * fetch the next task on success. Service 409s surface as a refresh
   * prompt; network failures surface as a retry banner that preserves the
   * form state.
   */
  async submitAndAdvance(form: FormState, nextStage?: Stage): Promise<SubmitOutcome> {
    const validation = validateForm(form);
    if (!validation.canSubmit) {
      return { kind: "blocked", rule: validation.rule, message: validation.message ?? "" };
    }
    try {
      if (form.kind === "verify") {
        const request: VerifyRequest = { annotator: this.annotator, verdicts: form.verdicts };
        this.transcript.push({ method: "POST", path: `/tasks/${form.taskId}/verify`, body: request });
        await this.api.submitVerify(form.taskId, request);
      } else if (form.kind === "ems") {
        const request = { annotator: this.annotator, ems: form.text };
        this.transcript.push({ method: "POST", path: `/tasks/${form.taskId}/ems`, body: request });
        await this.api.submitEms(form.taskId, request);
      } else {
        const request: DmsRequest = {
          annotator: this.annotator,
          choice: form.choice!,
          custom_text: form.choice === "none" ? form.customText : null,
        };
        this.transcript.push({
          method: "POST",
          path: `/tasks/${form.taskId}/${form.stage === "adjudicate" ? "adjudicate" : "dms"}`,
          body: request,
        });
        if (form.stage === "adjudicate") {
          await this.api.submitAdjudication(form.taskId, request);
        } else {
          await this.api.submitDms(form.taskId, request);
        }
      }
    } catch (error) {
      this.transcript.pop(); // the recorded attempt did not land
      if (error instanceof ApiError && error.isConflict) {
        return { kind: "conflict", message: `${error.message} — refresh to fetch a live task.` };
      }
      if (error instanceof NetworkError) {
        return { kind: "retry", message: "Network failure; your input is preserved.", form };
      }
      if (error instanceof ApiError) {
        return { kind: "blocked", rule: error.rule, message: error.message };
      }
      throw error;
    }
    return { kind: "advanced", next: await this.fetchNext(nextStage) };
  }
}
