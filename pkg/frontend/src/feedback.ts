// Feedback form: respondent role, overall rating 1..5, per-answer
// Excellent/Good/Bad toggles aligned to the turns, optional comment.
// Submit stays disabled until both role and rating are chosen.

import { AnswerRating, ApiClient, FeedbackPayload, RespondentRole, ServiceError } from "./api.js";
import { UiSession } from "./state.js";

const ROLES: RespondentRole[] = ["SecondarySchoolStudent", "UniversityStudent", "Professor", "Other"];
const ANSWER_RATINGS: AnswerRating[] = ["Excellent", "Good", "Bad"];

export class FeedbackView {
  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly session: UiSession,
  ) {}

  /** Rebuild the form against the current conversation. */
  refresh(): void {
    if (!this.session.turns.length) {
      this.root.innerHTML = `<p class="empty">Nessuna conversazione da valutare: fai prima una domanda.</p>`;
      return;
    }
    const answerRows = this.session.turns
      .map(
        (turn, index) => `
        <fieldset class="answer-rating" data-turn="${index}">
          <legend>Risposta ${index + 1}</legend>
          ${ANSWER_RATINGS.map(
            (rating) => `
            <label><input type="radio" name="answer-${index}" value="${rating}"> ${rating}</label>`,
          ).join("")}
        </fieldset>`,
      )
      .join("");
    this.root.innerHTML = `
      <form id="feedback-form">
        <label for="role-select">Chi sei?</label>
        <select id="role-select">
          <option value="" selected disabled>Scegli un ruolo…</option>
          ${ROLES.map((role) => `<option value="${role}">${role}</option>`).join("")}
        </select>
        <fieldset id="overall-rating">
          <legend>Voto complessivo</legend>
          ${[1, 2, 3, 4, 5]
            .map((value) => `<label><input type="radio" name="overall" value="${value}"> ${value}</label>`)
            .join("")}
        </fieldset>
        ${answerRows}
        <label for="comment-box">Commento (facoltativo)</label>
        <textarea id="comment-box" rows="3"></textarea>
        <button id="feedback-submit" type="submit" disabled>Invia feedback</button>
        <div id="feedback-notices"></div>
      </form>`;
    const form = this.root.querySelector("#feedback-form") as HTMLFormElement;
    form.addEventListener("change", () => this.updateSubmitState());
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
  }

  private role(): RespondentRole | null {
    const select = this.root.querySelector("#role-select") as HTMLSelectElement | null;
    return select && select.value ? (select.value as RespondentRole) : null;
  }

  private overallRating(): number | null {
    const checked = this.root.querySelector('input[name="overall"]:checked') as HTMLInputElement | null;
    return checked ? Number(checked.value) : null;
  }

  private answerRatings(): AnswerRating[] {
    // Aligned prefix: stop at the first unrated answer.
    const ratings: AnswerRating[] = [];
    for (let index = 0; index < this.session.turns.length; index += 1) {
      const checked = this.root.querySelector(
        `input[name="answer-${index}"]:checked`,
      ) as HTMLInputElement | null;
      if (!checked) break;
      ratings.push(checked.value as AnswerRating);
    }
    return ratings;
  }

  private updateSubmitState(): void {
    const button = this.root.querySelector("#feedback-submit") as HTMLButtonElement | null;
    if (button) button.disabled = this.role() === null || this.overallRating() === null;
  }

  private notice(text: string, kind: "error" | "ok"): void {
    const box = this.root.querySelector("#feedback-notices") as HTMLDivElement | null;
    if (!box) return;
    box.innerHTML = "";
    const line = document.createElement("div");
    line.className = `notice ${kind === "ok" ? "info" : "error"}`;
    line.textContent = text;
    box.appendChild(line);
  }

  async submit(): Promise<void> {
    const role = this.role();
    const rating = this.overallRating();
    if (role === null || rating === null || this.session.sessionId === null) return;
    const comment = (this.root.querySelector("#comment-box") as HTMLTextAreaElement | null)?.value ?? "";
    const payload: FeedbackPayload = {
      respondent_role: role,
      overall_rating: rating,
      per_answer_ratings: this.answerRatings(),
      comment: comment || null,
    };
    try {
      await this.api.sendFeedback(this.session.sessionId, payload);
      this.notice("Grazie! Il tuo feedback è stato registrato.", "ok");
    } catch (error) {
      if (error instanceof ServiceError) {
        this.notice(`Il servizio ha rifiutato il feedback: ${error.message}`, "error");
      } else {
        this.notice("Problema di rete: feedback non inviato, riprova.", "error");
      }
    }
  }
}
