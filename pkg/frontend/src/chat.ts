// Chat view: question input, conversation thread, source-document chips.
// Answers are rendered byte-for-byte via textContent; the UI never rewrites them.

import { ApiClient, ServiceError } from "./api.js";
import { UiSession } from "./state.js";

export class ChatView {
  private thread: HTMLDivElement;
  private input: HTMLInputElement;
  private sendButton: HTMLButtonElement;
  private noticeBox: HTMLDivElement;

  constructor(
    root: HTMLElement,
    private readonly api: ApiClient,
    private readonly session: UiSession,
  ) {
    root.innerHTML = `
      <div class="thread" id="thread"></div>
      <div class="notices" id="chat-notices"></div>
      <form id="ask-form" class="ask">
        <input id="ask-input" type="text" placeholder="Fai una domanda sull'università…" autocomplete="off">
        <button id="ask-send" type="submit">Invia</button>
      </form>`;
    this.thread = root.querySelector("#thread") as HTMLDivElement;
    this.input = root.querySelector("#ask-input") as HTMLInputElement;
    this.sendButton = root.querySelector("#ask-send") as HTMLButtonElement;
    this.noticeBox = root.querySelector("#chat-notices") as HTMLDivElement;
    const form = root.querySelector("#ask-form") as HTMLFormElement;
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.send();
    });
  }

  private setPending(pending: boolean): void {
    this.session.pending = pending;
    this.input.disabled = pending;
    this.sendButton.disabled = pending;
  }

  private notice(text: string, kind: "error" | "info"): void {
    this.noticeBox.innerHTML = "";
    const box = document.createElement("div");
    box.className = `notice ${kind}`;
    box.textContent = text;
    this.noticeBox.appendChild(box);
  }

  private clearNotice(): void {
    this.noticeBox.innerHTML = "";
  }

  private appendUser(question: string): void {
    const row = document.createElement("div");
    row.className = "msg user";
    const text = document.createElement("p");
    text.textContent = question;
    row.appendChild(text);
    this.thread.appendChild(row);
  }

  private appendAssistant(answer: string, sources: string[]): void {
    const row = document.createElement("div");
    row.className = "msg assistant";
    const text = document.createElement("p");
    text.className = "answer-text";
    text.textContent = answer;
    row.appendChild(text);
    if (sources.length) {
      const chips = document.createElement("div");
      chips.className = "chips";
      for (const source of sources) {
        const chip = document.createElement("span");
        chip.className = "chip";
        chip.textContent = source;
        chips.appendChild(chip);
      }
      row.appendChild(chips);
    }
    this.thread.appendChild(row);
  }

  async send(question?: string): Promise<void> {
    if (this.session.pending) return; // one in-flight question per session
    const text = (question ?? this.input.value).trim();
    if (!text) return;
    this.setPending(true);
    this.clearNotice();
    try {
      if (this.session.sessionId === null) {
        this.session.sessionId = await this.api.createSession();
      }
      this.appendUser(text);
      const reply = await this.api.sendMessage(this.session.sessionId, text);
      this.session.turns.push({ question: text, answer: reply.answer, sources: reply.sources, turn: reply.turn });
      this.appendAssistant(reply.answer, reply.sources);
      this.input.value = "";
    } catch (error) {
      if (error instanceof ServiceError && error.degraded) {
        this.notice("Servizio momentaneamente degradato: l'assistente non è raggiungibile. Riprova tra poco.", "error");
      } else if (error instanceof ServiceError) {
        this.notice(`Richiesta rifiutata dal servizio (${error.status}): ${error.message}`, "error");
      } else {
        this.notice("Problema di rete: risposta non ricevuta. Controlla la connessione e riprova.", "error");
      }
    } finally {
      this.setPending(false);
    }
  }
}
