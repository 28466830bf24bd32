// App wiring: one shared session, three views behind a tab bar.

import { ApiClient } from "./api.js";
import { ChatView } from "./chat.js";
import { FeedbackView } from "./feedback.js";
import { StatsView } from "./stats.js";
import { UiSession } from "./state.js";

export interface App {
  chat: ChatView;
  feedback: FeedbackView;
  stats: StatsView;
  session: UiSession;
  show(view: "chat" | "feedback" | "stats"): void;
}

export function mountApp(root: Document | HTMLElement, api: ApiClient): App {
  const byId = (id: string) => {
    const el = (root instanceof Document ? root : root.ownerDocument ?? document).getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  };

  const session = new UiSession();
  const chat = new ChatView(byId("view-chat"), api, session);
  const feedback = new FeedbackView(byId("view-feedback"), api, session);
  const stats = new StatsView(byId("view-stats"), api);

  const sections = {
    chat: byId("view-chat"),
    feedback: byId("view-feedback"),
    stats: byId("view-stats"),
  } as const;
  const buttons = {
    chat: byId("nav-chat"),
    feedback: byId("nav-feedback"),
    stats: byId("nav-stats"),
  } as const;

  function show(view: "chat" | "feedback" | "stats"): void {
    for (const name of ["chat", "feedback", "stats"] as const) {
      sections[name].hidden = name !== view;
      buttons[name].classList.toggle("active", name === view);
    }
    if (view === "feedback") feedback.refresh();
    if (view === "stats") void stats.refresh();
  }

  buttons.chat.addEventListener("click", () => show("chat"));
  buttons.feedback.addEventListener("click", () => show("feedback"));
  buttons.stats.addEventListener("click", () => show("stats"));

  return { chat, feedback, stats, session, show };
}

