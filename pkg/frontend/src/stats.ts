// Stats view: seven-category histogram (plus the untagged bucket) and the
// feedback rating distribution, refreshed on demand.

import { ApiClient, CATEGORIES, StatsResponse } from "./api.js";

export class StatsView {
  private lastData: StatsResponse | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    root.innerHTML = `
      <div id="stats-banner"></div>
      <button id="stats-refresh" type="button">Aggiorna</button>
      <div id="stats-content"></div>`;
    (root.querySelector("#stats-refresh") as HTMLButtonElement).addEventListener("click", () => {
      void this.refresh();
    });
  }

  async refresh(): Promise<void> {
    const banner = this.root.querySelector("#stats-banner") as HTMLDivElement;
    try {
      const data = await this.api.getStats();
      for (const name of Object.keys(data.categories)) {
        if (!(CATEGORIES as readonly string[]).includes(name)) {
          console.error(`stats: unknown category from server: ${name}`);
          delete data.categories[name];
        }
      }
      this.lastData = data;
      banner.innerHTML = "";
    } catch {
      banner.innerHTML = "";
      const stale = document.createElement("div");
      stale.className = "notice error";
      stale.id = "stale-banner";
      stale.textContent = "Servizio non raggiungibile: i dati mostrati potrebbero non essere aggiornati.";
      banner.appendChild(stale);
    }
    this.render();
  }

  private render(): void {
    const content = this.root.querySelector("#stats-content") as HTMLDivElement;
    if (this.lastData === null) {
      content.innerHTML = `<p class="empty">Nessun dato disponibile.</p>`;
      return;
    }
    const data = this.lastData;
    const buckets: Array<[string, number]> = [
      ...CATEGORIES.map((name): [string, number] => [name, data.categories[name] ?? 0]),
      ["untagged", data.untagged],
    ];
    const max = Math.max(1, ...buckets.map(([, count]) => count));
    const bars = buckets
      .map(
        ([name, count]) => `
        <div class="bar-row" data-category="${name}">
          <span class="bar-label">${name}</span>
          <div class="bar" style="width: ${(100 * count) / max}%"></div>
          <span class="bar-count">${count}</span>
        </div>`,
      )
      .join("");
    const ratings = Object.entries(data.ratings)
      .map(([rating, count]) => `<li data-rating="${rating}">${rating}: ${count}</li>`)
      .join("");
    content.innerHTML = `
      <p id="stats-total">Domande totali: ${data.total_questions}</p>
      <div id="category-bars">${bars}</div>
      <p>Feedback ricevuti: <span id="stats-feedback">${data.feedback_count}</span></p>
      <ul id="rating-list">${ratings}</ul>`;
  }
}
