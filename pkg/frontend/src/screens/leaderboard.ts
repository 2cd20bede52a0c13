/** Leaderboard screen: top contributors by total points. */

import type { ApiClient } from "../api.js";
import { NetworkError } from "../api.js";
import { clear, el } from "../dom.js";
import type { LeaderboardRow } from "../types.js";
import { clearOfflineBanner, showOfflineBanner } from "./banner.js";

export function renderLeaderboard(
  container: HTMLElement,
  rows: readonly LeaderboardRow[],
): void {
  clear(container);
  const list = el("ol", { class: "leaderboard" });
  for (const row of rows) {
    const item = el("li", { class: "leaderboard-row", "data-user-id": row.user_id });
    if (row.avatar_ref) {
      item.append(el("img", { class: "avatar", src: row.avatar_ref, alt: row.display_name }));
    }
    item.append(
      el("span", { class: "name" }, row.display_name),
      el("span", { class: "points" }, `${row.total_points} pts`),
    );
    list.append(item);
  }
  container.append(list);
}

export class LeaderboardScreen {
  private readonly board: HTMLElement;

  constructor(
    private readonly container: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.board = el("div", { class: "board" });
    container.append(this.board);
  }

  async show(n?: number): Promise<void> {
    let rows: LeaderboardRow[];
    try {
      rows = await this.api.leaderboard(n);
    } catch (exc) {
      if (exc instanceof NetworkError) {
        showOfflineBanner(this.container);
        return;
      }
      throw exc;
    }
    clearOfflineBanner(this.container);
    renderLeaderboard(this.board, rows);
  }
}
