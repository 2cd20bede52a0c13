/** Offline banner shown by the map screens when a fetch fails. */

import { el } from "../dom.js";

const BANNER_CLASS = "offline-banner";

export function showOfflineBanner(container: HTMLElement): void {
  if (container.querySelector(`.${BANNER_CLASS}`)) return;
  container.prepend(
    el("div", { class: BANNER_CLASS, role: "alert" }, "Offline: could not reach the server"),
  );
}

export function clearOfflineBanner(container: HTMLElement): void {
  container.querySelector(`.${BANNER_CLASS}`)?.remove();
}
