/**
 * Review submission form. The client never computes points: the banner
 * after a submit shows exactly what the server's RewardEvent said.
 */

import type { ApiClient } from "../api.js";
import { ApiError, NetworkError } from "../api.js";
import { clear, el } from "../dom.js";
import type { ViewState } from "../state.js";
import type { RewardEvent } from "../types.js";

/** Human form of a server reward: "+10 first review!", "+5", "+0 too soon". */
export function rewardMessage(reward: RewardEvent): string {
  switch (reward.rule_case) {
    case "first_review":
      return `+${reward.points} first review!`;
    case "spaced_review":
      return `+${reward.points}`;
    case "suppressed_review":
      return `+${reward.points} too soon`;
    case "registration":
      return `+${reward.points} welcome!`;
  }
}

export class ReviewFormScreen {
  private readonly form: HTMLFormElement;
  private readonly apIdInput: HTMLInputElement;
  private readonly ratingSelect: HTMLSelectElement;
  private readonly commentInput: HTMLTextAreaElement;
  private readonly status: HTMLElement;

  constructor(
    private readonly container: HTMLElement,
    private readonly api: ApiClient,
    private readonly state: ViewState,
    private readonly now: () => number = () => Math.floor(Date.now() / 1000),
  ) {
    this.apIdInput = el("input", { name: "ap_id", placeholder: "hotspot id" });
    this.ratingSelect = el("select", { name: "rating" });
    this.ratingSelect.append(el("option", { value: "" }, "rate it"));
    for (const n of [1, 2, 3, 4, 5]) {
      this.ratingSelect.append(el("option", { value: String(n) }, "★".repeat(n)));
    }
    this.commentInput = el("textarea", { name: "comment", placeholder: "comment (optional)" });
    this.status = el("div", { class: "form-status" });

    this.form = el("form", { class: "review-form" });
    this.form.append(
      el("label", {}, "Hotspot", this.apIdInput),
      el("label", {}, "Rating", this.ratingSelect),
      el("label", {}, "Comment", this.commentInput),
      el("button", { type: "submit" }, "Submit review"),
      this.status,
    );
    this.form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submit();
    });
    container.append(this.form);
  }

  private setStatus(cls: string, text: string): void {
    clear(this.status);
    this.status.append(el("div", { class: cls, role: "status" }, text));
  }

  /** Client-side gate, then POST /reviews and show the server's verdict. */
  async submit(): Promise<RewardEvent | null> {
    if (!this.state.sessionUserId) {
      this.setStatus("form-error", "register or pick a user before reviewing");
      return null;
    }
    const rating = this.ratingSelect.value;
    if (!rating) {
      this.setStatus("form-error", "choose a rating first");
      return null;
    }
    const apId = this.apIdInput.value.trim();
    if (!apId) {
      this.setStatus("form-error", "enter the hotspot id");
      return null;
    }

    try {
      const reward = await this.api.submitReview({
        user_id: this.state.sessionUserId,
        ap_id: apId,
        rating: Number(rating),
        at: this.now(),
        ...(this.commentInput.value.trim() ? { comment: this.commentInput.value.trim() } : {}),
      });
      this.setStatus("reward-banner", rewardMessage(reward));
      return reward;
    } catch (exc) {
      if (exc instanceof ApiError) {
        this.setStatus("form-error", `${exc.code}: ${exc.message}`);
        return null;
      }
      if (exc instanceof NetworkError) {
        this.setStatus("form-error", "offline: review not sent");
        return null;
      }
      throw exc;
    }
  }

  /** Prefill the hotspot id, e.g. from a tapped map marker. */
  setApId(apId: string): void {
    this.apIdInput.value = apId;
  }

  setRating(rating: number): void {
    this.ratingSelect.value = String(rating);
  }
}
