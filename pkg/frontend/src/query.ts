/**
 * Region search over parsed snapshot entries, entirely client-side.
 * Matches the server's GET /aps semantics exactly so a cached snapshot
 * answers the same question the live route would have answered at
 * export time.
 */

import type { ApSummary, Bbox } from "./types.js";
import { bboxContains } from "./types.js";

/**
 * Entries inside the bbox, filtered to mean_rating >= minRating when
 * given (unrated APs never pass a rating filter), sorted descending by
 * mean_rating with unrated last, ties by ap_id.
 */
export function queryEntries(
  entries: readonly ApSummary[],
  bbox: Bbox,
  minRating: number | null = null,
): ApSummary[] {
  let hits = entries.filter((s) => bboxContains(bbox, s.ap.location));
  if (minRating !== null) {
    hits = hits.filter((s) => s.mean_rating !== null && s.mean_rating >= minRating);
  }
  // code-unit comparison on ap_id, same order as the server's sort
  hits.sort((a, b) => {
    const aUnrated = a.mean_rating === null ? 1 : 0;
    const bUnrated = b.mean_rating === null ? 1 : 0;
    if (aUnrated !== bUnrated) return aUnrated - bUnrated;
    const aMean = a.mean_rating ?? 0;
    const bMean = b.mean_rating ?? 0;
    if (aMean !== bMean) return bMean - aMean;
    return a.ap.ap_id < b.ap.ap_id ? -1 : a.ap.ap_id > b.ap.ap_id ? 1 : 0;
  });
  return hits;
}
