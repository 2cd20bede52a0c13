/** Linear projection of geographic points onto a map pane. */

import type { Bbox, GeoPoint } from "../types.js";

/**
 * Percentage offsets of a point inside the viewport bbox, top-left
 * origin. Fine at city scale, which is all the advisory maps show.
 */
export function project(bbox: Bbox, p: GeoPoint): { leftPct: number; topPct: number } {
  const lonSpan = bbox.maxLon - bbox.minLon || 1;
  const latSpan = bbox.maxLat - bbox.minLat || 1;
  return {
    leftPct: ((p.lon - bbox.minLon) / lonSpan) * 100,
    topPct: ((bbox.maxLat - p.lat) / latSpan) * 100,
  };
}

export function placeMarker(node: HTMLElement, bbox: Bbox, p: GeoPoint): void {
  const { leftPct, topPct } = project(bbox, p);
  node.style.left = `${leftPct}%`;
  node.style.top = `${topPct}%`;
}
