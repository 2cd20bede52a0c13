/**
 * Wire types for the advisory service HTTP API (/api/v1).
 * These mirror the server's JSON shapes field for field; nothing here
 * is computed client-side.
 */

export interface GeoPoint {
  lat: number;
  lon: number;
}

/** Inclusive lat/lon bounds. Wire form: `min_lat,min_lon,max_lat,max_lon`. */
export interface Bbox {
  minLat: number;
  minLon: number;
  maxLat: number;
  maxLon: number;
}

export function bboxContains(b: Bbox, p: GeoPoint): boolean {
  return (
    b.minLat <= p.lat && p.lat <= b.maxLat && b.minLon <= p.lon && p.lon <= b.maxLon
  );
}

export function bboxToWire(b: Bbox): string {
  return [b.minLat, b.minLon, b.maxLat, b.maxLon].join(",");
}

export interface Viewport {
  bbox: Bbox;
  zoom: number; // integer, 1..20
}

export interface PlaceTag {
  street_address: string;
  floor: string | null;
  room: string | null;
}

export interface NetMetrics {
  rssi_dbm: number;
  link_speed_mbps: number;
  upload_mbps: number;
  download_mbps: number;
}

export interface AccessPoint {
  ap_id: string;
  bssid: string | null; // null for imported (ext:) hotspots
  ssid: string;
  location: GeoPoint;
  place: PlaceTag | null;
  source: "crowdsensed" | "external";
}

/** One element of the GET /aps response. */
export interface ApSummary {
  ap: AccessPoint;
  review_count: number;
  mean_rating: number | null; // present iff review_count > 0
  latest_metrics: NetMetrics | null;
  latest_review_at: number | null;
  owner_user_id: string | null;
}

/** One element of the GET /clusters response. */
export interface Cluster {
  cluster_id: string;
  centroid: GeoPoint;
  member_ap_ids: string[];
  size: number;
}

/** One element of the GET /leaderboard response. */
export interface LeaderboardRow {
  user_id: string;
  display_name: string;
  avatar_ref: string | null;
  total_points: number;
}

/** One element of the GET /ownership response. */
export interface OwnershipRow {
  ap_id: string;
  owner_user_id: string | null;
  avatar_ref: string | null;
}

/** Body of a 201 from POST /users or POST /reviews. */
export interface RewardEvent {
  event_id: string;
  user_id: string;
  ap_id: string | null;
  at: number;
  points: number;
  rule_case: "registration" | "first_review" | "spaced_review" | "suppressed_review";
}

/** Fields the review form sends to POST /reviews. */
export interface ReviewRequest {
  user_id: string;
  rating: number;
  at: number;
  ap_id?: string;
  ap?: {
    bssid?: string;
    ssid: string;
    lat: number;
    lon: number;
    street_address?: string;
    floor?: string;
    room?: string;
  };
  comment?: string;
  metrics?: NetMetrics;
  review_id?: string;
}
