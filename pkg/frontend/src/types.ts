/** Wire shapes for the loopback service's JSON API. */

export interface DeviceDoc {
  id: string;
  label: string;
  categories: number[];
}

export interface CategoryDoc {
  id: number;
  description: string;
  threat_ids: number[];
  lindunn_factors: string[];
  bonus: number;
}

export interface RiskFactorDoc {
  id: string;
  weight: number;
  question_text: string;
  justification: string;
  related_threats: number[];
  off_reductions: number[];
}

export interface ThreatDoc {
  id: number;
  stride: string;
  short_name: string;
  description: string;
  mitigation: string;
  vector: string;
  scores: { base: number; temporal: number; environmental: number };
}

export interface GuidanceLinkDoc {
  label: string;
  url: string;
}

export interface CatalogDoc {
  schema_version: number;
  devices: DeviceDoc[];
  categories: CategoryDoc[];
  risk_factors: RiskFactorDoc[];
  threats: ThreatDoc[];
  glossary: Record<string, string>;
  guidance_links: Record<string, GuidanceLinkDoc[]>;
}

export interface ReportScores {
  base: number;
  temporal: number;
  environmental: number;
  base_severity: string;
  temporal_severity: string;
  environmental_severity: string;
}

export interface ReportThreatRow {
  rank: number;
  threat_id: number;
  short_name: string;
  stride: string;
  description: string;
  mitigation: string;
  vector: string;
  scores: ReportScores;
  base_mean: number;
  additions: Array<[string, number]>;
  subtractions_applied: number;
  lindunn_bonus: number;
  zeroed_by_rule: boolean;
  final: number;
}

export interface ReportGuidanceRow {
  device: string;
  label: string;
  links: GuidanceLinkDoc[];
}

export interface ReportDoc {
  schema_version: number;
  input: {
    devices: string[];
    risk_factors: string[];
    connections: Array<[string, string]>;
    display_name?: string;
  };
  active_categories: Array<{
    id: number;
    description: string;
    bonus: number;
    lindunn_factors: string[];
  }>;
  threats: ReportThreatRow[];
  guidance: ReportGuidanceRow[];
}

/** Field-level validation errors from a 422 response. */
export interface ModelErrors {
  errors: Record<string, string[]>;
}
