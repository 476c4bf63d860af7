/**
 * Chart model for the REVIEW mode. The client never recomputes clinical
 * values: trend lines are the server's fit evaluated at the session
 * indices, and the latest summary is displayed verbatim.
 */
import type { ProgressReport } from "./messages.js";

export interface ChartPoint {
  x: number;
  y: number;
}

export interface MetricChart {
  metric: string;
  slope: number;
  intercept: number;
  points: ChartPoint[];
}

export interface ProgressViewModel {
  empty: boolean;
  patientId: string | null;
  charts: MetricChart[];
  latest: Record<string, string>;
  suggestions: string[];
}

export function buildProgressView(report: ProgressReport | null): ProgressViewModel {
  if (report === null) {
    return { empty: true, patientId: null, charts: [], latest: {}, suggestions: [] };
  }
  const charts: MetricChart[] = Object.entries(report.trends).map(([metric, trend]) => ({
    metric,
    slope: trend.slope,
    intercept: trend.intercept,
    points: Array.from({ length: trend.n_points }, (_, i) => ({
      x: i,
      y: trend.intercept + trend.slope * i,
    })),
  }));
  const latest: Record<string, string> = {};
  for (const [key, value] of Object.entries(report.latest)) {
    latest[key] = value === null ? "-" : String(value);
  }
  return {
    empty: false,
    patientId: report.patient_id,
    charts,
    latest,
    suggestions: [...report.suggestions],
  };
}
