// Probability display for the assist panel: whole percent toward the
// intended relation, with exact ties shown as 50/50.

import type { Relation } from "./types.js";

export interface GaugeReading {
  percent: number; // whole percent toward the intended relation
  intended: Relation;
  tie: boolean;
}

export function gaugeReading(pIntended: number, intended: Relation, tie = false): GaugeReading {
  const clamped = Math.min(1, Math.max(0, pIntended));
  return { percent: Math.round(clamped * 100), intended, tie: tie || clamped === 0.5 };
}

export function formatGauge(reading: GaugeReading): string {
  if (reading.tie) {
    return "50/50 (tie)";
  }
  return `${reading.percent}% toward ${reading.intended}`;
}
