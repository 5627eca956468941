import { describe, expect, it } from "vitest";

import { formatGauge, gaugeReading } from "../src/gauge.js";

describe("gaugeReading", () => {
  it("shows 83% toward attack for the 0.832/0.168 fixture", () => {
    const reading = gaugeReading(0.832, "attack");
    expect(reading.percent).toBe(83);
    expect(reading.tie).toBe(false);
    expect(formatGauge(reading)).toBe("83% toward attack");
  });

  it("rounds to the displayed precision", () => {
    expect(gaugeReading(0.168, "support").percent).toBe(17);
    expect(gaugeReading(0.995, "attack").percent).toBe(100);
    expect(gaugeReading(0.004, "attack").percent).toBe(0);
  });

  it("marks exact ties and renders them as 50/50", () => {
    const reading = gaugeReading(0.5, "support");
    expect(reading.tie).toBe(true);
    expect(formatGauge(reading)).toBe("50/50 (tie)");
  });

  it("honors an explicit tie flag from the server", () => {
    expect(gaugeReading(0.5000001, "attack", true).tie).toBe(true);
  });

  it("clamps out-of-range probabilities", () => {
    expect(gaugeReading(1.2, "attack").percent).toBe(100);
    expect(gaugeReading(-0.1, "attack").percent).toBe(0);
  });
});
