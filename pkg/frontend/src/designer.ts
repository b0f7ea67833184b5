import { PatternDraft, validateDraft } from "./protocol.js";
import { DEFAULT_PITCH_M, spatialWave, wavelengthFromDelay } from "./wavelength.js";

export interface PreviewPoint { x: number; y: number; }

export interface PreviewModel {
    errors: string[];
    wavelengthM: number | null;   // null means all-in-phase (infinite)
    wavelengthLabel: string;
    scheduleLengthS: number;
    scheduleSamples: number;
    points: PreviewPoint[];       // spatial wave snapshot at t = 0
}

/**
 * Everything the design panel shows for a draft.  Purely local: the
 * wavelength mirror and the spatial-wave formula, no network involved.
 */
export function buildPreview(draft: PatternDraft,
                             pitchM = DEFAULT_PITCH_M,
                             samples = 200): PreviewModel {
    const errors = validateDraft(draft);
    if (errors.length > 0) {
        return { errors, wavelengthM: null, wavelengthLabel: "—",
                 scheduleLengthS: 0, scheduleSamples: 0, points: [] };
    }
    const delay = draft.kind === "peristaltic" ? draft.onsetDelayS : 0;
    const lam = draft.kind === "sequential_squeeze"
        ? 2 * pitchM
        : wavelengthFromDelay(pitchM, draft.frequencyHz, delay);
    const span = (draft.numActuators - 1) * pitchM;
    const points: PreviewPoint[] = [];
    for (let i = 0; i < samples; i += 1) {
        const x = (span * i) / (samples - 1);
        points.push({
            x,
            y: spatialWave(draft.amplitudeFraction, lam, draft.frequencyHz,
                           x, 0),
        });
    }
    const label = Number.isFinite(lam)
        ? `${(lam * 100).toFixed(1)} cm`
        : "all-in-phase (infinite)";
    const scheduleSamples = Math.max(
        1, Math.round(draft.durationS / draft.samplePeriodS));
    return {
        errors: [],
        wavelengthM: Number.isFinite(lam) ? lam : null,
        wavelengthLabel: label,
        scheduleLengthS: draft.durationS,
        scheduleSamples,
        points,
    };
}

export function defaultDraft(): PatternDraft {
    return {
        kind: "peristaltic",
        frequencyHz: 0.2,
        amplitudeFraction: 1.0,
        onsetDelayS: 0.25,
        durationS: 60.0,
        startActuator: 1,
        direction: "distal_to_proximal",
        numActuators: 8,
        samplePeriodS: 0.01,
        squeezeTimeS: null,
    };
}
