/**
 * Wire protocol mirror: pattern documents, telemetry frames, acks.
 *
 * Pattern documents must serialize to byte-identical JSON on every
 * component, so numbers follow the shared canonical rule (integral values
 * print without a decimal point, everything else as the shortest
 * round-trip decimal) and keys are sorted with no whitespace.  The shared
 * test vectors under ../shared pin the exact bytes.
 */

export const PATTERN_DOC_VERSION = 1;
export const FRAME_VERSION = 1;

export type PatternKind = "peristaltic" | "all_in_phase" | "sequential_squeeze";
export type Direction = "distal_to_proximal" | "proximal_to_distal";

export const PATTERN_KINDS: PatternKind[] = [
    "peristaltic", "all_in_phase", "sequential_squeeze"];
export const DIRECTIONS: Direction[] = [
    "distal_to_proximal", "proximal_to_distal"];

export interface PatternDraft {
    kind: PatternKind;
    frequencyHz: number;
    amplitudeFraction: number;
    onsetDelayS: number;
    durationS: number;
    startActuator: number;
    direction: Direction;
    numActuators: number;
    samplePeriodS: number;
    squeezeTimeS: number | null;
}

export interface ActuatorReading { r: number; p: number; v: number; }
export interface MotorReading { alpha: number; x: number; tau: number; }

export interface TelemetryFrame {
    v: number;
    t: number;
    actuators: ActuatorReading[];
    motors: MotorReading[];
    qcum: number;
    state: string;
    reason?: string;
}

export interface Ack {
    v: number;
    ok: boolean;
    cmd?: string;
    state: string;
    error?: string;
}

export type ServerMessage = TelemetryFrame | Ack;

export function isAck(msg: ServerMessage): msg is Ack {
    return typeof msg === "object" && msg !== null && "ok" in msg;
}

/** Client-side mirror of the server's pattern validation rules. */
export function validateDraft(draft: PatternDraft): string[] {
    const errors: string[] = [];
    if (!PATTERN_KINDS.includes(draft.kind)) {
        errors.push(`unknown pattern kind '${draft.kind}'`);
    }
    if (!(draft.frequencyHz > 0)) {
        errors.push("frequency must be positive");
    }
    if (!(draft.amplitudeFraction > 0 && draft.amplitudeFraction <= 1)) {
        errors.push("amplitude fraction must be in (0, 1]");
    }
    if (!(draft.onsetDelayS >= 0)) {
        errors.push("onset delay must be non-negative");
    }
    if (!(draft.durationS > 0)) {
        errors.push("duration must be positive");
    }
    if (!Number.isInteger(draft.numActuators) || draft.numActuators < 1) {
        errors.push("actuator count must be a positive integer");
    }
    if (!Number.isInteger(draft.startActuator) ||
            draft.startActuator < 1 ||
            draft.startActuator > draft.numActuators) {
        errors.push("start actuator out of range");
    }
    if (!DIRECTIONS.includes(draft.direction)) {
        errors.push(`unknown direction '${draft.direction}'`);
    }
    if (!(draft.samplePeriodS > 0)) {
        errors.push("sample period must be positive");
    }
    if (draft.kind === "sequential_squeeze") {
        if (draft.squeezeTimeS === null || !(draft.squeezeTimeS > 0)) {
            errors.push("sequential squeeze needs a positive squeeze time");
        }
    } else if (draft.squeezeTimeS !== null) {
        errors.push("squeeze time only applies to sequential squeeze");
    }
    return errors;
}

export function draftToDocument(draft: PatternDraft): Record<string, unknown> {
    return {
        v: PATTERN_DOC_VERSION,
        kind: draft.kind,
        frequency_hz: draft.frequencyHz,
        amplitude_fraction: draft.amplitudeFraction,
        onset_delay_s: draft.onsetDelayS,
        duration_s: draft.durationS,
        start_actuator: draft.startActuator,
        direction: draft.direction,
        num_actuators: draft.numActuators,
        sample_period_s: draft.samplePeriodS,
        squeeze_time_s: draft.squeezeTimeS,
    };
}

export function documentToDraft(doc: Record<string, unknown>): PatternDraft {
    return {
        kind: doc["kind"] as PatternKind,
        frequencyHz: doc["frequency_hz"] as number,
        amplitudeFraction: doc["amplitude_fraction"] as number,
        onsetDelayS: doc["onset_delay_s"] as number,
        durationS: doc["duration_s"] as number,
        startActuator: doc["start_actuator"] as number,
        direction: doc["direction"] as Direction,
        numActuators: doc["num_actuators"] as number,
        samplePeriodS: doc["sample_period_s"] as number,
        squeezeTimeS: (doc["squeeze_time_s"] ?? null) as number | null,
    };
}

function canonicalNumber(value: number): string {
    if (!Number.isFinite(value)) {
        throw new Error("non-finite numbers cannot be serialized");
    }
    // integral values print without a decimal point; String() already
    // does that for JS numbers, and emits shortest round-trip otherwise
    return String(value);
}

/** Deterministic, cross-language JSON encoding (sorted keys, compact). */
export function canonicalJson(value: unknown): string {
    if (value === null) {
        return "null";
    }
    if (typeof value === "boolean") {
        return value ? "true" : "false";
    }
    if (typeof value === "number") {
        return canonicalNumber(value);
    }
    if (typeof value === "string") {
        return JSON.stringify(value);
    }
    if (Array.isArray(value)) {
        return "[" + value.map(canonicalJson).join(",") + "]";
    }
    if (typeof value === "object") {
        const obj = value as Record<string, unknown>;
        const parts = Object.keys(obj).sort().map(
            (key) => JSON.stringify(key) + ":" + canonicalJson(obj[key]));
        return "{" + parts.join(",") + "}";
    }
    throw new Error(`cannot serialize ${typeof value}`);
}

/** Canonical pattern document bytes for a draft (must match the CLI). */
export function serializeDraft(draft: PatternDraft): string {
    const errors = validateDraft(draft);
    if (errors.length > 0) {
        throw new Error(`invalid draft: ${errors.join("; ")}`);
    }
    return canonicalJson(draftToDocument(draft));
}

export function commandLine(cmd: string,
                            extra?: Record<string, unknown>): string {
    return canonicalJson({ cmd, ...extra }) + "\n";
}
