import { TelemetryFrame } from "./protocol.js";
import { PreviewPoint } from "./designer.js";

const TRACE_COLORS = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                      "#76b7b2", "#edc948", "#b07aa1", "#9c755f"];

/** Indices to draw after decimating a series to the pixel budget. */
export function decimate(length: number, budget: number): number[] {
    if (length <= budget) {
        return Array.from({ length }, (_, i) => i);
    }
    const step = length / budget;
    const out: number[] = [];
    for (let i = 0; i < budget; i += 1) {
        out.push(Math.floor(i * step));
    }
    out.push(length - 1);
    return out;
}

/** Stacked per-actuator radius traces over the buffered window. */
export function drawRadiusTraces(ctx: CanvasRenderingContext2D,
                                 frames: readonly TelemetryFrame[],
                                 width: number, height: number,
                                 windowS: number): void {
    ctx.clearRect(0, 0, width, height);
    if (frames.length < 2) {
        return;
    }
    const n = frames[0].actuators.length;
    const lane = height / n;
    const tEnd = frames[frames.length - 1].t;
    const tStart = tEnd - windowS;
    let rMin = Infinity;
    let rMax = -Infinity;
    for (const frame of frames) {
        for (const a of frame.actuators) {
            rMin = Math.min(rMin, a.r);
            rMax = Math.max(rMax, a.r);
        }
    }
    const span = rMax - rMin || 1e-9;
    const idx = decimate(frames.length, Math.max(width, 2));
    for (let act = 0; act < n; act += 1) {
        ctx.strokeStyle = TRACE_COLORS[act % TRACE_COLORS.length];
        ctx.lineWidth = 1.25;
        ctx.beginPath();
        let started = false;
        for (const i of idx) {
            const frame = frames[i];
            const x = ((frame.t - tStart) / windowS) * width;
            const norm = (frame.actuators[act].r - rMin) / span;
            const y = lane * act + lane * (0.9 - 0.8 * norm);
            if (started) {
                ctx.lineTo(x, y);
            } else {
                ctx.moveTo(x, y);
                started = true;
            }
        }
        ctx.stroke();
    }
}

/** Per-actuator pressure bars with the safety-cap line. */
export function drawPressureBars(ctx: CanvasRenderingContext2D,
                                 frame: TelemetryFrame | null,
                                 capPa: number,
                                 width: number, height: number): void {
    ctx.clearRect(0, 0, width, height);
    if (frame === null) {
        return;
    }
    const n = frame.actuators.length;
    const slot = width / n;
    const top = capPa * 1.15;
    for (let i = 0; i < n; i += 1) {
        const p = frame.actuators[i].p;
        const h = Math.min(p / top, 1) * height;
        ctx.fillStyle = p > capPa ? "#d62728" : TRACE_COLORS[i % 8];
        ctx.fillRect(i * slot + slot * 0.15, height - h, slot * 0.7, h);
    }
    const capY = height - (capPa / top) * height;
    ctx.strokeStyle = "#d62728";
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(0, capY);
    ctx.lineTo(width, capY);
    ctx.stroke();
    ctx.setLineDash([]);
}

/** Spatial-wave preview for the design panel. */
export function drawPreview(ctx: CanvasRenderingContext2D,
                            points: PreviewPoint[],
                            width: number, height: number): void {
    ctx.clearRect(0, 0, width, height);
    if (points.length === 0) {
        return;
    }
    const xMax = points[points.length - 1].x || 1;
    ctx.strokeStyle = "#4e79a7";
    ctx.lineWidth = 2;
    ctx.beginPath();
    points.forEach((pt, i) => {
        const x = (pt.x / xMax) * width;
        const y = height / 2 - pt.y * height * 0.4;
        if (i === 0) {
            ctx.moveTo(x, y);
        } else {
            ctx.lineTo(x, y);
        }
    });
    ctx.stroke();
    ctx.strokeStyle = "#bbb";
    ctx.beginPath();
    ctx.moveTo(0, height / 2);
    ctx.lineTo(width, height / 2);
    ctx.stroke();
}
