import { TelemetryFrame } from "./protocol.js";

/**
 * Rolling telemetry window.  Frames must arrive with strictly increasing
 * timestamps; anything older than the window behind the newest frame is
 * evicted.
 */
export class TelemetryRing {
    private buffer: TelemetryFrame[] = [];

    constructor(public readonly windowS = 30) {}

    /** Append a frame; returns false (and ignores it) on non-monotone t. */
    push(frame: TelemetryFrame): boolean {
        const last = this.buffer[this.buffer.length - 1];
        if (last !== undefined && frame.t <= last.t) {
            return false;
        }
        this.buffer.push(frame);
        const horizon = frame.t - this.windowS;
        let drop = 0;
        while (drop < this.buffer.length && this.buffer[drop].t < horizon) {
            drop += 1;
        }
        if (drop > 0) {
            this.buffer.splice(0, drop);
        }
        return true;
    }

    frames(): readonly TelemetryFrame[] {
        return this.buffer;
    }

    latest(): TelemetryFrame | null {
        return this.buffer[this.buffer.length - 1] ?? null;
    }

    spanS(): number {
        if (this.buffer.length < 2) {
            return 0;
        }
        return this.buffer[this.buffer.length - 1].t - this.buffer[0].t;
    }

    clear(): void {
        this.buffer = [];
    }
}
