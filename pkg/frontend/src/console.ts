import {
    Ack, FRAME_VERSION, PatternDraft, ServerMessage, TelemetryFrame,
    commandLine, draftToDocument, isAck, validateDraft,
} from "./protocol.js";
import { TelemetryRing } from "./ring.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

/** Anything that can carry newline-delimited JSON both ways. */
export interface TransportLike {
    connect(): void;
    close(): void;
    send(text: string): void;
    onOpen: (() => void) | null;
    onLine: ((line: string) => void) | null;
    onClose: (() => void) | null;
}

/**
 * Client-side device console state.
 *
 * Every displayed quantity originates from a server message: the state
 * badge, the traces, the counters.  The console never simulates; it only
 * buffers what the service broadcast.
 */
export class ConsoleClient {
    status: ConnectionStatus = "disconnected";
    latestState: string | null = null;
    faultReason: string | null = null;
    versionWarning: string | null = null;
    paused = false;

    readonly ring: TelemetryRing;

    onFrame: ((frame: TelemetryFrame) => void) | null = null;
    onAck: ((ack: Ack) => void) | null = null;
    onStatus: ((status: ConnectionStatus) => void) | null = null;

    constructor(private transport: TransportLike, windowS = 30) {
        this.ring = new TelemetryRing(windowS);
        transport.onOpen = () => {
            // fresh stream after (re)connect: resync from the next frame
            this.ring.clear();
            this.latestState = null;
            this.paused = false;
            this.versionWarning = null;
            this.setStatus("connected");
        };
        transport.onLine = (line) => this.handleLine(line);
        transport.onClose = () => this.setStatus("disconnected");
    }

    connect(): void {
        this.setStatus("connecting");
        this.transport.connect();
    }

    close(): void {
        this.transport.close();
    }

    private setStatus(status: ConnectionStatus): void {
        this.status = status;
        this.onStatus?.(status);
    }

    handleLine(line: string): void {
        const text = line.trim();
        if (text.length === 0) {
            return;
        }
        let msg: ServerMessage;
        try {
            msg = JSON.parse(text) as ServerMessage;
        } catch {
            return;  // garbage on the wire; ignore the line
        }
        if (isAck(msg)) {
            this.latestState = msg.state;
            this.onAck?.(msg);
            return;
        }
        const frame = msg as TelemetryFrame;
        if (frame.v !== FRAME_VERSION) {
            // schema mismatch: warn once and stop consuming the stream
            this.versionWarning =
                `unsupported frame version ${frame.v}; stream paused`;
            this.paused = true;
            return;
        }
        if (this.paused) {
            return;
        }
        if (this.ring.push(frame)) {
            this.latestState = frame.state;
            this.faultReason = frame.reason ?? null;
            this.onFrame?.(frame);
        }
    }

    sendCommand(cmd: string, extra?: Record<string, unknown>): void {
        this.transport.send(commandLine(cmd, extra));
    }

    don1(): void { this.sendCommand("don1"); }
    don2(): void { this.sendCommand("don2"); }
    stop(): void { this.sendCommand("stop"); }
    estop(): void { this.sendCommand("estop"); }
    reset(): void { this.sendCommand("reset"); }

    /** Validate and submit a pattern; returns validation errors if any. */
    start(draft: PatternDraft): string[] {
        const errors = validateDraft(draft);
        if (errors.length > 0) {
            return errors;
        }
        this.sendCommand("start", { pattern: draftToDocument(draft) });
        return [];
    }
}
