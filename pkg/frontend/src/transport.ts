import { TransportLike } from "./console.js";

/**
 * WebSocket transport with exponential-backoff reconnection.  Messages
 * are newline-delimited JSON; a WebSocket message may carry one line.
 */
export class WsTransport implements TransportLike {
    onOpen: (() => void) | null = null;
    onLine: ((line: string) => void) | null = null;
    onClose: (() => void) | null = null;

    private ws: WebSocket | null = null;
    private attempts = 0;
    private closed = false;
    private pending = "";

    constructor(private url: string) {}

    connect(): void {
        this.closed = false;
        this.open();
    }

    private open(): void {
        this.ws = new WebSocket(this.url);
        this.ws.onopen = () => {
            this.attempts = 0;
            this.onOpen?.();
        };
        this.ws.onmessage = (event) => {
            this.pending += String(event.data);
            let idx;
            while ((idx = this.pending.indexOf("\n")) >= 0) {
                const line = this.pending.slice(0, idx);
                this.pending = this.pending.slice(idx + 1);
                this.onLine?.(line);
            }
            // a frame without a trailing newline is still a whole message
            if (this.pending.trim().length > 0 && this.pending.endsWith("}")) {
                this.onLine?.(this.pending);
                this.pending = "";
            }
        };
        this.ws.onclose = () => {
            this.onClose?.();
            if (!this.closed) {
                const delay = Math.min(1000 * 2 ** this.attempts, 10000);
                this.attempts += 1;
                setTimeout(() => this.open(), delay);
            }
        };
    }

    send(text: string): void {
        if (this.ws !== null && this.ws.readyState === WebSocket.OPEN) {
            this.ws.send(text);
        }
    }

    close(): void {
        this.closed = true;
        this.ws?.close();
    }
}
