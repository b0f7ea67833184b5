import { describe, expect, it } from "vitest";

import { ConsoleClient, TransportLike } from "../src/console.js";
import { DonningWizard } from "../src/wizard.js";

class FakeTransport implements TransportLike {
    onOpen: (() => void) | null = null;
    onLine: ((line: string) => void) | null = null;
    onClose: (() => void) | null = null;
    sent: string[] = [];

    connect(): void { this.onOpen?.(); }
    close(): void {}
    send(text: string): void { this.sent.push(text); }
}

function setup() {
    const transport = new FakeTransport();
    const client = new ConsoleClient(transport);
    client.connect();
    const wizard = new DonningWizard(client);
    client.onAck = (ack) => wizard.observe(ack.state, ack.ok, ack.error);
    client.onFrame = (frame) => wizard.observe(frame.state);
    return { transport, client, wizard };
}

describe("donning wizard", () => {
    it("walks the two-step flow to ready", () => {
        const { transport, wizard } = setup();
        expect(wizard.begin()).toBe(true);
        expect(transport.sent).toContain('{"cmd":"don1"}\n');
        transport.onLine?.(JSON.stringify(
            { v: 1, ok: true, cmd: "don1", state: "donning_step1" }));
        expect(wizard.step).toBe("confirm_step2");
        expect(wizard.confirmStep2()).toBe(true);
        expect(transport.sent).toContain('{"cmd":"don2"}\n');
        transport.onLine?.(JSON.stringify(
            { v: 1, ok: true, cmd: "don2", state: "donning_step2" }));
        transport.onLine?.(JSON.stringify({
            v: 1, t: 0.01, state: "ready", qcum: 0,
            actuators: [], motors: [],
        }));
        expect(wizard.step).toBe("done");
    });

    it("blocks step skipping client-side", () => {
        const { transport, wizard } = setup();
        expect(wizard.confirmStep2()).toBe(false);  // nothing sent yet
        expect(transport.sent).toEqual([]);
        wizard.begin();
        expect(wizard.confirmStep2()).toBe(false);  // step 1 not confirmed
        expect(transport.sent.filter((s) => s.includes("don2"))).toEqual([]);
    });

    it("resets to the server-reported state on refusal", () => {
        const { transport, wizard } = setup();
        wizard.begin();
        transport.onLine?.(JSON.stringify(
            { v: 1, ok: false, cmd: "don1", state: "ready",
              error: "command 'don1' illegal in state 'ready'" }));
        expect(wizard.step).toBe("done");  // server says already donned
    });

    it("resyncs from the device state after a reconnect", () => {
        const { wizard } = setup();
        wizard.begin();
        wizard.resync("donning_step1");
        expect(wizard.step).toBe("confirm_step2");
        wizard.resync("idle");
        expect(wizard.step).toBe("idle");
    });

    it("refuses to begin when the device is not idle", () => {
        const { transport, client, wizard } = setup();
        transport.onLine?.(JSON.stringify({
            v: 1, t: 0.01, state: "running", qcum: 0,
            actuators: [], motors: [],
        }));
        expect(client.latestState).toBe("running");
        expect(wizard.begin()).toBe(false);
        expect(transport.sent).toEqual([]);
    });
});
