import { ConsoleClient } from "./console.js";

export type WizardStep =
    "idle" | "await_step1" | "confirm_step2" | "await_ready" | "done" | "error";

/**
 * Guided two-step donning: fasten the first actuator group, confirm, then
 * fasten the rest.  The wizard only advances on states the service
 * reports; a server-side refusal resets it to whatever the server says.
 */
export class DonningWizard {
    step: WizardStep = "idle";
    message = "";

    constructor(private client: ConsoleClient) {}

    /** Start the workflow; only valid while the device is idle. */
    begin(): boolean {
        if (this.step !== "idle" && this.step !== "error") {
            return false;
        }
        if (this.client.latestState !== null &&
                this.client.latestState !== "idle") {
            this.message = `device is ${this.client.latestState}, not idle`;
            return false;
        }
        this.client.don1();
        this.step = "await_step1";
        this.message = "fastening first actuator group";
        return true;
    }

    /** User confirms the second group is ready to fasten. */
    confirmStep2(): boolean {
        if (this.step !== "confirm_step2") {
            return false;  // step skipping is blocked client-side
        }
        this.client.don2();
        this.step = "await_ready";
        this.message = "fastening second actuator group";
        return true;
    }

    /** Feed every server-reported state through here. */
    observe(state: string, ok = true, error?: string): void {
        if (!ok) {
            // server refused a step: fall back to its reported state
            this.step = "error";
            this.message = error ?? "donning refused";
            this.resync(state);
            return;
        }
        if (this.step === "await_step1" && state === "donning_step1") {
            this.step = "confirm_step2";
            this.message = "fasten the remaining actuators, then continue";
        } else if (this.step === "await_ready" && state === "ready") {
            this.step = "done";
            this.message = "device ready";
        }
    }

    /** After reconnect or refusal, derive the step from the device state. */
    resync(state: string | null): void {
        if (state === "donning_step1") {
            this.step = "confirm_step2";
        } else if (state === "donning_step2") {
            this.step = "await_ready";
        } else if (state === "ready") {
            this.step = "done";
        } else if (this.step !== "error") {
            this.step = "idle";
        }
    }

    reset(): void {
        this.step = "idle";
        this.message = "";
    }
}
