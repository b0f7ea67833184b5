import { drawPressureBars, drawPreview, drawRadiusTraces } from "./charts.js";
import { ConsoleClient } from "./console.js";
import { buildPreview, defaultDraft } from "./designer.js";
import { PatternDraft, Direction, PatternKind } from "./protocol.js";
import { WsTransport } from "./transport.js";
import { DonningWizard } from "./wizard.js";

const PRESSURE_CAP_PA = 22e3;

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (node === null) {
        throw new Error(`missing element #${id}`);
    }
    return node as T;
}

const draft: PatternDraft = defaultDraft();

let client: ConsoleClient | null = null;
let wizard: DonningWizard | null = null;

function refreshPreview(): void {
    const preview = buildPreview(draft);
    const errorsBox = el<HTMLDivElement>("draft-errors");
    errorsBox.textContent = preview.errors.join("; ");
    el<HTMLSpanElement>("wavelength-label").textContent =
        preview.wavelengthLabel;
    el<HTMLSpanElement>("schedule-label").textContent =
        `${preview.scheduleLengthS.toFixed(1)} s / ` +
        `${preview.scheduleSamples} samples`;
    el<HTMLButtonElement>("btn-start").disabled = preview.errors.length > 0;
    const canvas = el<HTMLCanvasElement>("preview-canvas");
    const ctx = canvas.getContext("2d");
    if (ctx !== null) {
        drawPreview(ctx, preview.points, canvas.width, canvas.height);
    }
}

function bindDraftControls(): void {
    const bindNumber = (id: string, apply: (v: number) => void) => {
        const input = el<HTMLInputElement>(id);
        input.addEventListener("input", () => {
            apply(Number(input.value));
            refreshPreview();
        });
    };
    bindNumber("in-frequency", (v) => { draft.frequencyHz = v; });
    bindNumber("in-amplitude", (v) => { draft.amplitudeFraction = v; });
    bindNumber("in-delay", (v) => { draft.onsetDelayS = v; });
    bindNumber("in-duration", (v) => { draft.durationS = v; });
    bindNumber("in-start", (v) => { draft.startActuator = v; });
    bindNumber("in-squeeze", (v) => {
        draft.squeezeTimeS = draft.kind === "sequential_squeeze" ? v : null;
    });
    el<HTMLSelectElement>("in-kind").addEventListener("change", (event) => {
        draft.kind = (event.target as HTMLSelectElement).value as PatternKind;
        if (draft.kind === "sequential_squeeze") {
            draft.squeezeTimeS =
                Number(el<HTMLInputElement>("in-squeeze").value) || 1.0;
        } else {
            draft.squeezeTimeS = null;
        }
        refreshPreview();
    });
    el<HTMLSelectElement>("in-direction").addEventListener("change",
        (event) => {
            draft.direction =
                (event.target as HTMLSelectElement).value as Direction;
            refreshPreview();
        });
}

function setBadge(state: string | null, status: string): void {
    const badge = el<HTMLSpanElement>("state-badge");
    badge.textContent = state ?? status;
    badge.dataset.state = state ?? status;
    el<HTMLDivElement>("reconnect-banner").hidden = status !== "disconnected";
}

function refreshWizard(): void {
    if (wizard === null) {
        return;
    }
    el<HTMLSpanElement>("wizard-step").textContent = wizard.step;
    el<HTMLSpanElement>("wizard-message").textContent = wizard.message;
    el<HTMLButtonElement>("btn-don1").disabled =
        !(wizard.step === "idle" || wizard.step === "error");
    el<HTMLButtonElement>("btn-don2").disabled =
        wizard.step !== "confirm_step2";
}

function connect(): void {
    const url = el<HTMLInputElement>("in-url").value;
    client?.close();
    client = new ConsoleClient(new WsTransport(url));
    wizard = new DonningWizard(client);
    client.onStatus = (status) => {
        setBadge(client?.latestState ?? null, status);
        if (status === "connected") {
            wizard?.resync(client?.latestState ?? null);
        }
        refreshWizard();
    };
    client.onAck = (ack) => {
        wizard?.observe(ack.state, ack.ok, ack.error);
        setBadge(ack.state, client?.status ?? "connected");
        if (!ack.ok) {
            el<HTMLDivElement>("command-errors").textContent =
                ack.error ?? "command refused";
        } else {
            el<HTMLDivElement>("command-errors").textContent = "";
        }
        refreshWizard();
    };
    client.onFrame = (frame) => {
        wizard?.observe(frame.state);
        setBadge(frame.state, client?.status ?? "connected");
        el<HTMLSpanElement>("qcum-label").textContent =
            `${(frame.qcum * 1e6).toFixed(3)} mL`;
        const warning = el<HTMLDivElement>("version-warning");
        warning.hidden = client?.versionWarning == null;
        warning.textContent = client?.versionWarning ?? "";
        refreshWizard();
    };
    client.connect();
}

function renderLoop(): void {
    if (client !== null) {
        const traces = el<HTMLCanvasElement>("traces-canvas");
        const bars = el<HTMLCanvasElement>("bars-canvas");
        const tctx = traces.getContext("2d");
        const bctx = bars.getContext("2d");
        if (tctx !== null) {
            drawRadiusTraces(tctx, client.ring.frames(), traces.width,
                             traces.height, client.ring.windowS);
        }
        if (bctx !== null) {
            drawPressureBars(bctx, client.ring.latest(), PRESSURE_CAP_PA,
                             bars.width, bars.height);
        }
    }
    requestAnimationFrame(renderLoop);
}

export function boot(): void {
    bindDraftControls();
    refreshPreview();
    el<HTMLButtonElement>("btn-connect").addEventListener("click", connect);
    el<HTMLButtonElement>("btn-don1").addEventListener("click", () => {
        wizard?.begin();
        refreshWizard();
    });
    el<HTMLButtonElement>("btn-don2").addEventListener("click", () => {
        wizard?.confirmStep2();
        refreshWizard();
    });
    el<HTMLButtonElement>("btn-start").addEventListener("click", () => {
        const errors = client?.start(draft) ?? ["not connected"];
        el<HTMLDivElement>("command-errors").textContent = errors.join("; ");
    });
    el<HTMLButtonElement>("btn-stop").addEventListener("click",
        () => client?.stop());
    el<HTMLButtonElement>("btn-estop").addEventListener("click",
        () => client?.estop());
    el<HTMLButtonElement>("btn-reset").addEventListener("click",
        () => client?.reset());
    requestAnimationFrame(renderLoop);
}

boot();
