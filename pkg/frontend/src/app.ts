import { HintScheduler } from "./hints.js";
import {
    AgentTurn,
    AskRecord,
    EnvSnapshot,
    EnvVar,
    Hint,
    PROTOCOL_VERSION,
    ProtocolMismatch,
    ResponseRecord,
    ScriptFrame,
    ServerFrame,
    SessionCreated,
} from "./protocol.js";
import { renderHints, renderSidebar, renderTurn, renderUserBubble } from "./render.js";
import { Transport } from "./transport.js";

export type ChatMessage =
    | { role: "user"; text: string }
    | { role: "agent"; record: ResponseRecord };

export interface UiState {
    messages: ChatMessage[];
    draft: string;
    hints: Hint[];
    env: EnvVar[];
    pendingAsk: { prompt: string; options: string[] } | null;
}

export function emptyState(): UiState {
    return { messages: [], draft: "", hints: [], env: [], pendingAsk: null };
}

const TEMPLATE = `
<div class="banner" hidden></div>
<div class="layout">
    <main class="chat">
        <div class="messages"></div>
        <div class="hint-box"></div>
        <form class="composer">
            <input class="draft" type="text" autocomplete="off"
                   placeholder="Describe what to do, e.g. 'find quartiles'" />
            <button class="send" type="submit">Send</button>
            <button class="export" type="button">Export script</button>
        </form>
    </main>
    <aside class="sidebar"></aside>
</div>
`;

export class ChatApp {
    readonly state: UiState = emptyState();
    private session = "";
    private inFlight = false;
    private readonly hintScheduler: HintScheduler;
    private readonly messagesEl: HTMLElement;
    private readonly hintBoxEl: HTMLElement;
    private readonly sidebarEl: HTMLElement;
    private readonly bannerEl: HTMLElement;
    private readonly draftEl: HTMLInputElement;
    private readonly sendEl: HTMLButtonElement;

    get sessionId(): string {
        return this.session;
    }

    constructor(root: HTMLElement, private readonly transport: Transport) {
        root.innerHTML = TEMPLATE;
        this.messagesEl = root.querySelector(".messages") as HTMLElement;
        this.hintBoxEl = root.querySelector(".hint-box") as HTMLElement;
        this.sidebarEl = root.querySelector(".sidebar") as HTMLElement;
        this.bannerEl = root.querySelector(".banner") as HTMLElement;
        this.draftEl = root.querySelector(".draft") as HTMLInputElement;
        this.sendEl = root.querySelector(".send") as HTMLButtonElement;

        this.hintScheduler = new HintScheduler(
            (text) => this.transport.queryHints(this.session, text),
            (hints) => {
                this.state.hints = hints;
                renderHints(this.hintBoxEl, hints);
            },
            (message) => this.banner(message),
        );

        this.draftEl.addEventListener("input", () => {
            this.setDraft(this.draftEl.value);
        });
        (root.querySelector(".composer") as HTMLFormElement).addEventListener(
            "submit",
            (event) => {
                event.preventDefault();
                void this.submit();
            },
        );
        (root.querySelector(".export") as HTMLButtonElement).addEventListener(
            "click",
            () => void this.exportScript(),
        );
    }

    /* Health-checks the protocol version before opening a session; a
       mismatched server gets an upgrade banner instead of garbled turns. */
    async start(): Promise<void> {
        let health: ServerFrame;
        try {
            health = await this.transport.health();
        } catch (err) {
            if (err instanceof ProtocolMismatch) {
                this.upgradeBanner();
                return;
            }
            this.banner("service unreachable");
            return;
        }
        if (health.type === "health" && health.protocol !== PROTOCOL_VERSION) {
            this.upgradeBanner();
            return;
        }
        const created = await this.transport.createSession();
        if (created.type === "session_created") {
            this.session = (created as SessionCreated).session;
        } else {
            this.banner("could not open a session");
        }
    }

    setDraft(text: string): void {
        this.state.draft = text;
        this.hintScheduler.setDraft(text);
    }

    async submit(): Promise<void> {
        const text = this.state.draft.trim();
        if (text === "") {
            return;
        }
        this.draftEl.value = "";
        this.setDraft("");
        await this.sendText(text);
    }

    /* One user message in flight at a time; a send appends exactly one user
       bubble and one turn's worth of agent bubbles. */
    async sendText(text: string): Promise<void> {
        if (this.inFlight || this.session === "") {
            return;
        }
        this.inFlight = true;
        this.sendEl.disabled = true;
        this.state.messages.push({ role: "user", text });
        this.messagesEl.appendChild(renderUserBubble(text));
        try {
            const frame = await this.transport.sendMessage(this.session, text);
            this.applyTurn(frame);
        } catch {
            this.banner("message failed to send");
        } finally {
            this.inFlight = false;
            this.sendEl.disabled = false;
        }
        await this.syncSidebar();
    }

    async selectOption(label: string): Promise<void> {
        if (this.inFlight || this.session === "") {
            return;
        }
        this.inFlight = true;
        this.sendEl.disabled = true;
        this.state.messages.push({ role: "user", text: label });
        this.messagesEl.appendChild(renderUserBubble(label));
        try {
            const frame = await this.transport.selectOption(this.session, label);
            this.applyTurn(frame);
        } catch {
            this.banner("message failed to send");
        } finally {
            this.inFlight = false;
            this.sendEl.disabled = false;
        }
        await this.syncSidebar();
    }

    async exportScript(): Promise<string> {
        const frame = await this.transport.exportScript(this.session);
        if (frame.type !== "script") {
            this.banner("export failed");
            return "";
        }
        const text = (frame as ScriptFrame).text;
        this.download("conversation.py", text);
        return text;
    }

    private applyTurn(frame: ServerFrame): void {
        let records: ResponseRecord[];
        if (frame.type === "agent_turn") {
            records = (frame as AgentTurn).responses;
        } else if (frame.type === "error") {
            records = [{ kind: "error", text: (frame as { text: string }).text }];
        } else {
            records = [];
        }
        for (const record of records) {
            this.state.messages.push({ role: "agent", record });
            this.messagesEl.appendChild(
                renderTurn(record, (label) => void this.selectOption(label)),
            );
        }
        const last = records[records.length - 1];
        this.state.pendingAsk =
            last !== undefined && last.kind === "ask"
                ? { prompt: (last as AskRecord).prompt, options: (last as AskRecord).options }
                : null;
    }

    /* The sidebar refreshes after every agent turn. */
    private async syncSidebar(): Promise<void> {
        try {
            const frame = await this.transport.listEnv(this.session);
            if (frame.type === "env_snapshot") {
                this.state.env = (frame as EnvSnapshot).vars;
                renderSidebar(this.sidebarEl, this.state.env);
            }
        } catch {
            this.banner("sidebar out of date");
        }
    }

    private banner(message: string): void {
        this.bannerEl.textContent = message;
        this.bannerEl.hidden = false;
    }

    private upgradeBanner(): void {
        this.banner(
            `this client speaks protocol ${PROTOCOL_VERSION}; ` +
            "the server speaks another version. Please upgrade.",
        );
        this.draftEl.disabled = true;
        this.sendEl.disabled = true;
    }

    private download(filename: string, text: string): void {
        if (typeof URL.createObjectURL !== "function") {
            return; // non-browser DOM; caller still gets the text
        }
        const blob = new Blob([text], { type: "text/x-python" });
        const anchor = document.createElement("a");
        anchor.href = URL.createObjectURL(blob);
        anchor.download = filename;
        anchor.click();
        URL.revokeObjectURL(anchor.href);
    }
}
