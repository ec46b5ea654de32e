import { Hint, HintsFrame, ServerFrame } from "./protocol.js";

/* Debounces hint queries while the user types and drops responses that
   arrive after the draft moved on, so the hint box always reflects the
   latest completed query for the current draft. */
export class HintScheduler {
    private version = 0;
    private timer: ReturnType<typeof setTimeout> | null = null;

    constructor(
        private readonly query: (text: string) => Promise<ServerFrame>,
        private readonly apply: (hints: Hint[]) => void,
        private readonly trouble: (message: string) => void,
        private readonly delayMs = 150,
    ) {}

    setDraft(text: string): void {
        this.version += 1;
        const version = this.version;
        if (this.timer !== null) {
            clearTimeout(this.timer);
        }
        if (text.trim() === "") {
            this.timer = null;
            this.apply([]);
            return;
        }
        this.timer = setTimeout(() => {
            this.timer = null;
            void this.fire(text, version);
        }, this.delayMs);
    }

    private async fire(text: string, version: number): Promise<void> {
        let frame: ServerFrame;
        try {
            frame = await this.query(text);
        } catch {
            if (version === this.version) {
                this.trouble("hints unavailable");
            }
            return;
        }
        if (version !== this.version) {
            return; // a newer draft owns the hint box now
        }
        if (frame.type === "hints") {
            this.apply((frame as HintsFrame).ranked);
        } else {
            this.trouble("hints unavailable");
        }
    }
}
