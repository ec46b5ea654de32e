import {
    Frame,
    ServerFrame,
    clientFrame,
    parseFrame,
} from "./protocol.js";

/* Everything the UI needs from the service, one method per client frame.
   Tests substitute an in-memory implementation. */
export interface Transport {
    health(): Promise<ServerFrame>;
    createSession(): Promise<ServerFrame>;
    sendMessage(session: string, text: string): Promise<ServerFrame>;
    selectOption(session: string, label: string): Promise<ServerFrame>;
    queryHints(session: string, partialText: string): Promise<ServerFrame>;
    listEnv(session: string): Promise<ServerFrame>;
    exportScript(session: string): Promise<ServerFrame>;
}

export class HttpTransport implements Transport {
    constructor(private readonly base: string) {}

    health(): Promise<ServerFrame> {
        return this.get("/api/health");
    }

    createSession(): Promise<ServerFrame> {
        return this.post("/api/session", null);
    }

    sendMessage(session: string, text: string): Promise<ServerFrame> {
        return this.post("/api/message", clientFrame("user_message", { session, text }));
    }

    selectOption(session: string, label: string): Promise<ServerFrame> {
        return this.post("/api/message", clientFrame("select_option", { session, label }));
    }

    queryHints(session: string, partialText: string): Promise<ServerFrame> {
        const query = new URLSearchParams({ session, q: partialText });
        return this.get(`/api/hints?${query}`);
    }

    listEnv(session: string): Promise<ServerFrame> {
        const query = new URLSearchParams({ session });
        return this.get(`/api/env?${query}`);
    }

    exportScript(session: string): Promise<ServerFrame> {
        const query = new URLSearchParams({ session });
        return this.get(`/api/export?${query}`);
    }

    private async get(path: string): Promise<ServerFrame> {
        const response = await fetch(this.base + path);
        return parseFrame(await response.json());
    }

    private async post(path: string, frame: Frame | null): Promise<ServerFrame> {
        const response = await fetch(this.base + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: frame === null ? "{}" : JSON.stringify(frame),
        });
        return parseFrame(await response.json());
    }
}
