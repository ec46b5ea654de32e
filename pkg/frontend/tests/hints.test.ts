import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { HintScheduler } from "../src/hints.js";
import { Hint, PROTOCOL_VERSION, ServerFrame } from "../src/protocol.js";

function hintsFrame(texts: string[]): ServerFrame {
    return {
        v: PROTOCOL_VERSION,
        type: "hints",
        ranked: texts.map((text) => ({
            command_id: text,
            hint_text: text,
            score: 0.5,
        })),
        pending: null,
    } as ServerFrame;
}

function deferred<T>() {
    let resolve!: (value: T) => void;
    let reject!: (err: unknown) => void;
    const promise = new Promise<T>((res, rej) => {
        resolve = res;
        reject = rej;
    });
    return { promise, resolve, reject };
}

describe("HintScheduler", () => {
    beforeEach(() => {
        vi.useFakeTimers();
    });
    afterEach(() => {
        vi.useRealTimers();
    });

    it("debounces rapid typing into one query", async () => {
        const queries: string[] = [];
        const scheduler = new HintScheduler(
            async (text) => {
                queries.push(text);
                return hintsFrame([text]);
            },
            () => {},
            () => {},
        );
        for (const draft of ["q", "qu", "qua", "quar", "quart"]) {
            scheduler.setDraft(draft);
            vi.advanceTimersByTime(40); // faster than the 150 ms window
        }
        await vi.advanceTimersByTimeAsync(200);
        expect(queries).toEqual(["quart"]);
    });

    it("caps sustained typing at roughly one query per debounce window", async () => {
        const queries: string[] = [];
        const scheduler = new HintScheduler(
            async (text) => {
                queries.push(text);
                return hintsFrame([text]);
            },
            () => {},
            () => {},
        );
        for (let i = 0; i < 10; i++) {
            scheduler.setDraft(`draft ${i}`);
            await vi.advanceTimersByTimeAsync(100);
        }
        await vi.advanceTimersByTimeAsync(300);
        // 1000 ms of nonstop typing, 150 ms debounce: at most ~7 queries.
        expect(queries.length).toBeLessThanOrEqual(7);
        expect(queries[queries.length - 1]).toBe("draft 9");
    });

    it("discards responses for drafts that are no longer current", async () => {
        const pending = new Map<string, ReturnType<typeof deferred<ServerFrame>>>();
        const applied: Hint[][] = [];
        const scheduler = new HintScheduler(
            (text) => {
                const gate = deferred<ServerFrame>();
                pending.set(text, gate);
                return gate.promise;
            },
            (hints) => applied.push(hints),
            () => {},
        );
        scheduler.setDraft("first");
        await vi.advanceTimersByTimeAsync(160);
        scheduler.setDraft("second");
        await vi.advanceTimersByTimeAsync(160);

        pending.get("second")!.resolve(hintsFrame(["for second"]));
        await vi.runAllTimersAsync();
        pending.get("first")!.resolve(hintsFrame(["for first"]));
        await vi.runAllTimersAsync();

        expect(applied.length).toBe(1);
        expect(applied[0]![0]!.hint_text).toBe("for second");
    });

    it("clears hints for an empty draft without querying", async () => {
        const queries: string[] = [];
        const applied: Hint[][] = [];
        const scheduler = new HintScheduler(
            async (text) => {
                queries.push(text);
                return hintsFrame([text]);
            },
            (hints) => applied.push(hints),
            () => {},
        );
        scheduler.setDraft("   ");
        await vi.advanceTimersByTimeAsync(300);
        expect(queries).toEqual([]);
        expect(applied).toEqual([[]]);
    });

    it("reports transport failure without breaking the chat", async () => {
        const banners: string[] = [];
        const scheduler = new HintScheduler(
            async () => {
                throw new Error("connection refused");
            },
            () => {},
            (message) => banners.push(message),
        );
        scheduler.setDraft("quartiles");
        await vi.advanceTimersByTimeAsync(200);
        expect(banners).toEqual(["hints unavailable"]);
    });
});
