/* Wire frames exchanged with the parlance service. Field names mirror the
   JSON schema exactly; every frame carries the protocol version. */

export const PROTOCOL_VERSION = 1;

export interface Frame {
    v: number;
    type: string;
}

export interface SessionCreated extends Frame {
    type: "session_created";
    session: string;
}

export interface AgentTurn extends Frame {
    type: "agent_turn";
    responses: ResponseRecord[];
}

export interface HintsFrame extends Frame {
    type: "hints";
    ranked: Hint[];
    pending: AskRecord | null;
}

export interface EnvSnapshot extends Frame {
    type: "env_snapshot";
    vars: EnvVar[];
}

export interface ScriptFrame extends Frame {
    type: "script";
    text: string;
}

export interface ErrorFrame extends Frame {
    type: "error";
    code: string;
    text: string;
}

export interface HealthFrame extends Frame {
    type: "health";
    status: string;
    protocol: number;
}

export type ServerFrame =
    | SessionCreated
    | AgentTurn
    | HintsFrame
    | EnvSnapshot
    | ScriptFrame
    | ErrorFrame
    | HealthFrame;

export interface Hint {
    command_id: string;
    hint_text: string;
    score: number;
}

export interface EnvVar {
    name: string;
    type: string;
    preview: string;
}

export interface SayRecord {
    kind: "say";
    text: string;
}

export interface AskRecord {
    kind: "ask";
    prompt: string;
    expected: string;
    options: string[];
}

export interface PlotRecord {
    kind: string;
    categories: string[];
    values: number[];
    title: string;
    axes: { x: string; y: string };
}

export interface ValueRecord {
    type: string;
    preview: string;
    block: string;
    plot?: PlotRecord;
}

export interface ShowValueRecord {
    kind: "show_value";
    explanation: string;
    value: ValueRecord;
}

export interface ShowHelpRecord {
    kind: "show_help";
    text: string;
}

export interface ErrorRecord {
    kind: "error";
    text: string;
}

export type ResponseRecord =
    | SayRecord
    | AskRecord
    | ShowValueRecord
    | ShowHelpRecord
    | ErrorRecord;

export class ProtocolMismatch extends Error {
    constructor(public readonly got: unknown) {
        super(`server speaks protocol ${String(got)}, this client speaks ${PROTOCOL_VERSION}`);
        this.name = "ProtocolMismatch";
    }
}

export class BadFrame extends Error {
    constructor(detail: string) {
        super(detail);
        this.name = "BadFrame";
    }
}

/* Accepts a decoded JSON payload and narrows it to a server frame. A version
   other than PROTOCOL_VERSION must surface as an upgrade banner, so it gets
   its own error type. */
export function parseFrame(payload: unknown): ServerFrame {
    if (typeof payload !== "object" || payload === null || Array.isArray(payload)) {
        throw new BadFrame("frame is not an object");
    }
    const frame = payload as Record<string, unknown>;
    if (frame.v !== PROTOCOL_VERSION) {
        throw new ProtocolMismatch(frame.v);
    }
    if (typeof frame.type !== "string") {
        throw new BadFrame("frame has no type");
    }
    return frame as unknown as ServerFrame;
}

export function clientFrame(type: string, fields: Record<string, unknown>): Frame {
    return { v: PROTOCOL_VERSION, type, ...fields } as Frame;
}
