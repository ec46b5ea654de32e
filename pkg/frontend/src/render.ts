import { barChart } from "./chart.js";
import {
    AskRecord,
    EnvVar,
    Hint,
    ResponseRecord,
    ShowValueRecord,
} from "./protocol.js";

function bubble(extra: string): HTMLElement {
    const node = document.createElement("div");
    node.className = `bubble ${extra}`;
    return node;
}

export function renderUserBubble(text: string): HTMLElement {
    const node = bubble("user");
    node.textContent = text;
    return node;
}

/* One agent response becomes one bubble. Asks with options render clickable
   buttons; the same answer can always be typed instead. Unknown kinds are
   shown raw rather than dropped, so a newer server stays debuggable. */
export function renderTurn(
    record: ResponseRecord,
    sendOption: (label: string) => void,
): HTMLElement {
    switch (record.kind) {
        case "say": {
            const node = bubble("agent say");
            node.textContent = record.text;
            return node;
        }
        case "show_help": {
            const node = bubble("agent help");
            node.textContent = record.text;
            return node;
        }
        case "error": {
            const node = bubble("agent error");
            node.textContent = record.text;
            return node;
        }
        case "ask":
            return renderAsk(record, sendOption);
        case "show_value":
            return renderValue(record);
        default: {
            const node = bubble("agent warning");
            node.textContent = `unrecognized response: ${JSON.stringify(record)}`;
            return node;
        }
    }
}

function renderAsk(record: AskRecord, sendOption: (label: string) => void): HTMLElement {
    const node = bubble("agent ask");
    const prompt = document.createElement("p");
    prompt.textContent = record.prompt;
    node.appendChild(prompt);
    if (record.options.length > 0) {
        const row = document.createElement("div");
        row.className = "options";
        for (const label of record.options) {
            const button = document.createElement("button");
            button.type = "button";
            button.className = "option";
            button.textContent = label;
            button.addEventListener("click", () => sendOption(label));
            row.appendChild(button);
        }
        node.appendChild(row);
    }
    return node;
}

function renderValue(record: ShowValueRecord): HTMLElement {
    const node = bubble("agent value");
    if (record.explanation) {
        const explanation = document.createElement("p");
        explanation.textContent = record.explanation;
        node.appendChild(explanation);
    }
    if (record.value.plot) {
        node.appendChild(barChart(record.value.plot));
    } else {
        const block = document.createElement("pre");
        block.className = "value-block";
        block.textContent = record.value.block;
        node.appendChild(block);
    }
    return node;
}

/* The top hint is what submit will run; it gets the marker class. */
export function renderHints(container: HTMLElement, hints: Hint[]): void {
    container.textContent = "";
    hints.slice(0, 5).forEach((hint, index) => {
        const row = document.createElement("div");
        row.className = index === 0 ? "hint top" : "hint";
        row.textContent = hint.hint_text;
        row.dataset.command = hint.command_id;
        container.appendChild(row);
    });
}

export function renderSidebar(container: HTMLElement, vars: EnvVar[]): void {
    container.textContent = "";
    for (const entry of vars) {
        const row = document.createElement("div");
        row.className = "env-row";

        const name = document.createElement("span");
        name.className = "env-name";
        name.textContent = entry.name;

        const type = document.createElement("span");
        type.className = "env-type";
        type.textContent = entry.type;

        const preview = document.createElement("span");
        preview.className = "env-preview";
        preview.textContent = entry.preview;

        row.appendChild(name);
        row.appendChild(type);
        row.appendChild(preview);
        container.appendChild(row);
    }
}
