import { PlotRecord } from "./protocol.js";

/* Renders a plot record as horizontal bars: one row per category, bar width
   proportional to the largest value, categories in delivered order. */
export function barChart(plot: PlotRecord): HTMLElement {
    const chart = document.createElement("figure");
    chart.className = "bar-chart";
    if (plot.title) {
        const caption = document.createElement("figcaption");
        caption.textContent = plot.title;
        chart.appendChild(caption);
    }
    const peak = Math.max(...plot.values.map(Math.abs), 1e-12);
    for (let i = 0; i < plot.categories.length; i++) {
        const row = document.createElement("div");
        row.className = "bar-row";

        const label = document.createElement("span");
        label.className = "bar-label";
        label.textContent = plot.categories[i] ?? "";

        const bar = document.createElement("span");
        bar.className = "bar-fill";
        const value = plot.values[i] ?? 0;
        bar.style.width = `${Math.round((Math.abs(value) / peak) * 100)}%`;

        const amount = document.createElement("span");
        amount.className = "bar-value";
        amount.textContent = String(Math.round(value * 10000) / 10000);

        row.appendChild(label);
        row.appendChild(bar);
        row.appendChild(amount);
        chart.appendChild(row);
    }
    return chart;
}
