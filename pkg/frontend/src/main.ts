import { ChatApp } from "./app.js";
import { HttpTransport } from "./transport.js";

window.addEventListener("DOMContentLoaded", () => {
    const root = document.getElementById("app");
    if (root === null) {
        return;
    }
    const app = new ChatApp(root, new HttpTransport(""));
    void app.start();
});
