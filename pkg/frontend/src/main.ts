import { SessionClient } from "./api.js";
import { createApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const app = createApp(root, new SessionClient(""));
  void app.start().catch((exc) => {
    root.appendChild(document.createTextNode(`failed to reach the service: ${exc}`));
  });
}
