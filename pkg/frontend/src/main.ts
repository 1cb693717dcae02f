import { mount } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

// same-origin by default; override with ?api=http://host:port
const params = new URLSearchParams(window.location.search);
mount(root, { apiBase: params.get("api") ?? "" });
