import { mountConsole } from "./app";

const base = import.meta.env.VITE_API_BASE ?? "http://127.0.0.1:8000";
mountConsole(document.getElementById("app")!, base);
