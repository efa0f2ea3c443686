import { ApiClient } from "./api.js";
import { AnnotationApp } from "./app.js";

function annotatorId(): string {
  const fromUrl = new URLSearchParams(window.location.search).get("annotator");
  if (fromUrl) return fromUrl;
  const stored = window.localStorage.getItem("annotator-id");
  if (stored) return stored;
  const generated = `annotator-${Math.random().toString(36).slice(2, 10)}`;
  window.localStorage.setItem("annotator-id", generated);
  return generated;
}

document.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app root");
  const app = new AnnotationApp(root, new ApiClient(), annotatorId());
  void app.start();
});
