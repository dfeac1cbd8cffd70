// DOM wiring: renders the store state into the page and forwards user
// input to the store. All conversation and memory content comes from
// the server responses held in the store.

import { AgentApi } from "./api";
import { faceFor } from "./avatar";
import { ChatStore } from "./store";
import { EMOTIONS } from "./types";

declare global {
  interface Window {
    ARTHUR_BASE_URL?: string;
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function setupApp(store: ChatStore): void {
  const avatar = el<HTMLDivElement>("avatar");
  const transcript = el<HTMLDivElement>("transcript");
  const banner = el<HTMLDivElement>("banner");
  const notice = el<HTMLDivElement>("notice");
  const input = el<HTMLInputElement>("chat-input");
  const send = el<HTMLButtonElement>("send");
  const sleep = el<HTMLButtonElement>("sleep");
  const person = el<HTMLInputElement>("person");
  const identify = el<HTMLButtonElement>("identify");
  const emotion = el<HTMLSelectElement>("emotion");
  const report = el<HTMLDivElement>("report");
  const stmPanel = el<HTMLDivElement>("stm-panel");
  const ltmPanel = el<HTMLDivElement>("ltm-panel");

  for (const label of EMOTIONS) {
    const option = document.createElement("option");
    option.value = label;
    option.textContent = label;
    if (label === "neutral") option.selected = true;
    emotion.appendChild(option);
  }

  function render(): void {
    const { state } = store;
    avatar.textContent = faceFor(state.avatar);
    avatar.title = state.avatar;

    transcript.innerHTML = state.transcript
      .map(
        (entry) =>
          `<p class="${entry.speaker}"><b>${entry.speaker}</b> ` +
          `${escapeHtml(entry.text)} <i>[${entry.expression}]</i></p>`,
      )
      .join("");
    transcript.scrollTop = transcript.scrollHeight;

    banner.textContent = state.banner ?? "";
    banner.hidden = state.banner === null;
    notice.textContent = state.notice ?? "";
    notice.hidden = state.notice === null;

    send.disabled = !store.canSubmit(input.value);
    sleep.disabled = state.busy || state.sessionId === null;
    if (state.pendingInput !== "" && input.value === "") {
      input.value = state.pendingInput;
    }

    if (state.report === null) {
      report.innerHTML = "";
    } else {
      const lines = [
        ...state.report.reduced.map(
          (r) =>
            `resource ${r.resource_id}: weight ${r.old_weight} → ${r.new_weight}`,
        ),
        ...state.report.forgotten_resources.map((id) => `forgot resource ${id}`),
        ...state.report.forgotten_events.map((id) => `forgot event ${id}`),
        `short-term slots cleared: ${state.report.stm_cleared_count}`,
      ];
      report.innerHTML =
        "<h3>last sleep</h3>" +
        lines.map((line) => `<p>${escapeHtml(line)}</p>`).join("");
    }

    if (state.stmView === null) {
      stmPanel.innerHTML = "";
    } else {
      const rows = state.stmView.slots
        .map(
          (slot) =>
            `<tr><td>${slot.resource_id}</td><td>${escapeHtml(slot.label)}</td>` +
            `<td>${slot.activation}</td><td>${slot.weight}</td></tr>`,
        )
        .join("");
      stmPanel.innerHTML =
        `<h3>short-term memory (tick ${state.stmView.tick_counter})</h3>` +
        `<table><tr><th>id</th><th>label</th><th>activation</th><th>weight</th></tr>${rows}</table>`;
    }

    if (state.ltmView === null) {
      ltmPanel.innerHTML = "";
    } else {
      const counts = state.ltmView.counts;
      const events = state.ltmView.events
        .map(
          (event) =>
            `<li>#${event.id} ${escapeHtml(event.event_type)} ` +
            `[${event.emotion}] resources: ${event.resource_ids.join(", ")}</li>`,
        )
        .join("");
      ltmPanel.innerHTML =
        `<h3>long-term memory</h3>` +
        `<p>${counts.events} events, ${counts.resources} resources, ${counts.people} people</p>` +
        `<ul>${events}</ul>`;
    }
  }

  store.subscribe(render);
  input.addEventListener("input", render);

  send.addEventListener("click", () => {
    const text = input.value;
    input.value = "";
    void store.submitTurn(text);
  });
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter" && store.canSubmit(input.value)) {
      const text = input.value;
      input.value = "";
      void store.submitTurn(text);
    }
  });
  sleep.addEventListener("click", () => void store.triggerSleep());
  identify.addEventListener("click", () => {
    if (person.value.trim() !== "") void store.identify(person.value.trim());
  });
  emotion.addEventListener("change", () => {
    store.selectEmotion(emotion.value as (typeof EMOTIONS)[number]);
  });

  render();
  void store.start();
}

export function main(): void {
  const baseUrl = window.ARTHUR_BASE_URL ?? "http://127.0.0.1:8717";
  setupApp(new ChatStore(new AgentApi(baseUrl)));
}

if (typeof document !== "undefined" && document.getElementById("avatar")) {
  main();
}
