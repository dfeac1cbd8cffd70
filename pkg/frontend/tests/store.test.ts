// Contract tests against a mocked server: the store renders exactly what
// the server said and never invents or recomputes memory numbers.

import { describe, expect, it } from "vitest";

import { AgentApi } from "../src/api";
import { ChatStore, NOTHING_TO_CONSOLIDATE } from "../src/store";
import type { LtmView, StmView } from "../src/types";
import {
  EMPTY_LTM,
  EMPTY_REPORT,
  EMPTY_STM,
  MockServer,
  baseServer,
  jsonResponse,
  reply,
  sleepReply,
} from "./mock";

async function startedStore(server: MockServer): Promise<ChatStore> {
  const store = new ChatStore(new AgentApi(server.base, server.fetch));
  await store.start();
  return store;
}

describe("session start", () => {
  it("adopts the server-issued session id", async () => {
    const store = await startedStore(baseServer("s-7"));
    expect(store.state.sessionId).toBe("s-7");
  });
});

describe("submitting turns", () => {
  it("keeps the avatar on the last reply's expression", async () => {
    const server = baseServer();
    server.onCall("POST", "/sessions/s-1/turns", (call) => {
      const text = (call.body as { text: string }).text;
      return {
        json: text.includes("party")
          ? reply("That sounds good!", "joy")
          : reply("I am sorry to hear that.", "sadness"),
      };
    });
    const store = await startedStore(server);

    await store.submitTurn("we threw a party");
    expect(store.state.avatar).toBe("joy");
    await store.submitTurn("the dog is ill");
    expect(store.state.avatar).toBe("sadness");
  });

  it("greets a stranger with a neutral face", async () => {
    const server = baseServer();
    server.on(
      "POST",
      "/sessions/s-1/turns",
      reply("Hello stranger! May I know your name?", "neutral"),
    );
    const store = await startedStore(server);

    await store.submitTurn("hello");
    expect(store.state.avatar).toBe("neutral");
    const last = store.state.transcript.at(-1);
    expect(last?.text).toBe("Hello stranger! May I know your name?");
    expect(last?.expression).toBe("neutral");
  });

  it("appends entries in server reply order", async () => {
    const server = baseServer();
    let turn = 0;
    server.onCall("POST", "/sessions/s-1/turns", () => ({
      json: reply(`reply ${++turn}`),
    }));
    const store = await startedStore(server);

    await store.submitTurn("first");
    await store.submitTurn("second");
    expect(store.state.transcript.map((e) => e.text)).toEqual([
      "first",
      "reply 1",
      "second",
      "reply 2",
    ]);
  });

  it("sends the selected person and emotion with each turn", async () => {
    const server = baseServer();
    server.on("POST", "/sessions/s-1/turns", reply("I see."));
    const store = await startedStore(server);

    store.selectPerson("Knob");
    store.selectEmotion("sadness");
    await store.submitTurn("my dog is gone");
    expect(server.callsTo("POST", "/sessions/s-1/turns")[0]?.body).toEqual({
      text: "my dog is gone",
      declared_person: "Knob",
      declared_emotion: "sadness",
    });
  });

  it("shows the declared emotion on the stored event verbatim", async () => {
    const sadLtm: LtmView = {
      counts: { events: 1, resources: 2, people: 0 },
      events: [
        {
          kind: "event",
          id: 1,
          seq: 1,
          wall: 1.0,
          event_type: "interaction",
          emotion: "sadness",
          polarity: -0.7,
          resource_ids: [2, 3],
        },
      ],
      resources: [],
      people: [],
    };
    const server = new MockServer();
    server.on("POST", "/sessions", { session_id: "s-1" });
    server.on("POST", "/sessions/s-1/turns", reply("I am sorry to hear that.", "sadness"));
    server.on("GET", "/sessions/s-1/stm", EMPTY_STM);
    server.on("GET", "/memory/ltm", sadLtm);
    const store = await startedStore(server);

    store.selectEmotion("sadness");
    await store.submitTurn("my dog is gone");
    expect(store.state.ltmView).toEqual(sadLtm);
    expect(store.state.ltmView?.events[0]?.emotion).toBe("sadness");
  });

  it("refuses empty input without calling the server", async () => {
    const server = baseServer();
    const store = await startedStore(server);

    expect(store.canSubmit("")).toBe(false);
    expect(store.canSubmit("   ")).toBe(false);
    await store.submitTurn("   ");
    expect(server.callsTo("POST", "/sessions/s-1/turns")).toHaveLength(0);
  });

  it("allows only one in-flight turn", async () => {
    const server = baseServer();
    let release: (value: Response) => void = () => {};
    const gate = new Promise<Response>((resolve) => (release = resolve));
    const fetchImpl: typeof server.fetch = (input, init) => {
      if (input.endsWith("/turns")) {
        server.calls.push({
          method: init?.method ?? "GET",
          path: "/sessions/s-1/turns",
          body: undefined,
        });
        return gate;
      }
      return server.fetch(input, init);
    };
    const store = new ChatStore(new AgentApi(server.base, fetchImpl));
    await store.start();

    const first = store.submitTurn("one");
    expect(store.state.busy).toBe(true);
    expect(store.canSubmit("two")).toBe(false);
    await store.submitTurn("two"); // ignored while busy
    release(jsonResponse(reply("done")));
    await first;
    expect(server.callsTo("POST", "/sessions/s-1/turns")).toHaveLength(1);
  });

  it("keeps the input and shows a banner when the turn fails", async () => {
    const server = baseServer();
    server.on("POST", "/sessions/s-1/turns", { detail: "text must be non-empty" }, 400);
    const store = await startedStore(server);

    await store.submitTurn("doomed message");
    expect(store.state.banner).toBe("text must be non-empty");
    expect(store.state.pendingInput).toBe("doomed message");
    expect(store.state.transcript).toHaveLength(0);
    expect(store.state.busy).toBe(false);
  });
});

describe("identify", () => {
  it("greets through the server and tracks the expression", async () => {
    const server = baseServer();
    server.on("POST", "/sessions/s-1/identify", reply("Greetings Knob!", "joy"));
    const store = await startedStore(server);

    await store.identify("Knob");
    expect(store.state.selectedPerson).toBe("Knob");
    expect(store.state.transcript.at(-1)?.text).toBe("Greetings Knob!");
    expect(store.state.avatar).toBe("joy");
  });
});

describe("sleep", () => {
  const report = {
    reduced: [
      { resource_id: 4, old_weight: 0.1, new_weight: 0.09531017980432493 },
    ],
    forgotten_resources: [4],
    forgotten_events: [2],
    stm_cleared_count: 3,
  };

  it("renders the consolidation report exactly as sent", async () => {
    const server = baseServer();
    server.on(
      "POST",
      "/sessions/s-1/sleep",
      sleepReply("Zzz... 1 weights reduced, 1 resources forgotten, 1 events forgotten.", report),
    );
    const store = await startedStore(server);

    await store.triggerSleep();
    expect(store.state.report).toEqual(report);
    expect(store.state.report?.reduced[0]?.new_weight).toBe(
      0.09531017980432493,
    );
    expect(store.state.avatar).toBe("sleeping");
    expect(store.state.transcript.at(-1)?.text).toMatch(/^Zzz/);
    expect(store.state.notice).toBeNull();
  });

  it("wears the sleeping face while the call is in flight", async () => {
    const server = baseServer();
    let release: (value: Response) => void = () => {};
    const gate = new Promise<Response>((resolve) => (release = resolve));
    const fetchImpl: typeof server.fetch = (input, init) =>
      input.endsWith("/sleep") ? gate : server.fetch(input, init);
    const store = new ChatStore(new AgentApi(server.base, fetchImpl));
    await store.start();

    const pending = store.triggerSleep();
    expect(store.state.avatar).toBe("sleeping");
    release(jsonResponse(sleepReply("Zzz...", EMPTY_REPORT)));
    await pending;
  });

  it("notices when there was nothing to consolidate", async () => {
    const server = baseServer();
    server.on("POST", "/sessions/s-1/sleep", sleepReply("Zzz...", EMPTY_REPORT));
    const store = await startedStore(server);

    await store.triggerSleep();
    expect(store.state.notice).toBe(NOTHING_TO_CONSOLIDATE);
    expect(store.state.banner).toBeNull();
  });

  it("tolerates a second sleep right after the first", async () => {
    const server = baseServer();
    server.onCall("POST", "/sessions/s-1/sleep", () => ({
      json: sleepReply("Zzz...", EMPTY_REPORT),
    }));
    const store = await startedStore(server);

    await store.triggerSleep();
    await store.triggerSleep();
    expect(store.state.banner).toBeNull();
    expect(store.state.report).toEqual(EMPTY_REPORT);
  });

  it("returns the avatar to neutral when sleep fails", async () => {
    const server = baseServer();
    server.on("POST", "/sessions/s-1/sleep", { detail: "boom" }, 500);
    const store = await startedStore(server);

    await store.triggerSleep();
    expect(store.state.banner).toBe("boom");
    expect(store.state.avatar).toBe("neutral");
  });
});

describe("memory inspector", () => {
  it("stores short-term slots exactly as the server sent them", async () => {
    const stm: StmView = {
      tick_counter: 2,
      slots: [
        {
          resource_id: 3,
          label: "vacation",
          activation: 0.6931471805599453,
          weight: 0.9,
        },
        {
          resource_id: 4,
          label: "glasgow",
          activation: 0.2105099168242206,
          weight: 0.1,
        },
      ],
    };
    const server = new MockServer();
    server.on("POST", "/sessions", { session_id: "s-1" });
    server.on("POST", "/sessions/s-1/turns", reply("I see."));
    server.on("GET", "/sessions/s-1/stm", stm);
    server.on("GET", "/memory/ltm", EMPTY_LTM);
    const store = await startedStore(server);

    await store.submitTurn("I went to Glasgow");
    expect(store.state.stmView).toEqual(stm);
    const activations = store.state.stmView?.slots.map((s) => s.activation);
    expect(activations).toEqual([0.6931471805599453, 0.2105099168242206]);
  });

  it("refreshes both panels after every successful turn", async () => {
    const server = baseServer();
    server.on("POST", "/sessions/s-1/turns", reply("I see."));
    const store = await startedStore(server);

    await store.submitTurn("hello");
    await store.submitTurn("hello again");
    expect(server.callsTo("GET", "/sessions/s-1/stm")).toHaveLength(2);
    expect(server.callsTo("GET", "/memory/ltm")).toHaveLength(2);
    expect(store.state.stmView).toEqual(EMPTY_STM);
    expect(store.state.ltmView).toEqual(EMPTY_LTM);
  });
});
