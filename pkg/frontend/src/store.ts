// UI state and the operations that mutate it. All numbers shown in the
// memory inspector are stored exactly as the server sent them; the
// client performs no memory arithmetic of its own.

import { AgentApi } from "./api";
import type {
  ConsolidationReport,
  EmotionLabel,
  Expression,
  LtmView,
  StmView,
} from "./types";

export interface TranscriptEntry {
  speaker: "you" | "arthur";
  text: string;
  expression: Expression;
}

export interface UiState {
  sessionId: string | null;
  transcript: TranscriptEntry[];
  selectedPerson: string | null;
  selectedEmotion: EmotionLabel;
  avatar: Expression;
  stmView: StmView | null;
  ltmView: LtmView | null;
  report: ConsolidationReport | null;
  notice: string | null;
  banner: string | null;
  pendingInput: string;
  busy: boolean;
}

export const NOTHING_TO_CONSOLIDATE = "nothing to consolidate";

function emptyReport(report: ConsolidationReport): boolean {
  return (
    report.reduced.length === 0 &&
    report.forgotten_resources.length === 0 &&
    report.forgotten_events.length === 0 &&
    report.stm_cleared_count === 0
  );
}

export class ChatStore {
  readonly state: UiState = {
    sessionId: null,
    transcript: [],
    selectedPerson: null,
    selectedEmotion: "neutral",
    avatar: "neutral",
    stmView: null,
    ltmView: null,
    report: null,
    notice: null,
    banner: null,
    pendingInput: "",
    busy: false,
  };

  private listeners: Array<() => void> = [];

  constructor(private readonly api: AgentApi) {}

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  async start(): Promise<void> {
    const { session_id } = await this.api.createSession();
    this.state.sessionId = session_id;
    this.emit();
  }

  canSubmit(text: string): boolean {
    return (
      this.state.sessionId !== null && !this.state.busy && text.trim() !== ""
    );
  }

  selectPerson(name: string | null): void {
    this.state.selectedPerson = name && name.trim() !== "" ? name : null;
    this.emit();
  }

  selectEmotion(emotion: EmotionLabel): void {
    this.state.selectedEmotion = emotion;
    this.emit();
  }

  async submitTurn(text: string): Promise<void> {
    const sessionId = this.state.sessionId;
    if (sessionId === null || !this.canSubmit(text)) return;
    const { state } = this;
    state.busy = true;
    state.banner = null;
    state.notice = null;
    state.pendingInput = text;
    this.emit();
    try {
      const reply = await this.api.postTurn(sessionId, {
        text,
        declared_person: state.selectedPerson,
        declared_emotion: state.selectedEmotion,
      });
      state.transcript.push({
        speaker: "you",
        text,
        expression: state.selectedEmotion,
      });
      state.transcript.push({
        speaker: "arthur",
        text: reply.text,
        expression: reply.expression,
      });
      state.avatar = reply.expression;
      state.pendingInput = "";
      await this.refreshMemory();
    } catch (error) {
      // Keep the input so the user can retry the same message.
      state.banner = error instanceof Error ? error.message : String(error);
    } finally {
      state.busy = false;
      this.emit();
    }
  }

  async identify(name: string): Promise<void> {
    const sessionId = this.state.sessionId;
    if (sessionId === null || this.state.busy) return;
    const { state } = this;
    state.busy = true;
    state.banner = null;
    this.emit();
    try {
      const reply = await this.api.identify(sessionId, name);
      state.selectedPerson = name;
      state.transcript.push({
        speaker: "arthur",
        text: reply.text,
        expression: reply.expression,
      });
      state.avatar = reply.expression;
      await this.refreshMemory();
    } catch (error) {
      state.banner = error instanceof Error ? error.message : String(error);
    } finally {
      state.busy = false;
      this.emit();
    }
  }

  async triggerSleep(): Promise<void> {
    const sessionId = this.state.sessionId;
    if (sessionId === null || this.state.busy) return;
    const { state } = this;
    state.busy = true;
    state.banner = null;
    state.notice = null;
    state.avatar = "sleeping";
    this.emit();
    try {
      const reply = await this.api.sleep(sessionId);
      state.report = reply.report;
      if (emptyReport(reply.report)) {
        state.notice = NOTHING_TO_CONSOLIDATE;
      }
      state.transcript.push({
        speaker: "arthur",
        text: reply.text,
        expression: reply.expression,
      });
      state.avatar = reply.expression;
      await this.refreshMemory();
    } catch (error) {
      state.banner = error instanceof Error ? error.message : String(error);
      state.avatar = "neutral";
    } finally {
      state.busy = false;
      this.emit();
    }
  }

  async teach(term: string, imagePath: string): Promise<void> {
    if (this.state.busy) return;
    const { state } = this;
    state.busy = true;
    state.banner = null;
    this.emit();
    try {
      const reply = await this.api.teach(term, imagePath);
      state.transcript.push({
        speaker: "arthur",
        text: reply.text,
        expression: reply.expression,
      });
      state.avatar = reply.expression;
      await this.refreshMemory();
    } catch (error) {
      state.banner = error instanceof Error ? error.message : String(error);
    } finally {
      state.busy = false;
      this.emit();
    }
  }

  async refreshMemory(): Promise<void> {
    if (this.state.sessionId === null) return;
    const [stmView, ltmView] = await Promise.all([
      this.api.stm(this.state.sessionId),
      this.api.ltm(),
    ]);
    this.state.stmView = stmView;
    this.state.ltmView = ltmView;
  }
}
