// Wire types for the agent service. These mirror the server JSON
// verbatim; the client never derives or recomputes any of these values.

export const EMOTIONS = [
  "anger",
  "disgust",
  "doubt",
  "fear",
  "joy",
  "sadness",
  "surprise",
  "worry",
  "neutral",
] as const;

export type EmotionLabel = (typeof EMOTIONS)[number];

// "sleeping" is an expression only; it is never a selectable emotion.
export type Expression = EmotionLabel | "sleeping";

export interface AgentReply {
  text: string;
  expression: Expression;
  retrieved_event_ids: number[];
  actions: string[];
}

export interface WeightReduction {
  resource_id: number;
  old_weight: number;
  new_weight: number;
}

export interface ConsolidationReport {
  reduced: WeightReduction[];
  forgotten_resources: number[];
  forgotten_events: number[];
  stm_cleared_count: number;
}

export interface SleepReply extends AgentReply {
  report: ConsolidationReport;
}

export interface SessionInfo {
  session_id: string;
  turns: number;
  phase: string;
}

export interface TurnRequest {
  text?: string | null;
  declared_person?: string | null;
  declared_emotion?: string;
  attached_image?: string | null;
}

export interface StmSlot {
  resource_id: number;
  label: string;
  activation: number;
  weight: number;
}

export interface StmView {
  tick_counter: number;
  slots: StmSlot[];
}

export interface Timestamp {
  seq: number;
  wall: number;
}

export interface EventRecord {
  kind: "event";
  id: number;
  seq: number;
  wall: number;
  event_type: string;
  emotion: EmotionLabel;
  polarity: number;
  resource_ids: number[];
}

export interface FactRecord {
  subject: string;
  attribute: string;
  value: unknown;
}

export interface ResourceRecord {
  kind: "resource";
  id: number;
  seq: number;
  wall: number;
  resource_type: string;
  owner_event_id: number;
  activation: number;
  weight: number;
  token: string | null;
  fact: FactRecord | null;
  path: string | null;
  tag: string | null;
  consolidated: boolean;
}

export interface PersonRecord {
  kind: "person";
  name: string;
  seq: number;
  wall: number;
  met_event_id: number;
}

export interface LtmCounts {
  events: number;
  resources: number;
  people: number;
}

export interface LtmView {
  counts: LtmCounts;
  events: EventRecord[];
  resources: ResourceRecord[];
  people: PersonRecord[];
}

export interface PersonView {
  name: string;
  first_met: Timestamp;
  facts: Record<string, unknown>;
}

export interface EventMatch {
  event: EventRecord;
  matched_cues: string[];
  score: number;
}
