/** Wire types for the tutoring service; shapes mirror the server's JSON. */

export const SUPPORTED_SPEC_VERSION = 1;

export interface SlotJson {
  name: string;
  value: string;
  kind: string;
  highlighted: boolean;
}

export type SegmentJson =
  | { text: string }
  | { slot: SlotJson }
  | { nested: RenderSpecJson }
  | { substack: RenderSpecJson[] };

export interface RenderSpecJson {
  specVersion: number;
  shape: string; // HAT | STACK | C_BLOCK | REPORTER | BOOLEAN | CAP | SCRIPT | FALLBACK
  category: string;
  colorHex: string;
  highlighted: boolean;
  segments: SegmentJson[];
}

export interface DiffItemJson {
  id: string;
  level: string;
  kind: string;
  severity: number;
  message: string;
  changedSlots: string[];
}

export interface ReportJson {
  items: DiffItemJson[];
  suppressed: { item: DiffItemJson; reason: string }[];
  functionallyEquivalent: boolean;
}

export interface SessionPayload {
  sessionId: string;
  revision: number;
  status: "IN_PROGRESS" | "COMPLETE";
  report: ReportJson;
  summativeMessage?: string;
}

export interface RenderPayload {
  text: string[];
  spec: RenderSpecJson;
}

export interface HintPayload {
  hintId: string;
  item: DiffItemJson;
  explanation: string;
  studentRender: RenderPayload | null;
  teacherRender: RenderPayload | null;
  patchAvailable: boolean;
  patchDestructive: boolean;
}

export interface ServiceError {
  error: string;
  detail: string;
}
