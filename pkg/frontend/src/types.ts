/** API contract types, mirroring the service's document and snapshot shapes. */

export type NodeKind = "chance" | "decision" | "value";

export interface NodeRecord {
  id: string;
  name: string;
  kind: NodeKind;
  outcomes?: string[];
  parents: string[];
  table?: number[][];
  payoff?: number[];
  risk_aversion?: number;
}

export interface DiagramDocument {
  schema_version: number;
  nodes: NodeRecord[];
  layout?: Record<string, number[]>;  // [x, y]; plain arrays as JSON delivers them
}

export interface Snapshot {
  session_id: string;
  cursor: number;
  history_length: number;
  can_undo: boolean;
  can_redo: boolean;
  record: TransformSummary | null;
  diagram: DiagramDocument;
}

export interface TransformSummary {
  kind?: string;
  subject?: string[];
  patched_rows?: number[];
  edit?: string;
  policy?: PolicyView;
}

export interface PolicyChoice {
  state: Record<string, string>;
  alternative: string;
}

export interface PolicyView {
  decision: string;
  domain: string[];
  choices: PolicyChoice[];
}

export interface AlternativeRow {
  alternative: string;
  certain_equivalent: number;
  expected_value: number;
  standard_deviation: number;
}

export interface Solution {
  optimal_value: number;
  optimal_expected_utility: number;
  risk_aversion: number;
  policies: PolicyView[];
  transcript: { kind: string; subject: string[] }[];
  alternative_statistics?: AlternativeRow[];
  first_decision?: string;
  statistics?: { certain_equivalent: number; expected_value: number; standard_deviation: number };
}

export interface LotteryAtom {
  payoff: number;
  probability: number;
}

export interface LotteryView {
  atoms: LotteryAtom[];
  statistics: { certain_equivalent: number; expected_value: number; standard_deviation: number };
}

export interface ApiErrorBody {
  error: { code: string; message?: string; violations?: { code: string; message: string }[] };
}

/** Arc as drawn: conditioning/informational is implied by the target's kind. */
export interface Arc {
  from: string;
  to: string;
}

export function arcsOf(doc: DiagramDocument): Arc[] {
  const arcs: Arc[] = [];
  for (const node of doc.nodes) {
    for (const parent of node.parents) arcs.push({ from: parent, to: node.id });
  }
  return arcs;
}

export function nodeById(doc: DiagramDocument, id: string): NodeRecord | undefined {
  return doc.nodes.find((n) => n.id === id);
}
