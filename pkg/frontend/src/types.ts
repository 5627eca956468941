// Wire types mirroring the debate service JSON.

export type Relation = "attack" | "support";

export interface TreeNode {
  id: string;
  text: string;
  depth: number;
}

export interface TreeEdge {
  child: string;
  parent: string;
  relation: Relation;
}

export interface TreeResponse {
  debate_id: string;
  revision: number;
  title: string | null;
  domain: string | null;
  root: string;
  nodes: TreeNode[];
  edges: TreeEdge[];
}

export interface Diagnostic {
  line_number: number;
  severity: "error" | "warning";
  code: string;
  message: string;
}

export interface ImportResponse {
  debate_id: string;
  revision: number;
  diagnostics: Diagnostic[];
}

export interface Classification {
  p_attack: number;
  p_support: number;
  predicted: Relation;
  is_tie: boolean;
  backend_id: string;
  prompt_fingerprint: string;
}

export interface AssistResponse {
  draft_text: string;
  intended: Relation;
  p_intended: number;
  verdict: "achieves" | "misses";
  suggestion: string;
  revision: number;
}

export interface VerifyResult extends TreeEdge {
  stored?: Relation;
  predicted?: Relation;
  probability_of_stored?: number;
  status?: "confirmed" | "mismatch" | "low_confidence";
  error?: string;
}

export interface VerifySummary {
  total: number;
  confirmed: number;
  mismatched: number;
  low_confidence: number;
  results: VerifyResult[];
  revision: number;
}
