/** Wire types mirroring the icecluster service JSON formats. */

export interface TermJson {
  coeff: string;
  exponents: number[];
}

export interface QuiverVertexJson {
  id: number;
  frozen: boolean;
}

export interface QuiverArrowJson {
  id: string;
  src: number;
  tgt: number;
  frozen: boolean;
}

export interface QuiverJson {
  vertices: QuiverVertexJson[];
  arrows: QuiverArrowJson[];
}

export interface SeedJson {
  quiver: QuiverJson;
  names: string[];
  cluster: TermJson[][];
  treeAddress: number[];
}

export interface RatioJson {
  num: TermJson[];
  den: TermJson[];
}

export interface SessionSnapshot {
  id: string;
  current: SeedJson;
  potential: unknown;
  yhat: Record<string, RatioJson>;
  history: unknown[];
}

export interface ExchangeResult {
  kind: "exchange";
  vertex: number;
  removed: TermJson[];
  added: TermJson[];
  plusTerm: TermJson[];
  minusTerm: TermJson[];
}

export interface FrozenResult {
  kind: "frozen";
  role: "frozenSource" | "frozenSink";
  psi: Record<string, TermJson[]>;
}

export type MutationResult = ExchangeResult | FrozenResult;

export interface MutateResponse {
  session: SessionSnapshot;
  result: MutationResult;
}

export interface ApiErrorBody {
  code: number;
  message: string;
  witness?: unknown;
}
