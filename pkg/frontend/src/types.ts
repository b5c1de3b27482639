/** Wire types for the /api/v1 endpoints. The UI renders these verbatim;
 *  all physics happens server-side. Rows/cols are 1-based on the wire. */

export type SettingName = 'R1' | 'R2' | 'R3' | 'C1' | 'C2' | 'C3';
export type ColorName = 'red' | 'green';

export const SETTINGS: readonly SettingName[] = ['R1', 'R2', 'R3', 'C1', 'C2', 'C3'];
export const ROW_SETTINGS: readonly SettingName[] = ['R1', 'R2', 'R3'];
export const COLUMN_SETTINGS: readonly SettingName[] = ['C1', 'C2', 'C3'];

export interface PanelCell {
  row: number;
  col: number;
  color: ColorName;
}

export interface SidePayload {
  setting: SettingName;
  panels: PanelCell[];
  parity_ok: boolean;
}

export interface CommonPanel {
  row: number;
  col: number;
  alice_color: ColorName;
  bob_color: ColorName;
  match: boolean;
}

export interface RealityChain {
  row: number;
  col: number;
  alice_color: ColorName;
  predicted_bob_color: ColorName;
  observed_bob_color: ColorName;
  confirmed: boolean;
}

export interface RoundResponse {
  round: number;
  alice: SidePayload;
  bob: SidePayload;
  seed_fingerprint: string;
  common_panels: CommonPanel[];
  reality_chains: RealityChain[];
}

export interface SessionInfo {
  id: string;
  seed: string;
  variant: string;
}

export interface RecordsResponse {
  count: number;
  records: Array<{
    round: number;
    alice: { setting: SettingName; panels: PanelCell[] };
    bob: { setting: SettingName; panels: PanelCell[] };
    seed_fingerprint: string;
  }>;
}

export interface OutcomeTable {
  uses: number;
  counts: Record<string, number>;
}

export interface StatsResponse {
  rounds: number;
  seed: string;
  variant: string;
  parity_violations: number;
  correlation_violations: number;
  outcomes: Record<'alice' | 'bob', Record<SettingName, OutcomeTable>>;
}

export interface ConstraintResponse {
  constraints: Record<SettingName, boolean>;
  satisfied_count: number;
}

export interface GameValue {
  game: string;
  variant: string;
  classical_value: string;
  classical_value_float: number;
  quantum_value: string;
  optimal_strategy_count: number;
}

export interface GameValuesResponse {
  games: GameValue[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}
