/** Pure helpers turning wire payloads into renderable 3x3 grids.
 *  No client-side physics: every color shown comes from a server record. */

import type {
  ColorName,
  OutcomeTable,
  PanelCell,
  RoundResponse,
  SettingName,
  StatsResponse,
} from './types';

export type CellGrid = (ColorName | null)[][];

export function emptyGrid(): CellGrid {
  return [
    [null, null, null],
    [null, null, null],
    [null, null, null],
  ];
}

/** 3x3 grid (0-based) from one side's lit panels (1-based on the wire). */
export function panelsToGrid(panels: PanelCell[]): CellGrid {
  const grid = emptyGrid();
  for (const panel of panels) {
    if (panel.row < 1 || panel.row > 3 || panel.col < 1 || panel.col > 3) {
      throw new Error(`panel position out of range: (${panel.row}, ${panel.col})`);
    }
    grid[panel.row - 1]![panel.col - 1] = panel.color;
  }
  return grid;
}

/** Set of "row,col" keys (1-based) shared by both detectors this round. */
export function commonPanelKeys(round: RoundResponse): Set<string> {
  return new Set(round.common_panels.map((p) => `${p.row},${p.col}`));
}

/** One log line per round, in the style of a record comparison table. */
export function describeRound(round: RoundResponse): string {
  const side = (panels: PanelCell[]) =>
    panels.map((p) => (p.color === 'green' ? 'G' : 'R')).join('');
  const overlap =
    round.common_panels.length === 0
      ? 'no common panels'
      : round.common_panels
          .map((p) => `(${p.row},${p.col}) ${p.match ? 'match' : 'MISMATCH'}`)
          .join(' ');
  return (
    `#${round.round}  Alice ${round.alice.setting}=${side(round.alice.panels)}  ` +
    `Bob ${round.bob.setting}=${side(round.bob.panels)}  ${overlap}`
  );
}

export interface FrequencyRow {
  setting: SettingName;
  uses: number;
  frequencies: Array<{ key: string; value: number }>;
}

/** Per-setting outcome frequencies for one party; each should drift toward 1/4. */
export function frequencyRows(stats: StatsResponse, party: 'alice' | 'bob'): FrequencyRow[] {
  const rows: FrequencyRow[] = [];
  for (const [setting, table] of Object.entries(stats.outcomes[party]) as Array<
    [SettingName, OutcomeTable]
  >) {
    rows.push({
      setting,
      uses: table.uses,
      frequencies: Object.entries(table.counts).map(([key, count]) => ({
        key,
        value: table.uses > 0 ? count / table.uses : 0,
      })),
    });
  }
  return rows;
}
