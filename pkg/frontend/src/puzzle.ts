/** State for the coloring puzzle screen.
 *
 *  The user tries to color all nine panels so that every row has an even
 *  number of reds and C3 (only) an odd number. The verdict always comes from
 *  the server's coloring endpoint; this module only tracks the grid, relays
 *  the latest report, and decides when to reveal the parity-counting
 *  explanation of why the meter never reaches 6.
 */

import type { ColorName, ConstraintResponse, SettingName } from './types';
import { SETTINGS } from './types';

export const REVEAL_AFTER_ATTEMPTS = 3;

export interface PuzzleState {
  /** Row-major panel colors; null = not chosen yet. */
  colors: (ColorName | null)[];
  /** Verdict for the current grid, if complete and checked. */
  report: ConstraintResponse | null;
  /** Completed grids checked so far that fell short of 6. */
  failedAttempts: number;
  revealed: boolean;
}

export function initialPuzzle(): PuzzleState {
  return { colors: Array(9).fill(null), report: null, failedAttempts: 0, revealed: false };
}

/** Click a panel: unset -> green -> red -> green -> ... */
export function togglePanel(state: PuzzleState, index: number): PuzzleState {
  if (index < 0 || index > 8) throw new Error(`panel index out of range: ${index}`);
  const colors = state.colors.slice();
  const current = colors[index];
  colors[index] = current === 'green' ? 'red' : 'green';
  // the old report no longer describes this grid
  return { ...state, colors, report: null };
}

export function isComplete(state: PuzzleState): boolean {
  return state.colors.every((c) => c !== null);
}

export function completedColors(state: PuzzleState): ColorName[] {
  if (!isComplete(state)) throw new Error('puzzle grid is not fully colored');
  return state.colors as ColorName[];
}

/** Record the server's verdict for the current (complete) grid. */
export function applyReport(state: PuzzleState, report: ConstraintResponse): PuzzleState {
  const failed = report.satisfied_count < 6;
  return {
    ...state,
    report,
    failedAttempts: state.failedAttempts + (failed ? 1 : 0),
  };
}

export function canReveal(state: PuzzleState): boolean {
  return state.failedAttempts >= REVEAL_AFTER_ATTEMPTS;
}

export function reveal(state: PuzzleState): PuzzleState {
  return { ...state, revealed: true };
}

export interface ConstraintFlag {
  setting: SettingName;
  satisfied: boolean;
}

/** The six flags in display order, straight from the server's report. */
export function constraintFlags(report: ConstraintResponse): ConstraintFlag[] {
  return SETTINGS.map((setting) => ({ setting, satisfied: report.constraints[setting] }));
}

export const REVEAL_TEXT =
  'Count the red panels two ways. Each row must contain an even number of ' +
  'reds, so the total over all nine panels is even. But C1 and C2 must be ' +
  'even while C3 must be odd, so the same total, summed by columns, is odd. ' +
  'No grid of nine fixed colors can be both, which is why the meter stops at 5: ' +
  'the lights cannot be carrying pre-assigned colors.';
