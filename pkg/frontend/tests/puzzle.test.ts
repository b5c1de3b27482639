import { describe, expect, it } from 'vitest';

import {
  applyReport,
  canReveal,
  completedColors,
  constraintFlags,
  initialPuzzle,
  isComplete,
  reveal,
  togglePanel,
  REVEAL_AFTER_ATTEMPTS,
} from '../src/puzzle';
import type { ConstraintResponse } from '../src/types';

const ALL_GREEN_REPORT: ConstraintResponse = {
  constraints: { R1: true, R2: true, R3: true, C1: true, C2: true, C3: false },
  satisfied_count: 5,
};

describe('togglePanel', () => {
  it('cycles unset -> green -> red -> green', () => {
    let state = initialPuzzle();
    state = togglePanel(state, 4);
    expect(state.colors[4]).toBe('green');
    state = togglePanel(state, 4);
    expect(state.colors[4]).toBe('red');
    state = togglePanel(state, 4);
    expect(state.colors[4]).toBe('green');
  });

  it('invalidates a stale report', () => {
    let state = initialPuzzle();
    for (let i = 0; i < 9; i += 1) state = togglePanel(state, i);
    state = applyReport(state, ALL_GREEN_REPORT);
    expect(state.report).not.toBeNull();
    state = togglePanel(state, 0);
    expect(state.report).toBeNull();
  });

  it('rejects out-of-range panels', () => {
    expect(() => togglePanel(initialPuzzle(), 9)).toThrow(/out of range/);
  });
});

describe('completeness', () => {
  it('requires all nine panels', () => {
    let state = initialPuzzle();
    expect(isComplete(state)).toBe(false);
    for (let i = 0; i < 9; i += 1) state = togglePanel(state, i);
    expect(isComplete(state)).toBe(true);
    expect(completedColors(state)).toEqual(Array(9).fill('green'));
  });

  it('refuses to extract colors from a partial grid', () => {
    expect(() => completedColors(initialPuzzle())).toThrow(/not fully colored/);
  });
});

describe('applyReport and reveal', () => {
  it('counts failed attempts and unlocks the explanation', () => {
    let state = initialPuzzle();
    for (let i = 0; i < 9; i += 1) state = togglePanel(state, i);
    for (let attempt = 0; attempt < REVEAL_AFTER_ATTEMPTS; attempt += 1) {
      expect(canReveal(state)).toBe(false);
      state = applyReport(state, ALL_GREEN_REPORT);
    }
    expect(state.failedAttempts).toBe(REVEAL_AFTER_ATTEMPTS);
    expect(canReveal(state)).toBe(true);
    expect(state.revealed).toBe(false);
    state = reveal(state);
    expect(state.revealed).toBe(true);
  });
});

describe('constraintFlags', () => {
  it('mirrors the server report in fixed display order', () => {
    const flags = constraintFlags(ALL_GREEN_REPORT);
    expect(flags.map((f) => f.setting)).toEqual(['R1', 'R2', 'R3', 'C1', 'C2', 'C3']);
    expect(flags.map((f) => f.satisfied)).toEqual([true, true, true, true, true, false]);
  });
});
