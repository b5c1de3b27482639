/** End-to-end tests against the real service (spawned as a child process).
 *
 *  Covers the UI fidelity requirements: rendered panel colors must match the
 *  service records field for field on a replayed fixed-seed session, and the
 *  puzzle screen's flags must agree with the coloring endpoint on 20 scripted
 *  grids (including all-green, which must flag exactly C3, and a 5-satisfied
 *  grid).
 */

import { spawn, type ChildProcess } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, type RoundRequest } from '../src/api';
import { panelsToGrid } from '../src/grid';
import {
  applyReport,
  completedColors,
  constraintFlags,
  initialPuzzle,
  togglePanel,
} from '../src/puzzle';
import type { ColorName, SettingName } from '../src/types';
import { COLUMN_SETTINGS, ROW_SETTINGS, SETTINGS } from '../src/types';

const PORT = 8917;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const api = new ApiClient(BASE);

beforeAll(async () => {
  server = spawn('python3', ['-m', 'bellsquare', 'serve', '--listen', `127.0.0.1:${PORT}`], {
    stdio: 'ignore',
  });
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      await api.health();
      return;
    } catch {
      if (Date.now() > deadline) throw new Error('service did not come up');
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
}, 40_000);

afterAll(() => {
  server?.kill();
});

const SCRIPTED_REQUESTS: RoundRequest[] = [
  { alice_setting: 'R1', bob_setting: 'C2' },
  { alice_setting: 'R2', bob_setting: 'C1' },
  { alice_setting: 'C3', bob_setting: 'C3' },
  { alice_setting: 'R1', bob_setting: 'R1' },
  { alice_setting: 'R3', bob_setting: 'C3' },
  { policy: 'random' },
  { policy: 'random' },
  { alice_setting: 'R1', bob_setting: 'R2' },
];

describe('session replay fidelity', () => {
  it('renders a fixed-seed session identically to the service records', async () => {
    const transcripts = [];
    for (let run = 0; run < 2; run += 1) {
      const session = await api.createSession('987654321');
      expect(session.seed).toBe('987654321');
      const responses = [];
      for (const request of SCRIPTED_REQUESTS) {
        responses.push(await api.playRound(session.id, request));
      }
      const records = await api.records(session.id);
      transcripts.push({ responses, records });
    }

    // same seed + same requests => identical records, both runs
    expect(transcripts[1]?.records).toEqual(transcripts[0]?.records);

    for (const { responses, records } of transcripts) {
      expect(records.count).toBe(SCRIPTED_REQUESTS.length);
      for (const [index, response] of responses.entries()) {
        const record = records.records[index]!;
        expect(record.round).toBe(response.round);
        expect(record.seed_fingerprint).toBe(response.seed_fingerprint);
        for (const side of ['alice', 'bob'] as const) {
          // what the UI draws is exactly the record, field for field
          expect(record[side].setting).toBe(response[side].setting);
          expect(record[side].panels).toEqual(response[side].panels);
          const grid = panelsToGrid(response[side].panels);
          let lit = 0;
          for (const panel of record[side].panels) {
            expect(grid[panel.row - 1]?.[panel.col - 1]).toBe(panel.color);
            lit += 1;
          }
          expect(lit).toBe(3);
          expect(grid.flat().filter((c) => c !== null)).toHaveLength(3);
        }
      }
    }
  }, 30_000);

  it('reports every shared panel as matching (correlation rule)', async () => {
    const session = await api.createSession('24680');
    for (const alice of ROW_SETTINGS) {
      for (const bob of COLUMN_SETTINGS) {
        const round = await api.playRound(session.id, {
          alice_setting: alice,
          bob_setting: bob,
        });
        expect(round.common_panels).toHaveLength(1);
        expect(round.common_panels[0]?.match).toBe(true);
        expect(round.alice.parity_ok).toBe(true);
        expect(round.bob.parity_ok).toBe(true);
        expect(round.reality_chains.every((c) => c.confirmed)).toBe(true);
      }
    }
  }, 30_000);
});

/** Independent parity reference for the scripted grids. */
function expectedConstraints(colors: ColorName[]): Record<SettingName, boolean> {
  const red = (row: number, col: number) => colors[row * 3 + col] === 'red';
  const flags = {} as Record<SettingName, boolean>;
  for (const [index, setting] of ROW_SETTINGS.entries()) {
    const count = [0, 1, 2].filter((col) => red(index, col)).length;
    flags[setting] = count % 2 === 0;
  }
  for (const [index, setting] of COLUMN_SETTINGS.entries()) {
    const count = [0, 1, 2].filter((row) => red(row, index)).length;
    flags[setting] = count % 2 === (setting === 'C3' ? 1 : 0);
  }
  return flags;
}

function scriptedGrids(): ColorName[][] {
  const grids: ColorName[][] = [
    Array(9).fill('green'),                                  // 5 satisfied, C3 flagged
    Array(9).fill('red'),                                    // only C3 satisfied
    [...Array(8).fill('green'), 'red'] as ColorName[],       // red at (3,3): 5 satisfied
  ];
  for (let i = 0; grids.length < 20; i += 1) {
    const bits = (i * 227 + 53) % 512;
    grids.push(
      Array.from({ length: 9 }, (_, k) => ((bits >> k) & 1 ? 'red' : 'green')),
    );
  }
  return grids;
}

describe('puzzle flags agree with the coloring endpoint', () => {
  it('checks 20 scripted grids through the full puzzle flow', async () => {
    const grids = scriptedGrids();
    expect(grids).toHaveLength(20);
    for (const colors of grids) {
      // drive the actual puzzle state: one toggle for green, two for red
      let puzzle = initialPuzzle();
      colors.forEach((color, index) => {
        puzzle = togglePanel(puzzle, index);
        if (color === 'red') puzzle = togglePanel(puzzle, index);
      });
      expect(completedColors(puzzle)).toEqual(colors);

      const report = await api.checkColoring(completedColors(puzzle));
      puzzle = applyReport(puzzle, report);

      // the flags the UI shows are exactly the endpoint's verdict
      const flags = constraintFlags(puzzle.report!);
      expect(Object.fromEntries(flags.map((f) => [f.setting, f.satisfied]))).toEqual(
        report.constraints,
      );
      // and the endpoint's verdict matches the parity rule computed locally
      expect(report.constraints).toEqual(expectedConstraints(colors));
      expect(report.satisfied_count).toBe(
        SETTINGS.filter((s) => report.constraints[s]).length,
      );
      expect(report.satisfied_count).toBeLessThanOrEqual(5);
    }
  }, 30_000);

  it('flags exactly C3 for all-green and counts 5 for the scripted 5-satisfied grid', async () => {
    const allGreen = await api.checkColoring(Array(9).fill('green'));
    expect(allGreen.constraints).toEqual({
      R1: true, R2: true, R3: true, C1: true, C2: true, C3: false,
    });
    expect(allGreen.satisfied_count).toBe(5);

    const fiveSatisfied = await api.checkColoring([
      ...Array(8).fill('green'), 'red',
    ] as ColorName[]);
    expect(fiveSatisfied.satisfied_count).toBe(5);
    expect(fiveSatisfied.constraints.R3).toBe(false);
    expect(fiveSatisfied.constraints.C3).toBe(true);
  });
});

describe('game values endpoint', () => {
  it('serves the exact classical-vs-quantum gap', async () => {
    const values = await api.gameValues();
    const threeByThree = values.games.find((g) => g.game === '3x3');
    expect(threeByThree?.classical_value).toBe('8/9');
    expect(threeByThree?.quantum_value).toBe('1');
  }, 30_000);
});
