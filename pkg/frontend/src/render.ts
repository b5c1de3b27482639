/** DOM rendering. Full redraw per change; cheap at demo scale. */

import { commonPanelKeys, describeRound, frequencyRows, panelsToGrid } from './grid';
import type { CellGrid } from './grid';
import { REVEAL_TEXT, canReveal, constraintFlags, isComplete } from './puzzle';
import type { PuzzleState } from './puzzle';
import type { RoundsScreenState } from './state';
import type { RoundResponse, StatsResponse } from './types';

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** One 3x3 detector screen. Lit panels carry an R/G glyph as well as color. */
export function renderGrid(
  grid: CellGrid,
  highlight: Set<string>,
  onClick?: (index: number) => void,
): HTMLElement {
  const screen = el('div', 'screen');
  for (let row = 0; row < 3; row += 1) {
    for (let col = 0; col < 3; col += 1) {
      const color = grid[row]?.[col] ?? null;
      const panel = el('div', 'panel');
      if (color !== null) {
        panel.classList.add(color);
        panel.textContent = color === 'green' ? 'G' : 'R';
      }
      if (highlight.has(`${row + 1},${col + 1}`)) panel.classList.add('shared');
      if (onClick) {
        const index = row * 3 + col;
        panel.classList.add('clickable');
        panel.addEventListener('click', () => onClick(index));
      }
      screen.appendChild(panel);
    }
  }
  return screen;
}

function renderLastRound(round: RoundResponse): HTMLElement {
  const box = el('div', 'round-detail');
  const shared = commonPanelKeys(round);
  const pair = el('div', 'detectors');
  for (const side of ['alice', 'bob'] as const) {
    const column = el('div', 'detector');
    column.appendChild(el('h3', undefined, `${side === 'alice' ? 'Alice' : 'Bob'} - ${round[side].setting}`));
    column.appendChild(renderGrid(panelsToGrid(round[side].panels), shared));
    column.appendChild(
      el('p', 'parity', round[side].parity_ok ? 'parity ok' : 'PARITY VIOLATED'),
    );
    pair.appendChild(column);
  }
  box.appendChild(pair);
  if (round.common_panels.length === 0) {
    box.appendChild(el('p', 'explain', 'No common panels this round; the correlation rule is silent.'));
  } else {
    for (const chain of round.reality_chains) {
      box.appendChild(
        el(
          'p',
          'explain',
          `Panel (${chain.row},${chain.col}): Alice saw ${chain.alice_color}, so Bob's panel ` +
            `was predictable with certainty: ${chain.predicted_bob_color}. Observed: ` +
            `${chain.observed_bob_color} - ${chain.confirmed ? 'confirmed' : 'REFUTED'}.`,
        ),
      );
    }
  }
  return box;
}

function renderStats(stats: StatsResponse): HTMLElement {
  const box = el('div', 'stats');
  box.appendChild(
    el(
      'p',
      undefined,
      `${stats.rounds} rounds, ${stats.parity_violations} parity violations, ` +
        `${stats.correlation_violations} correlation violations`,
    ),
  );
  const table = el('table');
  const head = el('tr');
  for (const caption of ['setting', 'uses', 'outcome frequencies (expect 0.25 each)']) {
    head.appendChild(el('th', undefined, caption));
  }
  table.appendChild(head);
  for (const rowData of frequencyRows(stats, 'alice')) {
    const tr = el('tr');
    tr.appendChild(el('td', undefined, rowData.setting));
    tr.appendChild(el('td', undefined, String(rowData.uses)));
    tr.appendChild(
      el(
        'td',
        undefined,
        rowData.frequencies.map((f) => `${f.key} ${f.value.toFixed(3)}`).join('   '),
      ),
    );
    table.appendChild(tr);
  }
  box.appendChild(table);
  return box;
}

export function renderRoundsScreen(
  root: HTMLElement,
  state: RoundsScreenState,
  handlers: {
    onAlice: (value: string) => void;
    onBob: (value: string) => void;
    onPress: () => void;
  },
): void {
  root.replaceChildren();
  const controls = el('div', 'controls');
  for (const side of ['alice', 'bob'] as const) {
    const label = el('label', undefined, side === 'alice' ? 'Alice setting ' : 'Bob setting ');
    const select = document.createElement('select');
    for (const option of ['random', 'R1', 'R2', 'R3', 'C1', 'C2', 'C3']) {
      const opt = document.createElement('option');
      opt.value = option;
      opt.textContent = option;
      select.appendChild(opt);
    }
    select.value = side === 'alice' ? state.aliceChoice : state.bobChoice;
    select.addEventListener('change', () =>
      side === 'alice' ? handlers.onAlice(select.value) : handlers.onBob(select.value),
    );
    label.appendChild(select);
    controls.appendChild(label);
  }
  const button = el('button', 'source', 'Press source button') as HTMLButtonElement;
  button.disabled = state.busy || state.session === null;
  button.addEventListener('click', handlers.onPress);
  controls.appendChild(button);
  root.appendChild(controls);

  if (state.error) root.appendChild(el('p', 'error', `Request failed: ${state.error} - retry.`));

  const lastRound = state.rounds[state.rounds.length - 1];
  if (lastRound) {
    root.appendChild(renderLastRound(lastRound));
  } else {
    root.appendChild(el('p', 'explain', 'Choose settings (or leave both random) and press the source button.'));
  }

  if (state.stats) root.appendChild(renderStats(state.stats));

  const log = el('div', 'log');
  log.appendChild(el('h3', undefined, 'Record comparison'));
  for (const round of [...state.rounds].reverse().slice(0, 30)) {
    log.appendChild(el('p', 'log-line', describeRound(round)));
  }
  root.appendChild(log);
}

export function renderPuzzleScreen(
  root: HTMLElement,
  state: PuzzleState,
  handlers: { onToggle: (index: number) => void; onReveal: () => void },
): void {
  root.replaceChildren();
  root.appendChild(
    el(
      'p',
      'explain',
      'Could the panels be carrying fixed colors all along? Click panels to color them ' +
        '(green, then red) so that every row and C1, C2 show an even number of reds and ' +
        'C3 an odd number.',
    ),
  );
  const grid: CellGrid = [0, 1, 2].map((r) =>
    [0, 1, 2].map((c) => state.colors[r * 3 + c] ?? null),
  );
  root.appendChild(renderGrid(grid, new Set(), handlers.onToggle));

  if (!isComplete(state)) {
    root.appendChild(el('p', 'hint', 'Color all nine panels to get a verdict.'));
  } else if (state.report) {
    const flags = el('div', 'flags');
    for (const flag of constraintFlags(state.report)) {
      flags.appendChild(
        el('span', `flag ${flag.satisfied ? 'ok' : 'violated'}`, `${flag.setting} ${flag.satisfied ? 'ok' : 'violated'}`),
      );
    }
    root.appendChild(flags);
    root.appendChild(
      el('p', 'meter', `Constraints satisfied: ${state.report.satisfied_count} of 6`),
    );
  }
  if (canReveal(state) && !state.revealed) {
    const button = el('button', 'reveal', 'Why can I never reach 6?');
    button.addEventListener('click', handlers.onReveal);
    root.appendChild(button);
  }
  if (state.revealed) root.appendChild(el('p', 'reveal-text', REVEAL_TEXT));
}
