/** Bootstrap: wire the API client, the two screens, and the footer. */

import { ApiClient } from './api';
import { applyReport, completedColors, initialPuzzle, isComplete, reveal, togglePanel } from './puzzle';
import type { PuzzleState } from './puzzle';
import { renderPuzzleScreen, renderRoundsScreen } from './render';
import { RoundsController, asSettingChoice } from './state';

const API_BASE =
  new URLSearchParams(window.location.search).get('api') ?? 'http://127.0.0.1:8080';

const api = new ApiClient(API_BASE);

const roundsRoot = document.getElementById('rounds-screen')!;
const puzzleRoot = document.getElementById('puzzle-screen')!;
const footer = document.getElementById('session-footer')!;

let puzzle: PuzzleState = initialPuzzle();
let checkEpoch = 0;

const controller = new RoundsController(api, (state) => {
  renderRoundsScreen(roundsRoot, state, {
    onAlice: (value) => controller.chooseAlice(asSettingChoice(value)),
    onBob: (value) => controller.chooseBob(asSettingChoice(value)),
    onPress: () => void controller.pressSource(),
  });
  footer.textContent = state.session
    ? `session ${state.session.id} - seed ${state.session.seed} - variant ${state.session.variant}`
    : 'no session';
});

function drawPuzzle(): void {
  renderPuzzleScreen(puzzleRoot, puzzle, {
    onToggle: (index) => {
      puzzle = togglePanel(puzzle, index);
      drawPuzzle();
      if (isComplete(puzzle)) void checkPuzzle();
    },
    onReveal: () => {
      puzzle = reveal(puzzle);
      drawPuzzle();
    },
  });
}

async function checkPuzzle(): Promise<void> {
  // live flags: always reflect the server's verdict for the current grid
  const epoch = (checkEpoch += 1);
  const report = await api.checkColoring(completedColors(puzzle));
  if (epoch !== checkEpoch || !isComplete(puzzle)) return; // grid changed meanwhile
  puzzle = applyReport(puzzle, report);
  drawPuzzle();
}

function selectTab(name: 'rounds' | 'puzzle'): void {
  document.getElementById('tab-rounds')!.classList.toggle('active', name === 'rounds');
  document.getElementById('tab-puzzle')!.classList.toggle('active', name === 'puzzle');
  roundsRoot.hidden = name !== 'rounds';
  puzzleRoot.hidden = name !== 'puzzle';
}

document.getElementById('tab-rounds')!.addEventListener('click', () => selectTab('rounds'));
document.getElementById('tab-puzzle')!.addEventListener('click', () => selectTab('puzzle'));

selectTab('rounds');
drawPuzzle();
void controller.start();
