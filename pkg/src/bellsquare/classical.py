"""Hidden-variable analysis: panel colorings and deterministic game strategies.

Two exhaustive results live here.  First, no assignment of a definite color to
all nine panels can satisfy the parity rule for all six settings: summing red
panels over rows forces the total to one parity while summing over columns
forces the other.  The enumeration over all 2^9 colorings makes that
contradiction a counted fact (0 of 512; at most 5 of the 6 constraints hold).

Second, the records-comparison can be scored as a cooperative game: each party
fixes, ahead of time, a parity-valid answer triple for every setting it may be
asked, and a question pair is won when every panel lit by both answers
matches.  Brute force over all deterministic strategy pairs gives the best
classical win rate; the simulated detectors win every round, so the quantum
value is 1.  Everything in this module is exact integer arithmetic.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .experiment import Color, RoundRecord, common_panels, valid_outcome_triples
from .magic_square import COLUMN_SETTINGS, ROW_SETTINGS, SETTINGS, Setting, Variant, required_sign

# A coloring is 9 Colors in row-major panel order.
Coloring = tuple[Color, ...]


class NoCommonPanel(Exception):
    """The two records share no lit panel position."""


def coloring_from_names(names) -> Coloring:
    """Build a coloring from 9 'red'/'green' strings, row-major."""
    names = list(names)
    if len(names) != 9:
        raise ValueError(f"a coloring needs exactly 9 colors, got {len(names)}")
    return tuple(Color(n) for n in names)


@dataclass(frozen=True)
class ConstraintReport:
    """Which of the six parity constraints a coloring satisfies."""

    flags: dict  # Setting -> bool, all six settings present

    @property
    def satisfied_count(self) -> int:
        return sum(1 for ok in self.flags.values() if ok)

    def to_json_dict(self) -> dict:
        return {
            "constraints": {s.value: bool(self.flags[s]) for s in SETTINGS},
            "satisfied_count": self.satisfied_count,
        }


def check_coloring(coloring: Coloring, variant: Variant = Variant.STANDARD) -> ConstraintReport:
    """Evaluate the red-count parity of every row and column of a fixed coloring."""
    if len(coloring) != 9:
        raise ValueError(f"a coloring needs exactly 9 colors, got {len(coloring)}")
    flags = {}
    for setting in SETTINGS:
        reds = sum(1 for r, c in setting.positions if coloring[3 * r + c] is Color.RED)
        want_odd = required_sign(setting, variant) == -1
        flags[setting] = reds % 2 == (1 if want_odd else 0)
    return ConstraintReport(flags=flags)


@dataclass(frozen=True)
class EnumerationReport:
    total: int
    fully_satisfying: int
    max_satisfied: int
    histogram: dict  # satisfied_count -> number of colorings

    def to_json_dict(self) -> dict:
        return {
            "total": self.total,
            "fully_satisfying": self.fully_satisfying,
            "max_satisfied": self.max_satisfied,
            "histogram": {str(k): self.histogram[k] for k in sorted(self.histogram)},
        }


def enumerate_colorings(variant: Variant = Variant.STANDARD) -> EnumerationReport:
    """Exhaust all 2^9 colorings against the variant's six parity constraints."""
    histogram = {k: 0 for k in range(7)}
    for colors in itertools.product((Color.GREEN, Color.RED), repeat=9):
        histogram[check_coloring(colors, variant).satisfied_count] += 1
    histogram = {k: v for k, v in histogram.items() if v}
    return EnumerationReport(
        total=512,
        fully_satisfying=histogram.get(6, 0),
        max_satisfied=max(histogram),
        histogram=histogram,
    )


# ---------------------------------------------------------------------------
# Deterministic strategies and game values.


class Game(enum.Enum):
    THREE_BY_THREE = "3x3"  # Alice rows only, Bob columns only
    SIX_BY_SIX = "6x6"      # both parties use all six settings


@dataclass(frozen=True)
class DeterministicStrategy:
    """A party's pre-agreed answers: one parity-valid color triple per setting."""

    answers: dict  # Setting -> (Color, Color, Color)
    variant: Variant = Variant.STANDARD

    def __post_init__(self):
        for setting, colors in self.answers.items():
            reds = sum(1 for c in colors if c is Color.RED)
            want_odd = required_sign(setting, self.variant) == -1
            if reds % 2 != (1 if want_odd else 0):
                raise ValueError(f"answer for {setting.value} violates its parity: {colors}")

    def panel_color(self, setting: Setting, row: int, col: int) -> Color:
        return self.answers[setting][setting.positions.index((row, col))]


@dataclass(frozen=True)
class GameValueReport:
    game: Game
    variant: Variant
    classical_value: Fraction
    quantum_value: Fraction
    optimal_strategy_count: int

    def __post_init__(self):
        assert 0 <= self.classical_value <= self.quantum_value <= 1

    def to_json_dict(self) -> dict:
        return {
            "game": self.game.value,
            "variant": self.variant.value,
            "classical_value": str(self.classical_value),
            "classical_value_float": float(self.classical_value),
            "quantum_value": str(self.quantum_value),
            "optimal_strategy_count": self.optimal_strategy_count,
        }


def _answer_triples(setting: Setting, variant: Variant) -> tuple[tuple[Color, ...], ...]:
    """The 4 parity-valid color triples a party may answer for a setting."""
    return tuple(
        tuple(Color.from_outcome(o) for o in outcomes)
        for outcomes in valid_outcome_triples(setting, variant)
    )


def strategy_from_indices(
    allowed: tuple[Setting, ...], indices: tuple[int, ...], variant: Variant
) -> DeterministicStrategy:
    answers = {
        s: _answer_triples(s, variant)[i] for s, i in zip(allowed, indices)
    }
    return DeterministicStrategy(answers=answers, variant=variant)


def _match_table(variant: Variant) -> np.ndarray:
    """win[ia, ta, ib, tb]: does Alice's ta-th answer for setting ia agree with
    Bob's tb-th answer for setting ib on every panel both settings light?"""
    triples = {s: _answer_triples(s, variant) for s in SETTINGS}
    win = np.ones((6, 4, 6, 4), dtype=np.uint8)
    for ia, sa in enumerate(SETTINGS):
        for ib, sb in enumerate(SETTINGS):
            shared = common_panels(sa, sb)
            for ta, tb in itertools.product(range(4), repeat=2):
                a, b = triples[sa][ta], triples[sb][tb]
                ok = all(
                    a[sa.positions.index(pos)] is b[sb.positions.index(pos)] for pos in shared
                )
                win[ia, ta, ib, tb] = 1 if ok else 0
    return win


def _three_by_three_matches(a_idx, b_idx, win, row_pos, col_pos) -> int:
    matches = 0
    for i in range(3):
        for j in range(3):
            matches += win[row_pos[i], a_idx[i], col_pos[j], b_idx[j]]
    return matches


@lru_cache(maxsize=None)
def three_by_three_search(variant: Variant = Variant.STANDARD):
    """Exhaustive 4^3 x 4^3 search of the rows-vs-columns game.

    Returns (best match count out of 9, number of optimal pairs, the tuple of
    optimal (alice_indices, bob_indices) pairs).
    """
    win = _match_table(variant)
    row_pos = [SETTINGS.index(s) for s in ROW_SETTINGS]
    col_pos = [SETTINGS.index(s) for s in COLUMN_SETTINGS]
    best, optimal = -1, []
    for a_idx in itertools.product(range(4), repeat=3):
        for b_idx in itertools.product(range(4), repeat=3):
            matches = _three_by_three_matches(a_idx, b_idx, win, row_pos, col_pos)
            if matches > best:
                best, optimal = matches, [(a_idx, b_idx)]
            elif matches == best:
                optimal.append((a_idx, b_idx))
    return int(best), len(optimal), tuple(optimal)


def three_by_three_hill_climb(
    variant: Variant = Variant.STANDARD, seed: int = 0, restarts: int = 50
) -> int:
    """Random-restart steepest-ascent search of the same space; an independent
    check on the exhaustive maximum."""
    win = _match_table(variant)
    row_pos = [SETTINGS.index(s) for s in ROW_SETTINGS]
    col_pos = [SETTINGS.index(s) for s in COLUMN_SETTINGS]
    rng = np.random.default_rng(seed)
    best = -1
    for _ in range(restarts):
        state = list(rng.integers(0, 4, size=6))
        current = _three_by_three_matches(state[:3], state[3:], win, row_pos, col_pos)
        improved = True
        while improved:
            improved = False
            for coord in range(6):
                for alternative in range(4):
                    if alternative == state[coord]:
                        continue
                    candidate = state.copy()
                    candidate[coord] = alternative
                    value = _three_by_three_matches(
                        candidate[:3], candidate[3:], win, row_pos, col_pos
                    )
                    if value > current:
                        state, current, improved = candidate, value, True
        best = max(best, current)
    return best


@lru_cache(maxsize=None)
def six_by_six_search(variant: Variant = Variant.STANDARD):
    """Full 4^6 x 4^6 enumeration of the all-settings game, vectorized.

    A strategy is one answer index per setting; the win count of a strategy
    pair is the number of the 36 question pairs whose shared panels all match
    (pairs sharing no panel count as wins).  Returns (best win count out of
    36, number of optimal pairs).
    """
    win = _match_table(variant)
    strategies = np.array(list(itertools.product(range(4), repeat=6)), dtype=np.intp)
    total = np.zeros((4096, 4096), dtype=np.int16)
    for ia in range(6):
        for ib in range(6):
            # rows: Alice's strategies, cols: Bob's; W restricted to the answers chosen
            block = win[ia][strategies[:, ia]][:, ib, :]  # (4096, 4)
            total += block[:, strategies[:, ib]]
    best = int(total.max())
    return best, int((total == best).sum())


def six_by_six_best_response_max(variant: Variant = Variant.STANDARD) -> int:
    """Independent maximum for the all-settings game.

    The win count separates over Bob's settings, so for each Alice strategy
    Bob's best reply picks every answer independently; maximizing the
    resulting score over all Alice strategies gives the game maximum without
    materializing the 4^6 x 4^6 table.
    """
    win = _match_table(variant)
    best = 0
    for a_idx in itertools.product(range(4), repeat=6):
        score = 0
        for ib in range(6):
            score += max(
                sum(int(win[ia, a_idx[ia], ib, tb]) for ia in range(6)) for tb in range(4)
            )
        best = max(best, score)
    return best


@lru_cache(maxsize=None)
def classical_game_value(game: Game, variant: Variant = Variant.STANDARD) -> GameValueReport:
    """Exhaustive classical value of a game, with the quantum value for contrast."""
    if game is Game.THREE_BY_THREE:
        best, count, _ = three_by_three_search(variant)
        classical = Fraction(best, 9)
    else:
        best, count = six_by_six_search(variant)
        classical = Fraction(best, 36)
    return GameValueReport(
        game=game,
        variant=variant,
        classical_value=classical,
        quantum_value=Fraction(1),
        optimal_strategy_count=count,
    )


# ---------------------------------------------------------------------------
# Strategy-space symmetry.


def parity_preserving_flips() -> list[frozenset]:
    """The 16 panel sets meeting every row and every column an even number of
    times.  Flipping the colors of such a set inside both players' answers
    maps parity-valid strategies to parity-valid strategies and preserves
    every shared-panel match.  (Flipping ALL nine panels is not in this group:
    it flips the red-count parity of every 3-panel answer.)"""
    flips = []
    for bits in itertools.product((0, 1), repeat=4):
        f = np.zeros((3, 3), dtype=int)
        f[0, 0], f[0, 1], f[1, 0], f[1, 1] = bits
        f[0, 2] = f[0, 0] ^ f[0, 1]
        f[1, 2] = f[1, 0] ^ f[1, 1]
        f[2, 0] = f[0, 0] ^ f[1, 0]
        f[2, 1] = f[0, 1] ^ f[1, 1]
        f[2, 2] = f[2, 0] ^ f[2, 1]
        flips.append(frozenset((r, c) for r in range(3) for c in range(3) if f[r, c]))
    return flips


def flip_answer_indices(
    allowed: tuple[Setting, ...], indices: tuple[int, ...], flip: frozenset, variant: Variant
) -> tuple[int, ...]:
    """Image of an index-encoded strategy under a panel-set color flip."""
    flipped = []
    for setting, index in zip(allowed, indices):
        triples = _answer_triples(setting, variant)
        colors = tuple(
            _other(c) if pos in flip else c
            for pos, c in zip(setting.positions, triples[index])
        )
        flipped.append(triples.index(colors))
    return tuple(flipped)


def _other(color: Color) -> Color:
    return Color.RED if color is Color.GREEN else Color.GREEN


# ---------------------------------------------------------------------------
# The element-of-reality argument, machine checked per round.


@dataclass(frozen=True)
class RealityChain:
    """One common panel's prediction: Alice's color determines Bob's."""

    row: int  # 0-based
    col: int
    alice_color: Color
    predicted_bob_color: Color
    observed_bob_color: Color

    @property
    def confirmed(self) -> bool:
        return self.predicted_bob_color is self.observed_bob_color

    def to_json_dict(self) -> dict:
        return {
            "row": self.row + 1,
            "col": self.col + 1,
            "alice_color": self.alice_color.value,
            "predicted_bob_color": self.predicted_bob_color.value,
            "observed_bob_color": self.observed_bob_color.value,
            "confirmed": self.confirmed,
        }


def element_of_reality_trace(record: RoundRecord) -> list[RealityChain]:
    """For each panel lit by both observers, the prediction chain: Alice's
    color at that position predicts Bob's with certainty, and the record
    confirms it.  Raises NoCommonPanel when the settings share no panel."""
    shared = common_panels(record.alice_setting, record.bob_setting)
    if not shared:
        raise NoCommonPanel(
            f"{record.alice_setting.value} and {record.bob_setting.value} light no common panel"
        )
    chains = []
    for row, col in shared:
        alice_color = record.alice_panels.color_at(row, col)
        bob_color = record.bob_panels.color_at(row, col)
        assert alice_color is not None and bob_color is not None
        chains.append(
            RealityChain(
                row=row,
                col=col,
                alice_color=alice_color,
                predicted_bob_color=alice_color,
                observed_bob_color=bob_color,
            )
        )
    return chains
