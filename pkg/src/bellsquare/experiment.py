"""The gedanken experiment engine: source, detectors, rounds, records, rules.

One round: the source emits the two Bell pairs, Alice measures the commuting
triple of her chosen row/column on qubits (1,3), then Bob measures his triple
on qubits (2,4) of the post-measurement state.  Eigenvalue +1 lights a panel
green, -1 red.  Alice-before-Bob is purely an implementation sequence; the
analytic no-signaling and order-independence checks below confirm nothing
depends on it.

Randomness: a round is a pure function of (seed, round_index).  Each round
draws from its own substream derived from that pair, so batches are
reproducible regardless of execution order, and any single round can be
replayed in isolation.  Within a round the draw order is: Alice's setting (if
random), Bob's setting (if random), then exactly one uniform draw per
measurement in measurement order.

Wire format for one round (rows/cols 1-based, colors lowercase):

    {"round": 0,
     "alice": {"setting": "R1", "panels": [{"row": 1, "col": 1, "color": "red"}, ...]},
     "bob":   {...},
     "seed_fingerprint": "hex16"}
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .quantum import Party, embed_observable, measure_amplitudes, source_state
from .magic_square import (
    COLUMN_SETTINGS,
    ROW_SETTINGS,
    SETTINGS,
    MagicSquare,
    Setting,
    Variant,
    required_sign,
    setting_observables,
    square,
)


class Color(enum.Enum):
    """Panel color; fixed map green <-> outcome +1, red <-> outcome -1."""

    GREEN = "green"
    RED = "red"

    @classmethod
    def from_outcome(cls, outcome: int) -> "Color":
        if outcome == 1:
            return cls.GREEN
        if outcome == -1:
            return cls.RED
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")

    @property
    def outcome(self) -> int:
        return 1 if self is Color.GREEN else -1


@dataclass(frozen=True)
class PanelGrid:
    """A detector screen: 3x3 panels, exactly one row or column lit."""

    setting: Setting
    colors: tuple[Color, Color, Color]  # lit panels in the setting's reading order

    def color_at(self, row: int, col: int) -> Color | None:
        """Color of panel (row, col), 0-based; None if unlit."""
        for pos, color in zip(self.setting.positions, self.colors):
            if pos == (row, col):
                return color
        return None

    @property
    def lit(self) -> tuple[tuple[int, int], ...]:
        return self.setting.positions

    def red_count(self) -> int:
        return sum(1 for c in self.colors if c is Color.RED)

    def outcomes(self) -> tuple[int, int, int]:
        return tuple(c.outcome for c in self.colors)  # type: ignore[return-value]

    def panels_json(self) -> list[dict]:
        return [
            {"row": r + 1, "col": c + 1, "color": color.value}
            for (r, c), color in zip(self.setting.positions, self.colors)
        ]


@dataclass(frozen=True)
class RoundRecord:
    round_index: int
    alice_setting: Setting
    bob_setting: Setting
    alice_panels: PanelGrid
    bob_panels: PanelGrid
    seed_fingerprint: int  # 64-bit substream identifier

    def to_json_dict(self) -> dict:
        return {
            "round": self.round_index,
            "alice": {
                "setting": self.alice_setting.value,
                "panels": self.alice_panels.panels_json(),
            },
            "bob": {
                "setting": self.bob_setting.value,
                "panels": self.bob_panels.panels_json(),
            },
            "seed_fingerprint": f"{self.seed_fingerprint:016x}",
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RoundRecord":
        def grid(side: dict) -> PanelGrid:
            setting = Setting(side["setting"])
            by_pos = {(p["row"] - 1, p["col"] - 1): Color(p["color"]) for p in side["panels"]}
            colors = tuple(by_pos[pos] for pos in setting.positions)
            return PanelGrid(setting=setting, colors=colors)  # type: ignore[arg-type]

        return cls(
            round_index=data["round"],
            alice_setting=Setting(data["alice"]["setting"]),
            bob_setting=Setting(data["bob"]["setting"]),
            alice_panels=grid(data["alice"]),
            bob_panels=grid(data["bob"]),
            seed_fingerprint=int(data["seed_fingerprint"], 16),
        )


@dataclass(frozen=True)
class UniformRandom:
    """Both parties draw uniformly from all six settings."""


@dataclass(frozen=True)
class Fixed:
    """Preset settings.  A None side is drawn uniformly from all six settings
    (used by the interactive service when a client fixes only one detector)."""

    alice: Setting | None
    bob: Setting | None


@dataclass(frozen=True)
class RowsForAliceColsForBob:
    """Alice draws among rows, Bob among columns (the three-setting restriction)."""


SettingPolicy = UniformRandom | Fixed | RowsForAliceColsForBob


def policy_label(policy: SettingPolicy) -> str:
    if isinstance(policy, UniformRandom):
        return "random"
    if isinstance(policy, RowsForAliceColsForBob):
        return "cleve"
    a = policy.alice.value if policy.alice else "random"
    b = policy.bob.value if policy.bob else "random"
    return f"fixed:{a}:{b}"


def parse_policy(text: str) -> SettingPolicy:
    if text == "random":
        return UniformRandom()
    if text == "cleve":
        return RowsForAliceColsForBob()
    if text.startswith("fixed:"):
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"fixed policy must look like fixed:R1:C2, got {text!r}")
        try:
            return Fixed(alice=Setting(parts[1]), bob=Setting(parts[2]))
        except ValueError:
            raise ValueError(f"unknown setting name in policy {text!r}") from None
    raise ValueError(f"unknown policy {text!r}")


def round_fingerprint(seed: int, round_index: int) -> int:
    """64-bit identifier of the (seed, round_index) substream."""
    ss = np.random.SeedSequence(entropy=(seed, round_index))
    return int(ss.generate_state(1, np.uint64)[0])


def _round_rng(seed: int, round_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=(seed, round_index)))


def _draw_settings(policy: SettingPolicy, rng: np.random.Generator) -> tuple[Setting, Setting]:
    if isinstance(policy, UniformRandom):
        return SETTINGS[rng.integers(6)], SETTINGS[rng.integers(6)]
    if isinstance(policy, RowsForAliceColsForBob):
        return ROW_SETTINGS[rng.integers(3)], COLUMN_SETTINGS[rng.integers(3)]
    alice = policy.alice if policy.alice is not None else SETTINGS[rng.integers(6)]
    bob = policy.bob if policy.bob is not None else SETTINGS[rng.integers(6)]
    return alice, bob


def run_round(
    policy: SettingPolicy,
    variant: Variant = Variant.STANDARD,
    *,
    seed: int,
    round_index: int = 0,
) -> RoundRecord:
    """Play one source-button press and return both observers' records."""
    rng = _round_rng(seed, round_index)
    alice_setting, bob_setting = _draw_settings(policy, rng)
    psi = source_state().amplitudes
    alice_colors, psi = _measure_triple(psi, square(variant, Party.ALICE), alice_setting, rng)
    bob_colors, psi = _measure_triple(psi, square(variant, Party.BOB), bob_setting, rng)
    return RoundRecord(
        round_index=round_index,
        alice_setting=alice_setting,
        bob_setting=bob_setting,
        alice_panels=PanelGrid(setting=alice_setting, colors=alice_colors),
        bob_panels=PanelGrid(setting=bob_setting, colors=bob_colors),
        seed_fingerprint=round_fingerprint(seed, round_index),
    )


def _measure_triple(
    psi: np.ndarray, sq: MagicSquare, setting: Setting, rng: np.random.Generator
) -> tuple[tuple[Color, Color, Color], np.ndarray]:
    colors = []
    for obs in setting_observables(sq, setting):
        outcome, psi = measure_amplitudes(psi, embed_observable(obs), rng.random())
        colors.append(Color.from_outcome(outcome))
    return tuple(colors), psi  # type: ignore[return-value]


def verify_parity(grid: PanelGrid, setting: Setting, variant: Variant) -> bool:
    """True iff the lit panels are the setting's and their red count has the
    parity forced by the setting's operator-product sign."""
    if grid.setting is not setting:
        raise ValueError(f"grid is lit for {grid.setting.value}, not {setting.value}")
    want_odd = required_sign(setting, variant) == -1
    return grid.red_count() % 2 == (1 if want_odd else 0)


def common_panels(a: Setting, b: Setting) -> tuple[tuple[int, int], ...]:
    """Positions lit by both settings, 0-based, sorted."""
    return tuple(sorted(set(a.positions) & set(b.positions)))


def verify_correlation(a: PanelGrid, b: PanelGrid) -> bool:
    """True iff every panel lit in both grids shows the same color (vacuously
    true when the settings share no panel)."""
    return all(
        a.color_at(r, c) is b.color_at(r, c) for r, c in common_panels(a.setting, b.setting)
    )


def verify_record(record: RoundRecord, variant: Variant) -> tuple[bool, bool]:
    """(parity ok for both grids, correlation ok)."""
    parity_ok = verify_parity(record.alice_panels, record.alice_setting, variant) and verify_parity(
        record.bob_panels, record.bob_setting, variant
    )
    return parity_ok, verify_correlation(record.alice_panels, record.bob_panels)


def valid_outcome_triples(setting: Setting, variant: Variant) -> tuple[tuple[int, int, int], ...]:
    """The four +/-1 triples whose product matches the setting's sign, in the
    enumeration order (+,+), (+,-), (-,+), (-,-) of the first two outcomes."""
    sign = required_sign(setting, variant)
    return tuple((o1, o2, sign * o1 * o2) for o1, o2 in ((1, 1), (1, -1), (-1, 1), (-1, -1)))


def triple_key(outcomes: tuple[int, int, int]) -> str:
    """Compact label for an outcome triple, e.g. (+1,-1,-1) -> 'GRR'."""
    return "".join("G" if o == 1 else "R" for o in outcomes)


@dataclass
class BatchReport:
    """Outcome tallies and rule-violation counts for a batch of rounds."""

    rounds: int
    seed: int
    policy: SettingPolicy
    variant: Variant
    parity_violations: int = 0
    correlation_violations: int = 0
    # counts[party][setting][triple_key] -> occurrences; uses[party][setting] -> rounds
    counts: dict = field(default_factory=dict)
    uses: dict = field(default_factory=dict)
    records: list[RoundRecord] | None = None

    def frequency(self, party: Party, setting: Setting, key: str) -> float:
        used = self.uses[party.value][setting.value]
        return self.counts[party.value][setting.value][key] / used if used else 0.0

    def to_json_dict(self) -> dict:
        out = {
            "rounds": self.rounds,
            "seed": self.seed,
            "policy": policy_label(self.policy),
            "variant": self.variant.value,
            "parity_violations": self.parity_violations,
            "correlation_violations": self.correlation_violations,
            "outcomes": {
                party: {
                    setting: {
                        "uses": self.uses[party][setting],
                        "counts": dict(self.counts[party][setting]),
                    }
                    for setting in (s.value for s in SETTINGS)
                }
                for party in ("alice", "bob")
            },
        }
        if self.records is not None:
            out["records"] = [r.to_json_dict() for r in self.records]
        return out


def empty_tallies(variant: Variant) -> tuple[dict, dict]:
    counts = {
        party.value: {
            s.value: {triple_key(t): 0 for t in valid_outcome_triples(s, variant)}
            for s in SETTINGS
        }
        for party in Party
    }
    uses = {party.value: {s.value: 0 for s in SETTINGS} for party in Party}
    return counts, uses


def tally_record(record: RoundRecord, counts: dict, uses: dict) -> None:
    for party, setting, grid in (
        ("alice", record.alice_setting, record.alice_panels),
        ("bob", record.bob_setting, record.bob_panels),
    ):
        uses[party][setting.value] += 1
        table = counts[party][setting.value]
        key = triple_key(grid.outcomes())
        table[key] = table.get(key, 0) + 1  # parity-invalid keys would still be recorded


def run_batch(
    n: int,
    policy: SettingPolicy,
    variant: Variant = Variant.STANDARD,
    *,
    seed: int,
    keep_records: bool = False,
) -> BatchReport:
    """Run ``n`` independent rounds (substreams indexed 0..n-1) and tally them.

    Deterministic given (n, policy, variant, seed).  Rounds are independent
    given their substreams, so they could run in any order or concurrently;
    this loop is sequential and assembles tallies in index order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    counts, uses = empty_tallies(variant)
    report = BatchReport(
        rounds=n,
        seed=seed,
        policy=policy,
        variant=variant,
        counts=counts,
        uses=uses,
        records=[] if keep_records else None,
    )
    for index in range(n):
        record = run_round(policy, variant, seed=seed, round_index=index)
        parity_ok, correlation_ok = verify_record(record, variant)
        report.parity_violations += 0 if parity_ok else 1
        report.correlation_violations += 0 if correlation_ok else 1
        tally_record(record, counts, uses)
        if report.records is not None:
            report.records.append(record)
    return report


# ---------------------------------------------------------------------------
# Analytic checks (Born probabilities summed exactly; no sampling).


def _triple_projectors(
    sq: MagicSquare, setting: Setting, order: tuple[int, int, int] = (0, 1, 2)
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    eye = np.eye(16)
    mats = [embed_observable(o) for o in setting_observables(sq, setting)]
    return [(eye + mats[i]) / 2 for i in order], [(eye - mats[i]) / 2 for i in order]


def setting_distribution(
    setting: Setting,
    party: Party,
    variant: Variant = Variant.STANDARD,
    order: tuple[int, int, int] = (0, 1, 2),
) -> dict[tuple[int, int, int], float]:
    """Joint distribution of a setting's three outcomes on the source state,
    computed by applying the triple's projectors sequentially in ``order``."""
    plus, minus = _triple_projectors(square(variant, party), setting, order)
    dist = {}
    for outcomes in itertools.product((1, -1), repeat=3):
        psi = source_state().amplitudes
        for k in range(3):
            psi = (plus[k] if outcomes[k] == 1 else minus[k]) @ psi
        ordered = [0, 0, 0]
        for k in range(3):
            ordered[order[k]] = outcomes[k]
        dist[tuple(ordered)] = float(np.vdot(psi, psi).real)
    return dist


def measurement_order_deviation(
    setting: Setting, party: Party, variant: Variant = Variant.STANDARD
) -> float:
    """Max difference between the setting's outcome distribution computed in
    all six orderings of its triple."""
    base = setting_distribution(setting, party, variant)
    deviation = 0.0
    for order in itertools.permutations((0, 1, 2)):
        dist = setting_distribution(setting, party, variant, order)
        deviation = max(deviation, max(abs(dist[k] - base[k]) for k in base))
    return deviation


def joint_distribution(
    alice_setting: Setting,
    bob_setting: Setting,
    variant: Variant = Variant.STANDARD,
    bob_first: bool = False,
) -> dict[tuple[tuple[int, int, int], tuple[int, int, int]], float]:
    """Analytic joint distribution of both observers' outcome triples."""
    a_plus, a_minus = _triple_projectors(square(variant, Party.ALICE), alice_setting)
    b_plus, b_minus = _triple_projectors(square(variant, Party.BOB), bob_setting)
    dist = {}
    for a_out in itertools.product((1, -1), repeat=3):
        for b_out in itertools.product((1, -1), repeat=3):
            psi = source_state().amplitudes
            first = (b_out, b_plus, b_minus) if bob_first else (a_out, a_plus, a_minus)
            second = (a_out, a_plus, a_minus) if bob_first else (b_out, b_plus, b_minus)
            for outcomes, plus, minus in (first, second):
                for k in range(3):
                    psi = (plus[k] if outcomes[k] == 1 else minus[k]) @ psi
            dist[(a_out, b_out)] = float(np.vdot(psi, psi).real)
    return dist


def party_order_deviation(
    alice_setting: Setting, bob_setting: Setting, variant: Variant = Variant.STANDARD
) -> float:
    """Max difference of the joint distribution between Alice-first and Bob-first."""
    forward = joint_distribution(alice_setting, bob_setting, variant, bob_first=False)
    backward = joint_distribution(alice_setting, bob_setting, variant, bob_first=True)
    return max(abs(forward[k] - backward[k]) for k in forward)


def no_signaling_check(bob_setting: Setting, variant: Variant = Variant.STANDARD) -> float:
    """Max deviation of Bob's outcome distribution across Alice's settings.

    Bob's distribution is computed by summing the analytic joint distribution
    over Alice's outcomes, separately for each of Alice's six settings; the
    result should be setting-independent (deviation < ATOL).
    """
    marginals = []
    for alice_setting in SETTINGS:
        joint = joint_distribution(alice_setting, bob_setting, variant)
        marginal: dict[tuple[int, int, int], float] = {}
        for (_, b_out), p in joint.items():
            marginal[b_out] = marginal.get(b_out, 0.0) + p
        marginals.append(marginal)
    deviation = 0.0
    for b_out in marginals[0]:
        values = [m[b_out] for m in marginals]
        deviation = max(deviation, max(values) - min(values))
    return deviation
