"""The Mermin-Peres magic square: observable grid, identities, eigenbases.

The standard grid of two-qubit observables is

            col 1        col 2        col 3
    row 1   1 (x) sz     sz (x) 1     sz (x) sz
    row 2   sx (x) 1     1 (x) sx     sx (x) sx
    row 3   sx (x) sz    sz (x) sx    sy (x) sy

Every row and every column is a mutually commuting triple; the product of
each row is +I and of each column +I, +I, -I.  Because the measured
eigenvalues of commuting observables obey the same functional relations as
the operators, those signs are exactly the parity rule the detectors display.

The "signed symmetric" variant negates two cells of the bottom row so that
every row product is +I and every column product is -I.  Negating the second
and third cells of the bottom row (the obvious-looking choice) leaves the
column products at {+I, -I, +I}; the unique last-row pair that works is the
first and second cells, which is the default mask here.  See
``find_symmetric_masks`` for the exhaustive check.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quantum import ATOL, Observable, Party, Pauli, commutes, embed_observable, source_state

_P = Pauli
BASE_GRID: tuple[tuple[tuple[Pauli, Pauli], ...], ...] = (
    ((_P.I, _P.Z), (_P.Z, _P.I), (_P.Z, _P.Z)),
    ((_P.X, _P.I), (_P.I, _P.X), (_P.X, _P.X)),
    ((_P.X, _P.Z), (_P.Z, _P.X), (_P.Y, _P.Y)),
)

# Last-row cells negated in the SignedSymmetric variant, 0-based (row, col).
# Chosen by find_symmetric_masks(): it is the only last-row pair giving
# rows +I and columns all -I.
SIGNED_LAST_ROW_CELLS: tuple[tuple[int, int], ...] = ((2, 0), (2, 1))


class Variant(enum.Enum):
    STANDARD = "standard"
    SIGNED_SYMMETRIC = "signed"


class Setting(enum.Enum):
    """The six detector switch positions: rows top-to-bottom, columns left-to-right."""

    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"

    @property
    def is_row(self) -> bool:
        return self.value[0] == "R"

    @property
    def index(self) -> int:
        """0-based row or column number."""
        return int(self.value[1]) - 1

    @property
    def positions(self) -> tuple[tuple[int, int], ...]:
        """The three lit (row, col) panel positions, 0-based, in reading order."""
        if self.is_row:
            return tuple((self.index, c) for c in range(3))
        return tuple((r, self.index) for r in range(3))


SETTINGS = tuple(Setting)
ROW_SETTINGS = (Setting.R1, Setting.R2, Setting.R3)
COLUMN_SETTINGS = (Setting.C1, Setting.C2, Setting.C3)


class NotScalar(Exception):
    """A row/column product deviated from +/-I: the square definition is corrupt."""


@dataclass(frozen=True)
class MagicSquare:
    """A party's 3x3 grid of observables plus the sign-variant flag."""

    cells: tuple[tuple[Observable, ...], ...]
    variant: Variant
    party: Party

    def cell(self, row: int, col: int) -> Observable:
        return self.cells[row][col]


@lru_cache(maxsize=None)
def square(
    variant: Variant,
    party: Party,
    signed_cells: tuple[tuple[int, int], ...] = SIGNED_LAST_ROW_CELLS,
) -> MagicSquare:
    """Build the observable grid for one party.

    ``signed_cells`` (only used by the SignedSymmetric variant) lists the
    0-based cells carrying sign -1; the default is validated at construction
    by product_check.
    """
    negated = set(signed_cells) if variant is Variant.SIGNED_SYMMETRIC else set()
    cells = tuple(
        tuple(
            Observable(
                first=BASE_GRID[r][c][0],
                second=BASE_GRID[r][c][1],
                party=party,
                sign=-1 if (r, c) in negated else 1,
            )
            for c in range(3)
        )
        for r in range(3)
    )
    sq = MagicSquare(cells=cells, variant=variant, party=party)
    product_check(sq)  # fails loudly on a mask that breaks the +/-I identities
    return sq


def setting_observables(sq: MagicSquare, setting: Setting) -> tuple[Observable, ...]:
    """The commuting triple for a setting: rows left-to-right, columns top-to-bottom."""
    return tuple(sq.cell(r, c) for r, c in setting.positions)


def product_check(sq: MagicSquare) -> dict[Setting, int]:
    """Multiply each setting's triple and return its scalar sign.

    Raises NotScalar unless every product equals +I or -I within ATOL.
    """
    return {setting: sign for setting, (sign, _) in _product_details(sq).items()}


def product_residuals(sq: MagicSquare) -> dict[Setting, float]:
    """Max elementwise deviation of each setting's product from sign * I."""
    return {setting: residual for setting, (_, residual) in _product_details(sq).items()}


def _product_details(sq: MagicSquare) -> dict[Setting, tuple[int, float]]:
    details = {}
    for setting in SETTINGS:
        product = np.eye(16, dtype=complex)
        for obs in setting_observables(sq, setting):
            product = product @ embed_observable(obs)
        scalar = product[0, 0]
        if abs(scalar - 1.0) < ATOL:
            sign = 1
        elif abs(scalar + 1.0) < ATOL:
            sign = -1
        else:
            raise NotScalar(f"{setting.value} product has corner entry {scalar!r}, not +/-1")
        residual = float(np.max(np.abs(product - sign * np.eye(16))))
        if residual > ATOL:
            raise NotScalar(f"{setting.value} product deviates from {sign:+d}*I by {residual!r}")
        details[setting] = (sign, residual)
    return details


@lru_cache(maxsize=None)
def required_sign(setting: Setting, variant: Variant) -> int:
    """The forced product of the three measured eigenvalues for a setting.

    Equals the scalar sign of the setting's operator product: +1 means an even
    number of -1 outcomes (red panels), -1 an odd number.
    """
    return product_check(square(variant, Party.ALICE))[setting]


def find_symmetric_masks() -> list[tuple[tuple[int, int], ...]]:
    """All last-row cell pairs whose negation gives rows +I and columns -I.

    Exhaustive over the three pairs; used to justify SIGNED_LAST_ROW_CELLS.
    """
    goal = {s: (1 if s.is_row else -1) for s in SETTINGS}
    masks = []
    for pair in itertools.combinations(((2, 0), (2, 1), (2, 2)), 2):
        sq = MagicSquare(
            cells=tuple(
                tuple(
                    Observable(
                        first=BASE_GRID[r][c][0],
                        second=BASE_GRID[r][c][1],
                        party=Party.ALICE,
                        sign=-1 if (r, c) in pair else 1,
                    )
                    for c in range(3)
                )
                for r in range(3)
            ),
            variant=Variant.SIGNED_SYMMETRIC,
            party=Party.ALICE,
        )
        if product_check(sq) == goal:
            masks.append(pair)
    return masks


@dataclass(frozen=True)
class Eigenvector:
    """One joint eigenvector of a setting's triple, in the party's two-qubit space.

    ``coefficients`` are the four expansion coefficients over the party's
    standard basis |00>, |01>, |10>, |11> (first qubit most significant);
    ``eigenvalues`` is the +/-1 triple, one entry per observable in the
    setting's reading order.
    """

    eigenvalues: tuple[int, int, int]
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients.flags.writeable = False


@dataclass(frozen=True)
class SettingEigenbasis:
    setting: Setting
    party: Party
    vectors: tuple[Eigenvector, ...]


def two_qubit_matrix(obs: Observable) -> np.ndarray:
    """The observable as a 4x4 matrix on its party's own two-qubit space."""
    return obs.sign * np.kron(obs.first.matrix, obs.second.matrix)


def simultaneous_eigenbasis(sq: MagicSquare, setting: Setting) -> SettingEigenbasis:
    """The four joint eigenvectors of a setting's commuting triple.

    Built from products of the exact projectors (I +/- M)/2, one per
    observable, over the four eigenvalue triples consistent with the
    setting's product sign; (o1, o2) is enumerated as (+,+), (+,-), (-,+),
    (-,-) and o3 is forced.  Phase convention: the first nonzero coefficient
    is real and positive.
    """
    triple = [two_qubit_matrix(obs) for obs in setting_observables(sq, setting)]
    sign = product_check(sq)[setting]
    eye = np.eye(4, dtype=complex)
    vectors = []
    for o1, o2 in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        o3 = sign * o1 * o2
        projector = eye
        for outcome, matrix in zip((o1, o2, o3), triple):
            projector = projector @ (eye + outcome * matrix) / 2
        # The projector product is rank one; its largest column is the vector.
        column = projector[:, int(np.argmax(np.linalg.norm(projector, axis=0)))]
        vec = column / np.linalg.norm(column)
        lead = vec[np.flatnonzero(np.abs(vec) > 1e-8)[0]]
        vec = vec * (lead.conjugate() / abs(lead))
        vectors.append(Eigenvector(eigenvalues=(o1, o2, o3), coefficients=vec))
    return SettingEigenbasis(setting=setting, party=sq.party, vectors=tuple(vectors))


def biorthogonal_decomposition_check(setting: Setting, variant: Variant = Variant.STANDARD) -> float:
    """Reconstruction error of the source state from a setting's eigenbasis.

    Alice's joint eigenvectors |psi_i> are paired with Bob-side partners
    |phi_i> carrying the conjugated coefficients; (1/2) sum_i |psi_i>|phi_i>
    is assembled as a 4-qubit state under the index convention and compared
    with the source state.  Returns the L2 distance (expected < ATOL).
    """
    basis = simultaneous_eigenbasis(square(variant, Party.ALICE), setting)
    amp = np.zeros(16, dtype=complex)
    for vec in basis.vectors:
        psi = vec.coefficients           # on qubits (1,3)
        phi = psi.conjugate()            # on qubits (2,4)
        for a in range(4):
            for b in range(4):
                b1, b3 = a >> 1, a & 1
                b2, b4 = b >> 1, b & 1
                amp[b1 * 8 + b2 * 4 + b3 * 2 + b4] += 0.5 * psi[a] * phi[b]
    return float(np.linalg.norm(amp - source_state().amplitudes))


def commuting_triples_ok(sq: MagicSquare) -> bool:
    """True iff every setting's triple is pairwise commuting."""
    for setting in SETTINGS:
        obs = setting_observables(sq, setting)
        for a, b in itertools.combinations(obs, 2):
            if not commutes(a, b):
                return False
    return True
