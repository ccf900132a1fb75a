# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Index-modulation scheme tables.

A scheme maps L1 index bits to an activation pattern over the K subcarriers
of a subblock and L2 data bits to the symbols carried on the active
subcarriers. Traditional schemes activate a fixed number of subcarriers.
Proposed schemes (IM-1, IM-2, IM-3) add one special pattern with an extra
active subcarrier and always leave the last subcarrier of the subblock
unused.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from sefdm_im.constellation import (
    SUPPORTED_CARDINALITIES,
    bits_to_int,
    build_alphabet,
    int_to_bits,
)
from sefdm_im.utils.exceptions import (
    ConfigurationError,
    DetectionConsistencyError,
    SchemeValidationError,
    UsageError,
)
from sefdm_im.utils.scheme_registrar import scheme_registrar

DATA = "data"
REPEAT = "repeat"
SIGNAL = "signal"

# Activation tables, listed in index-bit order (00, 01, 10, 11)
TRADITIONAL_TABLES = {
    (4, 1): ((1, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0)),
    (4, 2): ((1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1)),
    (4, 3): ((0, 1, 1, 1), (1, 1, 1, 0), (1, 0, 1, 1), (1, 1, 0, 1)),
}
PROPOSED_TABLES = {
    (4, (1, 2)): ((1, 0, 0, 0), (1, 0, 1, 0), (0, 1, 0, 0), (0, 0, 1, 0)),
    (4, (2, 3)): ((0, 1, 1, 0), (1, 1, 1, 0), (1, 0, 1, 0), (1, 1, 0, 0)),
}


@dataclass(frozen=True)
class SlotRole:
    """
    What an active subcarrier carries.

    ``source`` is the subcarrier index copied by a repeat role.
    """

    kind: str
    cardinality: int
    source: int = -1

    @property
    def data_bits(self):
        if self.kind == DATA:
            return int(math.log2(self.cardinality))
        return 0


@dataclass(frozen=True)
class PatternEntry:
    index_bits: tuple
    flags: tuple
    roles: tuple
    scale: float

    @property
    def active_slots(self):
        return tuple(k for k, f in enumerate(self.flags) if f)

    @property
    def num_active(self):
        return sum(self.flags)

    @property
    def data_bits(self):
        return sum(role.data_bits for role in self.roles)


@dataclass(frozen=True)
class SchemeSpec:
    name: str
    K: int
    entries: tuple
    alpha: float
    cardinalities: tuple
    proposed: bool
    active: tuple

    def cardinality(self, key):
        return dict(self.cardinalities)[key]

    @property
    def U(self):
        return len(self.entries)

    @property
    def L1(self):
        return int(math.log2(len(self.entries)))

    @property
    def L2(self):
        return self.entries[0].data_bits

    @property
    def L(self):
        return self.L1 + self.L2

    @property
    def ka_eff(self):
        return self.entries[0].num_active

    @property
    def m_eff(self):
        return self.cardinality("M_A")

    @property
    def num_candidates(self):
        return self.U * 2**self.L2

    @property
    def label(self):
        if len(self.active) == 1:
            shape = f"[{self.K},{self.active[0]}]"
        else:
            shape = f"[{self.K},({','.join(str(a) for a in self.active)})]"
        return f"{self.name}{shape}"


@dataclass(frozen=True, eq=False)
class SubblockCodeword:
    flags: tuple
    symbols: np.ndarray


@dataclass(frozen=True, eq=False)
class CandidateTable:
    """
    Every (index bits, data bits) combination of a scheme with its
    transmitted subblock. Row ``u * 2**L2 + d`` holds index value ``u`` and
    data value ``d``.
    """

    index_bits: np.ndarray
    data_bits: np.ndarray
    tx: np.ndarray
    flags: np.ndarray


# Slot-role builders for each family. Traditional families use theirs for
# every pattern; proposed families only for the special pattern.
@scheme_registrar.add("Tra", kind="traditional")
@scheme_registrar.add("M1", kind="traditional")
@scheme_registrar.add("M2", kind="traditional")
@scheme_registrar.add("OFDM-IM", kind="traditional")
def _all_data_roles(active_slots, cardinalities):
    return tuple(SlotRole(DATA, cardinalities["M_A"]) for _ in active_slots)


@scheme_registrar.add("IM-1")
def _signalling_roles(active_slots, cardinalities):
    m_a = cardinalities["M_A"]
    return (SlotRole(SIGNAL, m_a),) + tuple(
        SlotRole(DATA, m_a) for _ in active_slots[1:]
    )


@scheme_registrar.add("IM-2")
def _repetition_roles(active_slots, cardinalities):
    m_a = cardinalities["M_A"]
    roles = [SlotRole(DATA, m_a), SlotRole(REPEAT, m_a, source=active_slots[0])]
    roles += [SlotRole(DATA, m_a) for _ in active_slots[2:]]
    return tuple(roles)


@scheme_registrar.add("IM-3")
def _mixed_cardinality_roles(active_slots, cardinalities):
    keys = ("M_B", "M_C", "M_D")[: len(active_slots)]
    missing = [key for key in keys if key not in cardinalities]
    if missing:
        raise ConfigurationError(
            f"IM-3 with {len(active_slots)} active subcarriers needs "
            f"cardinalities {keys}, missing {missing}"
        )
    return tuple(SlotRole(DATA, cardinalities[key]) for key in keys)


def _combination_table(K, num_active):
    """First 2**floor(log2 C(K, K_A)) activation patterns in lexicographic order."""
    combos = list(itertools.combinations(range(K), num_active))
    usable = 2 ** int(math.floor(math.log2(len(combos))))
    table = []
    for combo in combos[:usable]:
        table.append(tuple(1 if k in combo else 0 for k in range(K)))
    return tuple(table)


def _normalize_cardinalities(cardinalities):
    if cardinalities is None:
        cardinalities = {"M_A": 4}
    cardinalities = {str(k).upper(): int(v) for k, v in dict(cardinalities).items()}
    if "M_A" not in cardinalities:
        raise ConfigurationError("Cardinality M_A is required")
    for key, value in cardinalities.items():
        if value not in SUPPORTED_CARDINALITIES:
            raise ConfigurationError(
                f"Cardinality {key}={value} is not one of {SUPPORTED_CARDINALITIES}"
            )
    return cardinalities


def make_scheme(name, K=4, cardinalities=None, alpha=1.0, active=None, table=None):
    """
    Builds and validates a scheme.

    :param name: family name, one of Tra, M1, M2, OFDM-IM, IM-1, IM-2, IM-3
    :param K: subcarriers per subblock
    :param cardinalities: dict with M_A and, for IM-3, M_B, M_C (and M_D)
    :param alpha: bandwidth compression factor in (0, 1]
    :param active: number of active subcarriers for traditional families,
        or a pair such as (1, 2) for proposed families
    :param table: optional sequence of activation flag tuples in index-bit
        order, required when K has no built-in table
    """
    family = scheme_registrar.canonical_name(name)
    builder = scheme_registrar.get(family)
    proposed = scheme_registrar.is_proposed(family)
    cardinalities = _normalize_cardinalities(cardinalities)

    if not 0.0 < float(alpha) <= 1.0:
        raise ConfigurationError(f"alpha must lie in (0, 1], got {alpha}")
    if family == "OFDM-IM" and float(alpha) != 1.0:
        raise ConfigurationError(f"OFDM-IM is orthogonal and needs alpha = 1, got {alpha}")
    if K < 2:
        raise ConfigurationError(f"K must be at least 2, got {K}")

    if proposed:
        if active is None:
            active = (2, 3) if "M_D" in cardinalities else (1, 2)
        active = tuple(int(a) for a in active)
        if table is None:
            if (K, active) not in PROPOSED_TABLES:
                raise ConfigurationError(
                    f"No built-in table for {family} with K={K} and active={active}, "
                    f"pass one explicitly"
                )
            table = PROPOSED_TABLES[(K, active)]
    else:
        if active is None:
            active = 2 if family == "OFDM-IM" else 1
        if isinstance(active, (tuple, list)):
            if len(active) != 1:
                raise ConfigurationError(
                    f"Traditional family {family} takes a single active count, got {active}"
                )
            active = active[0]
        if not 0 < int(active) < K:
            raise ConfigurationError(f"Active count must lie in [1, K-1], got {active}")
        active = (int(active),)
        if table is None:
            table = TRADITIONAL_TABLES.get((K, active[0])) or _combination_table(
                K, active[0]
            )

    table = tuple(tuple(int(f) for f in flags) for flags in table)
    if len(table) == 0 or len(table) & (len(table) - 1):
        raise SchemeValidationError(
            f"number of patterns must be a power of two, got {len(table)}"
        )
    L1 = int(math.log2(len(table)))
    counts = [sum(flags) for flags in table]
    special_count = max(counts) if proposed and len(set(counts)) > 1 else None

    entries = []
    for u, flags in enumerate(table):
        if len(flags) != K:
            raise SchemeValidationError(
                f"pattern {flags} has {len(flags)} flags, expected K={K}"
            )
        active_slots = tuple(k for k, f in enumerate(flags) if f)
        if not active_slots:
            raise SchemeValidationError(f"pattern {u} activates no subcarrier")
        if not proposed or sum(flags) == special_count:
            roles = builder(active_slots, cardinalities)
        else:
            roles = _all_data_roles(active_slots, cardinalities)
        entries.append(
            PatternEntry(
                index_bits=tuple(int(b) for b in int_to_bits(u, L1)),
                flags=flags,
                roles=roles,
                scale=math.sqrt(K / len(active_slots)),
            )
        )

    scheme = SchemeSpec(
        name=family,
        K=int(K),
        entries=tuple(entries),
        alpha=float(alpha),
        cardinalities=tuple(sorted(cardinalities.items())),
        proposed=proposed,
        active=active,
    )
    validate_scheme(scheme)
    logging.debug(
        f"built scheme {scheme.label} with L1={scheme.L1}, L2={scheme.L2}, "
        f"alpha={scheme.alpha}"
    )
    return scheme


def validate_scheme(scheme):
    """
    Raises SchemeValidationError naming the first violated condition.
    """
    index_values = [bits_to_int(entry.index_bits) for entry in scheme.entries]
    if sorted(index_values) != list(range(2**scheme.L1)):
        raise SchemeValidationError(
            "index-bit map is not a bijection onto the pattern set"
        )
    if len(set(entry.flags for entry in scheme.entries)) != len(scheme.entries):
        raise SchemeValidationError("activation patterns are not distinct")

    for entry in scheme.entries:
        if len(entry.roles) != entry.num_active:
            raise SchemeValidationError(
                f"pattern {entry.flags} has {entry.num_active} active subcarriers "
                f"but {len(entry.roles)} slot roles"
            )
        for slot, role in zip(entry.active_slots, entry.roles):
            if role.kind == REPEAT:
                sources = dict(zip(entry.active_slots, entry.roles))
                if (
                    role.source not in sources
                    or role.source >= slot
                    or sources[role.source].kind != DATA
                ):
                    raise SchemeValidationError(
                        f"repeat on subcarrier {slot} must copy an earlier data "
                        f"subcarrier, got source {role.source}"
                    )

    if scheme.name == "IM-3":
        m_a = scheme.m_eff
        for entry in scheme.entries:
            if entry.num_active == scheme.ka_eff:
                continue
            cards = [role.cardinality for role in entry.roles]
            product = math.prod(cards)
            target = m_a ** (len(cards) - 1)
            if product != target:
                names = ("M_B", "M_C", "M_D")[: len(cards)]
                relation = " * ".join(names) + " = M_A" + (
                    f"^{len(cards) - 1}" if len(cards) > 2 else ""
                )
                raise SchemeValidationError(
                    f"mixed-cardinality product violated: {relation} required, got "
                    f"{' * '.join(str(c) for c in cards)} = {product}, expected {target}"
                )

    data_bits = {entry.data_bits for entry in scheme.entries}
    if len(data_bits) != 1:
        raise SchemeValidationError(
            f"constant data-bit count violated: patterns carry {sorted(data_bits)} bits"
        )

    if scheme.proposed:
        if any(entry.flags[-1] for entry in scheme.entries):
            raise SchemeValidationError(
                "last-subcarrier-unused violated: a pattern activates subcarrier K-1"
            )
    else:
        num_active = scheme.active[0]
        expected = 2 ** int(math.floor(math.log2(math.comb(scheme.K, num_active))))
        if scheme.U != expected or any(
            entry.num_active != num_active for entry in scheme.entries
        ):
            raise SchemeValidationError(
                f"fixed-activation table must hold 2^floor(log2 C({scheme.K},"
                f"{num_active})) = {expected} patterns of weight {num_active}"
            )


def _entry_for(scheme, index_bits):
    if len(index_bits) != scheme.L1:
        raise UsageError(f"Expected {scheme.L1} index bits, got {len(index_bits)}")
    return scheme.entries[bits_to_int(index_bits)]


def build_subblock(scheme, index_bits, data_bits):
    """
    Returns the transmitted subblock for the given index and data bits.
    """
    entry = _entry_for(scheme, index_bits)
    data_bits = [int(b) for b in data_bits]
    if len(data_bits) != scheme.L2:
        raise UsageError(f"Expected {scheme.L2} data bits, got {len(data_bits)}")

    symbols = np.zeros(scheme.K, dtype=np.complex128)
    cursor = 0
    for slot, role in zip(entry.active_slots, entry.roles):
        alphabet = build_alphabet(role.cardinality, entry.scale)
        if role.kind == DATA:
            width = role.data_bits
            label = bits_to_int(data_bits[cursor : cursor + width])
            cursor += width
            symbols[slot] = alphabet.points[label]
        elif role.kind == SIGNAL:
            symbols[slot] = alphabet.signalling_point()
        else:
            symbols[slot] = symbols[role.source]
    symbols.setflags(write=False)
    return SubblockCodeword(flags=entry.flags, symbols=symbols)


def enumerate_candidates(scheme):
    """
    All (index_bits, data_bits, subblock) triples, index bits major.
    """
    candidates = []
    for entry in scheme.entries:
        for d in range(2**scheme.L2):
            data_bits = tuple(int(b) for b in int_to_bits(d, scheme.L2))
            codeword = build_subblock(scheme, entry.index_bits, data_bits)
            candidates.append((entry.index_bits, data_bits, codeword.symbols))
    return candidates


@functools.lru_cache(maxsize=64)
def candidate_table(scheme):
    candidates = enumerate_candidates(scheme)
    index_bits = np.array([c[0] for c in candidates], dtype=np.uint8).reshape(
        len(candidates), scheme.L1
    )
    data_bits = np.array([c[1] for c in candidates], dtype=np.uint8).reshape(
        len(candidates), scheme.L2
    )
    tx = np.array([c[2] for c in candidates], dtype=np.complex128)
    flags = (np.abs(tx) > 0).astype(np.uint8)
    for array in (index_bits, data_bits, tx, flags):
        array.setflags(write=False)
    return CandidateTable(index_bits=index_bits, data_bits=data_bits, tx=tx, flags=flags)


def pattern_to_index_bits(scheme, flags):
    """
    Inverse of the activation map.
    """
    flags = tuple(int(f) for f in flags)
    for entry in scheme.entries:
        if entry.flags == flags:
            return entry.index_bits
    raise DetectionConsistencyError(
        f"activation pattern {flags} is not in the {scheme.label} table"
    )


def _role_name(role):
    if role.kind == SIGNAL:
        return "S*"
    if role.kind == REPEAT:
        return f"rep({role.source})"
    return f"S{role.cardinality}"


def pattern_table_rows(scheme):
    """Rows of (index bits, activation, slot roles, scale) for display."""
    rows = []
    for entry in scheme.entries:
        roles = iter(entry.roles)
        layout = [
            _role_name(next(roles)) if flag else "0" for flag in entry.flags
        ]
        rows.append(
            (
                "".join(str(b) for b in entry.index_bits),
                "".join(str(f) for f in entry.flags),
                " ".join(layout),
                entry.scale,
            )
        )
    return rows
