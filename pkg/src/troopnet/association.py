"""Simple-ratio association indices from occurrence ledgers.

The sampling unit is the video. For individuals i and j with N_i and N_j
videos of presence and x_ij videos of joint presence, the simple ratio is

    x_ij / (N_i + N_j - x_ij)

the fraction of videos featuring either individual in which both appear.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import AssociationMatrix, OccurrenceLedger, PairLedger

__all__ = ["OccurrenceCounts", "count_occurrences", "simple_ratio_matrix", "unobserved_individuals"]


@dataclass
class OccurrenceCounts:
    """Presence counts per individual and joint counts per unordered pair."""

    per_individual: dict[str, int]
    per_pair: dict[tuple[str, str], int]

    def __post_init__(self):
        for pair, x in self.per_pair.items():
            if len(pair) != 2 or pair[0] >= pair[1]:
                raise ValueError(f"pair key {pair!r} must be a sorted 2-tuple of distinct names")
            cap = min(self.per_individual.get(pair[0], 0), self.per_individual.get(pair[1], 0))
            if not 0 <= x <= cap:
                raise ValueError(f"pair count {pair!r}={x} exceeds individual counts")
        if any(n < 0 for n in self.per_individual.values()):
            raise ValueError("individual counts must be non-negative")

    @property
    def total_pair_cooccurrences(self) -> int:
        """Total dyadic co-occurrence count, summed over all pairs."""
        return sum(self.per_pair.values())


def count_occurrences(ledger: OccurrenceLedger | PairLedger) -> OccurrenceCounts:
    """Count presences and joint presences over a ledger.

    For an OccurrenceLedger, a pair co-occurs in a video when both names are
    present. For a PairLedger (proximity-filtered joint records), a pair
    co-occurs when it was jointly recorded, and an individual is counted
    present when it appears in at least one joint record of the video.
    """
    per_individual: dict[str, int] = {}
    per_pair: dict[tuple[str, str], int] = {}
    if isinstance(ledger, PairLedger):
        for entry in ledger.entries:
            names = set()
            for pair in entry.pairs:
                names.update(pair)
                per_pair[pair] = per_pair.get(pair, 0) + 1
            for name in names:
                per_individual[name] = per_individual.get(name, 0) + 1
    else:
        for entry in ledger.entries:
            names = sorted(entry.present)
            for name in names:
                per_individual[name] = per_individual.get(name, 0) + 1
            for i, a in enumerate(names):
                for b in names[i + 1 :]:
                    per_pair[(a, b)] = per_pair.get((a, b), 0) + 1
    return OccurrenceCounts(per_individual=per_individual, per_pair=per_pair)


def simple_ratio_matrix(counts: OccurrenceCounts, names: list[str]) -> AssociationMatrix:
    """Build the simple-ratio association matrix over the given name order.

    Every counted individual must appear in names; names without counts get
    zero rows. Dyads whose denominator is zero (neither individual ever
    seen) are 0 by convention; unobserved_individuals distinguishes them
    from true zero association.
    """
    index = {name: i for i, name in enumerate(names)}
    for name in counts.per_individual:
        if name not in index:
            raise ValueError(f"counted individual {name!r} missing from the name order")
    n = len(names)
    values = np.zeros((n, n))
    for (a, b), x in counts.per_pair.items():
        denom = counts.per_individual[a] + counts.per_individual[b] - x
        if denom <= 0:
            continue
        i, j = index[a], index[b]
        values[i, j] = values[j, i] = x / denom
    return AssociationMatrix(names=list(names), values=values)


def unobserved_individuals(counts: OccurrenceCounts, names: list[str]) -> list[str]:
    """Names never seen in any video; their zero dyads are unobserved, not
    measured absences."""
    return [name for name in names if counts.per_individual.get(name, 0) == 0]
