"""
Language mapping: word totals by country and register, and the data-driven
selection of national varieties
"""

# Core imports
from __future__ import annotations
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

# Internal imports
from . import io
from .ingest import GeoDocument, Register

# External imports
import pandas as pd

DEFAULT_THRESHOLD = 15_000_000


class CorpusStats:
    """Word totals per (country, register).

    Stats from disjoint partitions of a corpus combine with ``+`` (or
    ``merge``); the operation is associative and commutative, so partial sums
    can be computed in any order.

    Parameters
    ----------
    counts : Mapping[tuple[str, Register], int], optional
        Initial totals. Defaults to empty.
    """

    def __init__(self, counts: Mapping[tuple[str, Register], int] = None):

        self.counts = Counter()
        for (country, register), words in (counts or {}).items():
            if words < 0:
                raise ValueError(f'Negative word total for {country}/{register}')
            self.counts[(country, Register(register))] += int(words)

    def __eq__(self, other):

        return isinstance(other, CorpusStats) and \
            +self.counts == +other.counts

    def __add__(self, other: CorpusStats) -> CorpusStats:

        return self.merge(other)

    def __len__(self):

        return len(self.counts)

    def merge(self, other: CorpusStats) -> CorpusStats:
        """Sum of two partial tabulations (neither operand is modified)"""

        merged = CorpusStats()
        merged.counts = self.counts + other.counts

        return merged

    def words(self, country: str, register: Register) -> int:

        return self.counts.get((country, Register(register)), 0)

    @property
    def countries(self) -> list[str]:

        return sorted({country for country, _ in self.counts})

    def to_frame(self) -> pd.DataFrame:
        """Long table with columns ``country, register, words``, sorted"""

        rows = [
            (country, register.value, words)
            for (country, register), words in sorted(
                self.counts.items(), key=lambda kv: (kv[0][0], kv[0][1].value))
        ]

        return pd.DataFrame(rows, columns=['country', 'register', 'words'])

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> CorpusStats:

        return cls({
            (country, Register(register)): int(words)
            for country, register, words in
            frame[['country', 'register', 'words']].itertuples(index=False)
        })

    def to_csv(self, path: io.PathLike) -> None:

        io.write_frame(self.to_frame(), path)

    @classmethod
    def from_csv(cls, path: io.PathLike) -> CorpusStats:

        return cls.from_frame(io.read_table(path, ['country', 'register', 'words']))

    def by_region(self, regions: Mapping[str, str]) -> pd.DataFrame:
        """Background corpus size by region, one column per register

        Parameters
        ----------
        regions : Mapping[str, str]
            Country code to region name; unmapped countries are reported as
            "Other"

        Returns
        -------
        pd.DataFrame
            Columns ``region, WEB, SOCIAL`` sorted by region name
        """

        frame = self.to_frame()
        frame['region'] = frame['country'].map(lambda c: regions.get(c, 'Other'))
        table = frame.pivot_table(index='region', columns='register', values='words',
                                  aggfunc='sum', fill_value=0)

        return _register_columns(table).reset_index()


def tabulate(docs: Iterable[GeoDocument]) -> CorpusStats:
    """Exact word totals per (country, register)

    Parameters
    ----------
    docs : Iterable[GeoDocument]
        Geo-referenced documents, in any order

    Returns
    -------
    CorpusStats
        Totals; countries absent from the input are absent from the result
    """

    counts = Counter()
    for doc in docs:
        counts[(doc.country, doc.register)] += doc.word_count

    stats = CorpusStats()
    stats.counts = counts

    return stats


@dataclass(frozen=True)
class VarietyInventory:
    """National varieties with enough data in every register"""

    varieties: tuple[str, ...]
    threshold: int

    def __contains__(self, country):

        return country in self.varieties

    def __iter__(self):

        return iter(self.varieties)

    def __len__(self):

        return len(self.varieties)

    def to_file(self, path: io.PathLike) -> None:

        io.write_lines(self.varieties, path)

    @classmethod
    def from_file(cls, path: io.PathLike, threshold: int = DEFAULT_THRESHOLD) -> VarietyInventory:

        return cls(tuple(sorted(io.read_lines(path))), threshold)


def select_inventory(stats: CorpusStats, threshold: int = DEFAULT_THRESHOLD) -> VarietyInventory:
    """Select every country with at least ``threshold`` words in both registers

    Parameters
    ----------
    stats : CorpusStats
        Corpus totals
    threshold : int, optional
        Minimum words per register. Defaults to 15,000,000.

    Returns
    -------
    VarietyInventory
        Qualifying countries in lexicographic order
    """

    varieties = tuple(
        country for country in stats.countries
        if all(stats.words(country, register) >= threshold for register in Register)
    )

    return VarietyInventory(varieties, threshold)


def inventory_table(stats: CorpusStats, inventory: VarietyInventory) -> pd.DataFrame:
    """Words per register for each selected variety

    Returns
    -------
    pd.DataFrame
        Columns ``country, WEB, SOCIAL`` with one row per variety
    """

    frame = stats.to_frame()
    frame = frame[frame['country'].isin(inventory.varieties)]
    table = frame.pivot_table(index='country', columns='register', values='words',
                              aggfunc='sum', fill_value=0)
    table = _register_columns(table).reindex(list(inventory.varieties), fill_value=0)
    table.index.name = 'country'

    return table.reset_index()


def read_regions(path: io.PathLike) -> dict[str, str]:
    """Load a ``country,region`` reporting table"""

    frame = io.read_table(path, ['country', 'region'])

    return dict(zip(frame['country'].str.upper(), frame['region']))


def _register_columns(table: pd.DataFrame) -> pd.DataFrame:

    table = table.reindex(columns=[r.value for r in Register], fill_value=0)
    table.columns.name = None

    return table.astype('int64')
