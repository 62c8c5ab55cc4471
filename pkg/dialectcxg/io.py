"""
dialectcxg I/O helper functions
"""

# Core imports
import hashlib
import json
import os
import warnings
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Union

# Internal imports
from .warnings import RecordWarning

# External imports
import pandas as pd

PathLike = Union[str, os.PathLike]


def data_path(name: str) -> Path:
    """Path to a data file shipped with the package

    Parameters
    ----------
    name : str
        File name under ``dialectcxg/data``

    Returns
    -------
    Path
        Location of the packaged file
    """

    return Path(str(resources.files('dialectcxg') / 'data' / name))


def read_lines(path: PathLike) -> list[str]:
    """Read a one-item-per-line file, skipping blank lines and ``#`` comments

    Parameters
    ----------
    path : PathLike
        File to read

    Returns
    -------
    list[str]
        Stripped lines in file order
    """

    with open(path, 'r', encoding='utf-8') as f:
        lines = [line.strip() for line in f]

    return [line for line in lines if line and not line.startswith('#')]


def write_lines(lines: Iterable[str], path: PathLike) -> None:
    """Write one item per line

    Parameters
    ----------
    lines : Iterable[str]
        Items to write
    path : PathLike
        Destination file
    """

    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for line in lines:
            f.write(f'{line}\n')


def read_jsonl(path: PathLike) -> Iterator[tuple[int, dict]]:
    """Stream a newline-delimited JSON file

    Lines that are not JSON objects are skipped with a ``RecordWarning``.

    Parameters
    ----------
    path : PathLike
        File to read

    Yields
    ------
    tuple[int, dict]
        Zero-based line index and the decoded record
    """

    with open(path, 'r', encoding='utf-8') as f:
        for index, line in enumerate(f):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                warnings.warn(RecordWarning(
                    RecordWarning.skipped.format(index=index, reason=e.msg)))
                continue
            if not isinstance(record, dict):
                warnings.warn(RecordWarning(RecordWarning.skipped.format(
                    index=index, reason='not a JSON object')))
                continue
            yield index, record


def write_jsonl(records: Iterable[dict], path: PathLike) -> int:
    """Write records as newline-delimited JSON

    Parameters
    ----------
    records : Iterable[dict]
        Records to write
    path : PathLike
        Destination file

    Returns
    -------
    int
        Number of records written
    """

    _ensure_parent(path)
    n = 0
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + '\n')
            n += 1

    return n


def write_json(obj, path: PathLike) -> None:
    """Write a JSON document with sorted keys so reruns are byte-identical"""

    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(obj, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write('\n')


def read_json(path: PathLike):

    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def read_table(path: PathLike, columns: list[str], sep: str = ',') -> pd.DataFrame:
    """Read a delimited table with a required header

    Every column is read as a string and nothing is coerced to NaN, so codes
    like ``NA`` (Namibia) survive.

    Parameters
    ----------
    path : PathLike
        CSV or TSV file
    columns : list[str]
        Columns that must be present in the header
    sep : str, optional
        Field separator. Defaults to ','.

    Returns
    -------
    pd.DataFrame
        Table restricted to ``columns``

    Raises
    ------
    KeyError
        If a required column is missing from the header
    """

    frame = pd.read_csv(path, sep=sep, dtype=str, keep_default_na=False,
                        encoding='utf-8')
    frame.columns = [c.strip() for c in frame.columns]

    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise KeyError(f'{path} is missing columns {missing}')

    return frame[columns]


def write_frame(frame: pd.DataFrame, path: PathLike) -> None:
    """Write a report table as UTF-8 CSV with fixed float formatting"""

    _ensure_parent(path)
    frame.to_csv(path, index=False, float_format='%.6f', encoding='utf-8')


def file_digest(path: PathLike) -> str:
    """SHA-256 of a file's bytes, used for stage fingerprints"""

    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for block in iter(lambda: f.read(1 << 20), b''):
            digest.update(block)

    return digest.hexdigest()


def _ensure_parent(path: PathLike) -> None:

    Path(path).parent.mkdir(parents=True, exist_ok=True)
