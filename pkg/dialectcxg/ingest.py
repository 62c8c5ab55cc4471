"""
Ingest
------
Turning raw web-page dumps and geo-tagged post dumps into clean,
geo-referenced and deduplicated documents
"""

# Core imports
from __future__ import annotations
import hashlib
import re
import warnings
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

# Internal imports
from . import io
from ._distance import SphericalIndex
from .errors import RecordError
from .warnings import RecordWarning

# External imports
from bs4 import BeautifulSoup

# Elements whose boundaries separate words; inline markup joins its text as is
_BLOCK_TAGS = ['address', 'article', 'aside', 'blockquote', 'dd', 'div', 'dl', 'dt',
               'figcaption', 'figure', 'footer', 'h1', 'h2', 'h3', 'h4', 'h5', 'h6',
               'header', 'hr', 'li', 'main', 'nav', 'ol', 'p', 'pre', 'section',
               'table', 'td', 'th', 'tr', 'ul']

_MONTH = re.compile(r'^\d{4}-(0[1-9]|1[0-2])$')

# A language predicate maps text to an ISO 639 code, or None when unsure
LanguagePredicate = Callable[[str], Optional[str]]


class Register(str, Enum):
    """Text domain of a document"""

    WEB = 'WEB'
    SOCIAL = 'SOCIAL'


def normalize_whitespace(text: str) -> str:
    """Collapse every run of whitespace to a single space and strip the ends"""

    return ' '.join(text.split())


def count_words(text: str) -> int:
    """A word is a maximal run of non-whitespace characters"""

    return len(text.split())


@dataclass(frozen=True, kw_only=True)
class RawDocument:
    """A document as read from a dump, before geo-referencing.

    Parameters
    ----------
    source_id : str
        Site hostname (WEB) or post id (SOCIAL)
    register : Register
        WEB or SOCIAL
    text : str
        Document text
    month : str
        Calendar month in ``YYYY-MM`` form
    domain_suffix : str, optional
        Top-level domain of the site, WEB only
    coordinates : tuple[float, float], optional
        (lat, lon) in degrees, SOCIAL only
    language : str, optional
        ISO 639 code if known
    """

    source_id: str
    register: Register
    text: str
    month: str
    domain_suffix: Optional[str] = None
    coordinates: Optional[tuple[float, float]] = None
    language: Optional[str] = None

    def __post_init__(self):

        object.__setattr__(self, 'register', Register(self.register))

        if not normalize_whitespace(self.text):
            raise RecordError(RecordError.empty_text.format(source_id=self.source_id))

        if not _MONTH.match(self.month):
            raise RecordError(RecordError.bad_month.format(value=self.month))

        if self.register is Register.WEB:
            valid = self.domain_suffix is not None and self.coordinates is None
        else:
            valid = self.domain_suffix is None and self.coordinates is not None
        if not valid:
            raise RecordError(RecordError.register_fields)

        if self.coordinates is not None:
            lat, lon = self.coordinates
            if not (-90 <= lat <= 90 and -180 <= lon <= 180):
                raise RecordError(
                    RecordError.bad_coordinates.format(lat=lat, lon=lon))

    def to_dict(self) -> dict:

        return {
            'source_id': self.source_id,
            'register': self.register.value,
            'text': self.text,
            'month': self.month,
            'domain_suffix': self.domain_suffix,
            'coordinates': list(self.coordinates) if self.coordinates else None,
            'language': self.language,
        }


@dataclass(frozen=True, kw_only=True)
class GeoDocument(RawDocument):
    """A document with its assigned country and word count

    Parameters
    ----------
    country : str
        ISO 3166 alpha-2 code
    word_count : int
        Number of whitespace-delimited words in ``text``
    """

    country: str
    word_count: int

    @classmethod
    def from_raw(cls, raw: RawDocument, country: str, **changes) -> GeoDocument:
        """Attach a country to a raw document

        Parameters
        ----------
        raw : RawDocument
            Source document
        country : str
            Assigned country code
        **changes
            Field overrides (e.g. a language found by the predicate)

        Returns
        -------
        GeoDocument
            New geo-referenced document
        """

        fields = {
            'source_id': raw.source_id,
            'register': raw.register,
            'text': raw.text,
            'month': raw.month,
            'domain_suffix': raw.domain_suffix,
            'coordinates': raw.coordinates,
            'language': raw.language,
        }
        fields.update(changes)

        return cls(country=country, word_count=count_words(fields['text']), **fields)

    @classmethod
    def from_dict(cls, record: dict) -> GeoDocument:

        coordinates = record.get('coordinates')
        return cls(
            source_id=record['source_id'],
            register=record['register'],
            text=record['text'],
            month=record['month'],
            domain_suffix=record.get('domain_suffix'),
            coordinates=tuple(coordinates) if coordinates else None,
            language=record.get('language'),
            country=record['country'],
            word_count=int(record['word_count']),
        )

    def to_dict(self) -> dict:

        record = super().to_dict()
        record['country'] = self.country
        record['word_count'] = self.word_count

        return record


def read_documents(path: io.PathLike) -> Iterator[GeoDocument]:
    """Stream geo-referenced documents written by ``write_documents``"""

    for _, record in io.read_jsonl(path):
        yield GeoDocument.from_dict(record)


def write_documents(docs: Iterable[GeoDocument], path: io.PathLike) -> int:
    """Write geo-referenced documents as newline-delimited JSON"""

    return io.write_jsonl((doc.to_dict() for doc in docs), path)


# ---------------------------------------------------------------------------
# Paragraph extraction and boilerplate
# ---------------------------------------------------------------------------

def extract_paragraphs(html: str) -> list[str]:
    """Text of every outermost ``<p>`` element in document order

    Parameters
    ----------
    html : str
        HTML page or fragment; parsing is tolerant of broken markup

    Returns
    -------
    list[str]
        Whitespace-normalized paragraph texts, empty paragraphs dropped
    """

    try:
        soup = BeautifulSoup(html, 'html.parser')
    except Exception:
        return []

    # Script and style bodies are never prose, even when nested in a paragraph
    for node in soup.find_all(['script', 'style']):
        node.decompose()
    for node in soup.find_all('br'):
        node.replace_with(' ')
    for node in soup.find_all(_BLOCK_TAGS):
        node.insert_before(' ')
        node.insert_after(' ')

    paragraphs = []
    for p in soup.find_all('p'):
        # Nested paragraphs are already covered by their outermost ancestor
        if p.find_parent('p') is not None:
            continue
        text = normalize_whitespace(p.get_text())
        if text:
            paragraphs.append(text)

    return paragraphs


def extract_paragraph_text(html: str, boilerplate: BoilerplateFilter = None) -> str:
    """Concatenate the paragraph text of an HTML page

    Parameters
    ----------
    html : str
        HTML page or fragment
    boilerplate : BoilerplateFilter, optional
        Filter used to drop navigation items and error messages paragraph by
        paragraph. Defaults to None (keep everything).

    Returns
    -------
    str
        Paragraph text joined by single spaces, or "" when there is none

    Examples
    --------
    >>> extract_paragraph_text('<p>Hello world</p><div>nav</div><p>again</p>')
    'Hello world again'
    """

    paragraphs = extract_paragraphs(html)
    if boilerplate is not None:
        paragraphs = boilerplate.clean(paragraphs)

    return ' '.join(paragraphs)


class BoilerplateFilter:
    """Paragraph-level filter for navigation phrases, cookie banners and
    error messages.

    Parameters
    ----------
    patterns : Sequence[str]
        Regular expressions, matched case-insensitively with ``re.search``
    """

    def __init__(self, patterns: Sequence[str]):

        self.patterns = list(patterns)
        self._regex = re.compile(
            '|'.join(f'(?:{p})' for p in self.patterns), re.IGNORECASE
        ) if self.patterns else None

    @classmethod
    def from_file(cls, path: io.PathLike = None) -> BoilerplateFilter:
        """Load patterns from a file, one regular expression per line

        Parameters
        ----------
        path : PathLike, optional
            Pattern file. Defaults to the list shipped with the package.

        Returns
        -------
        BoilerplateFilter
            New filter
        """

        return cls(io.read_lines(path or io.data_path('boilerplate.txt')))

    def is_boilerplate(self, paragraph: str) -> bool:

        return self._regex is not None and self._regex.search(paragraph) is not None

    def clean(self, paragraphs: Iterable[str]) -> list[str]:

        return [p for p in paragraphs if not self.is_boilerplate(p)]


# ---------------------------------------------------------------------------
# Geo-referencing
# ---------------------------------------------------------------------------

def read_tld_table(path: io.PathLike = None) -> dict[str, str]:
    """Load the ``suffix,country`` table

    Parameters
    ----------
    path : PathLike, optional
        CSV file with a header. Defaults to the packaged table.

    Returns
    -------
    dict[str, str]
        Lowercase suffix (no dot) to uppercase country code
    """

    frame = io.read_table(path or io.data_path('tld.csv'), ['suffix', 'country'])

    return {
        suffix.strip().lower().lstrip('.'): country.strip().upper()
        for suffix, country in zip(frame['suffix'], frame['country'])
    }


def read_tld_exclusions(path: io.PathLike = None) -> set[str]:
    """Load ccTLDs that are marketed as generic domains (one per line)"""

    lines = io.read_lines(path or io.data_path('tld_exclusions.txt'))

    return {line.lower().lstrip('.') for line in lines}


def tld_georeference(domain_suffix: str, tld_table: Mapping[str, str],
                     exclusions: set[str]) -> Optional[str]:
    """Country of a web site from its country-code top-level domain

    Parameters
    ----------
    domain_suffix : str
        Lowercase suffix without the leading dot, e.g. "ca"
    tld_table : Mapping[str, str]
        Suffix to country code
    exclusions : set[str]
        ccTLDs used as generic domains (e.g. "tv", "io")

    Returns
    -------
    str or None
        Country code, or None for generic, excluded or unknown suffixes

    Examples
    --------
    >>> tld_georeference('ca', {'ca': 'CA'}, {'tv'})
    'CA'
    >>> tld_georeference('com', {'ca': 'CA'}, {'tv'}) is None
    True
    """

    if domain_suffix in exclusions:
        return None

    return tld_table.get(domain_suffix)


@dataclass(frozen=True)
class City:
    """A gazetteer entry used for the radius search around social posts"""

    name: str
    country: str
    lat: float
    lon: float

    def __post_init__(self):

        if not (-90 <= self.lat <= 90 and -180 <= self.lon <= 180):
            raise RecordError(
                RecordError.bad_coordinates.format(lat=self.lat, lon=self.lon))


def read_cities(path: io.PathLike) -> list[City]:
    """Load a ``name,country,lat,lon`` gazetteer CSV (header required)"""

    frame = io.read_table(path, ['name', 'country', 'lat', 'lon'])

    return [
        City(name, country.strip().upper(), float(lat), float(lon))
        for name, country, lat, lon in frame.itertuples(index=False)
    ]


class CityIndex:
    """Spatial index over a gazetteer for nearest-city lookups.

    Cities are sorted by (name, country) so that ties in distance resolve to
    the smallest index in that order.

    Parameters
    ----------
    cities : Sequence[City]
        Gazetteer entries (must not be empty)
    """

    def __init__(self, cities: Sequence[City]):

        if not cities:
            raise ValueError('CityIndex needs at least one city')

        self.cities = sorted(cities, key=lambda c: (c.name, c.country))
        self._index = SphericalIndex(
            [c.lat for c in self.cities], [c.lon for c in self.cities])

    @classmethod
    def from_file(cls, path: io.PathLike) -> CityIndex:

        return cls(read_cities(path))

    def __len__(self):

        return len(self.cities)

    def nearest(self, lat: float, lon: float, radius_km: float = 50.0) -> Optional[City]:
        """Nearest city within ``radius_km`` of the point, or None"""

        i = self._index.nearest(lat, lon, radius_km)

        return None if i is None else self.cities[i]


def city_georeference(point: tuple[float, float],
                      cities: Union[Sequence[City], CityIndex],
                      radius_km: float = 50.0) -> Optional[str]:
    """Country of the nearest city by great-circle distance

    Parameters
    ----------
    point : tuple[float, float]
        (lat, lon) in degrees
    cities : Sequence[City] or CityIndex
        Gazetteer; pass a prebuilt ``CityIndex`` when looking up many points
    radius_km : float, optional
        Search radius. Defaults to 50.

    Returns
    -------
    str or None
        Country of the nearest city if it lies within the radius
    """

    if not isinstance(cities, CityIndex):
        cities = CityIndex(cities)

    city = cities.nearest(point[0], point[1], radius_km)

    return None if city is None else city.country


# ---------------------------------------------------------------------------
# Deduplication
# ---------------------------------------------------------------------------

def content_hash(text: str) -> bytes:
    """128-bit digest of case-folded, whitespace-collapsed text"""

    normalized = normalize_whitespace(text).casefold()

    return hashlib.blake2b(normalized.encode('utf-8'), digest_size=16).digest()


class Deduplicator:
    """Streaming exact-match deduplication over three scopes.

    A document is dropped if its normalized text was already kept (a) on the
    same site, (b) in the same calendar month, or (c) for the same
    (country, language) pair. Scopes (a) and (b) are applied on the fly; scope
    (c) filters the survivors of the first two, which equals running it as a
    second pass over their output. The first occurrence in stream order is
    always the one kept.

    Attributes
    ----------
    removed : Counter
        Number of documents dropped per scope ("site", "month", "country")
    """

    def __init__(self):

        self.removed = Counter()

    def __call__(self, docs: Iterable[GeoDocument]) -> Iterator[GeoDocument]:

        seen_site, seen_month, seen_country = set(), set(), set()

        for doc in docs:
            h = content_hash(doc.text)

            site_key = (doc.source_id, h)
            if site_key in seen_site:
                self.removed['site'] += 1
                continue
            seen_site.add(site_key)

            month_key = (doc.month, h)
            if month_key in seen_month:
                self.removed['month'] += 1
                continue
            seen_month.add(month_key)

            country_key = (doc.country, doc.language, h)
            if country_key in seen_country:
                self.removed['country'] += 1
                continue
            seen_country.add(country_key)

            yield doc


def deduplicate(docs: Iterable[GeoDocument]) -> Iterator[GeoDocument]:
    """Drop repeated texts, keeping first occurrences (see ``Deduplicator``)

    Parameters
    ----------
    docs : Iterable[GeoDocument]
        Documents in stream order

    Returns
    -------
    Iterator[GeoDocument]
        The kept documents, unchanged and in input order
    """

    return Deduplicator()(docs)


# ---------------------------------------------------------------------------
# Dump processing
# ---------------------------------------------------------------------------

def _language_ok(language: Optional[str], target: Optional[str]) -> bool:

    return target is None or language is None or language == target


def _require(record: dict, index: int, fields: Sequence[str]) -> bool:

    for field in fields:
        if record.get(field) is None:
            warnings.warn(RecordWarning(RecordWarning.skipped.format(
                index=index, reason=RecordError.missing_field.format(index=index, field=field))))
            return False

    return True


def ingest_web(records: Iterable[tuple[int, dict]],
               tld_table: Mapping[str, str],
               exclusions: set[str],
               boilerplate: BoilerplateFilter = None,
               min_words: int = 40,
               lid: LanguagePredicate = None,
               language: Optional[str] = 'en',
               stats: Counter = None) -> Iterator[GeoDocument]:
    """Geo-reference web-page records by ccTLD

    Parameters
    ----------
    records : Iterable[tuple[int, dict]]
        ``(index, {source_id, domain_suffix, month, html})`` pairs as yielded
        by ``io.read_jsonl``
    tld_table : Mapping[str, str]
        Suffix to country code
    exclusions : set[str]
        Suffixes that carry no geographic information
    boilerplate : BoilerplateFilter, optional
        Paragraph filter. Defaults to None.
    min_words : int, optional
        Minimum paragraph-text length in words. Defaults to 40.
    lid : LanguagePredicate, optional
        Language predicate; when None the language stays unknown
    language : str, optional
        Keep only documents identified as this language. Documents of unknown
        language are kept. Defaults to "en".
    stats : Counter, optional
        Receives drop counts by reason

    Yields
    ------
    GeoDocument
        Documents that pass every filter
    """

    stats = stats if stats is not None else Counter()

    for index, record in records:
        stats['read'] += 1
        if not _require(record, index, ('source_id', 'domain_suffix', 'month', 'html')):
            stats['malformed'] += 1
            continue

        suffix = str(record['domain_suffix']).strip().lower().lstrip('.')
        country = tld_georeference(suffix, tld_table, exclusions)
        if country is None:
            stats['no_country'] += 1
            continue

        text = extract_paragraph_text(record['html'], boilerplate)
        if count_words(text) < min_words:
            stats['too_short'] += 1
            continue

        doc_language = lid(text) if lid is not None else None
        if not _language_ok(doc_language, language):
            stats['language'] += 1
            continue

        try:
            raw = RawDocument(source_id=str(record['source_id']), register=Register.WEB,
                              text=text, month=str(record['month']),
                              domain_suffix=suffix, language=doc_language)
        except RecordError as e:
            warnings.warn(RecordWarning(RecordWarning.skipped.format(index=index, reason=e)))
            stats['malformed'] += 1
            continue

        stats['kept'] += 1
        yield GeoDocument.from_raw(raw, country)


def ingest_social(records: Iterable[tuple[int, dict]],
                  cities: CityIndex,
                  radius_km: float = 50.0,
                  min_chars: int = 50,
                  lid: LanguagePredicate = None,
                  language: Optional[str] = 'en',
                  stats: Counter = None) -> Iterator[GeoDocument]:
    """Geo-reference social posts by the nearest gazetteer city

    Parameters
    ----------
    records : Iterable[tuple[int, dict]]
        ``(index, {post_id, lat, lon, month, text, language})`` pairs
    cities : CityIndex
        Gazetteer index
    radius_km : float, optional
        Radius around each city. Defaults to 50.
    min_chars : int, optional
        Minimum normalized text length in characters; checked before the
        language is consulted. Defaults to 50.
    lid : LanguagePredicate, optional
        Used when a record has no language field
    language : str, optional
        Language to keep. Defaults to "en".
    stats : Counter, optional
        Receives drop counts by reason

    Yields
    ------
    GeoDocument
        Posts that pass every filter
    """

    stats = stats if stats is not None else Counter()

    for index, record in records:
        stats['read'] += 1
        if not _require(record, index, ('post_id', 'lat', 'lon', 'month', 'text')):
            stats['malformed'] += 1
            continue

        text = normalize_whitespace(str(record['text']))
        if len(text) < min_chars:
            stats['too_short'] += 1
            continue

        try:
            point = (float(record['lat']), float(record['lon']))
            raw = RawDocument(source_id=str(record['post_id']), register=Register.SOCIAL,
                              text=text, month=str(record['month']),
                              coordinates=point, language=record.get('language'))
        except (RecordError, TypeError, ValueError) as e:
            warnings.warn(RecordWarning(RecordWarning.skipped.format(index=index, reason=e)))
            stats['malformed'] += 1
            continue

        country = city_georeference(point, cities, radius_km)
        if country is None:
            stats['no_country'] += 1
            continue

        doc_language = raw.language
        if doc_language is None and lid is not None:
            doc_language = lid(text)
        if not _language_ok(doc_language, language):
            stats['language'] += 1
            continue

        stats['kept'] += 1
        yield GeoDocument.from_raw(raw, country, language=doc_language)
