"""WordNet 3.0 database files: loading, lemma lookup, and hypernym queries.

Reads the standard ``index.{noun,verb,adj,adv}``, ``data.{...}`` and
``{...}.exc`` files exactly as distributed: space-delimited fields, decimal
synset offsets, hexadecimal word counts, comment lines beginning with
spaces.  Only the hypernym pointer symbols ``@`` and ``@i`` are kept; every
other relation is parsed and discarded.  The loaded database is immutable
and safe to share across worker processes.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Union

from .errors import LoadError, ParseError


class Pos(enum.IntEnum):
    """Part of speech, ordered noun < verb < adjective < adverb."""

    NOUN = 0
    VERB = 1
    ADJECTIVE = 2
    ADVERB = 3


# File name suffixes as used by the distributed database.
POS_SUFFIX = {
    Pos.NOUN: "noun",
    Pos.VERB: "verb",
    Pos.ADJECTIVE: "adj",
    Pos.ADVERB: "adv",
}

# Synset-type characters in data files.  Adjective satellites ("s") live in
# data.adj and resolve to the adjective part of speech.
_SS_TYPE = {
    "n": Pos.NOUN,
    "v": Pos.VERB,
    "a": Pos.ADJECTIVE,
    "s": Pos.ADJECTIVE,
    "r": Pos.ADVERB,
}

# Trailing syntactic markers on adjective lemmas, e.g. "galore(ip)".
_LEMMA_MARKER = re.compile(r"(\(.*\))$")

# Morphological detachment rules, applied in one round per lookup.
_DETACHMENT_RULES = {
    Pos.NOUN: (
        ("s", ""),
        ("ses", "s"),
        ("xes", "x"),
        ("zes", "z"),
        ("ches", "ch"),
        ("shes", "sh"),
        ("men", "man"),
        ("ies", "y"),
    ),
    Pos.VERB: (
        ("s", ""),
        ("ies", "y"),
        ("es", "e"),
        ("es", ""),
        ("ed", "e"),
        ("ed", ""),
        ("ing", "e"),
        ("ing", ""),
    ),
    Pos.ADJECTIVE: (),
    Pos.ADVERB: (),
}


class SynsetId(NamedTuple):
    """Identifies a synset by part of speech and data-file byte offset."""

    pos: Pos
    offset: int


class _VirtualRoot:
    """Marker subsumer for verb synsets living in disjoint hypernym trees."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return "<virtual-root>"


VIRTUAL_ROOT = _VirtualRoot()


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    lemmas: tuple[str, ...]
    hypernyms: tuple[SynsetId, ...]  # includes instance hypernyms
    gloss: str


@dataclass
class WordNetDb:
    """In-memory lexical database.  Treat as immutable after load.

    ``index`` maps each lowercase lemma to its synsets in the sense order
    of the index files.  ``max_depth_cache`` is fully populated at load, so
    concurrent readers never write to it.
    """

    synsets: dict[SynsetId, Synset]
    index: dict[Pos, dict[str, tuple[SynsetId, ...]]]
    exceptions: dict[Pos, dict[str, tuple[str, ...]]]
    max_depth_cache: dict[SynsetId, int]
    # Lazy per-synset map of ancestor -> minimum hypernym-edge distance.
    # Entries are only ever inserted with identical values, so concurrent
    # reads from forked or threaded workers stay consistent.
    _ancestry: dict[SynsetId, dict[SynsetId, int]] = field(
        default_factory=dict, repr=False
    )

    def synset(self, sid: SynsetId) -> Synset:
        try:
            return self.synsets[sid]
        except KeyError:
            raise LoadError(f"unknown synset {sid!r}") from None

    def morphy(self, word: str, pos: Pos) -> list[str]:
        """Return candidate base lemmas for ``word`` in ``pos``.

        Order: the word itself when already indexed, then exception-table
        hits, then detachment-rule results present in the index.  Duplicates
        keep their first occurrence.
        """
        index = self.index[pos]
        found: list[str] = []
        seen: set[str] = set()

        def add(lemma: str) -> None:
            if lemma not in seen:
                seen.add(lemma)
                found.append(lemma)

        if word in index:
            add(word)
        for base in self.exceptions[pos].get(word, ()):
            add(base)
        for suffix, repl in _DETACHMENT_RULES[pos]:
            if word.endswith(suffix):
                candidate = word[: len(word) - len(suffix)] + repl
                if candidate in index:
                    add(candidate)
        return found

    def synsets_for(self, word: str) -> list[SynsetId]:
        """All synsets for ``word`` across parts of speech.

        Concatenates, in part-of-speech order noun, verb, adjective,
        adverb, the index lists of every morphy base.  The word is
        lowercased first; unknown words yield an empty list.
        """
        word = word.lower()
        result: list[SynsetId] = []
        for pos in Pos:
            index = self.index[pos]
            for base in self.morphy(word, pos):
                result.extend(index.get(base, ()))
        return result

    def hypernym_depth(self, sid: SynsetId) -> int:
        """Length in edges of the longest hypernym path from ``sid`` to a root."""
        try:
            return self.max_depth_cache[sid]
        except KeyError:
            raise LoadError(f"unknown synset {sid!r}") from None

    def _ancestor_distances(self, sid: SynsetId) -> dict[SynsetId, int]:
        cached = self._ancestry.get(sid)
        if cached is not None:
            return cached
        distances = {sid: 0}
        queue = deque([sid])
        while queue:
            current = queue.popleft()
            next_distance = distances[current] + 1
            for parent in self.synsets[current].hypernyms:
                if parent not in distances:
                    distances[parent] = next_distance
                    queue.append(parent)
        self._ancestry[sid] = distances
        return distances

    def _min_root_distance(self, sid: SynsetId) -> int:
        distances = self._ancestor_distances(sid)
        return min(
            d for anc, d in distances.items() if not self.synsets[anc].hypernyms
        )

    def lowest_common_subsumer(
        self, s1: SynsetId, s2: SynsetId, simulate_root: bool = False
    ) -> Union[SynsetId, _VirtualRoot, None]:
        """Deepest common member of the two hypernym closures.

        Each closure includes the synset itself.  Ties on depth break
        toward the smallest synset id.  With no common member the virtual
        root is returned when ``simulate_root`` is set, otherwise ``None``.
        """
        if s1.pos != s2.pos:
            raise ValueError("lowest_common_subsumer requires same-pos synsets")
        common = self._ancestor_distances(s1).keys() & self._ancestor_distances(
            s2
        ).keys()
        if common:
            depths = self.max_depth_cache
            return min(common, key=lambda c: (-depths[c], c))
        return VIRTUAL_ROOT if simulate_root else None

    def wup_similarity(self, s1: SynsetId, s2: SynsetId) -> Optional[float]:
        """Wu-Palmer similarity in (0, 1], or ``None`` when undefined.

        ``None`` for cross-pos pairs and same-pos pairs with no subsumer.
        With subsumer depth D (virtual root: D = 1) and len1/len2 the
        minimum up-distances to the subsumer plus D, the score is
        2*D / (len1 + len2).  Disjoint trees are bridged by the virtual
        root for verbs only.
        """
        if s1.pos != s2.pos:
            return None
        subsumer = self.lowest_common_subsumer(
            s1, s2, simulate_root=s1.pos is Pos.VERB
        )
        if subsumer is None:
            return None
        if subsumer is VIRTUAL_ROOT:
            depth = 1
            len1 = self._min_root_distance(s1) + 1 + depth
            len2 = self._min_root_distance(s2) + 1 + depth
        else:
            depth = self.max_depth_cache[subsumer] + 1
            len1 = self._ancestor_distances(s1)[subsumer] + depth
            len2 = self._ancestor_distances(s2)[subsumer] + depth
        return 2.0 * depth / (len1 + len2)


def load_wordnet(dir_path: Union[str, Path]) -> WordNetDb:
    """Load a WordNet 3.0 database directory into memory.

    Expects ``index.*``, ``data.*`` and ``*.exc`` for all four parts of
    speech.  Raises :class:`LoadError` for missing files or dangling
    hypernym pointers and :class:`ParseError` (with file and line) for
    malformed lines.
    """
    root = Path(dir_path)
    if not root.is_dir():
        raise LoadError(f"wordnet directory not found: {root}")
    paths: dict[tuple[str, Pos], Path] = {}
    for pos, suffix in POS_SUFFIX.items():
        for name in (f"index.{suffix}", f"data.{suffix}", f"{suffix}.exc"):
            path = root / name
            if not path.is_file():
                raise LoadError(f"{name} not found in {root}")
            kind = name.split(".")[0] if not name.endswith(".exc") else "exc"
            paths[(kind, pos)] = path

    synsets: dict[SynsetId, Synset] = {}
    for pos in Pos:
        _load_data_file(paths[("data", pos)], pos, synsets)

    index: dict[Pos, dict[str, tuple[SynsetId, ...]]] = {}
    for pos in Pos:
        index[pos] = _load_index_file(paths[("index", pos)], pos)

    exceptions: dict[Pos, dict[str, tuple[str, ...]]] = {}
    for pos in Pos:
        exceptions[pos] = _load_exception_file(paths[("exc", pos)])

    _validate_references(synsets, index)
    depth_cache = _compute_max_depths(synsets)
    return WordNetDb(
        synsets=synsets,
        index=index,
        exceptions=exceptions,
        max_depth_cache=depth_cache,
    )


def _is_comment(line: str) -> bool:
    # The distributed files open with license lines indented by spaces.
    return line.startswith(" ") or not line.strip()


def _load_data_file(path: Path, pos: Pos, synsets: dict[SynsetId, Synset]) -> None:
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if _is_comment(line):
                continue
            synset = _parse_data_line(line, pos, str(path), line_no)
            if synset.id in synsets:
                raise ParseError(str(path), line_no, f"duplicate offset {synset.id.offset}")
            synsets[synset.id] = synset


def _parse_data_line(line: str, pos: Pos, path: str, line_no: int) -> Synset:
    head, _, gloss = line.partition(" | ")
    fields = head.split()
    try:
        offset = int(fields[0])
        int(fields[1])  # lexicographer file number, unused
        ss_pos = _SS_TYPE[fields[2]]
        word_count = int(fields[3], 16)
        cursor = 4
        lemmas = []
        for _ in range(word_count):
            lemma = _LEMMA_MARKER.sub("", fields[cursor])
            int(fields[cursor + 1], 16)  # lex id, unused
            lemmas.append(lemma)
            cursor += 2
        pointer_count = int(fields[cursor])
        cursor += 1
        hypernyms = []
        for _ in range(pointer_count):
            symbol = fields[cursor]
            target_offset = int(fields[cursor + 1])
            target_pos = _SS_TYPE[fields[cursor + 2]]
            int(fields[cursor + 3], 16)  # source/target field, unused
            if symbol in ("@", "@i"):
                hypernyms.append(SynsetId(target_pos, target_offset))
            cursor += 4
        if pos is Pos.VERB:
            # Trailing verb-frame section: count then "+ f_num w_num" triples.
            frame_count = int(fields[cursor])
            cursor += 1 + 3 * frame_count
        if cursor != len(fields):
            raise ValueError("trailing fields")
    except ParseError:
        raise
    except (ValueError, IndexError, KeyError) as exc:
        raise ParseError(path, line_no, f"malformed data line ({exc})") from None
    if ss_pos is not pos:
        raise ParseError(path, line_no, f"synset type {fields[2]!r} in {path}")
    if offset < 0:
        raise ParseError(path, line_no, "negative offset")
    return Synset(
        id=SynsetId(pos, offset),
        lemmas=tuple(lemmas),
        hypernyms=tuple(hypernyms),
        gloss=gloss.strip(),
    )


def _load_index_file(path: Path, pos: Pos) -> dict[str, tuple[SynsetId, ...]]:
    entries: dict[str, tuple[SynsetId, ...]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if _is_comment(line):
                continue
            fields = line.split()
            try:
                lemma = fields[0]
                synset_count = int(fields[2])
                pointer_count = int(fields[3])
                cursor = 4 + pointer_count  # skip pointer symbols
                int(fields[cursor])  # sense count
                int(fields[cursor + 1])  # tagsense count
                offsets = [int(f) for f in fields[cursor + 2 :]]
                if len(offsets) != synset_count:
                    raise ValueError(
                        f"expected {synset_count} offsets, found {len(offsets)}"
                    )
            except (ValueError, IndexError) as exc:
                raise ParseError(str(path), line_no, f"malformed index line ({exc})") from None
            if lemma in entries:
                raise ParseError(str(path), line_no, f"duplicate lemma {lemma!r}")
            entries[lemma] = tuple(SynsetId(pos, off) for off in offsets)
    return entries


def _load_exception_file(path: Path) -> dict[str, tuple[str, ...]]:
    entries: dict[str, tuple[str, ...]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if _is_comment(line):
                continue
            fields = line.split()
            if len(fields) < 2:
                raise ParseError(str(path), line_no, "exception line needs a base form")
            entries[fields[0]] = tuple(fields[1:])
    return entries


def _validate_references(
    synsets: dict[SynsetId, Synset],
    index: dict[Pos, dict[str, tuple[SynsetId, ...]]],
) -> None:
    for synset in synsets.values():
        for parent in synset.hypernyms:
            if parent not in synsets:
                raise LoadError(
                    f"dangling hypernym pointer {synset.id!r} -> {parent!r}"
                )
            if parent.pos is not synset.id.pos:
                raise LoadError(
                    f"cross-pos hypernym pointer {synset.id!r} -> {parent!r}"
                )
    for entries in index.values():
        for lemma, sids in entries.items():
            for sid in sids:
                if sid not in synsets:
                    raise LoadError(f"index entry {lemma!r} references {sid!r}")


def _compute_max_depths(synsets: dict[SynsetId, Synset]) -> dict[SynsetId, int]:
    NEW, OPEN, DONE = 0, 1, 2
    state: dict[SynsetId, int] = {}
    depths: dict[SynsetId, int] = {}
    for start in synsets:
        if state.get(start, NEW) != NEW:
            continue
        stack = [start]
        while stack:
            sid = stack[-1]
            current = state.get(sid, NEW)
            if current == DONE:
                stack.pop()
                continue
            parents = synsets[sid].hypernyms
            if current == NEW:
                state[sid] = OPEN
                pending = False
                for parent in parents:
                    parent_state = state.get(parent, NEW)
                    if parent_state == OPEN:
                        raise LoadError(f"hypernym cycle through {parent!r}")
                    if parent_state == NEW:
                        stack.append(parent)
                        pending = True
                if pending:
                    continue
            depths[sid] = (
                1 + max(depths[p] for p in parents) if parents else 0
            )
            state[sid] = DONE
            stack.pop()
    return depths
