"""Independent reference implementations used as test oracles.

Everything in this module is written separately from the package under test,
in a deliberately different style, so that agreement between the two is
meaningful:

- ``RefWordNet`` / ``RefSynset``: a self-contained reader for the WordNet 3.0
  database files that reproduces the behaviour of the NLTK WordNet corpus
  reader (lookup order, morphology, depth conventions, Wu-Palmer similarity
  including its simulated-root and tie-breaking quirks).
- ``ref_pair_score``: a line-by-line port of the classic NLTK-based pairwise
  query scorer (noun/verb bucket loops, per-pair normalization, edit-distance
  bonus, URL and cardinal-number guards) operating on pre-tagged tokens.
- ``ref_edit_distance``: full-matrix Levenshtein dynamic programming.
- ``brute_betweenness``: exact-rational betweenness centrality by explicit
  shortest-path enumeration (usable on small graphs only).
- ``best_partition_modularity``: exhaustive search over all partitions of a
  small node set for the maximum-modularity clustering.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from fractions import Fraction
from pathlib import Path

POS_LIST = ["n", "v", "a", "r"]

_LEMMA_MARKER_RE = re.compile(r"(.*?)(\(.*\))?$")


def _canon_pos(pos):
    return "a" if pos == "s" else pos


class RefSynset:
    """Synset with NLTK-compatible identity, depth, and Wu-Palmer semantics."""

    def __init__(self, db, pos, offset, lemma_names, hypernym_keys, instance_keys):
        self._db = db
        self.pos = pos
        self.offset = offset
        self.lemma_names = lemma_names
        self._hypernym_keys = hypernym_keys
        self._instance_keys = instance_keys
        self.name = None  # assigned once the index is available
        self._min_depth = None
        self._max_depth = None
        self._all_hypernyms = None

    # Identity is by canonical name, mirroring the reference reader (this is
    # what makes a fake "*ROOT*" node hashable/comparable against real ones).
    def __eq__(self, other):
        return self.name == other.name

    def __ne__(self, other):
        return self.name != other.name

    def __hash__(self):
        return hash(self.name)

    def __lt__(self, other):
        return self.name < other.name

    def __repr__(self):
        return f"RefSynset({self.name!r})"

    def hypernyms(self):
        return [self._db.synset_from_pos_and_offset(p, o) for p, o in self._hypernym_keys]

    def instance_hypernyms(self):
        return [self._db.synset_from_pos_and_offset(p, o) for p, o in self._instance_keys]

    def _needs_root(self):
        return self.pos != "n"

    def min_depth(self):
        if self._min_depth is None:
            ups = self.hypernyms() + self.instance_hypernyms()
            self._min_depth = 0 if not ups else 1 + min(s.min_depth() for s in ups)
        return self._min_depth

    def max_depth(self):
        if self._max_depth is None:
            ups = self.hypernyms() + self.instance_hypernyms()
            self._max_depth = 0 if not ups else 1 + max(s.max_depth() for s in ups)
        return self._max_depth

    def _iter_hypernym_lists(self):
        todo = [self]
        seen = set()
        while todo:
            for synset in todo:
                seen.add(synset)
            yield todo
            todo = [
                hypernym
                for synset in todo
                for hypernym in (synset.hypernyms() + synset.instance_hypernyms())
                if hypernym not in seen
            ]

    def common_hypernyms(self, other):
        if not self._all_hypernyms:
            self._all_hypernyms = {
                synset for level in self._iter_hypernym_lists() for synset in level
            }
        if not other._all_hypernyms:
            other._all_hypernyms = {
                synset for level in other._iter_hypernym_lists() for synset in level
            }
        return list(self._all_hypernyms.intersection(other._all_hypernyms))

    def lowest_common_hypernyms(self, other, simulate_root=False, use_min_depth=False):
        synsets = self.common_hypernyms(other)
        if simulate_root:
            synsets.append(_FakeRoot())
        try:
            if use_min_depth:
                max_depth = max(s.min_depth() for s in synsets)
                unsorted_lch = [s for s in synsets if s.min_depth() == max_depth]
            else:
                max_depth = max(s.max_depth() for s in synsets)
                unsorted_lch = [s for s in synsets if s.max_depth() == max_depth]
            return sorted(unsorted_lch)
        except ValueError:
            return []

    def _shortest_hypernym_paths(self, simulate_root):
        if self.name == "*ROOT*":
            return {self: 0}
        queue = deque([(self, 0)])
        path = {}
        while queue:
            s, depth = queue.popleft()
            if s in path:
                continue
            path[s] = depth
            depth += 1
            queue.extend((hyp, depth) for hyp in s.hypernyms())
            queue.extend((hyp, depth) for hyp in s.instance_hypernyms())
        if simulate_root:
            fake = _FakeRoot()
            path[fake] = max(path.values()) + 1
        return path

    def shortest_path_distance(self, other, simulate_root=False):
        if self == other:
            return 0
        dist_dict1 = self._shortest_hypernym_paths(simulate_root)
        dist_dict2 = other._shortest_hypernym_paths(simulate_root)
        inf = float("inf")
        path_distance = inf
        for synset, d1 in dist_dict1.items():
            d2 = dist_dict2.get(synset, inf)
            path_distance = min(path_distance, d1 + d2)
        return None if path_distance == inf else path_distance

    def wup_similarity(self, other, simulate_root=True):
        need_root = self._needs_root() or other._needs_root()
        subsumers = self.lowest_common_hypernyms(
            other, simulate_root=simulate_root and need_root, use_min_depth=True
        )
        if len(subsumers) == 0:
            return None
        subsumer = self if self in subsumers else subsumers[0]
        depth = subsumer.max_depth() + 1
        len1 = self.shortest_path_distance(
            subsumer, simulate_root=simulate_root and need_root
        )
        len2 = other.shortest_path_distance(
            subsumer, simulate_root=simulate_root and need_root
        )
        if len1 is None or len2 is None:
            return None
        len1 += depth
        len2 += depth
        return 2.0 * depth / (len1 + len2)


class _FakeRoot(RefSynset):
    """Stand-in top node appended when a taxonomy has no single real root."""

    def __init__(self):
        super().__init__(None, None, None, [], [], [])
        self.name = "*ROOT*"

    def hypernyms(self):
        return []

    def instance_hypernyms(self):
        return []


MORPHOLOGICAL_SUBSTITUTIONS = {
    "n": [
        ("s", ""),
        ("ses", "s"),
        ("ves", "f"),
        ("xes", "x"),
        ("zes", "z"),
        ("ches", "ch"),
        ("shes", "sh"),
        ("men", "man"),
        ("ies", "y"),
    ],
    "v": [
        ("s", ""),
        ("ies", "y"),
        ("es", "e"),
        ("es", ""),
        ("ed", "e"),
        ("ed", ""),
        ("ing", "e"),
        ("ing", ""),
    ],
    "a": [("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
    "r": [],
}
MORPHOLOGICAL_SUBSTITUTIONS["s"] = MORPHOLOGICAL_SUBSTITUTIONS["a"]

_FILE_POS = {"noun": "n", "verb": "v", "adj": "a", "adv": "r"}


class RefWordNet:
    """Self-contained WordNet 3.0 reader with NLTK-compatible behaviour."""

    def __init__(self, root):
        root = Path(root)
        self._index = {}  # lemma -> pos -> [offset, ...]
        self._exceptions = {}  # pos -> form -> [base, ...]
        self._synsets = {}  # (canon pos, offset) -> RefSynset
        for suffix, pos in _FILE_POS.items():
            self._load_index(root / f"index.{suffix}", pos)
            self._load_exceptions(root / f"{suffix}.exc", pos)
        self._exceptions["s"] = self._exceptions["a"]
        for suffix in _FILE_POS:
            self._load_data(root / f"data.{suffix}")
        self._assign_names()

    # -- loading ---------------------------------------------------------

    def _load_index(self, path, pos):
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                if line.startswith(" "):
                    continue
                tokens = iter(line.split())
                lemma = next(tokens)
                file_pos = next(tokens)
                n_synsets = int(next(tokens))
                assert n_synsets > 0
                n_pointers = int(next(tokens))
                for _ in range(n_pointers):
                    next(tokens)
                n_senses = int(next(tokens))
                assert n_senses == n_synsets
                next(tokens)  # tag-sense count
                offsets = [int(next(tokens)) for _ in range(n_synsets)]
                per_pos = self._index.setdefault(lemma, {})
                per_pos[file_pos] = offsets
                if file_pos == "a":
                    per_pos["s"] = offsets

    def _load_exceptions(self, path, pos):
        table = {}
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                parts = line.split()
                if parts:
                    table[parts[0]] = parts[1:]
        self._exceptions[pos] = table

    def _load_data(self, path):
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                if line.startswith(" "):
                    continue
                columns_str, gloss = line.strip().split("|")
                tokens = iter(columns_str.split())
                offset = int(next(tokens))
                next(tokens)  # lexicographer file number
                ss_type = next(tokens)
                lemma_names = []
                for _ in range(int(next(tokens), 16)):
                    raw_name = next(tokens)
                    next(tokens)  # lex id
                    name, _marker = _LEMMA_MARKER_RE.match(raw_name).groups()
                    lemma_names.append(name)
                hypernym_keys = []
                instance_keys = []
                for _ in range(int(next(tokens))):
                    symbol = next(tokens)
                    target_offset = int(next(tokens))
                    target_pos = next(tokens)
                    next(tokens)  # source/target lemma numbers
                    if symbol == "@":
                        hypernym_keys.append((target_pos, target_offset))
                    elif symbol == "@i":
                        instance_keys.append((target_pos, target_offset))
                synset = RefSynset(
                    self, ss_type, offset, lemma_names, hypernym_keys, instance_keys
                )
                self._synsets[(_canon_pos(ss_type), offset)] = synset

    def _assign_names(self):
        for synset in self._synsets.values():
            head = synset.lemma_names[0].lower()
            offsets = self._index[head][synset.pos]
            sense_index = offsets.index(synset.offset)
            synset.name = f"{head}.{synset.pos}.{sense_index + 1:02d}"

    # -- lookups ---------------------------------------------------------

    def synset_from_pos_and_offset(self, pos, offset):
        return self._synsets[(_canon_pos(pos), offset)]

    def morphy(self, form, pos, check_exceptions=True):
        exceptions = self._exceptions[pos]
        substitutions = MORPHOLOGICAL_SUBSTITUTIONS[pos]

        def apply_rules(forms):
            return [
                form[: -len(old)] + new
                for form in forms
                for old, new in substitutions
                if form.endswith(old)
            ]

        def filter_forms(forms):
            result = []
            seen = set()
            for candidate in forms:
                if candidate in self._index and pos in self._index[candidate]:
                    if candidate not in seen:
                        result.append(candidate)
                        seen.add(candidate)
            return result

        if check_exceptions and form in exceptions:
            return filter_forms([form] + exceptions[form])

        forms = apply_rules([form])
        results = filter_forms([form] + forms)
        if results:
            return results
        while forms:
            forms = apply_rules(forms)
            results = filter_forms(forms)
            if results:
                return results
        return []

    def synsets(self, lemma):
        lemma = lemma.lower()
        found = []
        for pos in POS_LIST:
            for form in self.morphy(lemma, pos):
                for offset in self._index[form].get(pos, []):
                    found.append(self.synset_from_pos_and_offset(pos, offset))
        return found

    def all_synsets(self, pos=None):
        out = [
            s
            for s in self._synsets.values()
            if pos is None or _canon_pos(s.pos) == pos
        ]
        out.sort(key=lambda s: (s.pos, s.offset))
        return out


# ---------------------------------------------------------------------------
# Edit distance (full-matrix dynamic programming)
# ---------------------------------------------------------------------------


def ref_edit_distance(a, b):
    rows = len(a) + 1
    cols = len(b) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        table[i][0] = i
    for j in range(cols):
        table[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + cost,
            )
    return table[rows - 1][cols - 1]


# ---------------------------------------------------------------------------
# Pairwise query scorer (line-by-line port; tags are supplied by the caller)
# ---------------------------------------------------------------------------


def ref_is_valid_url(url):
    """Literal port of the classic scorer's URL test, including its defect:
    the regex contains an empty alternation branch, so any single-token
    string matches.  Multi-token strings always return a falsy value."""
    u = url.split(" ")
    if len(u) > 1:
        return None
    regex = re.compile(
        r"((?:[A-Z0-9](?:[A-Z0-9-]{0,61}[A-Z0-9])?\.)+[A-Z]{2,6}\.|)"
        r"(?::\d+)?"
        r"(?:/?|[/?]\S+)$",
        re.IGNORECASE,
    )
    return url is not None and regex.search(url)


def ref_pair_score(wn, str1, str2, pt1, pt2):
    """Port of the reference pairwise scorer.

    ``pt1``/``pt2`` are pre-tagged token lists ``[(word, tag), ...]`` standing
    in for a statistical part-of-speech tagger; everything downstream of tagging
    is reproduced statement by statement (including the bare ``except`` that
    skips a word pair's bonus when a synset lookup fails, and the truthiness
    test on the similarity value).
    """
    isUrl1 = ref_is_valid_url(str1)
    isUrl2 = ref_is_valid_url(str2)
    if isUrl1 or isUrl2:
        return 0

    nounWeight = 0
    verbWeight = 0

    cd1 = [word for word, pos in pt1 if pos == "CD"]
    cd2 = [word for word, pos in pt2 if pos == "CD"]
    if cd1 or cd2:
        return 0

    propernouns1 = [
        word for word, pos in pt1 if pos == "NN" or pos == "NNP" or pos == "PRP"
    ]
    propernouns2 = [
        word for word, pos in pt2 if pos == "NN" or pos == "NNP" or pos == "PRP"
    ]

    if propernouns1 and propernouns2:
        for pn1 in propernouns1:
            syns1 = wn.synsets(pn1)
            for pn2 in propernouns2:
                d = ref_edit_distance(pn1, pn2)
                syns2 = wn.synsets(pn2)
                try:
                    s = syns1[0].wup_similarity(syns2[0])
                    if s:
                        s = s / (len(propernouns1) + len(propernouns2))
                        nounWeight += s
                    if d <= 2:
                        nounWeight += 0.2
                except IndexError:
                    continue

    verbs1 = [word for word, pos in pt1 if pos == "VBN" or pos == "VB"]
    verbs2 = [word for word, pos in pt2 if pos == "VBN" or pos == "VB"]
    if verbs1 and verbs2:
        for vb1 in verbs1:
            syns1 = wn.synsets(vb1)
            for vb2 in verbs2:
                d = ref_edit_distance(vb1, vb2)
                syns2 = wn.synsets(vb2)
                try:
                    s = syns1[0].wup_similarity(syns2[0])
                    if s:
                        s = s / (len(verbs1) + len(verbs2))
                        verbWeight += s
                    if d <= 2:
                        verbWeight += 0.2
                except IndexError:
                    continue

    outputWeight = nounWeight + verbWeight
    return outputWeight


# ---------------------------------------------------------------------------
# Graph oracles (exact arithmetic; small graphs only)
# ---------------------------------------------------------------------------


def brute_betweenness(nodes, edges):
    """Betweenness by explicit enumeration of all shortest paths, in exact
    rational arithmetic.  ``edges`` is an iterable of (u, v) pairs; the graph
    is undirected and unweighted.  Endpoints are not credited."""
    adjacency = {v: set() for v in nodes}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)

    def all_shortest_paths(source, target):
        # Breadth-first layering, then depth-first unwinding of predecessors.
        dist = {source: 0}
        preds = {source: []}
        frontier = [source]
        while frontier and target not in dist:
            nxt = []
            for node in frontier:
                for nb in adjacency[node]:
                    if nb not in dist:
                        dist[nb] = dist[node] + 1
                        preds[nb] = [node]
                        nxt.append(nb)
                    elif dist[nb] == dist[node] + 1:
                        preds[nb].append(node)
            frontier = nxt
        if target not in dist:
            return []
        paths = []

        def unwind(node, tail):
            if node == source:
                paths.append([source] + tail)
                return
            for p in preds[node]:
                unwind(p, [node] + tail)

        unwind(target, [])
        return paths

    score = {v: Fraction(0) for v in nodes}
    ordered = sorted(nodes)
    for i, s in enumerate(ordered):
        for t in ordered[i + 1 :]:
            paths = all_shortest_paths(s, t)
            if not paths:
                continue
            total = len(paths)
            for path in paths:
                for inner in path[1:-1]:
                    score[inner] += Fraction(1, total)
    return score


def partition_modularity(edges_with_weights, assignment):
    """Q = sum over clusters of (w_in/W - (w_tot/(2W))^2), exact fractions."""
    total = sum(Fraction(w) for _, _, w in edges_with_weights)
    if total == 0:
        return Fraction(0)
    clusters = set(assignment.values())
    q = Fraction(0)
    for c in clusters:
        members = {v for v, cl in assignment.items() if cl == c}
        w_in = sum(
            Fraction(w) for u, v, w in edges_with_weights if u in members and v in members
        )
        w_tot = sum(
            Fraction(w)
            for u, v, w in edges_with_weights
            if u in members or v in members
        )
        # Edges inside the cluster contribute their weight to each endpoint.
        w_tot += w_in
        q += w_in / total - (w_tot / (2 * total)) ** 2
    return q


def best_partition_modularity(nodes, edges_with_weights):
    """Exhaustive maximum-modularity partition (Bell-number search)."""
    nodes = sorted(nodes)
    best_q = None
    best = None
    for assignment in _iter_partitions(nodes):
        q = partition_modularity(edges_with_weights, assignment)
        if best_q is None or q > best_q:
            best_q = q
            best = assignment
    return best, best_q


def _iter_partitions(nodes):
    if not nodes:
        yield {}
        return
    first, rest = nodes[0], nodes[1:]
    for sub in _iter_partitions(rest):
        used = set(sub.values())
        for cluster in sorted(used):
            out = dict(sub)
            out[first] = cluster
            yield out
        out = dict(sub)
        out[first] = max(used, default=-1) + 1
        yield out


# ---------------------------------------------------------------------------
# Deterministic lexicon tagger used to drive the ported scorer in tests
# ---------------------------------------------------------------------------

PRONOUNS = {
    "i", "you", "he", "she", "it", "we", "they",
    "me", "him", "her", "us", "them",
    "my", "your", "his", "its", "our", "their",
}

_CARDINAL_RE = re.compile(r"\d+(?:[.,/:-]\d+)*$")


def lexicon_tagger(tokens, verb_lexicon):
    """Assign flat tags: CD for digit groups, PRP for closed-class pronouns,
    VB for words in the supplied verb lexicon, NN otherwise."""
    tagged = []
    for token in tokens:
        if _CARDINAL_RE.fullmatch(token):
            tagged.append((token, "CD"))
        elif token in PRONOUNS:
            tagged.append((token, "PRP"))
        elif token in verb_lexicon:
            tagged.append((token, "VB"))
        else:
            tagged.append((token, "NN"))
    return tagged
