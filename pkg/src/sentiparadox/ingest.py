"""Dataset loading, validation and the minimum-post user filter.

Input files are whitespace/TAB separated text, one record per line:

* ``friends.tsv``      ``user_a  user_b``            (undirected)
* ``follows.tsv``      ``follower  followee``        (directed)
* ``posts.tsv``        ``user  YYYY-MM-DD  mood``
* ``communities.tsv``  ``user  community``
* ``moods.tsv``        ``mood  pos|neg|neu``

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import datetime as _dt
import enum
import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, NamedTuple

import numpy as np

logger = logging.getLogger(__name__)

EPOCH = _dt.date(1970, 1, 1)

FILE_NAMES = {
    "friends": "friends.tsv",
    "follows": "follows.tsv",
    "posts": "posts.tsv",
    "communities": "communities.tsv",
    "moods": "moods.tsv",
}


class DatasetFormatError(ValueError):
    """A malformed input line; message names the file and line number."""

    def __init__(self, path, lineno, msg):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = str(path)
        self.lineno = lineno


class Polarity(enum.Enum):
    POSITIVE = "pos"
    NEGATIVE = "neg"
    NEUTRAL = "neu"
    UNDEFINED = "undefined"

    @property
    def label(self):
        return self.name.capitalize()


class MoodLexicon(Mapping):
    """Case-insensitive map from mood token to :class:`Polarity`."""

    def __init__(self, entries: Mapping[str, Polarity] | Iterable[tuple[str, Polarity]]):
        items = entries.items() if isinstance(entries, Mapping) else entries
        table = {}
        for token, pol in items:
            key = token.strip().lower()
            if not key:
                raise ValueError("empty mood token")
            pol = Polarity(pol) if not isinstance(pol, Polarity) else pol
            if pol is Polarity.UNDEFINED:
                raise ValueError(f"mood {token!r} cannot map to Undefined")
            if key in table and table[key] is not pol:
                raise ValueError(f"mood {token!r} mapped to two polarities")
            table[key] = pol
        self._table = table

    def __getitem__(self, token):
        return self._table[token.lower()]

    def get(self, token, default=None):
        return self._table.get(token.lower(), default)

    def __contains__(self, token):
        return isinstance(token, str) and token.lower() in self._table

    def __iter__(self):
        return iter(self._table)

    def __len__(self):
        return len(self._table)

    def __repr__(self):
        return f"MoodLexicon({len(self)} moods)"


def load_lexicon(path=None) -> MoodLexicon:
    """Read a ``mood<TAB>polarity`` file; the bundled 132-mood table by default."""
    if path is None:
        text = resources.files("sentiparadox").joinpath("data/moods.tsv").read_text("utf-8")
        src = "<bundled moods.tsv>"
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        src = path
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 2:
            raise DatasetFormatError(src, lineno, "expected 'mood<TAB>polarity'")
        try:
            entries.append((parts[0], Polarity(parts[1].strip().lower())))
        except ValueError:
            raise DatasetFormatError(src, lineno, f"unknown polarity {parts[1]!r}") from None
    return MoodLexicon(entries)


class RawPost(NamedTuple):
    user_id: int
    timestamp: _dt.date
    mood: str


@dataclass(frozen=True, eq=False)
class PostTable:
    """Columnar post store.

    ``day`` is days since 1970-01-01; ``mood`` indexes into ``vocab``.
    """

    user: np.ndarray
    day: np.ndarray
    mood: np.ndarray
    vocab: tuple[str, ...]

    def __len__(self):
        return len(self.user)

    def __iter__(self):
        for u, d, m in zip(self.user.tolist(), self.day.tolist(), self.mood.tolist()):
            yield RawPost(u, EPOCH + _dt.timedelta(days=d), self.vocab[m])

    @classmethod
    def from_records(cls, posts: Iterable[RawPost | tuple]) -> "PostTable":
        vocab: dict[str, int] = {}
        users, days, moods = [], [], []
        for uid, ts, mood in posts:
            if isinstance(ts, str):
                ts = _dt.date.fromisoformat(ts)
            mood = mood.strip().lower()
            if not mood:
                raise ValueError("empty mood")
            users.append(int(uid))
            days.append((ts - EPOCH).days)
            moods.append(vocab.setdefault(mood, len(vocab)))
        return cls(
            np.asarray(users, dtype=np.int64),
            np.asarray(days, dtype=np.int64),
            np.asarray(moods, dtype=np.int64),
            tuple(vocab),
        )

    def select(self, mask: np.ndarray) -> "PostTable":
        return PostTable(self.user[mask], self.day[mask], self.mood[mask], self.vocab)

    def polarity_codes(self, lexicon: MoodLexicon) -> np.ndarray:
        """Per-post code: +1 positive, -1 negative, 0 neutral, 2 unknown mood."""
        code_of = {Polarity.POSITIVE: 1, Polarity.NEGATIVE: -1, Polarity.NEUTRAL: 0}
        table = np.array([code_of.get(lexicon.get(m), 2) for m in self.vocab] or [2], dtype=np.int8)
        return table[self.mood]

    def equals(self, other: "PostTable") -> bool:
        if len(self) != len(other):
            return False
        mine = np.asarray(self.vocab, dtype=object)[self.mood] if len(self) else np.array([])
        theirs = np.asarray(other.vocab, dtype=object)[other.mood] if len(other) else np.array([])
        return (
            np.array_equal(self.user, other.user)
            and np.array_equal(self.day, other.day)
            and bool(np.all(mine == theirs))
        )


def _pairs(arr) -> np.ndarray:
    return np.asarray(arr, dtype=np.int64).reshape(-1, 2)


@dataclass(frozen=True, eq=False)
class DatasetBundle:
    """Validated raw corpus.

    ``users`` is the sorted array of user ids; ``friend_edges`` rows are
    canonical ``(min, max)`` pairs in lexicographic order; ``follow_edges``
    rows are ``(follower, followee)``; ``memberships`` rows are
    ``(user, community)``.
    """

    users: np.ndarray
    posts: PostTable
    friend_edges: np.ndarray
    follow_edges: np.ndarray
    memberships: np.ndarray
    unknown_moods: Counter = field(default_factory=Counter)
    self_loops: int = 0

    def __post_init__(self):
        for name in ("friend_edges", "follow_edges", "memberships"):
            object.__setattr__(self, name, _pairs(getattr(self, name)))
        object.__setattr__(self, "users", np.asarray(self.users, dtype=np.int64))

    def __eq__(self, other):
        if not isinstance(other, DatasetBundle):
            return NotImplemented
        return (
            np.array_equal(self.users, other.users)
            and self.posts.equals(other.posts)
            and np.array_equal(self.friend_edges, other.friend_edges)
            and np.array_equal(self.follow_edges, other.follow_edges)
            and np.array_equal(self.memberships, other.memberships)
        )

    __hash__ = None

    def validate(self):
        users = self.users
        if np.any(np.diff(users) <= 0):
            raise ValueError("user ids must be sorted and unique")
        for name in ("friend_edges", "follow_edges", "memberships"):
            arr = getattr(self, name)
            cols = arr[:, 0] if name == "memberships" else arr.ravel()
            if cols.size and not np.all(np.isin(cols, users)):
                raise ValueError(f"{name} reference unknown users")
        for name in ("friend_edges", "follow_edges"):
            arr = getattr(self, name)
            if np.any(arr[:, 0] == arr[:, 1]):
                raise ValueError(f"{name} contain self-loops")
        fe = self.friend_edges
        if np.any(fe[:, 0] > fe[:, 1]):
            raise ValueError("friend edges must be canonical (min, max)")
        if len(np.unique(fe, axis=0)) != len(fe):
            raise ValueError("duplicate friend edges")
        if self.posts.user.size and not np.all(np.isin(self.posts.user, users)):
            raise ValueError("posts reference unknown users")
        return self


def _read_rows(path, ncols, split_tab_only=False):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "\t" in stripped:
                parts = [p.strip() for p in stripped.split("\t")]
            elif split_tab_only:
                parts = stripped.split(None, ncols - 1)
            else:
                parts = stripped.split()
            if len(parts) != ncols:
                raise DatasetFormatError(path, lineno, f"expected {ncols} fields, got {len(parts)}")
            yield lineno, parts


def _read_id_pairs(path):
    out = []
    for lineno, (a, b) in _read_rows(path, 2):
        try:
            out.append((int(a), int(b)))
        except ValueError:
            raise DatasetFormatError(path, lineno, f"non-integer id in {a!r} {b!r}") from None
    return np.asarray(out, dtype=np.int64).reshape(-1, 2)


def _read_posts(path, lexicon, unknown):
    users, days, moods = [], [], []
    vocab: dict[str, int] = {}
    date_cache: dict[str, int] = {}
    for lineno, (uid, ts, mood) in _read_rows(path, 3, split_tab_only=True):
        try:
            users.append(int(uid))
        except ValueError:
            raise DatasetFormatError(path, lineno, f"non-integer user id {uid!r}") from None
        d = date_cache.get(ts)
        if d is None:
            try:
                d = (_dt.date.fromisoformat(ts) - EPOCH).days
            except ValueError:
                raise DatasetFormatError(path, lineno, f"bad date {ts!r}") from None
            date_cache[ts] = d
        days.append(d)
        mood = mood.lower()
        if not mood:
            raise DatasetFormatError(path, lineno, "empty mood")
        if mood not in lexicon:
            unknown[mood] += 1
        moods.append(vocab.setdefault(mood, len(vocab)))
    return PostTable(
        np.asarray(users, dtype=np.int64),
        np.asarray(days, dtype=np.int64),
        np.asarray(moods, dtype=np.int64),
        tuple(vocab),
    )


def _empty_posts():
    z = np.zeros(0, dtype=np.int64)
    return PostTable(z, z.copy(), z.copy(), ())


def resolve_paths(data_dir) -> dict[str, str]:
    """Map each known input kind to its file inside ``data_dir`` when present."""
    out = {}
    for kind, name in FILE_NAMES.items():
        p = os.path.join(data_dir, name)
        if os.path.exists(p):
            out[kind] = p
    return out


def assemble_bundle(posts, friend_pairs, follow_pairs, memberships, unknown_moods=None):
    """Canonicalize raw arrays into a validated :class:`DatasetBundle`."""
    friend_pairs = _pairs(friend_pairs)
    follow_pairs = _pairs(follow_pairs)
    memberships = _pairs(memberships)

    loops = int(np.sum(friend_pairs[:, 0] == friend_pairs[:, 1]))
    loops += int(np.sum(follow_pairs[:, 0] == follow_pairs[:, 1]))
    friend_pairs = friend_pairs[friend_pairs[:, 0] != friend_pairs[:, 1]]
    follow_pairs = follow_pairs[follow_pairs[:, 0] != follow_pairs[:, 1]]
    if loops:
        logger.warning("dropped %d self-loop edge(s)", loops)

    friend = np.unique(np.sort(friend_pairs, axis=1), axis=0).reshape(-1, 2)
    follow = np.unique(follow_pairs, axis=0).reshape(-1, 2)
    memberships = np.unique(memberships, axis=0).reshape(-1, 2)

    users = np.unique(np.concatenate([posts.user, friend.ravel(), follow.ravel(), memberships[:, 0]]))
    bundle = DatasetBundle(
        users=users,
        posts=posts,
        friend_edges=friend,
        follow_edges=follow,
        memberships=memberships,
        unknown_moods=Counter(unknown_moods or {}),
        self_loops=loops,
    )
    return bundle.validate()


def load_dataset(paths: Mapping[str, str] | str, lexicon: MoodLexicon | None = None) -> DatasetBundle:
    """Parse the dataset files into a validated bundle.

    ``paths`` is either a directory holding the standard file names or a
    mapping with keys among ``friends``, ``follows``, ``posts``,
    ``communities``.  Missing kinds are treated as empty.  Moods absent
    from ``lexicon`` are tallied in ``bundle.unknown_moods``; their posts
    are kept (they count toward post volume but not toward SWB).
    """
    if isinstance(paths, (str, os.PathLike)):
        paths = resolve_paths(paths)
    if lexicon is None:
        lexicon = load_lexicon(paths.get("moods"))
    unknown: Counter = Counter()
    posts = _read_posts(paths["posts"], lexicon, unknown) if "posts" in paths else _empty_posts()
    empty = np.zeros((0, 2), dtype=np.int64)
    friend = _read_id_pairs(paths["friends"]) if "friends" in paths else empty
    follow = _read_id_pairs(paths["follows"]) if "follows" in paths else empty
    member = _read_id_pairs(paths["communities"]) if "communities" in paths else empty
    if unknown:
        logger.info("%d post(s) with %d unknown mood token(s)", sum(unknown.values()), len(unknown))
    return assemble_bundle(posts, friend, follow, member, unknown)


def post_counts(bundle: DatasetBundle) -> np.ndarray:
    """Number of posts per user, aligned with ``bundle.users``."""
    idx = np.searchsorted(bundle.users, bundle.posts.user)
    return np.bincount(idx, minlength=len(bundle.users))


def filter_min_posts(bundle: DatasetBundle, min_posts: int = 10) -> DatasetBundle:
    """Keep only users with at least ``min_posts`` posts (all moods count)."""
    if min_posts < 1:
        raise ValueError("min_posts must be >= 1")
    keep = bundle.users[post_counts(bundle) >= min_posts]
    if len(keep) == len(bundle.users):
        return bundle

    def both(arr):
        return arr[np.isin(arr[:, 0], keep) & np.isin(arr[:, 1], keep)]

    posts = bundle.posts.select(np.isin(bundle.posts.user, keep))
    members = bundle.memberships[np.isin(bundle.memberships[:, 0], keep)]
    return DatasetBundle(
        users=keep,
        posts=posts,
        friend_edges=both(bundle.friend_edges),
        follow_edges=both(bundle.follow_edges),
        memberships=members,
        unknown_moods=bundle.unknown_moods,
        self_loops=bundle.self_loops,
    )


def write_dataset(bundle: DatasetBundle, out_dir, lexicon: MoodLexicon | None = None):
    """Serialize ``bundle`` in the input formats; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = {}

    def dump(kind, rows):
        path = os.path.join(out_dir, FILE_NAMES[kind])
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.writelines(rows)
        os.replace(tmp, path)
        written[kind] = path

    dump("friends", (f"{a}\t{b}\n" for a, b in bundle.friend_edges.tolist()))
    dump("follows", (f"{a}\t{b}\n" for a, b in bundle.follow_edges.tolist()))
    dump("communities", (f"{a}\t{b}\n" for a, b in bundle.memberships.tolist()))
    dump("posts", (f"{p.user_id}\t{p.timestamp.isoformat()}\t{p.mood}\n" for p in bundle.posts))
    if lexicon is not None:
        dump("moods", (f"{m}\t{lexicon[m].value}\n" for m in lexicon))
    return written
