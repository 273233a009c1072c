"""Corpus ingestion: tokenization, alphabet filtering, capped datasets, splits.

Input corpora are UTF-8 text files with one sentence per line. Tokens are
maximal runs of non-whitespace with leading/trailing punctuation stripped
(see PUNCTUATION) and optional lowercasing. Sentences containing a token
with any grapheme outside the declared alphabet are dropped whole, which
guarantees downstream models never see an unknown grapheme.

All functions here are pure and deterministic given their seed.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DataError

# Stripped from token edges only; interior punctuation (hyphens,
# apostrophes) is preserved so contractions and compounds survive.
PUNCTUATION = (
    "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~"
    "«»“”‘’„‚"
    "–—…¡¿"
)

# Default end-of-word marker: a control character that the sentence filter
# can never admit as corpus text.
DEFAULT_EOW = ""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of content graphemes plus a reserved end-of-word marker.

    The ordering is total and stable: ``index()`` defines the character
    indices used by generators. The marker is part of the symbol inventory
    but never occurs inside a word form.
    """

    graphemes: tuple[str, ...]
    eow: str = DEFAULT_EOW
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.graphemes:
            raise DataError("alphabet must contain at least one grapheme")
        if len(set(self.graphemes)) != len(self.graphemes):
            raise DataError("alphabet contains duplicate graphemes")
        for g in self.graphemes:
            if len(g) != 1:
                raise DataError(f"alphabet entries must be single characters, got {g!r}")
        if self.eow in self.graphemes:
            raise DataError("end-of-word marker collides with a content grapheme")
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.graphemes)})

    @classmethod
    def from_file(cls, path: str | Path, eow: str = DEFAULT_EOW) -> "Alphabet":
        """Load an alphabet file: UTF-8, one grapheme per line."""
        graphemes = []
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.strip("\n\r")
            if line == "":
                continue
            graphemes.append(line)
        return cls(tuple(graphemes), eow=eow)

    def __contains__(self, ch: str) -> bool:
        return ch in self._index

    def __len__(self) -> int:
        return len(self.graphemes)

    def index(self, ch: str) -> int:
        try:
            return self._index[ch]
        except KeyError:
            raise DataError(f"unknown grapheme {ch!r}") from None

    def is_valid_form(self, form: str) -> bool:
        """True iff ``form`` is a non-empty string of content graphemes."""
        return len(form) >= 1 and all(ch in self._index for ch in form)


@dataclass(frozen=True)
class TokenDataset:
    """Multiset of word forms with integer counts.

    ``counts`` is kept in canonical order (descending count, then
    lexicographic form), which fixes iteration order, file layout, and the
    expansion order of :meth:`expand`.
    """

    counts: dict[str, int]
    total_tokens: int

    @classmethod
    def from_counts(cls, counts: dict[str, int] | Counter) -> "TokenDataset":
        for form, c in counts.items():
            if c < 1:
                raise DataError(f"non-positive count {c} for form {form!r}")
            if not form:
                raise DataError("empty form in dataset")
        ordered = dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
        return cls(ordered, sum(ordered.values()))

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "TokenDataset":
        counter = Counter(tokens)
        if not counter:
            raise DataError("empty corpus")
        return cls.from_counts(counter)

    @property
    def num_types(self) -> int:
        return len(self.counts)

    def items(self) -> Iterator[tuple[str, int]]:
        return iter(self.counts.items())

    def forms(self) -> list[str]:
        return list(self.counts)

    def expand(self) -> list[str]:
        """All tokens as a flat list, each form repeated by its count."""
        out: list[str] = []
        for form, c in self.counts.items():
            out.extend([form] * c)
        return out

    def save(self, path: str | Path) -> None:
        """Write TSV: ``form<TAB>count``, descending count then lexicographic."""
        with open(path, "w", encoding="utf-8") as fh:
            for form, c in self.counts.items():
                fh.write(f"{form}\t{c}\n")

    @classmethod
    def load(cls, path: str | Path) -> "TokenDataset":
        counts: dict[str, int] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise DataError(f"{path}:{lineno}: expected form<TAB>count")
                form, count_str = parts
                try:
                    count = int(count_str)
                except ValueError:
                    raise DataError(f"{path}:{lineno}: bad count {count_str!r}") from None
                if form in counts:
                    raise DataError(f"{path}:{lineno}: duplicate form {form!r}")
                counts[form] = count
        if not counts:
            raise DataError("empty corpus")
        return cls.from_counts(counts)


@dataclass(frozen=True)
class TypeDataset:
    """Set of unique word forms, stored sorted for stable iteration."""

    forms: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.forms)) != len(self.forms):
            raise DataError("type dataset contains duplicates")

    @property
    def num_types(self) -> int:
        return len(self.forms)

    def as_token_dataset(self) -> TokenDataset:
        """Each type with count one; used to train type-level baselines."""
        return TokenDataset.from_counts({form: 1 for form in self.forms})

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for form in self.forms:
                fh.write(form + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "TypeDataset":
        forms = [line for line in Path(path).read_text(encoding="utf-8").splitlines() if line]
        return cls(tuple(sorted(forms)))


def tokenize(line: str, *, lowercase: bool = True, strip_punct: bool = True) -> list[str]:
    """Split a line into tokens.

    Tokens are whitespace-delimited runs with leading and trailing
    PUNCTUATION characters removed. Tokens that are empty after stripping
    (pure punctuation) are dropped. Lowercasing uses full Unicode case
    folding of ``str.lower``.
    """
    line = unicodedata.normalize("NFC", line)
    tokens = []
    for raw in line.split():
        tok = raw.strip(PUNCTUATION) if strip_punct else raw
        if not tok:
            continue
        tokens.append(tok.lower() if lowercase else tok)
    return tokens


def filter_sentence(tokens: Sequence[str], alphabet: Alphabet) -> bool:
    """True iff every grapheme of every token is a content grapheme."""
    return all(ch in alphabet for tok in tokens for ch in tok)


def build_token_dataset(tokens: Iterable[str], cap: int, seed: int) -> TokenDataset:
    """Count a token stream, resampling down to ``cap`` tokens if it is larger.

    Under the cap the counts are exact. Over the cap, exactly ``cap`` tokens
    are drawn i.i.d. with replacement from the stream's empirical frequency
    distribution; forms that receive zero draws are dropped.
    """
    if cap < 1:
        raise DataError(f"token cap must be >= 1, got {cap}")
    counter = Counter(tokens)
    if not counter:
        raise DataError("empty corpus")
    dataset = TokenDataset.from_counts(counter)
    if dataset.total_tokens <= cap:
        return dataset
    return resample(dataset, cap, seed)


def resample(dataset: TokenDataset, cap: int, seed: int) -> TokenDataset:
    """Multinomial resample of ``cap`` tokens from a dataset's frequencies."""
    forms = list(dataset.counts)
    weights = np.array([dataset.counts[f] for f in forms], dtype=np.float64)
    probs = weights / weights.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(cap, probs)
    counts = {form: int(c) for form, c in zip(forms, draws) if c > 0}
    return TokenDataset.from_counts(counts)


def build_type_dataset(dataset: TokenDataset) -> TypeDataset:
    """Unique word forms of a token dataset (its support)."""
    return TypeDataset(tuple(sorted(dataset.counts)))


def split(
    sentences: Sequence[str], ratios: Sequence[float], seed: int
) -> tuple[list[str], ...]:
    """Partition sentences into deterministic, pairwise-disjoint parts.

    ``ratios`` must be positive and sum to 1. The partition is at sentence
    granularity: a seeded shuffle followed by contiguous slices whose sizes
    come from rounded cumulative boundaries.
    """
    if any(r <= 0 for r in ratios):
        raise DataError("all split ratios must be positive")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise DataError(f"split ratios must sum to 1, got {sum(ratios)}")
    n = len(sentences)
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    boundaries = [0]
    acc = 0.0
    for r in ratios:
        acc += r
        boundaries.append(int(round(acc * n)))
    boundaries[-1] = n
    parts = []
    for lo, hi in zip(boundaries, boundaries[1:]):
        if hi <= lo:
            raise DataError(
                f"too few sentences ({n}) for split ratios {tuple(ratios)}"
            )
        parts.append([sentences[i] for i in order[lo:hi]])
    return tuple(parts)


def read_sentences(
    path: str | Path,
    alphabet: Alphabet | None = None,
    *,
    lowercase: bool = True,
    strip_punct: bool = True,
) -> list[list[str]]:
    """Read a one-sentence-per-line corpus into token lists.

    When an alphabet is given, sentences failing :func:`filter_sentence`
    are dropped whole. Empty sentences are dropped.
    """
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens = tokenize(line, lowercase=lowercase, strip_punct=strip_punct)
            if not tokens:
                continue
            if alphabet is not None and not filter_sentence(tokens, alphabet):
                continue
            sentences.append(tokens)
    return sentences


def oov_stats(train: TokenDataset, test: TokenDataset) -> tuple[float, float]:
    """Fraction of test types and test tokens unseen in the training set."""
    oov_types = 0
    oov_tokens = 0
    for form, c in test.items():
        if form not in train.counts:
            oov_types += 1
            oov_tokens += c
    return oov_types / test.num_types, oov_tokens / test.total_tokens
