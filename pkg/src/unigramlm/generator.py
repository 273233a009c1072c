"""Word-form generators: the shared interface and a smoothed character n-gram.

A generator is a normalized probability distribution over word forms. It
factorizes over characters: each form is scored as the product of
per-position conditionals, ending with the end-of-word symbol. Generators
must expose ``log_prob`` (nats), i.i.d. ``sample``, and ``fit``.

The n-gram generator uses interpolated Witten-Bell-style smoothing: each
order's conditional mixes the maximum-likelihood estimate with the
next-lower order, with mixing weight T/(c+T) where c is the context's
token count and T its distinct-successor count. The recursion bottoms out
in the uniform distribution over content graphemes plus end-of-word, so
every string over the alphabet has positive probability and every
conditional sums to one exactly.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from bisect import bisect_right
from dataclasses import dataclass
from random import Random

import numpy as np

from .corpus import Alphabet, TokenDataset
from .errors import DataError

# Samples longer than this are truncated at the cap. The sampled
# distribution is therefore the model conditioned on 1 <= length, with all
# mass beyond the cap collapsed onto length-cap prefixes; empty draws
# (end-of-word as the first symbol) are rejected and redrawn.
MAX_WORD_LENGTH = 64


@dataclass
class TrainingSchedule:
    """Gradient-training knobs for the neural generator.

    The counting generator ignores everything except the dataclass shape.
    Training evaluates the development loss every ``eval_every`` batches
    and stops after ``patience`` consecutive evaluations with increasing
    dev loss, or when ``max_steps`` batches have been consumed.
    """

    batch_size: int = 32
    learning_rate: float = 1e-2
    lr_decay: float = 0.95
    eval_every: int = 200
    patience: int = 5
    max_steps: int = 10_000

    def __post_init__(self) -> None:
        if self.patience < 1:
            raise DataError("patience must be >= 1")
        if self.eval_every < 1:
            raise DataError("eval_every must be >= 1")
        if self.batch_size < 1:
            raise DataError("batch_size must be >= 1")


class GeneratorInterface(ABC):
    """Normalized distribution over word forms with i.i.d. sampling.

    ``version`` increments on every completed ``fit``; training code uses
    it to assert that no stale parameters leak between EM phases.
    """

    alphabet: Alphabet
    version: int

    @abstractmethod
    def log_prob(self, form: str) -> float:
        """Log-probability of ``form`` in nats. Finite and negative."""

    @abstractmethod
    def sample(self, rng: Random) -> str:
        """Draw one word form."""

    @abstractmethod
    def fit(
        self,
        train: TokenDataset,
        dev: TokenDataset | None = None,
        schedule: TrainingSchedule | None = None,
    ) -> "GeneratorInterface":
        """Train on a token multiset; returns self."""

    def batch_log_probs(self, forms: list[str]) -> np.ndarray:
        return np.array([self.log_prob(w) for w in forms], dtype=np.float64)

    def cross_entropy(self, dataset: TokenDataset) -> float:
        """Count-weighted mean surprisal per token, in nats."""
        forms = dataset.forms()
        logps = self.batch_log_probs(forms)
        weights = np.array([dataset.counts[w] for w in forms], dtype=np.float64)
        return float(-(logps * weights).sum() / weights.sum())

    def _check_vocabulary(self, form: str) -> None:
        for ch in form:
            if ch not in self.alphabet:
                raise DataError(f"unknown grapheme {ch!r} in form {form!r}")


class NGramGenerator(GeneratorInterface):
    """Interpolated character n-gram over an alphabet.

    Contexts are tuples of symbol ids over (content graphemes, end-of-word,
    begin-of-word); the begin-of-word id pads contexts at the start of a
    form and is never predicted. An unfitted instance is the uniform base
    distribution, which is occasionally useful as a maximally smooth
    reference model.
    """

    def __init__(self, alphabet: Alphabet, order: int = 5):
        if order < 1:
            raise DataError(f"n-gram order must be >= 1, got {order}")
        self.alphabet = alphabet
        self.order = order
        self.eow_id = len(alphabet)
        self.bow_id = len(alphabet) + 1
        self.num_outcomes = len(alphabet) + 1  # content + end-of-word
        self.version = 0
        self._counts: dict[tuple[int, ...], dict[int, int]] = {}
        self._cond_cache: dict[tuple[int, ...], np.ndarray] = {}
        self._cum_cache: dict[tuple[int, ...], np.ndarray] = {}

    # -- training ---------------------------------------------------------

    def fit(
        self,
        train: TokenDataset,
        dev: TokenDataset | None = None,
        schedule: TrainingSchedule | None = None,
    ) -> "NGramGenerator":
        """Count transitions of the training multiset; replaces prior counts.

        The development set and schedule are accepted for interface
        uniformity; a counting model has no early stopping.
        """
        if train.total_tokens == 0:
            raise DataError("empty corpus")
        counts: dict[tuple[int, ...], dict[int, int]] = {}
        for form, c in train.items():
            self._check_vocabulary(form)
            ids = [self.alphabet.index(ch) for ch in form] + [self.eow_id]
            history = [self.bow_id] * (self.order - 1)
            for symbol in ids:
                for k in range(self.order):
                    ctx = tuple(history[len(history) - k :])
                    nxt = counts.setdefault(ctx, {})
                    nxt[symbol] = nxt.get(symbol, 0) + c
                if self.order > 1:
                    history.append(symbol)
                    del history[0]
        self._counts = counts
        self._cond_cache = {}
        self._cum_cache = {}
        self.version += 1
        return self

    # -- probabilities ----------------------------------------------------

    def conditional(self, context_ids: tuple[int, ...]) -> np.ndarray:
        """Distribution over the next symbol (content graphemes, then EOW)."""
        context_ids = context_ids[max(0, len(context_ids) - (self.order - 1)) :]
        cached = self._cond_cache.get(context_ids)
        if cached is not None:
            return cached
        if not context_ids:
            base = np.full(self.num_outcomes, 1.0 / self.num_outcomes)
            self._cond_cache[context_ids] = base
            return base
        backoff = self.conditional(context_ids[1:])
        observed = self._counts.get(context_ids)
        if not observed:
            self._cond_cache[context_ids] = backoff
            return backoff
        total = sum(observed.values())
        distinct = len(observed)
        probs = backoff * (distinct / (total + distinct))
        for symbol, c in observed.items():
            probs[symbol] += c / (total + distinct)
        self._cond_cache[context_ids] = probs
        return probs

    def log_prob(self, form: str) -> float:
        self._check_vocabulary(form)
        if not form:
            raise DataError("empty form")
        ids = [self.alphabet.index(ch) for ch in form] + [self.eow_id]
        context = (self.bow_id,) * (self.order - 1)
        total = 0.0
        for symbol in ids:
            total += math.log(self.conditional(context)[symbol])
            context = (context + (symbol,))[1:] if self.order > 1 else ()
        return total

    # -- sampling ---------------------------------------------------------

    def _cumulative(self, context: tuple[int, ...]) -> np.ndarray:
        cached = self._cum_cache.get(context)
        if cached is None:
            cached = np.cumsum(self.conditional(context))
            self._cum_cache[context] = cached
        return cached

    def sample(self, rng: Random) -> str:
        while True:
            context = (self.bow_id,) * (self.order - 1)
            chars: list[str] = []
            while len(chars) < MAX_WORD_LENGTH:
                cum = self._cumulative(context)
                symbol = int(bisect_right(cum, rng.random() * cum[-1]))
                symbol = min(symbol, self.num_outcomes - 1)
                if symbol == self.eow_id:
                    break
                chars.append(self.alphabet.graphemes[symbol])
                context = (context + (symbol,))[1:] if self.order > 1 else ()
            if chars:
                return "".join(chars)
