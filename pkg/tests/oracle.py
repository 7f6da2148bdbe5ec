"""Numeric oracle: direct matrix traces versus symbolic trace polynomials."""

from __future__ import annotations

import random

import numpy as np

from charvar.sl2 import random_sl2_array, word_trace_batch
from charvar.trace_calculus import FrickeBasis, reduce_trace
from charvar.words import Word


def random_word(rng: random.Random, gens, max_len: int = 12) -> Word:
    letters = []
    for _ in range(rng.randint(1, max_len)):
        letters.append((rng.choice(gens), rng.choice((-1, 1))))
    return Word(letters)


def fricke_points(basis: FrickeBasis, mats: np.ndarray) -> np.ndarray:
    """Columns ordered like basis.variables."""
    refs = basis.reference_words()
    cols = [word_trace_batch(refs[v], basis.generators, mats) for v in basis.variables]
    return np.stack(cols, axis=1)


def oracle_error(w: Word, basis: FrickeBasis, mats: np.ndarray, engine=None) -> float:
    poly = reduce_trace(w, basis, engine=engine)
    sym = poly.eval_batch(fricke_points(basis, mats))
    direct = word_trace_batch(w, basis.generators, mats)
    return float(np.max(np.abs(sym - direct)))


def random_tuples(seed: int, count: int, rank: int) -> np.ndarray:
    return random_sl2_array(np.random.default_rng(seed), (count, rank))
