"""Weighted contracting systems on [0, 1] and finite symbol words.

A WeightedSystem pairs probability weights p_i with contraction ratios r_i,
optionally carrying translations t_i so that the maps x -> t_i + r_i * x act
on the unit interval with disjoint interiors (endpoint touching allowed).
Words are finite strings over the 1-based alphabet {1, ..., m}; all
word-level products are carried in log space so prefixes of length 10^4 and
beyond do not underflow.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ArityError,
    EmptyWordError,
    FormatError,
    OverlapError,
    RangeError,
    WeightSumError,
)

WEIGHT_SUM_TOL = 1e-12
# slack for interval comparisons; exact binary fractions stay exact
GEOM_TOL = 1e-12


@dataclass(frozen=True)
class WeightedSystem:
    """Probability weights and contraction ratios, plus optional geometry.

    Validation runs on construction and is idempotent: revalidating a valid
    system never mutates it (weights are refused, not renormalized).
    """

    probs: tuple[float, ...]
    ratios: tuple[float, ...]
    translations: tuple[float, ...] | None = None

    def __post_init__(self):
        probs, ratios, trans = self.probs, self.ratios, self.translations
        if len(probs) != len(ratios):
            raise ArityError(
                f"probs has {len(probs)} entries, ratios has {len(ratios)}")
        if len(probs) < 2:
            raise ArityError("need at least two maps")
        for p in probs:
            if not (0.0 < p < 1.0):
                raise RangeError(f"weight {p!r} outside (0, 1)")
        for r in ratios:
            if not (0.0 < r < 1.0):
                raise RangeError(f"ratio {r!r} outside (0, 1)")
        total = math.fsum(probs)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise WeightSumError(
                f"weights sum to {total!r}; renormalization is refused")
        if trans is not None:
            if len(trans) != len(probs):
                raise ArityError(
                    f"translations has {len(trans)} entries, expected {len(probs)}")
            intervals = []
            for t, r in zip(trans, ratios):
                if t < -GEOM_TOL or t + r > 1.0 + GEOM_TOL:
                    raise RangeError(
                        f"interval [{t}, {t + r}] is not contained in [0, 1]")
                intervals.append((t, t + r))
            intervals.sort()
            for (alo, ahi), (blo, bhi) in zip(intervals, intervals[1:]):
                if blo < ahi - GEOM_TOL:
                    raise OverlapError(
                        f"intervals [{alo}, {ahi}] and [{blo}, {bhi}] share interior")

    @property
    def m(self) -> int:
        return len(self.probs)

    @cached_property
    def log_probs(self) -> np.ndarray:
        return np.log(np.asarray(self.probs, dtype=float))

    @cached_property
    def log_ratios(self) -> np.ndarray:
        return np.log(np.asarray(self.ratios, dtype=float))

    @cached_property
    def symbol_ratios(self) -> np.ndarray:
        """Per-symbol exponents log p_i / log r_i."""
        return self.log_probs / self.log_ratios

    @cached_property
    def degenerate(self) -> bool:
        """True iff log p_i / log r_i is the same for every symbol."""
        sr = self.symbol_ratios
        return bool(sr.max() - sr.min() <= 1e-12)

    @property
    def has_geometry(self) -> bool:
        return self.translations is not None

    def canonical_dict(self) -> dict:
        doc = {"probs": list(self.probs), "ratios": list(self.ratios)}
        if self.translations is not None:
            doc["translations"] = list(self.translations)
        return doc

    def digest(self) -> str:
        """Stable short hash of the defining data."""
        blob = json.dumps(self.canonical_dict(), sort_keys=True,
                          separators=(",", ":"), default=repr)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def validate_system(probs, ratios=None, translations=None) -> WeightedSystem:
    """Build a WeightedSystem from vectors or from a mapping.

    Accepts either (probs, ratios[, translations]) sequences or a single
    mapping with exactly those keys. Idempotent on its own output.
    """
    if isinstance(probs, WeightedSystem):
        return probs
    if isinstance(probs, Mapping):
        return _from_mapping(probs)
    if ratios is None:
        raise ArityError("ratios are required when probs is a sequence")
    t = None if translations is None else tuple(float(x) for x in translations)
    return WeightedSystem(tuple(float(x) for x in probs),
                          tuple(float(x) for x in ratios), t)


_ALLOWED_KEYS = {"probs", "ratios", "translations"}


def _from_mapping(doc: Mapping) -> WeightedSystem:
    unknown = set(doc) - _ALLOWED_KEYS
    if unknown:
        raise FormatError(f"unknown fields: {sorted(unknown)}")
    for key in ("probs", "ratios"):
        if key not in doc:
            raise FormatError(f"missing required field {key!r}")
    for key in doc:
        val = doc[key]
        if not isinstance(val, Sequence) or isinstance(val, (str, bytes)):
            raise FormatError(f"field {key!r} must be an array of numbers")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                   for v in val):
            raise FormatError(f"field {key!r} must be an array of numbers")
    return validate_system(doc["probs"], doc["ratios"], doc.get("translations"))


def load_system(source) -> WeightedSystem:
    """Load a system from a JSON file path, JSON text, or mapping."""
    if isinstance(source, Mapping):
        return _from_mapping(source)
    if isinstance(source, (str, Path)) and "\n" not in str(source) \
            and Path(source).exists():
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = str(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise FormatError("system document must be a JSON object")
    return _from_mapping(doc)


def dump_system(sys_: WeightedSystem) -> str:
    return json.dumps(sys_.canonical_dict(), indent=2) + "\n"


class Word:
    """Immutable finite word over the 1-based alphabet {1, ..., m}."""

    __slots__ = ("symbols",)

    def __init__(self, symbols: Iterable[int]):
        arr = np.asarray(list(symbols) if not isinstance(symbols, np.ndarray)
                         else symbols, dtype=np.int16)
        if arr.ndim != 1:
            raise RangeError("word symbols must form a flat sequence")
        if arr.size and arr.min() < 1:
            raise RangeError("symbols are 1-based; found a value below 1")
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return int(self.symbols.size)

    def __iter__(self):
        return iter(self.symbols.tolist())

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Word(self.symbols[idx])
        return int(self.symbols[idx])

    def __add__(self, other: "Word") -> "Word":
        return Word(np.concatenate([self.symbols, other.symbols]))

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and \
            self.symbols.tobytes() == other.symbols.tobytes()

    def __hash__(self) -> int:
        return hash(self.symbols.tobytes())

    def __repr__(self) -> str:
        return f"Word({self})"

    def __str__(self) -> str:
        # digit string for alphabets up to 9 symbols, comma form otherwise
        if len(self) == 0:
            return ""
        if self.symbols.max() <= 9:
            return "".join(str(s) for s in self.symbols.tolist())
        return ",".join(str(s) for s in self.symbols.tolist())

    @classmethod
    def from_string(cls, text: str) -> "Word":
        text = text.strip()
        if not text:
            return cls([])
        if "," in text:
            return cls([int(tok) for tok in text.split(",")])
        return cls([int(ch) for ch in text])

    @classmethod
    def periodic(cls, pattern, length: int) -> "Word":
        """Prefix of length `length` of the periodic extension of `pattern`."""
        pat = pattern if isinstance(pattern, Word) else cls.from_string(str(pattern))
        if len(pat) == 0:
            raise EmptyWordError("cannot extend an empty pattern")
        reps = -(-length // len(pat))
        return cls(np.tile(pat.symbols, reps)[:length])

    @classmethod
    def constant(cls, symbol: int, length: int) -> "Word":
        return cls(np.full(length, symbol, dtype=np.int16))

    def prefix(self, n: int) -> "Word":
        return self[:n]


@dataclass(frozen=True)
class WordStats:
    """Log-space mass and size of one word, plus the ratio log p / log r."""

    log_p: float
    log_r: float
    ratio: float

    @property
    def p(self) -> float:
        return math.exp(self.log_p)

    @property
    def r(self) -> float:
        return math.exp(self.log_r)


def word_log_arrays(sys_: WeightedSystem, word: Word):
    """Per-position (log p, log r) arrays for a word. Validates symbols."""
    idx = word.symbols.astype(np.intp) - 1
    if idx.size and idx.max() >= sys_.m:
        raise RangeError(
            f"word uses symbol {int(idx.max()) + 1} but the system has m={sys_.m}")
    return sys_.log_probs[idx], sys_.log_ratios[idx]


def word_stats(sys_: WeightedSystem, word: Word) -> WordStats:
    """Mass p_a, size r_a and exponent log p_a / log r_a of a word."""
    if len(word) == 0:
        raise EmptyWordError("word_stats needs at least one symbol")
    lp, lr = word_log_arrays(sys_, word)
    log_p = float(lp.sum())
    log_r = float(lr.sum())
    return WordStats(log_p, log_r, log_p / log_r)


def alpha_bounds(sys_: WeightedSystem) -> tuple[float, float]:
    """Smallest and largest per-symbol exponent log p_i / log r_i."""
    sr = sys_.symbol_ratios
    return float(sr.min()), float(sr.max())
