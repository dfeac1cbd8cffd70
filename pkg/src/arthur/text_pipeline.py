"""Deterministic text utilities: tokenizer, suffix stemmer, polarity scorer.

Everything here is rule-driven and loaded from plain data files so runs are
reproducible byte for byte. The tokenizer lowercases, strips punctuation,
drops stop words, and stems the survivors. The stemmer strips one suffix
(-ing, -ed, -es, -s, tried in that order) and only accepts a stem that is at
least three characters long and is itself a fixed point of the stemmer; that
last guard is what makes stemming idempotent. The polarity scorer works on
the raw, pre-stop-word token stream with a small signed lexicon and a
negation window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources as importlib_resources
from pathlib import Path

from .errors import ValidationError

MIN_STEM_LENGTH = 3
NEGATION_WINDOW = 3

# Negators flip the sign of a scored word when they appear shortly before it.
# They live here rather than in lexicon.tsv because the lexicon schema is
# strictly "word TAB score" and negators carry no score of their own.
DEFAULT_NEGATORS = frozenset(
    {
        "not",
        "no",
        "never",
        "neither",
        "nobody",
        "nothing",
        "cannot",
        "cant",
        "dont",
        "doesnt",
        "didnt",
        "isnt",
        "arent",
        "wasnt",
        "werent",
        "wont",
        "wouldnt",
        "couldnt",
        "shouldnt",
        "hardly",
        "barely",
    }
)


def _read_data_file(filename: str, override: str | Path | None = None) -> str:
    if override is not None:
        return Path(override).read_text(encoding="utf-8")
    return (
        importlib_resources.files("arthur")
        .joinpath("data", filename)
        .read_text(encoding="utf-8")
    )


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load the stop-word list, one lowercase word per line."""
    words = set()
    for line in _read_data_file("stopwords.txt", path).splitlines():
        word = line.strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


@dataclass(frozen=True)
class StemmerRules:
    """Ordered strip rules plus the silent-e restoration table."""

    strips: tuple[tuple[str, bool], ...]  # (suffix, restore applies)
    restores: dict[str, str] = field(default_factory=dict)


def load_stemmer_rules(path: str | Path | None = None) -> StemmerRules:
    """Load strip/restore rows from the tab-separated rule table."""
    strips: list[tuple[str, bool]] = []
    restores: dict[str, str] = {}
    for lineno, line in enumerate(_read_data_file("stemmer_rules.tsv", path).splitlines(), 1):
        if not line.strip():
            continue
        columns = line.split("\t")
        kind = columns[0]
        if kind == "strip" and len(columns) == 3:
            strips.append((columns[1], columns[2] == "restore"))
        elif kind == "restore" and len(columns) == 3:
            restores[columns[1]] = columns[2]
        else:
            raise ValidationError(f"stemmer_rules line {lineno}: unrecognized row {line!r}")
    if not strips:
        raise ValidationError("stemmer_rules: no strip rules defined")
    return StemmerRules(strips=tuple(strips), restores=restores)


class Stemmer:
    """Single-suffix stripper with silent-e restoration.

    A candidate stem is rejected unless it is at least MIN_STEM_LENGTH
    characters and stemming it again would change nothing; rejected
    candidates fall through to the next rule. The -s rule never fires on
    words ending in a double s.
    """

    def __init__(self, rules: StemmerRules | None = None) -> None:
        self.rules = rules or load_stemmer_rules()

    def stem(self, token: str) -> str:
        token = token.strip().lower()
        for suffix, restore in self.rules.strips:
            if not token.endswith(suffix) or token == suffix:
                continue
            if suffix == "s" and token.endswith("ss"):
                continue
            base = token[: -len(suffix)]
            if restore:
                base = self.rules.restores.get(base, base)
            if len(base) < MIN_STEM_LENGTH:
                continue
            if self.stem(base) != base:
                continue
            return base
        return token


@dataclass(frozen=True)
class PolarityLexicon:
    """Signed word scores plus the negator set used for sign flips."""

    entries: dict[str, float]
    negators: frozenset[str] = DEFAULT_NEGATORS
    negation_window: int = NEGATION_WINDOW


def load_lexicon(path: str | Path | None = None) -> PolarityLexicon:
    """Load "word TAB score" rows; scores must parse as floats."""
    entries: dict[str, float] = {}
    for lineno, line in enumerate(_read_data_file("lexicon.tsv", path).splitlines(), 1):
        if not line.strip():
            continue
        columns = line.split("\t")
        if len(columns) != 2:
            raise ValidationError(f"lexicon line {lineno}: expected word TAB score")
        try:
            entries[columns[0].strip().lower()] = float(columns[1])
        except ValueError as exc:
            raise ValidationError(f"lexicon line {lineno}: bad score {columns[1]!r}") from exc
    return PolarityLexicon(entries=entries)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return load_stopwords()


@lru_cache(maxsize=1)
def default_stemmer() -> Stemmer:
    return Stemmer()


@lru_cache(maxsize=1)
def default_lexicon() -> PolarityLexicon:
    return load_lexicon()


def raw_tokens(text: str) -> list[str]:
    """Lowercase and strip punctuation, keeping word order and duplicates."""
    tokens = []
    for chunk in text.lower().split():
        word = "".join(ch for ch in chunk if ch.isalnum())
        if word:
            tokens.append(word)
    return tokens


def tokenize(
    text: str,
    stopwords: frozenset[str] | None = None,
    stemmer: Stemmer | None = None,
) -> list[str]:
    """Full pipeline: raw tokens, stop-word removal, stemming.

    Order and duplicates are preserved so downstream consumers can count
    repeated mentions. Stop words are filtered again after stemming (a stem
    such as "will" from "willing" can land on one), which is what makes the
    whole pipeline idempotent.
    """
    stopwords = default_stopwords() if stopwords is None else stopwords
    stemmer = stemmer or default_stemmer()
    stems = (stemmer.stem(tok) for tok in raw_tokens(text) if tok not in stopwords)
    return [stem for stem in stems if stem not in stopwords]


def polarity(text: str, lexicon: PolarityLexicon | None = None) -> float:
    """Score sentence polarity in [-1, 1].

    Scores are looked up on the raw pre-stop-word tokens; a negator within
    the negation window before a scored word flips its sign. The sum is
    divided by max(1, scored words) and clamped.
    """
    lexicon = lexicon or default_lexicon()
    tokens = raw_tokens(text)
    total = 0.0
    scored = 0
    for index, token in enumerate(tokens):
        score = lexicon.entries.get(token)
        if score is None:
            continue
        window = tokens[max(0, index - lexicon.negation_window) : index]
        if any(word in lexicon.negators for word in window):
            score = -score
        total += score
        scored += 1
    value = total / max(1, scored)
    return max(-1.0, min(1.0, value))
