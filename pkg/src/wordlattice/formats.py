"""Text formats for the command-line surface.

All files share one lexical shape: '#' starts a comment, blank lines are
skipped, directives are `key = value`. Words may be written either as one
token of single-character symbols ("011") or as space-separated symbol
tokens ("0 1 1"). See docs/file-formats.md for the full grammars.
"""

from __future__ import annotations

from .automata import BlockCode, Dfa
from .errors import ParseError
from .shifts import ShiftOfFiniteType
from .words import Alphabet, Word

TERNARY_CHARS = {"-": -1, "0": 0, "+": 1}


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if stripped.strip():
            yield lineno, stripped


def _directive(line: str, lineno: int):
    if "=" not in line:
        raise ParseError("expected 'key = value'", lineno, 1)
    key, value = line.split("=", 1)
    return key.strip(), value.strip()


def _parse_word_tokens(value: str, alphabet: Alphabet, lineno: int, col: int) -> Word:
    tokens = value.split()
    if len(tokens) == 1 and len(tokens[0]) > 1:
        chars = list(tokens[0])
        if all(any(str(s) == c for s in alphabet.symbols) for c in chars):
            tokens = chars
    symbols = []
    for tok in tokens:
        for s in alphabet.symbols:
            if str(s) == tok:
                symbols.append(s)
                break
        else:
            raise ParseError(f"symbol {tok!r} not in alphabet", lineno, col)
    if not symbols:
        raise ParseError("empty word", lineno, col)
    return alphabet.word(symbols)


def parse_sft(text: str) -> ShiftOfFiniteType:
    """`alphabet = ...` then zero or more `forbid = ...` lines."""
    alphabet = None
    forbidden = []
    for lineno, line in _lines(text):
        key, value = _directive(line, lineno)
        col = line.index("=") + 2
        if key == "alphabet":
            tokens = value.split()
            if not tokens:
                raise ParseError("alphabet needs at least one symbol", lineno, col)
            alphabet = Alphabet(tuple(tokens))
        elif key == "forbid":
            if alphabet is None:
                raise ParseError("alphabet must come before forbid", lineno, 1)
            forbidden.append(_parse_word_tokens(value, alphabet, lineno, col))
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, 1)
    if alphabet is None:
        raise ParseError("missing alphabet directive", 1, 1)
    return ShiftOfFiniteType(alphabet, frozenset(forbidden))


def parse_dfa(text: str) -> Dfa:
    """`states = n`, `alphabet = ...`, then one `state: targets` row each."""
    states = None
    alphabet = None
    rows = {}
    for lineno, line in _lines(text):
        if ":" in line and "=" not in line.split(":", 1)[0]:
            head, rest = line.split(":", 1)
            try:
                state = int(head.strip())
            except ValueError:
                raise ParseError(f"bad state label {head.strip()!r}", lineno, 1) from None
            if states is None or alphabet is None:
                raise ParseError("states and alphabet must come first", lineno, 1)
            targets = rest.split()
            if len(targets) != alphabet.size:
                raise ParseError(
                    f"expected {alphabet.size} targets, got {len(targets)}",
                    lineno, len(head) + 2,
                )
            try:
                row = tuple(int(t) for t in targets)
            except ValueError:
                raise ParseError("targets must be integers", lineno, len(head) + 2) from None
            for t in row:
                if not (0 <= t < states):
                    raise ParseError(f"target {t} out of range", lineno, len(head) + 2)
            if state in rows:
                raise ParseError(f"duplicate row for state {state}", lineno, 1)
            rows[state] = row
        else:
            key, value = _directive(line, lineno)
            col = line.index("=") + 2
            if key == "states":
                try:
                    states = int(value)
                except ValueError:
                    raise ParseError("states must be an integer", lineno, col) from None
                if states < 1:
                    raise ParseError("states must be >= 1", lineno, col)
            elif key == "alphabet":
                tokens = value.split()
                if not tokens:
                    raise ParseError("alphabet needs at least one symbol", lineno, col)
                alphabet = Alphabet(tuple(tokens))
            else:
                raise ParseError(f"unknown directive {key!r}", lineno, 1)
    if states is None:
        raise ParseError("missing states directive", 1, 1)
    if alphabet is None:
        raise ParseError("missing alphabet directive", 1, 1)
    missing = [s for s in range(states) if s not in rows]
    if missing:
        raise ParseError(f"missing transition row for state {missing[0]}", 1, 1)
    return Dfa(alphabet, tuple(rows[s] for s in range(states)))


def parse_code(text: str) -> BlockCode:
    """Optional `alphabet = ...` directive, then one codeword per line."""
    alphabet = None
    word_lines = []
    for lineno, line in _lines(text):
        if "=" in line:
            key, value = _directive(line, lineno)
            if key != "alphabet":
                raise ParseError(f"unknown directive {key!r}", lineno, 1)
            alphabet = Alphabet(tuple(value.split()))
        else:
            word_lines.append((lineno, line.strip()))
    if not word_lines:
        raise ParseError("code file contains no codewords", 1, 1)
    if alphabet is None:
        chars = sorted({c for _, line in word_lines for c in line if not c.isspace()})
        alphabet = Alphabet(tuple(chars))
    words = [
        _parse_word_tokens(line, alphabet, lineno, 1) for lineno, line in word_lines
    ]
    lengths = {len(w) for w in words}
    if len(lengths) != 1:
        raise ParseError("codewords must all have the same length",
                         word_lines[-1][0], 1)
    return BlockCode(tuple(words))


def parse_config(text: str) -> dict:
    """Flat `key = value` config; values stay strings for the caller."""
    out = {}
    for lineno, line in _lines(text):
        key, value = _directive(line, lineno)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        out[key] = value
    return out


def parse_ternary_word(token: str, lineno: int = 1, col: int = 1) -> tuple:
    """Compact ternary spelling: '-' -> -1, '0' -> 0, '+' -> 1."""
    symbols = []
    for i, c in enumerate(token):
        if c not in TERNARY_CHARS:
            raise ParseError(f"bad ternary character {c!r}", lineno, col + i)
        symbols.append(TERNARY_CHARS[c])
    if not symbols:
        raise ParseError("empty ternary word", lineno, col)
    return tuple(symbols)


def format_ternary_word(symbols) -> str:
    rev = {v: k for k, v in TERNARY_CHARS.items()}
    return "".join(rev[s] for s in symbols)


def system_kwargs_from_config(cfg: dict) -> dict:
    """Translate a parsed config into default_system keyword arguments."""
    out = {}
    if "N" in cfg:
        out["N"] = int(cfg["N"])
    if "q" in cfg:
        out["q"] = int(cfg["q"])
    if "window_k" in cfg:
        out["window_k"] = int(cfg["window_k"])
    if "entropy_floor" in cfg:
        out["entropy_floor"] = float(cfg["entropy_floor"])
    if "profile" in cfg:
        out["profile"] = cfg["profile"]
    if "embedding_scale" in cfg:
        out["scale"] = int(cfg["embedding_scale"])
    if "lambda1" in cfg:
        out["lambda1"] = float(cfg["lambda1"])
    if "forbid" in cfg:
        out["forbidden"] = tuple(
            parse_ternary_word(tok.strip())
            for tok in cfg["forbid"].split(",") if tok.strip()
        )
    return out
