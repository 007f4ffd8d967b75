"""Text DSL for function presentations and JSON file loading.

Grammar (whitespace separated, ``#`` starts a comment)::

    poly p=2 [1, 3/5, 0]          coefficients, constant term first
    affine p=2 a=1 b=3            a + b x
    automaton machine.json        transducer file
    vdp series.json [tail=zero|truncated]
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .presentation import Affine, AutomatonBacked, Polynomial, Presentation, VdpTable
from .transducer import Transducer
from .vdp import VdpSeries


class DslError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "=", "[", "]", ","
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"(?P<ws>[ \t\r]+|#[^\n]*)|(?P<nl>\n)|(?P<punct>[=\[\],])|(?P<word>[^\s=\[\],#]+)")


def tokenize(text: str) -> list[Token]:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the word class matches everything else
            raise DslError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        col = pos - line_start + 1
        if m.lastgroup == "nl":
            line += 1
            line_start = m.end()
        elif m.lastgroup == "punct":
            out.append(Token(m.group(), m.group(), line, col))
        elif m.lastgroup == "word":
            out.append(Token("word", m.group(), line, col))
        pos = m.end()
    return out


def _rational(tok: Token) -> Fraction:
    try:
        return Fraction(tok.text)
    except (ValueError, ZeroDivisionError):
        raise DslError(f"expected a rational like 3 or -2/5, got {tok.text!r}",
                       tok.line, tok.column) from None


def parse_presentation(text: str, base_dir: Path | None = None) -> Presentation:
    toks = tokenize(text)
    if not toks:
        raise DslError("empty presentation", 1, 1)
    head = toks[0]
    if head.kind != "word":
        raise DslError("expected a presentation kind", head.line, head.column)
    params: dict[str, Token] = {}
    items: list[Token] | None = None
    paths: list[Token] = []
    i = 1
    while i < len(toks):
        t = toks[i]
        if t.kind == "word" and i + 1 < len(toks) and toks[i + 1].kind == "=":
            if i + 2 >= len(toks) or toks[i + 2].kind != "word":
                nxt = toks[i + 1]
                raise DslError(f"missing value for {t.text}", nxt.line, nxt.column + 1)
            params[t.text] = toks[i + 2]
            i += 3
        elif t.kind == "[":
            items, i = _parse_list(toks, i)
        elif t.kind == "word":
            paths.append(t)
            i += 1
        else:
            raise DslError(f"unexpected {t.text!r}", t.line, t.column)

    kind = head.text
    if kind in ("poly", "affine"):
        if "p" not in params:
            raise DslError("missing p=<base>", head.line, head.column)
        try:
            p = int(params["p"].text)
        except ValueError:
            tok = params["p"]
            raise DslError("p must be an integer", tok.line, tok.column) from None
        if kind == "poly":
            if items is None:
                raise DslError("poly needs a coefficient list [c0, c1, ...]",
                               head.line, head.column)
            return _build(head, lambda: Polynomial(p, tuple(_rational(t) for t in items)))
        for name in ("a", "b"):
            if name not in params:
                raise DslError(f"affine needs {name}=<rational>", head.line, head.column)
        return _build(head, lambda: Affine(p, _rational(params["a"]), _rational(params["b"])))
    if kind in ("automaton", "vdp"):
        if len(paths) != 1:
            raise DslError(f"{kind} needs exactly one file path", head.line, head.column)
        path = Path(paths[0].text)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        if kind == "automaton":
            return AutomatonBacked(load_machine(path))
        tail = params["tail"].text if "tail" in params else "zero"
        return _build(head, lambda: load_vdp(path).as_presentation(tail))
    raise DslError(f"unknown presentation kind {kind!r}", head.line, head.column)


def _parse_list(toks: list[Token], i: int) -> tuple[list[Token], int]:
    open_tok = toks[i]
    i += 1
    items: list[Token] = []
    expect_item = True
    while i < len(toks):
        t = toks[i]
        if t.kind == "]":
            if expect_item and items:
                raise DslError("trailing comma", t.line, t.column)
            return items, i + 1
        if expect_item:
            if t.kind != "word":
                raise DslError(f"expected a coefficient, got {t.text!r}", t.line, t.column)
            _rational(t)
            items.append(t)
            expect_item = False
        else:
            if t.kind != ",":
                raise DslError(f"expected ',' or ']', got {t.text!r}", t.line, t.column)
            expect_item = True
        i += 1
    raise DslError("unclosed '['", open_tok.line, open_tok.column)


def _build(head: Token, make):
    try:
        return make()
    except DslError:
        raise
    except ValueError as exc:
        raise DslError(str(exc), head.line, head.column) from None


def parse_coefficients(text: str) -> list[Fraction]:
    """``"1,3/5, -2"`` -> coefficient list (the short ``--poly`` / ``--affine`` form)."""
    parts = [s.strip() for s in text.split(",")]
    if not parts or any(not s for s in parts):
        raise ValueError(f"malformed coefficient list {text!r}")
    return [Fraction(s) for s in parts]


def read_json(path: Path | str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def load_machine(path: Path | str) -> Transducer:
    return Transducer.from_dict(read_json(path))


def load_vdp(path: Path | str) -> VdpSeries:
    return VdpSeries.from_dict(read_json(path))


def dumps(obj: dict) -> str:
    """Canonical JSON text used for every artifact."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
