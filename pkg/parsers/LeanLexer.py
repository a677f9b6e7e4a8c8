from enum import Enum
from typing import Dict, List, NamedTuple

from errors import SyntaxMalformed


class TokenKind(str, Enum):
    IDENT = "ident"
    NUMBER = "number"
    STRING = "string"
    SYMBOL = "symbol"
    KEYWORD = "keyword"
    EOF = "eof"

    def __str__(self):
        return self.value


class Token(NamedTuple):
    kind: TokenKind
    text: str
    start: int
    end: int

    def is_sym(self, *texts: str) -> bool:
        return self.kind == TokenKind.SYMBOL and self.text in texts

    def is_kw(self, *texts: str) -> bool:
        return self.kind == TokenKind.KEYWORD and self.text in texts


KEYWORDS = {
    "theorem", "lemma", "def", "example", "abbrev", "instance", "structure", "inductive",
    "class", "by", "fun", "match", "do", "let", "have", "show", "from", "at", "with", "if",
    "then", "else", "where", "calc", "suffices", "in", "deriving", "mutual", "opaque", "axiom",
}

# ASCII spellings are read as their unicode operator
ALIASES = {
    "->": "→", "<->": "↔", "<=": "≤", ">=": "≥", "!=": "≠", "/\\": "∧", "\\/": "∨", "λ": "fun",
    "=>": "=>", "↦": "=>",
}

SYMBOLS = sorted(
    [
        ":=", "=>", "↦", "<;>", "->", "<->", "<=", ">=", "!=", "/\\", "\\/", "..", "<|", "|>",
        "⁻¹", "∃!", "==", "::", "++",
        "→", "↔", "≠", "≤", "≥", "∣", "∈", "∉", "⊆", "⊂", "∧", "∨", "¬", "∀", "∃", "λ", "∘", "×",
        "∪", "∩", "↑", "←", "(", ")", "[", "]", "{", "}", "⟨", "⟩", "⌊", "⌋", "⌈", "⌉", "⦃", "⦄",
        "‹", "›", ",", ":", ";", "|", "+", "-", "*", "/", "%", "^", "=", "<", ">", "!", "·", "•",
        "∑", "∏", "∫", "√", "#", "@", "$", "?", "\\", "∞", "≡", "‖", "'", ".", "&", "~", "∅",
    ],
    key=len,
    reverse=True,
)

BRACKETS = {"(": ")", "[": "]", "{": "}", "⟨": "⟩", "⌊": "⌋", "⌈": "⌉", "⦃": "⦄", "‹": "›"}
CLOSERS = {v: k for k, v in BRACKETS.items()}


def is_letter_like(c: str) -> bool:
    o = ord(c)
    return (
        (0x3B1 <= o <= 0x3C9 and o != 0x3BB)
        or (0x391 <= o <= 0x3A9 and o not in (0x3A0, 0x3A3))
        or (0x3CA <= o <= 0x3FB)
        or (0x1F00 <= o <= 0x1FFE)
        or (0x2100 <= o <= 0x214F)
        or (0x1D49C <= o <= 0x1D59F)
    )


def is_subscript(c: str) -> bool:
    o = ord(c)
    return (0x2080 <= o <= 0x2089) or (0x2090 <= o <= 0x209C) or (0x1D62 <= o <= 0x1D6A)


def is_id_start(c: str) -> bool:
    return (c.isascii() and c.isalpha()) or c == "_" or is_letter_like(c)


def is_id_rest(c: str) -> bool:
    return is_id_start(c) or (c.isascii() and c.isdigit()) or c in "'!?" or is_subscript(c)


def strip_comments(text: str) -> str:
    """
    Blank out `--` and (nested) `/- -/` comments, keeping every offset and newline in place.
    String literals are left alone.
    """
    out = list(text)
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            i = j + 1
        elif text.startswith("--", i):
            j = text.find("\n", i)
            j = n if j < 0 else j
            for k in range(i, j):
                out[k] = " "
            i = j
        elif text.startswith("/-", i):
            depth, j = 1, i + 2
            while j < n and depth:
                if text.startswith("/-", j):
                    depth, j = depth + 1, j + 2
                elif text.startswith("-/", j):
                    depth, j = depth - 1, j + 2
                else:
                    j += 1
            if depth:
                raise SyntaxMalformed("unterminated block comment", (i, n))
            for k in range(i, j):
                if out[k] != "\n":
                    out[k] = " "
            i = j
        else:
            i += 1
    return "".join(out)


def _scan_ident_part(text: str, i: int) -> int:
    if text[i] == "«":
        j = text.find("»", i)
        if j < 0:
            raise SyntaxMalformed("unterminated «", (i, len(text)))
        return j + 1
    i += 1
    while i < len(text) and is_id_rest(text[i]):
        i += 1
    return i


def _scan_ident(text: str, i: int) -> int:
    # dotted continuations: `Nat.succ`, `h.1`, `hx.le`, `h.2.1`
    n = len(text)
    i = _scan_ident_part(text, i)
    while i + 1 < n and text[i] == ".":
        nxt = text[i + 1]
        if is_id_start(nxt) or nxt == "«":
            i = _scan_ident_part(text, i + 1)
        elif nxt.isdigit():
            i += 1
            while i < n and text[i].isdigit():
                i += 1
        else:
            break
    return i


def tokenize(text: str, strip: bool = True) -> List[Token]:
    """
    Split Lean source into tokens. Comments are removed first when `strip` is set.

    The returned list always ends with an EOF token.
    """
    if strip:
        text = strip_comments(text)
    tokens: List[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if is_id_start(c) or c == "«":
            j = _scan_ident(text, i)
            word = text[i:j]
            kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENT
            tokens.append(Token(kind, word, i, j))
            i = j
            continue
        if c.isdigit():
            j = i + 1
            if c == "0" and j < n and text[j] in "xXbBoO":
                j += 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
            else:
                while j < n and text[j].isdigit():
                    j += 1
                if j + 1 < n and text[j] == "." and text[j + 1].isdigit():
                    j += 1
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(Token(TokenKind.NUMBER, text[i:j], i, j))
            i = j
            continue
        if c == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                raise SyntaxMalformed("unterminated string literal", (i, n))
            tokens.append(Token(TokenKind.STRING, text[i:j + 1], i, j + 1))
            i = j + 1
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                kind = TokenKind.KEYWORD if sym == "λ" else TokenKind.SYMBOL
                tokens.append(Token(kind, ALIASES.get(sym, sym), i, i + len(sym)))
                i += len(sym)
                break
        else:
            tokens.append(Token(TokenKind.SYMBOL, c, i, i + 1))
            i += 1
    tokens.append(Token(TokenKind.EOF, "", n, n))
    return tokens


def match_brackets(tokens: List[Token]) -> Dict[int, int]:
    """
    Map the index of every opening bracket token to the index of its closing token.

    Raises:
        SyntaxMalformed: on an unbalanced or mismatched delimiter.
    """
    stack: List[int] = []
    pairs: Dict[int, int] = {}
    for idx, tok in enumerate(tokens):
        if tok.kind != TokenKind.SYMBOL:
            continue
        if tok.text in BRACKETS:
            stack.append(idx)
        elif tok.text in CLOSERS:
            if not stack or tokens[stack[-1]].text != CLOSERS[tok.text]:
                raise SyntaxMalformed(f"unbalanced '{tok.text}'", (tok.start, tok.end))
            pairs[stack.pop()] = idx
    if stack:
        tok = tokens[stack[-1]]
        raise SyntaxMalformed(f"unclosed '{tok.text}'", (tok.start, tok.end))
    return pairs


def identifiers(text: str, strip: bool = True) -> List[str]:
    """Identifier tokens of `text`, in order, keywords excluded."""
    try:
        toks = tokenize(text, strip=strip)
    except SyntaxMalformed:
        return []
    return [t.text for t in toks if t.kind == TokenKind.IDENT]


def identifier_roots(text: str, strip: bool = True) -> List[str]:
    from statements.Term import ident_root
    return [ident_root(i) for i in identifiers(text, strip=strip)]
