import logging
from contextlib import contextmanager
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from errors import DuplicateName, SyntaxMalformed, SyntaxUnsupported
from parsers.LeanLexer import Token, TokenKind, match_brackets, strip_comments, tokenize
from statements.ExistentialProblem import ExistentialProblem, ProblemKind, ProblemProvenance
from statements.Term import Term, TermKind, ident_root, named_antecedent
from statements.TheoremStatement import Binder, BinderMode, Hypothesis, Provenance, TheoremStatement

logger = logging.getLogger(__name__)

MAX_PREC = 1024
APP_PREC = MAX_PREC - 1

RELATIONS = ("=", "≠", "<", ">", "≤", "≥", "∣", "∈", "∉", "⊆", "⊂")

# op -> (precedence, minimum precedence of the lhs, minimum precedence of the rhs)
INFIX = {
    "↔": (20, 21, 21),
    "→": (25, 26, 25),
    "∨": (30, 31, 30),
    "∧": (35, 36, 35),
    "×": (35, 36, 35),
    **{op: (50, 51, 51) for op in RELATIONS},
    "+": (65, 65, 66),
    "-": (65, 65, 66),
    "∪": (65, 65, 66),
    "*": (70, 70, 71),
    "/": (70, 70, 71),
    "%": (70, 70, 71),
    "∩": (70, 70, 71),
    "•": (73, 74, 73),
    "^": (75, 76, 75),
    "∘": (90, 91, 90),
}

# op -> (precedence of the result, precedence the operand is parsed at)
PREFIX = {"¬": (MAX_PREC, 40), "-": (75, 75), "↑": (MAX_PREC, MAX_PREC)}
POSTFIX = ("!", "⁻¹")

BINDER_PREDICATES = (">", "≥", "<", "≤", "≠", "∈", "∉", "⊆", "⊂")
UNSUPPORTED_KEYWORDS = ("match", "do", "let")
RAW_GROUPS = ("⟨", "[", "{", "⌊", "⌈", "‹")
TERM_ATOMS = ("∅", "∞")

TYPE_ATOMS = {
    "ℕ", "ℤ", "ℚ", "ℝ", "ℂ", "Nat", "Int", "Rat", "Real", "Complex", "Prop", "Type", "Type*",
    "Sort", "Sort*", "Bool", "NNReal", "ENNReal", "EReal", "ℕ+", "PNat",
}
TYPE_HEADS = {
    "Fin", "Finset", "Set", "List", "Multiset", "Polynomial", "Matrix", "ZMod", "Option", "Array",
    "Type", "Sort", "EuclideanSpace", "MvPolynomial", "Equiv.Perm", "Subgroup", "Submonoid",
}

DECLARATION_KEYWORDS = ("theorem", "lemma")
OTHER_DECLARATIONS = ("def", "example", "abbrev", "instance", "structure", "inductive", "class", "axiom", "opaque")
MODIFIERS = ("private", "protected", "noncomputable", "nonrec", "unsafe", "partial")


class _Fallback(Exception):
    """Raised inside the expression parser when a construct has to be kept verbatim."""


class TermParser:
    """
    Pratt parser over a token slice, with Lean 4 precedences.

    Constructs outside the grammar turn into RAW terms at the smallest enclosing
    parenthesized group, or the whole slice when there is none.
    """

    def __init__(self, source: str, tokens: List[Token], pairs: dict):
        self.source = source
        self.tokens = tokens
        self.pairs = pairs
        self.pos = 0
        self.limit = len(tokens) - 1

    # ---------- token cursor ----------

    def peek(self, offset: int = 0) -> Token:
        idx = self.pos + offset
        if idx >= self.limit:
            end = self.tokens[self.limit].start
            return Token(TokenKind.EOF, "", end, end)
        return self.tokens[idx]

    def advance(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    @contextmanager
    def bounded(self, limit: int):
        saved = self.limit
        self.limit = limit
        try:
            yield
        finally:
            self.limit = saved

    def raw(self, first: int, last: int) -> Term:
        text = self.source[self.tokens[first].start:self.tokens[last].end]
        idents = [ident_root(t.text) for t in self.tokens[first:last + 1] if t.kind == TokenKind.IDENT]
        return Term.raw(text, tuple(dict.fromkeys(idents)))

    # ---------- entry points ----------

    def parse_slice(self, first: int, last: int) -> Term:
        """Parse tokens[first:last] as one term."""
        if first >= last:
            raise SyntaxMalformed("empty term", (self.tokens[first].start, self.tokens[first].start))
        for tok in self.tokens[first:last]:
            if tok.is_kw(*UNSUPPORTED_KEYWORDS):
                raise SyntaxUnsupported(f"'{tok.text}' is outside the supported subset", (tok.start, tok.end))
        self.pos = first
        with self.bounded(last):
            try:
                term = self.expr(0)
                if self.pos != last:
                    raise _Fallback()
                return term
            except _Fallback:
                return self.raw(first, last - 1)

    # ---------- expressions ----------

    def expr(self, min_prec: int) -> Term:
        left, left_prec = self.leading()
        while True:
            tok = self.peek()
            if tok.kind != TokenKind.SYMBOL or tok.text not in INFIX:
                break
            prec, lhs_min, rhs_min = INFIX[tok.text]
            if prec < min_prec or left_prec < lhs_min:
                break
            self.advance()
            rhs = self.expr(rhs_min)
            left, left_prec = Term.infix(tok.text, left, rhs), prec
        return left

    def leading(self) -> Tuple[Term, int]:
        tok = self.peek()
        if tok.is_sym("∀", "∃", "∃!") or tok.is_kw("fun"):
            return self.binder(), 0
        if tok.kind == TokenKind.SYMBOL and tok.text in PREFIX:
            self.advance()
            result_prec, arg_prec = PREFIX[tok.text]
            operand = self.argument() if tok.text == "↑" else self.expr(arg_prec)
            term = Term.prefix(tok.text, operand)
            if tok.text != "↑":
                return term, result_prec
            head = term
        else:
            head = self.argument()
        args = []
        while self.starts_argument():
            args.append(self.argument())
        if args:
            return Term.app(head, *args), APP_PREC
        return head, MAX_PREC

    def starts_argument(self) -> bool:
        tok = self.peek()
        if tok.kind in (TokenKind.IDENT, TokenKind.NUMBER, TokenKind.STRING):
            return True
        return tok.is_sym("(", "↑", *RAW_GROUPS, *TERM_ATOMS)

    def argument(self) -> Term:
        tok = self.peek()
        if tok.is_sym("↑"):
            self.advance()
            term = Term.prefix("↑", self.argument())
        else:
            term = self.primary()
        while self.peek().is_sym(*POSTFIX):
            term = Term.postfix(self.advance().text, term)
        return term

    def primary(self) -> Term:
        tok = self.peek()
        if tok.kind == TokenKind.IDENT:
            self.advance()
            nxt = self.peek()
            if tok.text in ("Type", "Sort") and nxt.is_sym("*") and nxt.start == tok.end:
                self.advance()
                return Term.atom(tok.text + "*")
            return Term.atom(tok.text)
        if tok.kind in (TokenKind.NUMBER, TokenKind.STRING):
            self.advance()
            return Term.atom(tok.text)
        if tok.is_sym(*TERM_ATOMS):
            self.advance()
            return Term.atom(tok.text)
        if tok.is_sym("("):
            return self.paren()
        if tok.is_sym(*RAW_GROUPS):
            first = self.pos
            last = self.pairs[first]
            self.pos = last + 1
            return self.raw(first, last)
        raise _Fallback()

    def paren(self) -> Term:
        first = self.pos
        last = self.pairs[first]
        if last == first + 1:
            self.pos = last + 1
            return Term.atom("()")
        try:
            self.pos = first + 1
            with self.bounded(last):
                inner = self.expr(0)
                if self.peek().is_sym(":"):
                    self.advance()
                    inner = Term.ascription(inner, self.expr(0))
                if self.pos != last:
                    raise _Fallback()
        except _Fallback:
            inner = self.raw(first, last)
        self.pos = last + 1
        return inner

    def binder(self) -> Term:
        symbol = self.advance().text
        closer = "=>" if symbol == "fun" else ","
        entries = []  # (name, type, pred_op, pred_rhs)
        while not self.peek().is_sym(closer):
            tok = self.peek()
            if tok.is_sym("("):
                first = self.pos
                last = self.pairs[first]
                self.pos += 1
                names = self.binder_names()
                if not names or not self.peek().is_sym(":"):
                    raise _Fallback()
                self.advance()
                with self.bounded(last):
                    type_ = self.expr(0)
                    if self.pos != last:
                        raise _Fallback()
                self.pos = last + 1
                entries.extend((n, type_, None, None) for n in names)
            elif tok.kind == TokenKind.IDENT:
                names = self.binder_names()
                nxt = self.peek()
                if nxt.is_sym(":"):
                    self.advance()
                    type_ = self.expr(0)
                    entries.extend((n, type_, None, None) for n in names)
                    if not self.peek().is_sym(closer):
                        raise _Fallback()
                elif nxt.kind == TokenKind.SYMBOL and nxt.text in BINDER_PREDICATES and len(names) == 1:
                    self.advance()
                    rhs = self.expr(51)
                    entries.append((names[0], None, nxt.text, rhs))
                    if not self.peek().is_sym(closer):
                        raise _Fallback()
                else:
                    entries.extend((n, None, None, None) for n in names)
            else:
                raise _Fallback()
        if not entries:
            raise _Fallback()
        self.advance()
        body = self.expr(0)
        for idx in range(len(entries) - 1, -1, -1):
            name, type_, pred_op, pred_rhs = entries[idx]
            body = Term.binder(
                symbol, name, body,
                bound_type=type_, pred_op=pred_op, pred_rhs=pred_rhs,
                grouped=idx < len(entries) - 1,
            )
        return body

    def binder_names(self) -> List[str]:
        names = []
        while self.peek().kind == TokenKind.IDENT and "." not in self.peek().text:
            names.append(self.advance().text)
        return names


# ---------- classification of binder groups ----------


def is_prop_shaped(t: Term) -> bool:
    if t.kind == TermKind.ATOM:
        return t.text in ("True", "False")
    if t.kind == TermKind.BINDER:
        return t.text in ("∀", "∃", "∃!")
    if t.kind == TermKind.NOTATION:
        if t.text == "¬":
            return True
        if t.text in RELATIONS or t.text in ("∧", "∨", "↔"):
            return True
        if t.text == "→":
            return is_prop_shaped(t.children[0]) or is_prop_shaped(t.children[1])
    return False


def is_type_shaped(t: Term) -> bool:
    if t.kind == TermKind.ATOM:
        return t.text in TYPE_ATOMS
    if t.kind == TermKind.APP:
        head = t.children[0]
        return head.kind == TermKind.ATOM and head.text in TYPE_HEADS
    if t.kind == TermKind.NOTATION and t.text in ("→", "×"):
        return all(is_type_shaped(c) for c in t.children)
    return False


def is_hypothesis(name: str, type_: Term) -> bool:
    """A binder group names a hypothesis when its type reads as a proposition."""
    if is_prop_shaped(type_):
        return True
    if is_type_shaped(type_):
        return False
    return name[:1] in ("h", "H")


# ---------- declarations ----------


class _Locals:
    def __init__(self):
        self.binders: List[Binder] = []
        self.hypotheses: List[Hypothesis] = []
        self.names = set()
        self.instances = 0
        self.anonymous = 0
        self.conclusion: Optional[Term] = None

    def claim(self, name: str, span):
        if name in self.names:
            raise DuplicateName(f"name '{name}' is bound twice")
        self.names.add(name)

    def add_binder(self, name, type_, mode, synthesized=False, span=None):
        self.claim(name, span)
        self.binders.append(Binder(name=name, type=type_, mode=mode, synthesized=synthesized))

    def add_hypothesis(self, name, prop, anonymous=False, span=None):
        self.claim(name, span)
        self.hypotheses.append(
            Hypothesis(name=name, proposition=prop, index=len(self.hypotheses), anonymous=anonymous)
        )

    def fresh(self, prefix: str) -> str:
        while True:
            if prefix == "inst":
                name, self.instances = f"inst{self.instances}", self.instances + 1
            else:
                name, self.anonymous = f"a{self.anonymous}", self.anonymous + 1
            if name not in self.names:
                return name


def _skip_modifiers(tokens: List[Token], pairs: dict, i: int) -> int:
    while True:
        tok = tokens[i]
        if tok.is_sym("@") and tokens[i + 1].is_sym("[") and (i + 1) in pairs:
            i = pairs[i + 1] + 1
        elif tok.kind == TokenKind.IDENT and tok.text in MODIFIERS:
            i += 1
        else:
            return i


def normalize_proof(clean: str, start: int) -> Optional[str]:
    """
    Normalize the proof text that starts at offset `start` (just after `:=`).

    Tactic proofs become `by` followed by the tactic lines, dedented to a common base and
    re-indented by two spaces; blank lines go away. Term proofs keep their lines, dedented.
    """
    text = clean[start:]
    if not text.strip():
        return None
    lead = len(text) - len(text.lstrip())
    begin = start + lead
    body = clean[begin:]
    is_tactic = body.startswith("by") and (len(body) == 2 or not (body[2].isalnum() or body[2] in "_'"))
    content_start = begin + 2 if is_tactic else begin
    line_start = clean.rfind("\n", 0, content_start) + 1
    first_end = clean.find("\n", content_start)
    first_end = len(clean) if first_end < 0 else first_end
    lines = []
    first = clean[content_start:first_end]
    if first.strip():
        col = content_start - line_start + (len(first) - len(first.lstrip()))
        lines.append((col, first.strip()))
    for line in clean[first_end + 1:].split("\n") if first_end < len(clean) else []:
        if line.strip():
            lines.append((len(line) - len(line.lstrip()), line.strip()))
    if not lines:
        return "by" if is_tactic else None
    # tactics after `by` on the same line fix the column of the block
    base = lines[0][0] if first.strip() else min(col for col, _ in lines)
    rendered = [" " * max(0, col - base) + content for col, content in lines]
    if is_tactic:
        return "by\n" + "\n".join("  " + line for line in rendered)
    return "\n".join(rendered)


def _statement_end(tokens: List[Token], pairs: dict, i: int) -> Tuple[int, Optional[int]]:
    """Index of the token ending the statement, and of the `:=` token when there is one."""
    while tokens[i].kind != TokenKind.EOF:
        tok = tokens[i]
        if tok.is_sym(":="):
            return i, i
        if tok.is_kw("where"):
            raise SyntaxUnsupported("equation-style declarations are outside the supported subset", (tok.start, tok.end))
        if i in pairs:
            i = pairs[i] + 1
            continue
        i += 1
    return i, None


def parse_theorem(text: str) -> TheoremStatement:
    """
    Parse one `theorem`/`lemma` declaration.

    Raises:
        SyntaxUnsupported: construct outside the supported subset (with its span).
        SyntaxMalformed: unbalanced delimiters or a missing piece of the declaration.
        DuplicateName: two binders or hypotheses with the same name.
    """
    clean = strip_comments(text)
    tokens = tokenize(clean, strip=False)
    pairs = match_brackets(tokens)
    parser = TermParser(clean, tokens, pairs)

    i = _skip_modifiers(tokens, pairs, 0)
    modifiers = " ".join(clean[tokens[0].start:tokens[i].start].split()) if i else ""
    head = tokens[i]
    if not head.is_kw(*DECLARATION_KEYWORDS):
        raise SyntaxUnsupported(f"not a theorem declaration ({head.text or 'empty'})", (head.start, head.end))
    keyword = head.text
    i += 1
    if tokens[i].kind != TokenKind.IDENT:
        raise SyntaxMalformed("missing theorem name", (tokens[i].start, tokens[i].end))
    name = tokens[i].text
    i += 1

    scope = _Locals()
    while tokens[i].is_sym("(", "{", "[", "⦃"):
        i = _parse_binder_group(parser, tokens, pairs, i, scope)

    if not tokens[i].is_sym(":"):
        raise SyntaxMalformed("expected ':' before the statement", (tokens[i].start, tokens[i].end))
    end, assign = _statement_end(tokens, pairs, i + 1)
    statement = parser.parse_slice(i + 1, end)
    _split_statement(statement, scope)

    proof = normalize_proof(clean, tokens[assign].end) if assign is not None else None
    conclusion = scope.conclusion
    return TheoremStatement(
        name=name,
        binders=tuple(scope.binders),
        hypotheses=tuple(scope.hypotheses),
        conclusion=conclusion,
        proof=proof,
        provenance=Provenance(),
        keyword=keyword,
        modifiers=modifiers,
    )


def _parse_binder_group(parser: TermParser, tokens, pairs, i: int, scope: _Locals) -> int:
    open_tok = tokens[i]
    last = pairs[i]
    span = (open_tok.start, tokens[last].end)
    if open_tok.text == "⦃":
        raise SyntaxUnsupported("strict-implicit binders are outside the supported subset", span)
    k = i + 1
    while k < last:
        if tokens[k].is_sym(":="):
            raise SyntaxUnsupported("binder default values are outside the supported subset", span)
        k = pairs[k] + 1 if k in pairs else k + 1

    if open_tok.text == "[":
        named = tokens[i + 1].kind == TokenKind.IDENT and tokens[i + 2].is_sym(":")
        type_ = parser.parse_slice(i + 3 if named else i + 1, last)
        if named:
            scope.add_binder(tokens[i + 1].text, type_, BinderMode.INSTANCE, span=span)
        else:
            scope.add_binder(scope.fresh("inst"), type_, BinderMode.INSTANCE, synthesized=True, span=span)
        return last + 1

    k = i + 1
    names = []
    while tokens[k].kind == TokenKind.IDENT and k < last:
        names.append(tokens[k].text)
        k += 1
    if "_" in names:
        raise SyntaxUnsupported("anonymous binders are outside the supported subset", span)
    if not names or not tokens[k].is_sym(":"):
        raise SyntaxUnsupported("binders without a type are outside the supported subset", span)
    type_ = parser.parse_slice(k + 1, last)
    mode = BinderMode.EXPLICIT if open_tok.text == "(" else BinderMode.IMPLICIT
    for n in names:
        if mode == BinderMode.EXPLICIT and is_hypothesis(n, type_):
            scope.add_hypothesis(n, type_, span=span)
        else:
            scope.add_binder(n, type_, mode, span=span)
    return last + 1


def _split_statement(statement: Term, scope: _Locals) -> None:
    t = statement
    # leading typed ∀ binders are theorem binders
    while (
        t.kind == TermKind.BINDER
        and t.text == "∀"
        and t.bound_type is not None
        and t.pred_op is None
        and t.name not in scope.names
        and t.name != "_"
    ):
        if is_hypothesis(t.name, t.bound_type):
            scope.add_hypothesis(t.name, t.bound_type)
        else:
            scope.add_binder(t.name, t.bound_type, BinderMode.EXPLICIT)
        t = t.body

    seen_anonymous = False
    while t.is_op("→"):
        lhs = t.children[0]
        named = named_antecedent(lhs)
        if named is not None:
            n, prop = named
            if n in scope.names:
                break
            if is_hypothesis(n, prop):
                scope.add_hypothesis(n, prop)
            elif not seen_anonymous and not scope.hypotheses:
                scope.add_binder(n, prop, BinderMode.EXPLICIT)
            else:
                break
        else:
            scope.add_hypothesis(scope.fresh("a"), lhs, anonymous=True)
            seen_anonymous = True
        t = t.children[1]
    scope.conclusion = t


def parse_term(text: str) -> Term:
    """Parse a standalone term (comments allowed)."""
    clean = strip_comments(text)
    tokens = tokenize(clean, strip=False)
    pairs = match_brackets(tokens)
    parser = TermParser(clean, tokens, pairs)
    return parser.parse_slice(0, len(tokens) - 1)


def parse_problem(text: str, kind: ProblemKind = ProblemKind.MUTATED,
                  provenance: Optional[ProblemProvenance] = None) -> ExistentialProblem:
    """Parse a printed existential problem; its leading ∃ group becomes the binders."""
    clean = strip_comments(text)
    tokens = tokenize(clean, strip=False)
    pairs = match_brackets(tokens)
    parser = TermParser(clean, tokens, pairs)
    i = _skip_modifiers(tokens, pairs, 0)
    if not tokens[i].is_kw(*DECLARATION_KEYWORDS) or tokens[i + 1].kind != TokenKind.IDENT:
        raise SyntaxMalformed("expected 'theorem <name>'", (tokens[i].start, tokens[i].end))
    name = tokens[i + 1].text
    if not tokens[i + 2].is_sym(":"):
        raise SyntaxUnsupported("an existential problem has no binders before ':'", (tokens[i + 2].start, tokens[i + 2].end))
    end, _ = _statement_end(tokens, pairs, i + 3)
    statement = parser.parse_slice(i + 3, end)
    binders = []
    t = statement
    if t.kind == TermKind.BINDER and t.text == "∃":
        while True:
            if t.bound_type is None or t.pred_op is not None:
                raise SyntaxUnsupported("existential binders need an explicit type", None)
            binders.append(Binder(name=t.name, type=t.bound_type))
            grouped, t = t.grouped, t.body
            if not grouped:
                break
    return ExistentialProblem(
        name=name,
        binders=tuple(binders),
        body=t,
        kind=kind,
        provenance=provenance or ProblemProvenance(),
    )


# ---------- corpus files ----------


class SkipRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    file: str = ""
    span: Tuple[int, int]
    line: int
    reason: str

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class Declaration(BaseModel):
    model_config = ConfigDict(frozen=True)

    span: Tuple[int, int]
    line: int
    text: str
    keyword: str


class SourceUnit(BaseModel):
    """A parsed `.lean` file: theorems in the supported subset and skip records for the rest."""

    text: str
    file: str = ""
    theorems: List[TheoremStatement] = []
    spans: List[Tuple[int, int]] = []
    skipped: List[SkipRecord] = []


def split_declarations(text: str) -> List[Declaration]:
    """
    Cut a file into top-level declarations: a declaration starts on a line whose first
    column is not blank (after comment removal). Non-declaration commands are dropped.
    """
    clean = strip_comments(text)
    starts = []
    offset = 0
    for line in clean.split("\n"):
        if line[:1] and not line[:1].isspace():
            starts.append(offset)
        offset += len(line) + 1
    decls = []
    for idx, start in enumerate(starts):
        stop = starts[idx + 1] if idx + 1 < len(starts) else len(clean)
        chunk = clean[start:stop].rstrip()
        keyword = _declaration_keyword(chunk)
        if keyword is None:
            continue
        decls.append(
            Declaration(
                span=(start, start + len(chunk)),
                line=clean.count("\n", 0, start) + 1,
                text=text[start:start + len(chunk)],
                keyword=keyword,
            )
        )
    return decls


def _declaration_keyword(chunk: str) -> Optional[str]:
    try:
        tokens = tokenize(chunk, strip=False)
    except SyntaxMalformed:
        return "theorem" if "theorem" in chunk.split() or "lemma" in chunk.split() else None
    i = 0
    while i < len(tokens) - 1:
        tok = tokens[i]
        if tok.is_sym("@") and tokens[i + 1].is_sym("["):
            depth = 0
            while i < len(tokens) - 1:
                if tokens[i].is_sym("["):
                    depth += 1
                elif tokens[i].is_sym("]"):
                    depth -= 1
                    if depth == 0:
                        break
                i += 1
            i += 1
        elif tok.kind == TokenKind.IDENT and tok.text in MODIFIERS:
            i += 1
        else:
            break
    tok = tokens[i]
    if tok.is_kw(*DECLARATION_KEYWORDS, *OTHER_DECLARATIONS):
        return tok.text
    return None


def parse_source(text: str, file: str = "") -> SourceUnit:
    """Best-effort parse of a whole file; unsupported declarations are recorded, never fatal."""
    unit = SourceUnit(text=text, file=file)
    seen = set()
    for decl in split_declarations(text):
        if decl.keyword not in DECLARATION_KEYWORDS:
            unit.skipped.append(
                SkipRecord(file=file, span=decl.span, line=decl.line,
                           reason=f"not a theorem declaration ({decl.keyword})")
            )
            continue
        try:
            stmt = parse_theorem(decl.text)
            if stmt.name in seen:
                raise DuplicateName(f"theorem '{stmt.name}' is declared twice")
        except (SyntaxUnsupported, SyntaxMalformed, DuplicateName) as e:
            logger.debug("Skipping declaration at line %d: %s", decl.line, e)
            unit.skipped.append(SkipRecord(file=file, span=decl.span, line=decl.line, reason=str(e)))
            continue
        seen.add(stmt.name)
        unit.theorems.append(stmt)
        unit.spans.append(decl.span)
    return unit
