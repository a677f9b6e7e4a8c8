from enum import Enum
from typing import FrozenSet, Optional, Tuple

from pydantic import BaseModel, ConfigDict


class TermKind(str, Enum):
    ATOM = "atom"
    APP = "app"
    BINDER = "binder"
    NOTATION = "notation"
    RAW = "raw"

    def __str__(self):
        return self.value


class Fixity(str, Enum):
    PREFIX = "prefix"
    INFIX = "infix"
    POSTFIX = "postfix"
    ASCRIPTION = "ascription"

    def __str__(self):
        return self.value


BINDER_SYMBOLS = ("∀", "∃", "∃!", "fun")


class Term(BaseModel):
    """
    Shallow syntax tree for the statement fragment of Lean 4.

    - ATOM: identifier or literal, in `text`.
    - APP: `children[0]` applied to `children[1:]` (flattened).
    - BINDER: `text` is one of ∀ ∃ ∃! fun; binds `name` in `children[0]` (the body).
      Optional `bound_type`, optional binder predicate `pred_op pred_rhs` (as in `∀ n ≥ 5, …`).
      `grouped` means the body is the next binder of the same syntactic group.
    - NOTATION: operator `text` with a fixity; children are the operands.
    - RAW: verbatim text with the identifiers found in it by the lexer.
    """

    model_config = ConfigDict(frozen=True)

    kind: TermKind
    text: str = ""
    children: Tuple["Term", ...] = ()
    fixity: Optional[Fixity] = None
    name: Optional[str] = None
    bound_type: Optional["Term"] = None
    pred_op: Optional[str] = None
    pred_rhs: Optional["Term"] = None
    grouped: bool = False
    idents: Tuple[str, ...] = ()

    # ---------- constructors ----------

    @classmethod
    def atom(cls, text: str) -> "Term":
        return cls(kind=TermKind.ATOM, text=text)

    @classmethod
    def app(cls, head: "Term", *args: "Term") -> "Term":
        if not args:
            return head
        if head.kind == TermKind.APP:
            return cls(kind=TermKind.APP, children=head.children + tuple(args))
        return cls(kind=TermKind.APP, children=(head,) + tuple(args))

    @classmethod
    def prefix(cls, op: str, operand: "Term") -> "Term":
        return cls(kind=TermKind.NOTATION, text=op, fixity=Fixity.PREFIX, children=(operand,))

    @classmethod
    def postfix(cls, op: str, operand: "Term") -> "Term":
        return cls(kind=TermKind.NOTATION, text=op, fixity=Fixity.POSTFIX, children=(operand,))

    @classmethod
    def infix(cls, op: str, lhs: "Term", rhs: "Term") -> "Term":
        return cls(kind=TermKind.NOTATION, text=op, fixity=Fixity.INFIX, children=(lhs, rhs))

    @classmethod
    def ascription(cls, expr: "Term", type_: "Term") -> "Term":
        return cls(kind=TermKind.NOTATION, text=":", fixity=Fixity.ASCRIPTION, children=(expr, type_))

    @classmethod
    def binder(
        cls,
        symbol: str,
        name: str,
        body: "Term",
        bound_type: Optional["Term"] = None,
        pred_op: Optional[str] = None,
        pred_rhs: Optional["Term"] = None,
        grouped: bool = False,
    ) -> "Term":
        return cls(
            kind=TermKind.BINDER,
            text=symbol,
            name=name,
            children=(body,),
            bound_type=bound_type,
            pred_op=pred_op,
            pred_rhs=pred_rhs,
            grouped=grouped,
        )

    @classmethod
    def raw(cls, text: str, idents: Tuple[str, ...]) -> "Term":
        return cls(kind=TermKind.RAW, text=" ".join(text.split()), idents=tuple(idents))

    @classmethod
    def neg(cls, p: "Term") -> "Term":
        return cls.prefix("¬", p)

    # ---------- accessors ----------

    @property
    def body(self) -> "Term":
        return self.children[0]

    def is_op(self, op: str, fixity: Fixity = Fixity.INFIX) -> bool:
        return self.kind == TermKind.NOTATION and self.fixity == fixity and self.text == op

    def is_ident(self) -> bool:
        return self.kind == TermKind.ATOM and is_identifier_text(self.text)

    def free_variables(self) -> FrozenSet[str]:
        return frozenset(free_variables(self))

    def __str__(self):
        from parsers.LeanPrinter import print_term
        return print_term(self)


Term.model_rebuild()


def is_identifier_text(text: str) -> bool:
    if not text:
        return False
    c = text[0]
    return not (c.isdigit() or c in "\"'")


def ident_root(text: str) -> str:
    """`h.1` and `h.le` are occurrences of `h`; escaped names keep their guillemets."""
    if text.startswith("«"):
        end = text.find("»")
        return text[: end + 1] if end >= 0 else text
    return text.split(".", 1)[0]


def free_variables(t: Term) -> set:
    """
    Identifiers occurring free in `t`.

    Global constants are reported too (there is no environment to tell them apart);
    dotted names are reported by their root, `_` never.
    """
    if t.kind == TermKind.ATOM:
        if t.is_ident():
            root = ident_root(t.text)
            return set() if root == "_" else {root}
        return set()
    if t.kind == TermKind.RAW:
        return {i for i in t.idents if i != "_"}
    if t.kind == TermKind.BINDER:
        out = set()
        if t.bound_type is not None:
            out |= free_variables(t.bound_type)
        if t.pred_rhs is not None:
            out |= free_variables(t.pred_rhs)
        out |= free_variables(t.body) - {t.name}
        return out
    if t.is_op("→") and _named_antecedent(t.children[0]) is not None:
        name, prop = _named_antecedent(t.children[0])
        return free_variables(prop) | (free_variables(t.children[1]) - {name})
    out = set()
    for c in t.children:
        out |= free_variables(c)
    return out


def _named_antecedent(t: Term):
    # `(h : P) → Q` binds h in Q
    if t.kind == TermKind.NOTATION and t.fixity == Fixity.ASCRIPTION and t.children[0].is_ident():
        return t.children[0].text, t.children[1]
    return None


def named_antecedent(t: Term):
    return _named_antecedent(t)


def mentions(t: Term, name: str) -> bool:
    return name in free_variables(t)


def conjunction(parts) -> Term:
    """Right-nested ∧ of `parts` (a single part is returned as is)."""
    return fold_right("∧", parts)


def implication(parts) -> Term:
    return fold_right("→", parts)


def fold_right(op: str, parts) -> Term:
    parts = list(parts)
    if not parts:
        raise ValueError("cannot fold an empty list of terms")
    acc = parts[-1]
    for p in reversed(parts[:-1]):
        acc = Term.infix(op, p, acc)
    return acc
