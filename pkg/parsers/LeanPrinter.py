from typing import List, Tuple

from parsers.LeanParser import APP_PREC, INFIX, MAX_PREC, PREFIX
from statements.ExistentialProblem import ExistentialProblem
from statements.Term import Fixity, Term, TermKind
from statements.TheoremStatement import Binder, BinderMode, TheoremStatement

INDENT = "  "


def print_term(t: Term, min_prec: int = 0) -> str:
    text, prec = _render(t)
    if prec < min_prec:
        return f"({text})"
    return text


def _is_delimited(text: str) -> bool:
    from parsers.LeanLexer import BRACKETS
    if not text or text[0] not in BRACKETS or text[-1] != BRACKETS[text[0]]:
        return False
    depth = 0
    for idx, c in enumerate(text):
        if c == text[0]:
            depth += 1
        elif c == text[-1]:
            depth -= 1
            if depth == 0 and idx != len(text) - 1:
                return False
    return True


def _render(t: Term) -> Tuple[str, int]:
    if t.kind == TermKind.ATOM:
        return t.text, MAX_PREC
    if t.kind == TermKind.RAW:
        return t.text, MAX_PREC if _is_delimited(t.text) else 0
    if t.kind == TermKind.APP:
        parts = [print_term(t.children[0], MAX_PREC)]
        parts += [print_term(c, MAX_PREC) for c in t.children[1:]]
        return " ".join(parts), APP_PREC
    if t.kind == TermKind.BINDER:
        return _render_binder(t), 0
    if t.fixity == Fixity.ASCRIPTION:
        return f"({print_term(t.children[0])} : {print_term(t.children[1])})", MAX_PREC
    if t.fixity == Fixity.PREFIX:
        result_prec, arg_prec = PREFIX[t.text]
        operand = print_term(t.children[0], arg_prec)
        sep = " " if t.text == "-" and operand.startswith("-") else ""
        return f"{t.text}{sep}{operand}", result_prec
    if t.fixity == Fixity.POSTFIX:
        operand = print_term(t.children[0], MAX_PREC)
        # `n!` would lex as a single identifier
        sep = " " if t.text == "!" else ""
        return f"{operand}{sep}{t.text}", MAX_PREC
    prec, lhs_min, rhs_min = INFIX[t.text]
    lhs = print_term(t.children[0], lhs_min)
    rhs = print_term(t.children[1], rhs_min)
    return f"{lhs} {t.text} {rhs}", prec


def _binder_chain(t: Term) -> Tuple[List[Term], Term]:
    chain = [t]
    while chain[-1].grouped:
        chain.append(chain[-1].body)
    return chain, chain[-1].body


def _render_binder(t: Term) -> str:
    chain, body = _binder_chain(t)
    symbol = t.text
    if len(chain) == 1:
        b = chain[0]
        if b.pred_op is not None:
            head = f"{b.name} {b.pred_op} {print_term(b.pred_rhs, 51)}"
        elif b.bound_type is None:
            head = b.name
        elif b.bound_type.kind == TermKind.ATOM and symbol != "fun":
            head = f"{b.name} : {b.bound_type.text}"
        else:
            head = f"({b.name} : {print_term(b.bound_type)})"
    else:
        head = " ".join(
            b.name if b.bound_type is None else f"({b.name} : {print_term(b.bound_type)})" for b in chain
        )
    if symbol == "fun":
        return f"fun {head} => {print_term(body)}"
    return f"{symbol} {head}, {print_term(body)}"


# ---------- declarations ----------


def render_binder(b: Binder) -> str:
    type_text = print_term(b.type)
    if b.mode == BinderMode.INSTANCE:
        return f"[{type_text}]" if b.synthesized else f"[{b.name} : {type_text}]"
    if b.mode == BinderMode.IMPLICIT:
        return f"{{{b.name} : {type_text}}}"
    return f"({b.name} : {type_text})"


def statement_text(stmt: TheoremStatement) -> Tuple[List[str], str]:
    """Binder groups printed before the colon, and the statement after it."""
    groups = [render_binder(b) for b in stmt.binders]
    hyps = list(stmt.hypotheses)
    first_anon = next((i for i, h in enumerate(hyps) if h.anonymous), len(hyps))
    groups += [f"({h.name} : {print_term(h.proposition)})" for h in hyps[:first_anon]]
    arrows = []
    for h in hyps[first_anon:]:
        if h.anonymous:
            arrows.append(print_term(h.proposition, INFIX["→"][1]))
        else:
            arrows.append(f"({h.name} : {print_term(h.proposition)})")
    conclusion = print_term(stmt.conclusion, INFIX["→"][2] if arrows else 0)
    return groups, " → ".join(arrows + [conclusion])


def render_proof(proof: str) -> str:
    """Text that follows `:=`."""
    lines = proof.split("\n")
    if lines[0] == "by":
        tactics = lines[1:]
        if len(tactics) == 1:
            return "by " + tactics[0].strip()
        if not tactics:
            return "by"
        return "by\n" + "\n".join(tactics)
    return "\n".join([lines[0]] + [INDENT + line for line in lines[1:]])


def print_theorem(stmt: TheoremStatement) -> str:
    """
    Print a theorem in the normalized layout: one binder group per line with a two-space
    indent, then ` :`, then the statement on its own line. Theorems without binder groups
    fit on one line.
    """
    head = f"{stmt.modifiers} {stmt.keyword}" if stmt.modifiers else stmt.keyword
    groups, statement = statement_text(stmt)
    proof = f" := {render_proof(stmt.proof)}" if stmt.proof is not None else ""
    if not groups:
        return f"{head} {stmt.name} : {statement}{proof}"
    lines = [f"{head} {stmt.name}"]
    lines += [INDENT + g for g in groups[:-1]]
    lines.append(f"{INDENT}{groups[-1]} :")
    lines.append(f"{INDENT}{statement}{proof}")
    return "\n".join(lines)


def existential_prefix(binders) -> str:
    if not binders:
        return ""
    if len(binders) == 1 and binders[0].type.kind == TermKind.ATOM:
        return f"∃ {binders[0].name} : {binders[0].type.text}, "
    groups = " ".join(f"({b.name} : {print_term(b.type)})" for b in binders)
    return f"∃ {groups}, "


def problem_statement(problem: ExistentialProblem) -> str:
    return existential_prefix(problem.binders) + print_term(problem.body)


def print_problem(problem: ExistentialProblem, with_proof: bool = True, proof: str = "by sorry") -> str:
    """`theorem <name> : ∃ (x : X), <body> := by sorry` on one line."""
    text = f"theorem {problem.name} : {problem_statement(problem)}"
    if with_proof:
        text += f" := {proof}"
    return text


def problem_header(problem: ExistentialProblem) -> str:
    """The declaration up to and including `:= by`, as handed to a prover."""
    return f"theorem {problem.name} : {problem_statement(problem)} := by"
