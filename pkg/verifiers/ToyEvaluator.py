import logging
from typing import Dict, Optional, Tuple

import config
from errors import OutsideFragment
from statements.Term import Fixity, Term, TermKind

logger = logging.getLogger(__name__)

NAT, INT = "ℕ", "ℤ"
TYPE_NAMES = {"ℕ": NAT, "Nat": NAT, "ℤ": INT, "Int": INT}
RELATIONS = ("=", "≠", "<", ">", "≤", "≥", "∣")
ARITH = ("+", "-", "*", "/", "%", "^")
MAX_EXPONENT = 4096

# Kleene three-valued truth: True, False, or None when a bounded search was inconclusive
Truth = Optional[bool]


def k_not(a: Truth) -> Truth:
    return None if a is None else not a


def k_and(a: Truth, b: Truth) -> Truth:
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def k_or(a: Truth, b: Truth) -> Truth:
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def ediv(a: int, b: int) -> Tuple[int, int]:
    """Euclidean division: remainder in [0, |b|); division by zero gives (0, a)."""
    if b == 0:
        return 0, a
    r = a % abs(b)
    return (a - r) // b, r


def domain_of(type_: Term) -> str:
    if type_.kind == TermKind.ATOM and type_.text in TYPE_NAMES:
        return TYPE_NAMES[type_.text]
    raise OutsideFragment(f"type '{type_}' is outside the toy fragment")


class ToyEvaluator:
    """
    Evaluates ground formulas of linear and polynomial integer arithmetic.

    Variables carry a domain (ℕ or ℤ). A relation is computed in ℤ when one of its sides
    mentions an ℤ variable, a negation or an ℤ ascription, and in ℕ otherwise (truncated
    subtraction). Quantifiers are searched from their lower bound up to `bound`.
    """

    def __init__(self, bound: int = config.TOY_BOUND):
        self.bound = bound
        self.bound_hit = False

    # ---------- formulas ----------

    def evaluate(self, t: Term, env: Dict[str, Tuple[str, int]]) -> Truth:
        if t.kind == TermKind.ATOM:
            if t.text == "True":
                return True
            if t.text == "False":
                return False
            raise OutsideFragment(f"'{t.text}' is not a proposition of the toy fragment")
        if t.kind == TermKind.BINDER:
            return self._quantifier(t, env)
        if t.kind != TermKind.NOTATION:
            raise OutsideFragment(f"'{t}' is outside the toy fragment")
        if t.fixity == Fixity.PREFIX and t.text == "¬":
            return k_not(self.evaluate(t.children[0], env))
        if t.fixity != Fixity.INFIX:
            raise OutsideFragment(f"'{t}' is not a proposition of the toy fragment")
        op = t.text
        if op == "∧":
            left = self.evaluate(t.children[0], env)
            if left is False:
                return False
            return k_and(left, self.evaluate(t.children[1], env))
        if op == "∨":
            left = self.evaluate(t.children[0], env)
            if left is True:
                return True
            return k_or(left, self.evaluate(t.children[1], env))
        if op == "→":
            left = self.evaluate(t.children[0], env)
            if left is False:
                return True
            return k_or(k_not(left), self.evaluate(t.children[1], env))
        if op == "↔":
            a, b = self.evaluate(t.children[0], env), self.evaluate(t.children[1], env)
            if a is None or b is None:
                return None
            return a == b
        if op in RELATIONS:
            return self._relation(t, env)
        raise OutsideFragment(f"operator '{op}' is outside the toy fragment")

    def _relation(self, t: Term, env) -> bool:
        lhs, rhs = t.children
        dom = INT if self._is_int(lhs, env) or self._is_int(rhs, env) else NAT
        a, b = self.value(lhs, env, dom), self.value(rhs, env, dom)
        op = t.text
        if op == "=":
            return a == b
        if op == "≠":
            return a != b
        if op == "<":
            return a < b
        if op == ">":
            return a > b
        if op == "≤":
            return a <= b
        if op == "≥":
            return a >= b
        return b == 0 if a == 0 else b % a == 0

    def _quantifier(self, t: Term, env) -> Truth:
        if t.text not in ("∀", "∃"):
            raise OutsideFragment(f"binder '{t.text}' is outside the toy fragment")
        dom = domain_of(t.bound_type) if t.bound_type is not None else self._infer_domain(t)
        lo = 0 if dom == NAT else -self.bound
        hi = self.bound
        exact = False
        if t.pred_op is not None:
            rhs = self.value(t.pred_rhs, env, dom)
            if t.pred_op == "≥":
                lo = max(lo, rhs)
            elif t.pred_op == ">":
                lo = max(lo, rhs + 1)
            elif t.pred_op == "≤":
                hi, exact = rhs, dom == NAT
            elif t.pred_op == "<":
                hi, exact = rhs - 1, dom == NAT
            else:
                raise OutsideFragment(f"binder predicate '{t.pred_op}' is outside the toy fragment")
        if hi > self.bound:
            hi, exact = self.bound, False
        universal = t.text == "∀"
        unknown = False
        for v in range(lo, hi + 1):
            inner = dict(env)
            inner[t.name] = (dom, v)
            r = self.evaluate(t.body, inner)
            if r is None:
                unknown = True
            elif r != universal:
                return r
        if exact and not unknown:
            return universal
        if not exact:
            self.bound_hit = True
        return None

    def _infer_domain(self, t: Term) -> str:
        if t.pred_rhs is not None and self._is_int(t.pred_rhs, {}):
            return INT
        return NAT

    # ---------- arithmetic ----------

    def _is_int(self, t: Term, env) -> bool:
        if t.kind == TermKind.ATOM:
            entry = env.get(t.text)
            return entry is not None and entry[0] == INT
        if t.kind == TermKind.NOTATION:
            if t.fixity == Fixity.PREFIX and t.text == "-":
                return True
            if t.fixity == Fixity.ASCRIPTION:
                return domain_of(t.children[1]) == INT
            return any(self._is_int(c, env) for c in t.children)
        return False

    def value(self, t: Term, env, dom: str) -> int:
        if t.kind == TermKind.ATOM:
            if t.text.isdigit():
                return int(t.text)
            if t.text in env:
                return env[t.text][1]
            raise OutsideFragment(f"unknown name '{t.text}'")
        if t.kind != TermKind.NOTATION:
            raise OutsideFragment(f"'{t}' is not an integer expression of the toy fragment")
        if t.fixity == Fixity.ASCRIPTION:
            return self.value(t.children[0], env, domain_of(t.children[1]))
        if t.fixity == Fixity.PREFIX:
            if t.text == "↑":
                return self.value(t.children[0], env, dom)
            if t.text == "-":
                return -self.value(t.children[0], env, dom)
            raise OutsideFragment(f"prefix '{t.text}' is outside the toy fragment")
        if t.fixity != Fixity.INFIX or t.text not in ARITH:
            raise OutsideFragment(f"operator '{t.text}' is outside the toy fragment")
        a = self.value(t.children[0], env, dom)
        b = self.value(t.children[1], env, dom)
        op = t.text
        if op == "+":
            return a + b
        if op == "*":
            return a * b
        if op == "-":
            return max(a - b, 0) if dom == NAT else a - b
        if op == "^":
            if b < 0 or b > MAX_EXPONENT:
                raise OutsideFragment(f"exponent {b} is outside the toy fragment")
            return a ** b
        if dom == NAT:
            if op == "/":
                return a // b if b else 0
            return a % b if b else a
        q, r = ediv(a, b)
        return q if op == "/" else r


def ground_value(t: Term) -> int:
    """Integer value of a closed numeral expression such as `-3` or `(2 : ℤ)`."""
    return ToyEvaluator().value(t, {}, INT)
