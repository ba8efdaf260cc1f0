"""Text literals for group algebra elements.

Cyclic groups are written as polynomials in ``x`` (``2+x+x^2``), dihedral
groups as words in ``r`` and ``s`` (``1+r^2s``), anything else as a bracketed
coefficient list (``[1,0,1]``).  Ring coefficients for the polynomial flavour
are parenthesised (``(1+u)x``).
"""

from __future__ import annotations

import re

import numpy as np

from .errors import InvalidParameter
from .groups import FiniteGroup

_TOKEN = re.compile(r"([xrs])(?:\^(\d+))?")


def _family(group: FiniteGroup) -> str:
    return group.label.partition(":")[0]


def _monomial(group: FiniteGroup, g: int) -> str:
    kind = _family(group)
    if g == 0:
        return ""
    if kind == "cyclic":
        return "x" if g == 1 else f"x^{g}"
    n = group.order // 2
    a, b = g % n, g // n
    word = "" if a == 0 else ("r" if a == 1 else f"r^{a}")
    return word + ("s" if b else "")


def _word_index(group: FiniteGroup, word: str) -> int:
    kind = _family(group)
    pos, g = 0, 0
    while pos < len(word):
        m = _TOKEN.match(word, pos)
        if not m:
            raise InvalidParameter(f"cannot parse group word {word!r}")
        letter, exp = m.group(1), int(m.group(2) or 1)
        if kind == "cyclic" and letter == "x":
            gen = 1 % group.order
        elif kind == "dihedral" and letter in "rs":
            n = group.order // 2
            gen = (1 % n) if letter == "r" else n
        else:
            raise InvalidParameter(f"generator {letter!r} not valid for {group.label}")
        for _ in range(exp):
            g = int(group.mul[g, gen])
        pos = m.end()
    return g


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip():
            terms.append(cur)
            cur = "" if ch == "+" else "-"
            continue
        cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


def parse_terms(group: FiniteGroup, text: str, parse_coef) -> list[tuple[int, int]]:
    """Split a literal into (coefficient, element index) pairs."""
    text = text.replace(" ", "").replace("*", "")
    if text.startswith("["):
        values = [v for v in text.strip("[]").split(",") if v]
        if len(values) != group.order:
            raise InvalidParameter(f"expected {group.order} coefficients")
        return [(parse_coef(v), g) for g, v in enumerate(values)]
    out = []
    for term in _split_terms(text):
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        if term.startswith("("):
            close = term.index(")")
            coef_text, word = term[1:close], term[close + 1:]
        else:
            m = re.match(r"\d*", term)
            coef_text, word = m.group(0), term[m.end():]
        coef = parse_coef(coef_text) if coef_text else parse_coef("1")
        out.append((coef, _word_index(group, word), sign))
    return [(c if s > 0 else -c, g) for c, g, s in out]


def parse_f_element(group: FiniteGroup, p: int, text: str):
    from .algebra import FAlgebraElement
    return FAlgebraElement.from_terms(group, p, parse_terms(group, text, int))


def format_terms(group: FiniteGroup, coeffs, fmt_coef, is_one) -> str:
    if _family(group) not in ("cyclic", "dihedral"):
        return "[" + ",".join(fmt_coef(c) for c in coeffs) + "]"
    parts = []
    for g, c in enumerate(coeffs):
        if not c:
            continue
        mono = _monomial(group, g)
        coef = fmt_coef(c)
        if not mono:
            parts.append(coef)
        elif is_one(c):
            parts.append(mono)
        else:
            parts.append(f"{coef}{mono}")
    return "+".join(parts) if parts else "0"


def format_element(a) -> str:
    """Literal for an F_pG or RG element."""
    ring = getattr(a, "ring", None)
    if ring is None:
        return format_terms(a.group, [int(c) for c in a.coeffs], str, lambda c: c == 1)

    def fmt(c):
        s = ring.format_scalar(c)
        return f"({s})" if "+" in s or "u" in s else s

    return format_terms(a.group, [int(c) for c in a.coeffs], fmt, lambda c: c == 1)


def parse_r_element(group: FiniteGroup, ring, text: str):
    from .ringcodes import RAlgebraElement
    terms = parse_terms(group, text, lambda t: int(ring.parse_scalar(t))
                        if ring.flavor == "poly" else int(t))
    coeffs = np.zeros(group.order, dtype=np.int64)
    for c, g in terms:
        if ring.flavor == "Z":
            coeffs[g] = (coeffs[g] + c) % ring.q
        else:
            c = int(ring.neg(-c)) if c < 0 else c
            coeffs[g] = ring.add(coeffs[g], c)
    return RAlgebraElement(group, ring, coeffs)
