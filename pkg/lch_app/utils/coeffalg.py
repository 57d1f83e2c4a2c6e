# lch_app/utils/coeffalg.py
"""
Exact arithmetic in the unital noncommutative algebra generated by Reeb chords
over Laurent polynomials in basepoint symbols (s_i, t_i).

Coefficients are sympy expressions kept in expanded form; basepoint symbols are
central, so a term is a pair (word of chord ids, Laurent coefficient).
"""
import logging
import re
from collections.abc import Mapping
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple

import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from .errors import AlgebraError

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
MIXED = 'mixed'

_NAME_RE = re.compile(r'[A-Za-z_][A-Za-z_0-9]*')
_KEY_RE = re.compile(r'(\d+)')


def natural_key(name: str):
    """Sort key that orders 's2' before 's10'."""
    return tuple(int(part) if part.isdigit() else part for part in _KEY_RE.split(name))


@lru_cache(maxsize=None)
def symbol(name: str) -> sympy.Symbol:
    return sympy.Symbol(name)


def laurent(value) -> sympy.Expr:
    """Coerce an int, string or sympy expression to an expanded Laurent polynomial."""
    if isinstance(value, str):
        return parse_laurent(value)
    if isinstance(value, int):
        return sympy.Integer(value)
    return sympy.expand(sympy.sympify(value))


def parse_laurent(text: str) -> sympy.Expr:
    """
    Parse text such as '-s1^-1*s2 + 3' into a Laurent polynomial.

    Args:
        text: Expression using '^' or '**' for powers and '*' for products

    Returns:
        Expanded sympy expression
    """
    cleaned = text.strip().replace('^', '**')
    if not cleaned:
        raise AlgebraError("empty coefficient expression")
    local = {name: symbol(name) for name in _NAME_RE.findall(cleaned)}
    try:
        expr = parse_expr(cleaned, local_dict=local, transformations=standard_transformations)
    except (SyntaxError, TypeError, ValueError) as exc:
        raise AlgebraError(f"cannot parse coefficient '{text}': {exc}") from exc
    expr = sympy.expand(expr)
    laurent_terms(expr)  # rejects non-Laurent input
    return expr


def laurent_terms(p) -> Dict[Tuple[Tuple[str, int], ...], int]:
    """Decompose p into {((symbol, exponent), ...): integer coefficient}."""
    p = sympy.expand(p)
    terms: Dict[Tuple[Tuple[str, int], ...], int] = {}
    if p == 0:
        return terms
    for monomial, coeff in p.as_coefficients_dict().items():
        if not coeff.is_Integer:
            raise AlgebraError(f"non-integer coefficient {coeff} in {p}")
        powers = []
        for base, exp in monomial.as_powers_dict().items():
            if base == 1:
                continue
            if not base.is_Symbol or not exp.is_Integer:
                raise AlgebraError(f"{p} is not a Laurent polynomial")
            powers.append((base.name, int(exp)))
        key = tuple(sorted(powers, key=lambda item: natural_key(item[0])))
        terms[key] = terms.get(key, 0) + int(coeff)
    return {key: value for key, value in terms.items() if value}


def is_unit_monomial(p) -> bool:
    """True for ±(monomial), the units of the Laurent ring."""
    terms = laurent_terms(p)
    return len(terms) == 1 and abs(next(iter(terms.values()))) == 1


def _monomial_text(powers) -> str:
    parts = []
    for name, exp in powers:
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return '*'.join(parts)


def _term_sort_key(powers):
    return tuple((natural_key(name), exp) for name, exp in powers)


def _term_body(magnitude: int, powers, word: Word) -> str:
    coef = ''
    mono = _monomial_text(powers)
    if magnitude != 1 or (not mono and not word):
        coef = str(magnitude)
    body = '*'.join(part for part in (coef, mono) if part)
    if word:
        letters = ' '.join(word)
        return f"{body} * {letters}" if body else letters
    return body


def _join_signed(pieces) -> str:
    if not pieces:
        return '0'
    out = []
    for index, (negative, body) in enumerate(pieces):
        if index == 0:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return ''.join(out)


def render_laurent(p) -> str:
    """Canonical text of a Laurent polynomial, e.g. '-s1^-1*s2 + 1'."""
    terms = laurent_terms(p)
    pieces = []
    for powers in sorted(terms, key=_term_sort_key):
        value = terms[powers]
        pieces.append((value < 0, _term_body(abs(value), powers, ())))
    return _join_signed(pieces)


def substitute_coefficients(p, mapping: Mapping) -> sympy.Expr:
    """Replace basepoint symbols by Laurent expressions (keys are symbol names)."""
    if not mapping:
        return sympy.expand(p)
    replacements = {symbol(name): laurent(value) for name, value in mapping.items()}
    return sympy.expand(sympy.sympify(p).xreplace(replacements))


def specialize(eta: Mapping, p) -> int:
    """
    Evaluate p under a sign assignment of its symbols.

    Args:
        eta: symbol name -> +1 or -1
        p: Laurent polynomial

    Returns:
        Integer value
    """
    value = substitute_coefficients(p, {name: int(sign) for name, sign in eta.items()})
    if not value.is_Integer:
        missing = sorted((str(s) for s in value.free_symbols), key=natural_key)
        raise AlgebraError(f"sign assignment does not cover {', '.join(missing)}")
    return int(value)


def symbols_of(p) -> Tuple[str, ...]:
    return tuple(sorted((str(s) for s in sympy.sympify(p).free_symbols), key=natural_key))


class GeneratorTable(Mapping):
    """Immutable map chord id -> grading shared by all elements of one algebra."""

    def __init__(self, gradings: Mapping):
        self._gradings = {str(name): int(value) for name, value in gradings.items()}
        self._order = tuple(sorted(self._gradings, key=natural_key))

    def __getitem__(self, name):
        return self._gradings[name]

    def __iter__(self):
        return iter(self._order)

    def __len__(self):
        return len(self._order)

    def __eq__(self, other):
        return isinstance(other, GeneratorTable) and self._gradings == other._gradings

    def __hash__(self):
        return hash(tuple((name, self._gradings[name]) for name in self._order))

    def __repr__(self):
        return f"GeneratorTable({dict((n, self._gradings[n]) for n in self._order)})"

    def word_grading(self, word: Word) -> int:
        return sum(self._gradings[letter] for letter in word)

    def word_key(self, word: Word):
        return (len(word), tuple(natural_key(letter) for letter in word))

    def restricted(self, names: Iterable[str]) -> 'GeneratorTable':
        keep = set(names)
        return GeneratorTable({n: g for n, g in self._gradings.items() if n in keep})


class AlgebraElement:
    """
    Finite sum of Laurent coefficient x word, in canonical form.

    Two elements are equal iff their canonical term maps agree; the ambient
    generator table travels with the element.
    """

    __slots__ = ('table', '_terms')

    def __init__(self, table: GeneratorTable, terms: Optional[Mapping] = None):
        self.table = table
        canonical = {}
        for word, coeff in (terms or {}).items():
            word = tuple(word)
            for letter in word:
                if letter not in table:
                    raise AlgebraError(f"unknown generator '{letter}'")
            value = sympy.expand(canonical.get(word, 0) + sympy.sympify(coeff))
            if value == 0:
                canonical.pop(word, None)
            else:
                canonical[word] = value
        self._terms = canonical

    # construction helpers

    @classmethod
    def zero(cls, table):
        return cls(table)

    @classmethod
    def unit(cls, table):
        return cls(table, {(): 1})

    @classmethod
    def constant(cls, table, coeff):
        return cls(table, {(): laurent(coeff)})

    @classmethod
    def generator(cls, table, name, coeff=1):
        return cls(table, {(name,): laurent(coeff)})

    @classmethod
    def monomial(cls, table, word: Word, coeff=1):
        return cls(table, {tuple(word): laurent(coeff)})

    # queries

    def terms(self) -> Dict[Word, sympy.Expr]:
        return dict(self._terms)

    def words(self):
        return sorted(self._terms, key=self.table.word_key)

    def coefficient(self, word: Word) -> sympy.Expr:
        return self._terms.get(tuple(word), sympy.Integer(0))

    def is_zero(self) -> bool:
        return not self._terms

    def grading(self):
        """Grading of a homogeneous element, None for zero, MIXED otherwise."""
        degrees = {self.table.word_grading(word) for word in self._terms}
        if not degrees:
            return None
        if len(degrees) > 1:
            return MIXED
        return degrees.pop()

    def flat_terms(self):
        """Yield (word, monomial powers, integer) in canonical order."""
        for word in self.words():
            coeffs = laurent_terms(self._terms[word])
            for powers in sorted(coeffs, key=_term_sort_key):
                yield word, powers, coeffs[powers]

    def render(self) -> str:
        pieces = []
        for word, powers, value in self.flat_terms():
            pieces.append((value < 0, _term_body(abs(value), powers, word)))
        return _join_signed(pieces)

    def letters(self):
        return sorted({letter for word in self._terms for letter in word}, key=natural_key)

    def coefficient_symbols(self):
        names = set()
        for coeff in self._terms.values():
            names.update(str(s) for s in coeff.free_symbols)
        return tuple(sorted(names, key=natural_key))

    # arithmetic

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return AlgebraElement.constant(self.table, other)
        if other.table is not self.table and other.table != self.table:
            raise AlgebraError("elements belong to different algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        merged = dict(self._terms)
        for word, coeff in other._terms.items():
            merged[word] = merged.get(word, 0) + coeff
        return AlgebraElement(self.table, merged)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.table, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        return mul(self, self._check(other))

    def __rmul__(self, other):
        return mul(self._check(other), self)

    def scale(self, coeff) -> 'AlgebraElement':
        value = laurent(coeff)
        return AlgebraElement(self.table, {w: c * value for w, c in self._terms.items()})

    def map_coefficients(self, mapping: Mapping) -> 'AlgebraElement':
        return AlgebraElement(
            self.table,
            {w: substitute_coefficients(c, mapping) for w, c in self._terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, (int, str)):
            other = AlgebraElement.constant(self.table, other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if set(self._terms) != set(other._terms):
            return False
        return all(sympy.expand(c - other._terms[w]) == 0 for w, c in self._terms.items())

    def __hash__(self):
        return hash(self.render())

    def __repr__(self):
        return f"AlgebraElement({self.render()!r})"

    def __str__(self):
        return self.render()


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product: words concatenate, central coefficients multiply."""
    y = x._check(y)
    product = {}
    for wx, cx in x._terms.items():
        for wy, cy in y._terms.items():
            word = wx + wy
            product[word] = product.get(word, 0) + cx * cy
    return AlgebraElement(x.table, product)


def power(x: AlgebraElement, exponent: int) -> AlgebraElement:
    result = AlgebraElement.unit(x.table)
    for _ in range(exponent):
        result = mul(result, x)
    return result


def leibniz_extend(gen_images: Mapping, x: AlgebraElement) -> AlgebraElement:
    """
    Extend generator images to the degree -1 derivation
    d(uv) = d(u)v + (-1)^|u| u d(v); coefficients are killed.

    Args:
        gen_images: chord id -> AlgebraElement in the same algebra
        x: element to differentiate

    Returns:
        The derivative of x
    """
    table = x.table
    total = AlgebraElement.zero(table)
    for word, coeff in x._terms.items():
        prefix_degree = 0
        for index, letter in enumerate(word):
            if letter not in gen_images:
                raise AlgebraError(f"missing generator image for '{letter}'")
            image = gen_images[letter]
            sign = -1 if prefix_degree % 2 else 1
            left = AlgebraElement.monomial(table, word[:index], coeff * sign)
            right = AlgebraElement.monomial(table, word[index + 1:])
            total = total + mul(mul(left, image), right)
            prefix_degree += table[letter]
    return total


def substitute(images: Mapping, x: AlgebraElement, target: GeneratorTable,
               coefficient_map: Optional[Mapping] = None) -> AlgebraElement:
    """
    Apply the unital algebra map defined by chord images and a coefficient map.

    Letters without an image are sent to themselves, which requires them to
    exist in the target table.
    """
    total = AlgebraElement.zero(target)
    for word, coeff in x._terms.items():
        term = AlgebraElement.constant(target, substitute_coefficients(coeff, coefficient_map or {}))
        for letter in word:
            if letter in images:
                image = images[letter]
            elif letter in target:
                image = AlgebraElement.generator(target, letter)
            else:
                raise AlgebraError(f"no image for generator '{letter}'")
            term = mul(term, image)
        total = total + term
    return total


def eval_hom(assignment: Mapping, x: AlgebraElement, coefficient_map: Optional[Mapping] = None):
    """
    Evaluate the unital multiplicative extension of a chord assignment.

    Args:
        assignment: chord id -> Laurent polynomial
        x: element to evaluate
        coefficient_map: optional symbol substitution applied to x's coefficients

    Returns:
        Laurent polynomial
    """
    total = sympy.Integer(0)
    for word, coeff in x._terms.items():
        value = substitute_coefficients(coeff, coefficient_map or {})
        for letter in word:
            if letter not in assignment:
                raise AlgebraError(f"unassigned generator '{letter}'")
            value = value * laurent(assignment[letter])
        total = total + value
    return sympy.expand(total)


def _split_signed_terms(text: str):
    depth = 0
    current = ''
    negative = False
    out = []
    previous = ''
    for char in text:
        if char == '(':
            depth += 1
        elif char == ')':
            depth -= 1
        if depth == 0 and char in '+-' and previous not in ('^', '*'):
            if current.strip():
                out.append((negative, current.strip()))
            negative = char == '-'
            current = ''
        else:
            current += char
        if not char.isspace():
            previous = char
    if current.strip():
        out.append((negative, current.strip()))
    return out


def parse_element(table: GeneratorTable, text: str) -> AlgebraElement:
    """
    Parse the canonical rendering back into an element, e.g. '1 + t - s1 * a1 b1'.

    Trailing tokens naming generators form the word; everything before them is
    the Laurent coefficient.
    """
    text = text.strip()
    if text in ('', '0'):
        return AlgebraElement.zero(table)
    total = AlgebraElement.zero(table)
    for negative, chunk in _split_signed_terms(text):
        tokens = chunk.replace('*', ' * ').split()
        word = []
        while tokens and tokens[-1] in table:
            word.insert(0, tokens.pop())
        while tokens and tokens[-1] == '*':
            tokens.pop()
        coeff_text = ''.join(tokens) or '1'
        for name in _NAME_RE.findall(coeff_text):
            if name in table:
                raise AlgebraError(f"generator '{name}' used as a coefficient in '{chunk}'")
        coeff = parse_laurent(coeff_text)
        if negative:
            coeff = -coeff
        total = total + AlgebraElement.monomial(table, tuple(word), coeff)
    return total
