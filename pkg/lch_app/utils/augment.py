# lch_app/utils/augment.py
"""
Augmentations, local systems and the invariants E(k, a), E_r(k, a).

An augmentation system sends degree-0 chords to Laurent polynomials in the
target symbols s_1..s_k and basepoint symbols to units; a local system
specializes every target symbol to +1 or -1.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy

from .coeffalg import (AlgebraElement, GeneratorTable, eval_hom, is_unit_monomial, laurent,
                       laurent_terms, natural_key, render_laurent, specialize,
                       substitute_coefficients, symbol, symbols_of)
from .conf import setting
from .errors import AugmentationError, SearchCapExceeded
from .lchdga import DGA, LIE_GROUP

logger = logging.getLogger(__name__)

DISTINGUISHED = 'DISTINGUISHED'
INCONCLUSIVE = 'INCONCLUSIVE'


# ---------------------------------------------------------------------------
# coefficient rings for enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientRing:
    """Z/p (``modulus``) or the integers bounded by ``bound``."""
    modulus: Optional[int] = None
    bound: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> 'CoefficientRing':
        """Read 'Z/2', 'Z/5' or 'Z:3' (integers in [-3, 3])."""
        text = text.replace(' ', '')
        if text.startswith('Z/'):
            try:
                p = int(text[2:])
            except ValueError:
                raise AugmentationError(f"bad modulus in ring '{text}'") from None
            if p < 2 or not sympy.isprime(p):
                raise AugmentationError(f"Z/{p} is not a prime field")
            return cls(modulus=p)
        if text.startswith('Z:'):
            try:
                bound = int(text[2:])
            except ValueError:
                raise AugmentationError(f"bad bound in ring '{text}'") from None
            if bound < 0:
                raise AugmentationError("the bound must be non-negative")
            return cls(bound=bound)
        raise AugmentationError(f"unknown ring '{text}'; use Z/p or Z:B")

    @property
    def name(self) -> str:
        return f"Z/{self.modulus}" if self.modulus else f"Z:{self.bound}"

    def chord_values(self) -> Tuple[int, ...]:
        if self.modulus:
            return tuple(range(self.modulus))
        return tuple(range(-self.bound, self.bound + 1))

    def unit_values(self) -> Tuple[int, ...]:
        if self.modulus:
            return tuple(range(1, self.modulus))
        return (-1, 1)

    def reduce(self, value: int) -> int:
        return value % self.modulus if self.modulus else value

    def inverse(self, value: int) -> int:
        if self.modulus:
            return pow(value, -1, self.modulus)
        return value


# ---------------------------------------------------------------------------
# augmentation systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AugmentationSystem:
    """
    A DGA map A -> R with R = Z[s_1^±1, ..., s_k^±1] (or a finite ring).

    Chords of non-zero degree go to 0; ``symbol_values`` gives the image of
    every basepoint symbol.
    """
    dga: DGA
    values: Mapping[str, sympy.Expr]
    symbol_values: Mapping[str, sympy.Expr]
    target_symbols: Tuple[str, ...] = ()
    modulus: Optional[int] = None
    label: str = ''

    @property
    def convention(self) -> str:
        return self.dga.convention

    def assignment(self) -> Dict[str, sympy.Expr]:
        out = {g: sympy.Integer(0) for g in self.dga.table}
        out.update(self.values)
        return out

    def apply(self, x: AlgebraElement) -> sympy.Expr:
        value = eval_hom(self.assignment(), x, self.symbol_values)
        if self.modulus:
            value = _reduce_mod(value, self.modulus)
        return value

    def __call__(self, chord: str) -> sympy.Expr:
        if chord in self.symbol_values:
            return laurent(self.symbol_values[chord])
        return self.apply(self.dga.generator(chord))

    def failures(self) -> Dict[str, str]:
        """Generators a with eps(d a) != 0."""
        bad = {}
        for chord in self.dga.table:
            value = self.apply(self.dga.boundary(chord))
            if value != 0:
                bad[chord] = render_laurent(value)
        return bad

    def verify(self) -> 'AugmentationSystem':
        bad = self.failures()
        if bad:
            chord = next(iter(bad))
            raise AugmentationError(f"eps(d {chord}) = {bad[chord]} is not zero")
        return self

    def as_dict(self) -> dict:
        return {
            'label': self.label,
            'convention': self.convention,
            'ring': f"Z/{self.modulus}" if self.modulus else 'Z',
            'values': {g: render_laurent(v) for g, v in sorted(self.values.items(), key=lambda kv: natural_key(kv[0]))},
            'symbols': {s: render_laurent(v) for s, v in sorted(self.symbol_values.items(), key=lambda kv: natural_key(kv[0]))},
        }

    def render(self) -> str:
        parts = [f"{g}={render_laurent(v)}" for g, v in sorted(self.values.items(), key=lambda kv: natural_key(kv[0]))]
        parts += [f"{s}={render_laurent(v)}" for s, v in sorted(self.symbol_values.items(), key=lambda kv: natural_key(kv[0]))]
        return ' '.join(parts)


def _reduce_mod(value, modulus: int) -> sympy.Expr:
    if value.is_Integer:
        return sympy.Integer(int(value) % modulus)
    return sympy.expand(sum(sympy.Integer(c % modulus) * m for m, c in value.as_coefficients_dict().items()))


def augmentation(g: DGA, values: Mapping, symbol_values: Mapping, target_symbols: Sequence[str] = (),
                 label: str = '', modulus: Optional[int] = None, check: bool = True) -> AugmentationSystem:
    """
    Build and verify an augmentation system.

    Args:
        g: source DGA
        values: degree-0 chord -> Laurent polynomial (text or sympy)
        symbol_values: basepoint symbol -> unit Laurent monomial
        target_symbols: symbols of the target ring; inferred when empty
        check: re-verify eps(d a) = 0 on every generator
    """
    chord_values = {}
    for chord, value in values.items():
        if chord not in g.table:
            raise AugmentationError(f"unknown generator '{chord}'")
        if g.table[chord] != 0:
            raise AugmentationError(f"generator '{chord}' has degree {g.table[chord]}, not 0")
        chord_values[chord] = laurent(value)
    units = {}
    for name, value in symbol_values.items():
        value = laurent(value)
        if not is_unit_monomial(value) and not (modulus and value.is_Integer and int(value) % modulus):
            raise AugmentationError(f"image of {name} must be a unit, got {render_laurent(value)}")
        units[name] = value
    if not target_symbols:
        found = set()
        for value in list(chord_values.values()) + list(units.values()):
            found.update(symbols_of(value))
        target_symbols = tuple(sorted(found, key=natural_key))
    system = AugmentationSystem(g, chord_values, units, tuple(target_symbols), modulus, label)
    return system.verify() if check else system


# ---------------------------------------------------------------------------
# enumeration over finite search spaces
# ---------------------------------------------------------------------------

class _Constraint:
    """eps(d a) as an integer polynomial in chord and symbol values."""

    def __init__(self, chord: str, element: AlgebraElement):
        self.chord = chord
        self.terms = []
        variables = set()
        for word, powers, value in element.flat_terms():
            self.terms.append((value, powers, word))
            variables.update(word)
            variables.update(name for name, _ in powers)
        self.variables = variables

    def evaluate(self, values: Mapping[str, int], ring: CoefficientRing) -> int:
        total = 0
        for coeff, powers, word in self.terms:
            term = coeff
            for name, exp in powers:
                base = values[name] if exp > 0 else ring.inverse(values[name])
                term *= base ** abs(exp)
            for letter in word:
                term *= values[letter]
                if term == 0:
                    break
            total += term
        return ring.reduce(total)


def enumerate_augmentations(g: DGA, ring, cap: Optional[int] = None) -> List[AugmentationSystem]:
    """
    All augmentations with constant values in a finite search space.

    Args:
        g: DGA
        ring: CoefficientRing or its text form ('Z/2', 'Z/p', 'Z:B')
        cap: maximal number of search nodes (LCH_AUGMENTATION_SEARCH_CAP)

    Returns:
        Verified systems in lexicographic order of (symbols, chords) values
    """
    if isinstance(ring, str):
        ring = CoefficientRing.parse(ring)
    cap = cap or setting('LCH_AUGMENTATION_SEARCH_CAP')
    chords = list(g.generators_in_degree(0))
    zero = AlgebraElement.zero(g.table)
    constraints = []
    for chord in g.table:
        image = g.boundary(chord)
        if g.table[chord] != 1 or image == zero:
            continue
        degree_zero = AlgebraElement(g.table, {w: c for w, c in image.terms().items()
                                               if all(g.table[x] == 0 for x in w)})
        constraints.append(_Constraint(chord, degree_zero))
    order = list(g.symbols) + chords
    position = {name: index for index, name in enumerate(order)}
    ready: Dict[int, List[_Constraint]] = {}
    for constraint in constraints:
        unknown = [v for v in constraint.variables if v not in position]
        if unknown:
            raise AugmentationError(f"d({constraint.chord}) uses symbols {unknown} outside the DGA")
        last = max((position[v] for v in constraint.variables), default=-1)
        ready.setdefault(last, []).append(constraint)

    for constraint in ready.get(-1, []):
        if constraint.evaluate({}, ring) != 0:
            logger.info("%s has no augmentations over %s: d(%s) has a non-zero constant", g.name,
                        ring.name, constraint.chord)
            return []

    found = []
    values: Dict[str, int] = {}
    nodes = 0

    def extend(index):
        nonlocal nodes
        if index == len(order):
            found.append(dict(values))
            return
        name = order[index]
        candidates = ring.unit_values() if index < len(g.symbols) else ring.chord_values()
        for candidate in candidates:
            nodes += 1
            if nodes > cap:
                raise SearchCapExceeded(f"augmentation search over {ring.name} exceeded {cap} nodes")
            values[name] = candidate
            if all(c.evaluate(values, ring) == 0 for c in ready.get(index, ())):
                extend(index + 1)
            del values[name]

    extend(0)
    systems = []
    for number, assignment in enumerate(found, start=1):
        systems.append(augmentation(
            g,
            {c: assignment[c] for c in chords},
            {s: assignment[s] for s in g.symbols},
            (), label=f"{ring.name}#{number}", modulus=ring.modulus,
        ))
    logger.info("%d augmentations of %s over %s (%d nodes)", len(systems), g.name, ring.name, nodes)
    return systems


def augmentation_counts(g: DGA, primes: Sequence[int] = (2, 3, 5)) -> Dict[str, int]:
    return {f"Z/{p}": len(enumerate_augmentations(g, CoefficientRing(modulus=p))) for p in primes}


# ---------------------------------------------------------------------------
# local systems and restricted augmentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalSystem:
    """A choice of sign for every target symbol."""
    values: Mapping[str, int]

    def apply(self, p) -> int:
        return specialize(self.values, p)

    def render(self) -> str:
        return ' '.join(f"{k}={'+' if v > 0 else '-'}1"
                        for k, v in sorted(self.values.items(), key=lambda kv: natural_key(kv[0])))


def local_systems(symbols: Sequence[str]) -> Iterable[LocalSystem]:
    """Every sign assignment of ``symbols``; refuses more than LCH_LOCAL_SYSTEM_MAX_SYMBOLS."""
    limit = setting('LCH_LOCAL_SYSTEM_MAX_SYMBOLS')
    if len(symbols) > limit:
        raise SearchCapExceeded(f"{len(symbols)} symbols exceed the exact local-system limit of {limit}")
    for signs in itertools.product((1, -1), repeat=len(symbols)):
        yield LocalSystem(dict(zip(symbols, signs)))


@dataclass(frozen=True)
class Restriction:
    restricted: bool
    relations: Tuple[str, ...]
    constraints: Tuple[sympy.Expr, ...] = field(default=(), repr=False)

    def admits(self, eta: LocalSystem) -> bool:
        return all(eta.apply(c) == 1 for c in self.constraints)


def component_products(system: AugmentationSystem) -> Dict[int, sympy.Expr]:
    """Image of the product of basepoint symbols on each link component."""
    components = system.dga.symbol_components
    if not components:
        return {index: laurent(value) for index, (_, value) in
                enumerate(sorted(system.symbol_values.items(), key=lambda kv: natural_key(kv[0])), start=1)}
    products: Dict[int, sympy.Expr] = {}
    for name, component in components.items():
        value = laurent(system.symbol_values.get(name, symbol(name)))
        products[component] = sympy.expand(products.get(component, sympy.Integer(1)) * value)
    return dict(sorted(products.items()))


def _relation_text(value: sympy.Expr, target: int) -> Tuple[str, sympy.Expr]:
    """Relation 'value = target' as text and as an expression that must specialize to 1."""
    normalized = sympy.expand(value * target)
    terms = laurent_terms(normalized)
    if len(terms) == 1:
        powers, coeff = next(iter(terms.items()))
        if all(e < 0 for _, e in powers):
            powers = tuple((n, -e) for n, e in powers)
        monomial = sympy.Mul(*[symbol(n) ** e for n, e in powers])
        if coeff == 1:
            return f"{render_laurent(monomial)} = 1", normalized
        if coeff == -1:
            return f"{render_laurent(monomial)} = -1", normalized
    return f"{render_laurent(value)} = {target}", normalized


def is_restricted(system: AugmentationSystem) -> Restriction:
    """
    Decide whether some local system sends every link component's basepoint
    product to -1 (Lie-group spin) or +1 (null-cobordant spin).

    Returns:
        Restriction with the relations the target symbols must satisfy
    """
    target = -1 if system.convention == LIE_GROUP else 1
    relations, constraints = [], []
    for component, value in component_products(system).items():
        if value.is_Integer:
            if system.modulus:
                ok = (int(value) - target) % system.modulus == 0
            else:
                ok = int(value) == target
            if not ok:
                return Restriction(False, (f"component {component}: {render_laurent(value)} != {target}",))
            continue
        text, constraint = _relation_text(value, target)
        relations.append(text)
        constraints.append(constraint)
    if not constraints:
        return Restriction(True, tuple(relations), ())
    names = sorted({n for c in constraints for n in symbols_of(c)}, key=natural_key)
    for eta in local_systems(names):
        if all(eta.apply(c) == 1 for c in constraints):
            return Restriction(True, tuple(relations), tuple(constraints))
    return Restriction(False, tuple(relations), tuple(constraints))


def reparametrize(system: AugmentationSystem, signs: Sequence[int], matrix: Sequence[Sequence[int]],
                  label: str = '') -> AugmentationSystem:
    """
    Change target symbols by s_i -> signs[i] * prod_j s_j^matrix[i][j].

    The matrix must be unimodular so that the substitution is a ring automorphism.
    """
    k = len(system.target_symbols)
    if len(signs) != k or len(matrix) != k or any(len(row) != k for row in matrix):
        raise AugmentationError(f"reparametrization needs {k} signs and a {k}x{k} matrix")
    if abs(sympy.Matrix(matrix).det()) != 1:
        raise AugmentationError("reparametrization matrix is not invertible over Z")
    mapping = {}
    for i, name in enumerate(system.target_symbols):
        image = sympy.Integer(signs[i])
        for j, other in enumerate(system.target_symbols):
            image *= symbol(other) ** matrix[i][j]
        mapping[name] = image
    values = {g: substitute_coefficients(v, mapping) for g, v in system.values.items()}
    units = {s: substitute_coefficients(v, mapping) for s, v in system.symbol_values.items()}
    return AugmentationSystem(system.dga, values, units, system.target_symbols, system.modulus,
                              label or f"{system.label}'")


def _same_values(first: AugmentationSystem, second: AugmentationSystem) -> bool:
    for table_a, table_b in ((first.values, second.values), (first.symbol_values, second.symbol_values)):
        if set(table_a) != set(table_b):
            return False
        if any(sympy.expand(laurent(table_a[k]) - laurent(table_b[k])) != 0 for k in table_a):
            return False
    return True


def equivalent_systems(first: AugmentationSystem, second: AugmentationSystem, entry_bound: int = 1):
    """
    Search a change of target symbols carrying ``first`` to ``second``.

    Matrices with entries in [-entry_bound, entry_bound] are tried, so a
    negative answer only covers that range.

    Returns:
        (signs, matrix) or None
    """
    if first.target_symbols != second.target_symbols:
        return None
    k = len(first.target_symbols)
    if _same_values(first, second):
        return (1,) * k, [[int(i == j) for j in range(k)] for i in range(k)]
    # relabelings first: k! * 2^k candidates instead of (2b+1)^(k*k)
    for order in itertools.permutations(range(k)):
        matrix = [[int(j == order[i]) for j in range(k)] for i in range(k)]
        for signs in itertools.product((1, -1), repeat=k):
            if _same_values(reparametrize(first, signs, matrix), second):
                return signs, matrix
    entries = range(-entry_bound, entry_bound + 1)
    budget = setting('LCH_AUGMENTATION_SEARCH_CAP')
    tried = 0
    for flat in itertools.product(entries, repeat=k * k):
        matrix = [list(flat[i * k:(i + 1) * k]) for i in range(k)]
        if abs(sympy.Matrix(matrix).det()) != 1:
            continue
        for signs in itertools.product((1, -1), repeat=k):
            tried += 1
            if tried > budget:
                raise SearchCapExceeded("reparametrization search exceeded its cap")
            if _same_values(reparametrize(first, signs, matrix), second):
                return signs, matrix
    return None


# ---------------------------------------------------------------------------
# the loop monodromy of the lambda_1 family
# ---------------------------------------------------------------------------

LAMBDA1_DEGREE_ZERO = ('b1', 'f1', 'f2', 'f3', 'f4', 'g1', 'g2', 'g3', 'g4')


def degree_zero_presentation(symbol_components: Mapping[str, int], name: str = 'lambda1/deg0') -> DGA:
    """
    The degree-0 chords of lambda_1 with zero differential.

    Orbit and E computations only see degree-0 chords, and the cycle g2
    needs no other generator.
    """
    table = GeneratorTable({g: 0 for g in LAMBDA1_DEGREE_ZERO})
    differential = {g: AlgebraElement.zero(table) for g in table}
    symbols = tuple(sorted(symbol_components, key=natural_key))
    return DGA(name, table, differential, symbols, 'presentation', LIE_GROUP, {},
               dict(symbol_components))


@dataclass(frozen=True, eq=False)
class LoopMonodromy:
    """An endomorphism of a DGA induced by a Legendrian loop, with cached powers."""
    chain_map: 'ChainMap'
    label: str = ''

    @property
    def dga(self) -> DGA:
        return self.chain_map.source

    def power(self, k: int):
        return _power(self, k)

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        return self.chain_map.apply(x)


@lru_cache(maxsize=64)
def _power(phi: LoopMonodromy, k: int):
    if k < 0:
        raise AugmentationError("orbit index must be non-negative")
    if k == 0:
        from .cobord import ChainMap
        return ChainMap.identity(phi.dga)
    return phi.chain_map.compose(_power(phi, k - 1))


def _matrix_images(table: GeneratorTable, matrix, names: Sequence[str]) -> Dict[str, AlgebraElement]:
    images = {}
    for i, name in enumerate(names):
        total = AlgebraElement.zero(table)
        for j, other in enumerate(names):
            total = total + matrix[i][j] * AlgebraElement.generator(table, other)
        images[name] = total
    return images


def lambda1_matrices(table: GeneratorTable):
    """M, M^-1 and M^T over the chord algebra, entries as algebra elements."""
    def const(text):
        return AlgebraElement.constant(table, text)

    b1 = AlgebraElement.generator(table, 'b1')
    zero = AlgebraElement.zero(table)
    m = [[zero, const('t1')], [const('t2'), -(const('t1') * b1)]]
    m_inverse = [[const('t2^-1') * b1, const('t2^-1')], [const('t1^-1'), zero]]
    m_transpose = [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
    return m, m_inverse, m_transpose


def lambda1_inverse_check(table: GeneratorTable) -> bool:
    """M M^-1 = M^-1 M = Id over the chord algebra."""
    m, m_inverse, _ = lambda1_matrices(table)
    zero = AlgebraElement.zero(table)
    one = AlgebraElement.unit(table)
    for left, right in ((m, m_inverse), (m_inverse, m)):
        for i in range(2):
            for j in range(2):
                entry = sum((left[i][k] * right[k][j] for k in range(2)), zero)
                if entry != (one if i == j else zero):
                    return False
    return True


def loop_monodromy_lambda1(g: DGA) -> LoopMonodromy:
    """
    The monodromy Phi of the lambda_1 loop: b1 and t_i fixed,
    (g2, g4) and (f2, f4) -> M^-1 (.), (g3, g1) and (f3, f1) -> M^T (.),
    and C -> M C M^-1 on the c_ij block when those chords are present.

    The chain-map identity is checked on ``g``.
    """
    from .cobord import ChainMap

    missing = [x for x in LAMBDA1_DEGREE_ZERO if x not in g.table]
    if missing:
        raise AugmentationError(f"{g.name} lacks the chords {missing}")
    table = g.table
    if not lambda1_inverse_check(table):
        raise AugmentationError("the loop matrices M and M^-1 are not inverse")
    m, m_inverse, m_transpose = lambda1_matrices(table)
    images = {}
    images.update(_matrix_images(table, m_inverse, ('g2', 'g4')))
    images.update(_matrix_images(table, m_inverse, ('f2', 'f4')))
    images.update(_matrix_images(table, m_transpose, ('g3', 'g1')))
    images.update(_matrix_images(table, m_transpose, ('f3', 'f1')))
    block = [['c11', 'c12'], ['c21', 'c22']]
    if all(c in table for row in block for c in row):
        c = [[AlgebraElement.generator(table, x) for x in row] for row in block]
        left = [[sum((m[i][k] * c[k][j] for k in range(2)), AlgebraElement.zero(table)) for j in range(2)]
                for i in range(2)]
        for i in range(2):
            for j in range(2):
                images[block[i][j]] = sum((left[i][k] * m_inverse[k][j] for k in range(2)),
                                          AlgebraElement.zero(table))
    phi = ChainMap(g, g, images, label='Phi')
    phi.verify()
    return LoopMonodromy(phi, 'Phi')


def orbit(system: AugmentationSystem, phi: LoopMonodromy, k: int) -> AugmentationSystem:
    """eps o Phi^k, re-verified."""
    if k < 0:
        raise AugmentationError("orbit index must be non-negative")
    if phi.dga.table != system.dga.table:
        raise AugmentationError("the loop and the augmentation live on different DGAs")
    if k == 0:
        return system
    power = phi.power(k)
    values = {chord: system.apply(power.image(chord)) for chord in system.values}
    result = AugmentationSystem(system.dga, values, system.symbol_values, system.target_symbols,
                                system.modulus, f"{system.label} o Phi^{k}")
    return result.verify()


def orbit_family(system: AugmentationSystem, phi: LoopMonodromy, kmax: int) -> List[AugmentationSystem]:
    return [orbit(system, phi, k) for k in range(kmax + 1)]


def e_invariant(family: Sequence[AugmentationSystem], chord: str, restricted: bool = False) -> List[int]:
    """
    E(k, a) = max over local systems eta of |eta(eps_k(a))|, one value per system.

    In restricted mode only local systems satisfying every system's
    restriction relations are used.
    """
    values = []
    for system in family:
        if system.dga.table.get(chord) != 0:
            raise AugmentationError(f"'{chord}' is not a degree-0 chord")
        target = system(chord)
        restriction = is_restricted(system) if restricted else None
        if restriction is not None and not restriction.restricted:
            raise AugmentationError(f"{system.label or 'system'} is not restricted")
        best = None
        for eta in local_systems(system.target_symbols):
            if restriction is not None and not restriction.admits(eta):
                continue
            value = abs(eta.apply(target))
            best = value if best is None else max(best, value)
        values.append(best if best is not None else 0)
    return values


@dataclass(frozen=True)
class Verdict:
    verdict: str
    chord: str
    values: Tuple[int, int]

    def as_dict(self):
        return {'verdict': self.verdict, 'chord': self.chord, 'values': list(self.values)}


def distinguish_by_cycle(first: AugmentationSystem, second: AugmentationSystem, chord: str) -> Verdict:
    """
    Compare the maximal |eta(eps(a))| of two systems at a cycle a.

    Different maxima prove the systems differ; equal maxima decide nothing.
    """
    if first.dga.table != second.dga.table:
        raise AugmentationError("the systems have different source DGAs")
    if not first.dga.boundary(chord).is_zero():
        raise AugmentationError(f"d({chord}) = {first.dga.boundary(chord).render()} is not zero")
    one, two = e_invariant([first], chord)[0], e_invariant([second], chord)[0]
    verdict = DISTINGUISHED if one != two else INCONCLUSIVE
    return Verdict(verdict, chord, (one, two))


def lift_restricted(system: AugmentationSystem, t_i: str, t_j: str, label: str = 's',
                    merge: Optional[bool] = None) -> Tuple[AugmentationSystem, LocalSystem]:
    """
    Lift a restricted system across a pinch that joins the strands of t_i and t_j.

    eps+(t_i) = eps-(t_i) s and eps+(t_j) = -eps-(t_j) s^-1. When t_i and t_j
    sit on one component the pinch splits it and eta(s) = -eps-(t_i) makes
    both new components restricted; when they sit on two components the pinch
    merges them and eps+(t_i t_j) = -1 for every eta.

    Returns:
        (eps+ with s in its target, the local system chosen on s)
    """
    restriction = is_restricted(system)
    if not restriction.restricted:
        raise AugmentationError("only restricted systems lift")
    if merge is None:
        components = system.dga.symbol_components
        if t_i not in components or t_j not in components:
            raise AugmentationError("component data needed to tell a merge from a split")
        merge = components[t_i] != components[t_j]
    minus_i, minus_j = laurent(system(t_i)), laurent(system(t_j))
    s = symbol(label)
    units = dict(system.symbol_values)
    units[t_i] = sympy.expand(minus_i * s)
    units[t_j] = sympy.expand(-minus_j / s)
    targets = tuple(sorted(set(system.target_symbols) | {label}, key=natural_key))
    lifted = AugmentationSystem(system.dga, system.values, units, targets, system.modulus,
                                f"{system.label}+{label}")
    if merge:
        eta_s = 1
    else:
        if not minus_i.is_Integer:
            raise AugmentationError(f"eps-({t_i}) = {render_laurent(minus_i)} must be a sign to fix eta(s)")
        eta_s = -int(minus_i)
    return lifted, LocalSystem({label: eta_s})


# ---------------------------------------------------------------------------
# matrix cross-checks
# ---------------------------------------------------------------------------

MATRIX_IDENTITIES = (
    ('[[-2,-1],[1,0]]^k (1,1) = (-1)^k (2k+1, 1-2k)', [[-2, -1], [1, 0]], (1, 1),
     lambda k: (-1) ** k * sympy.Matrix([2 * k + 1, 1 - 2 * k])),
    ('[[2,1],[-1,0]]^k (1,1) = (1+2k, 1-2k)', [[2, 1], [-1, 0]], (1, 1),
     lambda k: sympy.Matrix([1 + 2 * k, 1 - 2 * k])),
    ('[[2,-1],[1,0]]^k (1,-1) = (1+2k, 2k-1)', [[2, -1], [1, 0]], (1, -1),
     lambda k: sympy.Matrix([1 + 2 * k, 2 * k - 1])),
    ('[[-2,1],[-1,0]]^k (1,-1) = (-1)^k (1+2k, 2k-1)', [[-2, 1], [-1, 0]], (1, -1),
     lambda k: (-1) ** k * sympy.Matrix([1 + 2 * k, 2 * k - 1])),
)


def matrix_identity_check(kmax: int = 10) -> List[Tuple[str, int, bool]]:
    """Evaluate the four closed forms of the signed orbit matrices for k = 0..kmax."""
    rows = []
    for text, matrix, vector, closed_form in MATRIX_IDENTITIES:
        a, v = sympy.Matrix(matrix), sympy.Matrix(vector)
        for k in range(kmax + 1):
            rows.append((text, k, (a ** k) * v == closed_form(k)))
    return rows


def epsilon_matrix(system: AugmentationSystem, matrix) -> sympy.Matrix:
    return sympy.Matrix([[system.apply(entry) for entry in row] for row in matrix])


def orbit_recurrence_check(system: AugmentationSystem, phi: LoopMonodromy, kmax: int,
                           pair: Tuple[str, str] = ('g2', 'g4')) -> List[Tuple[int, bool]]:
    """
    Compare eps o Phi^k on a pair of chords with eps(M^-1)^k applied to
    (eps(first), eps(second)).
    """
    _, m_inverse, _ = lambda1_matrices(system.dga.table)
    step = epsilon_matrix(system, m_inverse)
    start = sympy.Matrix([system(pair[0]), system(pair[1])])
    rows = []
    for k in range(kmax + 1):
        family = orbit(system, phi, k)
        direct = sympy.Matrix([family(pair[0]), family(pair[1])])
        predicted = (step ** k) * start
        same = all(sympy.expand(x - y) == 0 for x, y in zip(direct, predicted))
        rows.append((k, same))
    return rows
