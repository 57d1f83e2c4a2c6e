# lch_app/utils/cobord.py
"""
Chain maps induced by elementary exact Lagrangian cobordisms.

Every map here is checked against the chain-map identity
phi(d_source x) = d_target(phi(x)) before it is handed out; a decomposable
filling is a script of such moves whose composite, once the diagram is
empty, is an augmentation.
"""
import dataclasses
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .coeffalg import (MIXED, AlgebraElement, GeneratorTable, is_unit_monomial, laurent,
                       laurent_terms, mul, natural_key, parse_element, render_laurent, substitute,
                       substitute_coefficients, symbol, symbols_of)
from .conf import setting
from .diagram import (R3_FORWARD, R3_REVERSE, Dart, Diagram, braid_r3, remove_bigon,
                      resolve_crossing, slide_basepoint, sublink)
from .errors import (AlgebraError, ChainMapError, DGAError, DiskEnumerationError, LCHError,
                     MoveError, PinchError)
from .lchdga import (BASEPOINT, CONCAVE, DGA, POSITIVE, Disk, _DiskSearch,
                     check_d_squared, differential)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ChainMap:
    """
    A unital DGA map A(source) -> A(target).

    Generators missing from ``images`` go to themselves; ``coefficient_map``
    sends basepoint symbols of the source to Laurent monomials of the target.
    """
    source: DGA
    target: DGA
    images: Mapping[str, AlgebraElement] = field(default_factory=dict)
    coefficient_map: Mapping[str, sympy.Expr] = field(default_factory=dict)
    label: str = ''

    @classmethod
    def identity(cls, g: DGA) -> 'ChainMap':
        return cls(g, g, {}, {}, 'id')

    def image(self, chord: str) -> AlgebraElement:
        if chord not in self.source.table:
            raise ChainMapError(f"'{chord}' is not a generator of {self.source.name}")
        if chord in self.images:
            return self.images[chord]
        if chord in self.target.table:
            return AlgebraElement.generator(self.target.table, chord)
        raise ChainMapError(f"{self.label or 'map'} has no image for '{chord}'")

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        images = {g: self.image(g) for g in x.letters()}
        try:
            return substitute(images, x, self.target.table, self.coefficient_map)
        except AlgebraError as exc:
            raise ChainMapError(f"{self.label or 'map'}: {exc}") from exc

    def coefficient(self, name: str) -> sympy.Expr:
        return laurent(self.coefficient_map.get(name, symbol(name)))

    def residues(self) -> Dict[str, str]:
        """Generators where the chain-map identity or degree preservation fails."""
        bad = {}
        for chord in self.source.table:
            image = self.image(chord)
            degree = image.grading()
            if degree is not None and (degree == MIXED or degree != self.source.table[chord]):
                bad[chord] = f"image {image.render()} does not have degree {self.source.table[chord]}"
                continue
            residue = self.apply(self.source.boundary(chord)) - self.target.d(image)
            if not residue.is_zero():
                bad[chord] = residue.render()
        return bad

    def verify(self) -> 'ChainMap':
        bad = self.residues()
        if bad:
            chord = next(iter(bad))
            logger.warning("%s fails the chain-map identity at %s", self.label or 'map', ', '.join(bad))
            raise ChainMapError(f"{self.label or 'map'}: phi(d {chord}) - d(phi {chord}) = {bad[chord]}")
        return self

    def compose(self, first: 'ChainMap') -> 'ChainMap':
        """self o first."""
        if first.target.table != self.source.table:
            raise ChainMapError(f"cannot compose {self.label} after {first.label}: generator sets differ")
        images = {g: self.apply(first.image(g)) for g in first.source.table}
        coefficients = {name: substitute_coefficients(value, self.coefficient_map)
                        for name, value in first.coefficient_map.items()}
        for name, value in self.coefficient_map.items():
            coefficients.setdefault(name, value)
        label = self.label if first.label in ('', 'id') else f"{self.label} o {first.label}"
        return ChainMap(first.source, self.target, images, coefficients, label)

    def inverse(self) -> 'ChainMap':
        """Inverse of a map sending every generator to a unit multiple of itself."""
        if self.coefficient_map:
            raise ChainMapError("only maps fixing the coefficients can be inverted")
        if self.source.table != self.target.table:
            raise ChainMapError("only maps between DGAs on the same generators can be inverted")
        images = {}
        for chord in self.source.table:
            terms = self.image(chord).terms()
            coeff = terms.get((chord,))
            if len(terms) != 1 or coeff is None or not is_unit_monomial(coeff):
                raise ChainMapError(f"{self.label}: image of {chord} is not a unit multiple of {chord}")
            images[chord] = AlgebraElement.generator(self.source.table, chord, sympy.expand(1 / coeff))
        return ChainMap(self.target, self.source, images, {}, f"({self.label})^-1")

    def as_dict(self) -> dict:
        return {
            'label': self.label,
            'source': self.source.name,
            'target': self.target.name,
            'images': {g: self.image(g).render() for g in self.source.table},
            'coefficients': {k: render_laurent(laurent(v)) for k, v in sorted(
                self.coefficient_map.items(), key=lambda kv: natural_key(kv[0]))},
        }


def _transported(g: DGA, images: Mapping[str, AlgebraElement], inverse_images: Mapping[str, AlgebraElement],
                 name: str) -> DGA:
    """The DGA on the same generators with differential phi o d o phi^-1."""
    table = g.table
    differential_images = {}
    for chord in table:
        preimage = substitute(inverse_images, AlgebraElement.generator(table, chord), table)
        differential_images[chord] = substitute(images, g.d(preimage), table)
    moved = dataclasses.replace(g, name=name, differential=differential_images, disks={})
    report = check_d_squared(moved)
    if not report.passed:
        raise ChainMapError(f"transported differential on {name} has d^2 != 0")
    return moved


# ---------------------------------------------------------------------------
# Legendrian isotopy moves
# ---------------------------------------------------------------------------

def _r3_images(table: GeneratorTable, site: Sequence[str], direction: str):
    """Images and their inverses for the R3 matrices."""
    if direction == R3_FORWARD:
        b, a, c = site
        images = {c: parse_element(table, a), a: parse_element(table, f"{c} + {b} {a}")}
        inverse = {a: parse_element(table, c), c: parse_element(table, f"{a} - {b} {c}")}
    elif direction == R3_REVERSE:
        c, a, b = site
        images = {a: parse_element(table, f"-{b} {a} + {c}"), c: parse_element(table, a)}
        inverse = {a: parse_element(table, c), c: parse_element(table, f"{a} + {b} {c}")}
    else:
        raise MoveError(f"R3 direction must be '{R3_FORWARD}' or '{R3_REVERSE}', got '{direction}'")
    return images, inverse, (b, a, c)


def r3_map(g: DGA, site: Sequence[str], direction: str = R3_FORWARD, target: Optional[DGA] = None) -> ChainMap:
    """
    Chain map of a Legendrian R3 move.

    Forward (s1 s2 s1 -> s2 s1 s2, site b, a, c): c -> a, a -> c + b a.
    Reverse (s2 s1 s2 -> s1 s2 s1, site c, a, b): a -> -b a + c, c -> a.
    Every other generator, b included, is fixed.

    Args:
        g: DGA before the move
        site: the three chords in braid order
        direction: 'forward' or 'reverse'
        target: DGA after the move; transported from ``g`` when omitted
    """
    site = tuple(site)
    if len(site) != 3 or len(set(site)) != 3:
        raise MoveError(f"R3 site must name three distinct chords, got {list(site)}")
    missing = [x for x in site if x not in g.table]
    if missing:
        raise MoveError(f"R3 site chords {missing} are not generators of {g.name}")
    images, inverse, (b, a, c) = _r3_images(g.table, site, direction)
    if g.table[b] != 0 or g.table[a] != g.table[c]:
        raise MoveError(f"R3 site {list(site)} needs |{b}| = 0 and |{a}| = |{c}|")
    if target is None:
        target = _transported(g, images, inverse, f"{g.name}/r3")
    elif target.table != g.table:
        raise MoveError("R3 keeps the generator set; the target DGA has other generators")
    label = f"r3({','.join(site)};{direction})"
    phi = ChainMap(g, target, {k: AlgebraElement(target.table, v.terms()) for k, v in images.items()}, {}, label)
    return phi.verify()


def r2_remove_map(g: DGA, a: str, b: str, target: Optional[DGA] = None) -> ChainMap:
    """
    Destabilization at a pair with d a = u b + v, u a unit and v free of a, b.

    a -> 0 and b -> -u^-1 v; every other generator is fixed. Without a
    ``target`` the quotient differential x -> phi(d x) is used.
    """
    for chord in (a, b):
        if chord not in g.table:
            raise MoveError(f"'{chord}' is not a generator of {g.name}")
    if g.table[a] != g.table[b] + 1:
        raise MoveError(f"R2 pair needs |{a}| = |{b}| + 1, got {g.table[a]} and {g.table[b]}")
    boundary = g.boundary(a).terms()
    unit = boundary.pop((b,), None)
    if unit is None or not is_unit_monomial(unit):
        raise MoveError(f"d({a}) = {g.boundary(a).render()} has no unit multiple of {b}")
    for word in boundary:
        if a in word or b in word:
            raise MoveError(f"d({a}) has a term {' '.join(word)} containing {a} or {b}")
    remaining = [x for x in g.table if x not in (a, b)]
    table = g.table.restricted(remaining)
    rest = AlgebraElement(table, boundary)
    images = {a: AlgebraElement.zero(table), b: rest.scale(-1 / unit)}
    label = f"r2({a},{b})"
    if target is None:
        partial = ChainMap(g, dataclasses.replace(g, table=table, differential={}, disks={}), images, {}, label)
        quotient = {x: partial.apply(g.boundary(x)) for x in remaining}
        target = dataclasses.replace(g, name=f"{g.name}-{a}{b}", table=table, differential=quotient,
                                     chord_components={x: v for x, v in g.chord_components.items()
                                                       if x in table},
                                     disks={})
        if not check_d_squared(target).passed:
            raise MoveError(f"destabilizing {a}, {b} does not leave a differential")
    elif target.table != table:
        raise MoveError(f"the target DGA must have exactly the generators other than {a}, {b}")
    return ChainMap(g, target, images, {}, label).verify()


BASEPOINT_SIDES = {'left': 'left', 'over-left': 'left', 'right': 'right', 'over-right': 'right'}


def basepoint_move_map(g: DGA, a: str, label: str, side: str, target: Optional[DGA] = None) -> ChainMap:
    """
    Moving the basepoint ``label`` over the crossing ``a``: a -> s a on the
    left, a -> a s^-1 on the right.
    """
    if a not in g.table:
        raise MoveError(f"'{a}' is not a generator of {g.name}")
    if side not in BASEPOINT_SIDES:
        raise MoveError(f"side must be one of {sorted(BASEPOINT_SIDES)}, got '{side}'")
    s = symbol(label)
    coeff = s if BASEPOINT_SIDES[side] == 'left' else 1 / s
    images = {a: AlgebraElement.generator(g.table, a, coeff)}
    phi_label = f"bp({label}@{a};{BASEPOINT_SIDES[side]})"
    if target is None:
        inverse = {a: AlgebraElement.generator(g.table, a, 1 / coeff)}
        target = _transported(g, images, inverse, f"{g.name}/{phi_label}")
    elif target.table != g.table:
        raise MoveError("a basepoint move keeps the generator set")
    return ChainMap(g, target, images, {}, phi_label).verify()


# ---------------------------------------------------------------------------
# pinch moves
# ---------------------------------------------------------------------------

OUTGOING = 'out'
INCOMING = 'in'

PINCH = 'pinch'
PROPER = 'proper'


@dataclass(frozen=True)
class PinchDisk:
    """
    A convex disk with positive corners at ``chord`` and at the pinched chord.

    ``omega1`` runs counterclockwise from ``chord`` to the pinched chord,
    ``omega2`` from there back. Tokens are ('chord', id) or
    ('symbol', label, exponent).
    """
    chord: str
    quadrant: int
    darts: Tuple[Dart, ...]
    direction: str
    sign: int
    omega1: Tuple[tuple, ...]
    omega2: Tuple[tuple, ...]
    omega1_degree: int

    def as_dict(self):
        def text(tokens):
            return ' '.join(t[1] if t[0] == 'chord' else f"{t[1]}^{t[2]}" for t in tokens) or '1'
        return {
            'chord': self.chord,
            'direction': self.direction,
            'sign': self.sign,
            'omega1': text(self.omega1),
            'omega2': text(self.omega2),
        }


class _PinchDiskSearch(_DiskSearch):
    """
    Boundary walks allowed extra corners at the pinched chord.

    In pinch mode exactly one more positive convex corner is taken there; in
    proper mode any number of positive convex and concave corners are, and
    only walks that break properness are kept.
    """

    def __init__(self, d: Diagram, chord: str, quadrant: int, multiplicity: int, limit: int,
                 pinched: str, mode: str = PINCH):
        super().__init__(d, chord, quadrant, multiplicity, limit)
        self.pinched = pinched
        self.mode = mode
        self.outgoing_quadrant = d.crossing(pinched).slot('o_out')
        if mode == PROPER:
            self.ceiling = None
        elif self.ceiling is not None:
            self.ceiling += self.heights[pinched]

    def _taken(self, tag: str) -> int:
        return sum(1 for t in self.turns if t is not None and t[0] == self.pinched and t[2] == tag)

    def _options(self, dart):
        cid, slot = self.d.arrival(dart)
        yield from super()._options(dart)
        if cid != self.pinched:
            return
        crossing = self.d.crossing_map[cid]
        corner = (slot - 1) % 4
        if crossing.reeb_signs[corner] > 0 and (self.mode == PROPER or not self._taken(POSITIVE)):
            yield ('turn', cid, corner, (cid, corner, POSITIVE))
        if self.mode == PROPER:
            yield ('turn', cid, (slot + 1) % 4, (cid, slot, CONCAVE))

    def _close(self):
        positives = self._taken(POSITIVE)
        if self.mode == PINCH and positives != 1:
            return None
        if self.mode == PROPER:
            at_pinched = positives + self._taken(CONCAVE)
            if not positives or (at_pinched < 2 and not self._taken(CONCAVE)):
                return None
            return super()._close()
        winding = self._winding()
        if winding is None:
            return None
        sign, letters = self._letters()
        omega1, omega2, degree = [], [], 0
        current = omega1
        direction = None
        for tag, item, extra in letters:
            if tag == POSITIVE:
                direction = OUTGOING if extra == self.outgoing_quadrant else INCOMING
                current = omega2
            elif tag == BASEPOINT:
                current.append(('symbol', item.label, item.exponent_for(extra)))
            else:
                current.append(('chord', item))
                if current is omega1:
                    degree += self.d.crossing_map[item].grading
        return PinchDisk(self.chord, self.quadrant, tuple(self.path), direction, sign,
                         tuple(omega1), tuple(omega2), degree)


def _stable(run, label: str, ceiling: int):
    """Raise the multiplicity bound until two consecutive searches agree."""
    previous = None
    for multiplicity in range(1, ceiling + 1):
        current = run(multiplicity)
        keys = [x.darts for x in current]
        if previous is not None and keys == previous:
            return current
        previous = keys
    raise DiskEnumerationError(f"disk enumeration did not stabilize ({label}, M = {ceiling})")


def pinch_disks(d: Diagram, pinched: str, chord: str, max_multiplicity: Optional[int] = None) -> List[PinchDisk]:
    """Disks with positive corners at ``chord`` and ``pinched`` only, in search order."""
    ceiling = max_multiplicity or setting('LCH_DISK_MAX_MULTIPLICITY')
    limit = setting('LCH_DISK_SEARCH_LIMIT')

    def run(multiplicity):
        found = []
        for quadrant in d.crossing(chord).positive_quadrants():
            found.extend(_PinchDiskSearch(d, chord, quadrant, multiplicity, limit, pinched).run())
        return sorted(found, key=lambda disk: (disk.quadrant, disk.darts))

    return _stable(run, f"{chord} with {pinched}", ceiling)


@dataclass(frozen=True)
class ProperReport:
    chord: str
    proper: bool
    reason: str = ''
    disk: Optional[Disk] = None

    def as_dict(self):
        out = {'chord': self.chord, 'proper': self.proper, 'reason': self.reason}
        if self.disk is not None:
            out['disk'] = self.disk.as_dict()
        return out


def proper_check(d: Diagram, a: str, max_multiplicity: Optional[int] = None) -> ProperReport:
    """
    Decide whether ``a`` is a contractible proper chord.

    A disk with a positive corner elsewhere and a positive convex corner at
    ``a`` must have no other corner at ``a``, convex or concave. The search
    is bounded; when it cannot finish the chord is reported as not proper.
    """
    c = d.crossing(a)
    if c.grading != 0:
        return ProperReport(a, False, f"|{a}| = {c.grading}; only degree-0 chords are contractible")
    if c.smooth_sign < 0:
        return ProperReport(a, False, f"{a} is a negative crossing")
    ceiling = max_multiplicity or min(4, setting('LCH_DISK_MAX_MULTIPLICITY'))
    limit = setting('LCH_DISK_SEARCH_LIMIT')
    for chord in d.chord_ids:
        if chord == a:
            continue
        for quadrant in d.crossing(chord).positive_quadrants():
            for multiplicity in range(1, ceiling + 1):
                try:
                    found = _PinchDiskSearch(d, chord, quadrant, multiplicity, limit, a, PROPER).run()
                except DiskEnumerationError as exc:
                    return ProperReport(a, False, f"properness could not be certified: {exc}")
                if found:
                    disk = found[0]
                    return ProperReport(a, False, f"disk from {chord} ({' '.join(disk.itinerary)}) has "
                                                  f"several corners at {a}", disk)
    return ProperReport(a, True)


class _PinchRecursion:
    """Memoised evaluation of one of the two triangular pinch maps."""

    def __init__(self, table: GeneratorTable, pinched: str, label: str,
                 disks: Mapping[str, Sequence[PinchDisk]], max_depth: int):
        self.table = table
        self.pinched = pinched
        self.s = symbol(label)
        self.disks = disks
        self.max_depth = max_depth
        self.cache: Dict[str, AlgebraElement] = {}
        self.stack: List[str] = []

    def _token(self, token, recursive: bool) -> AlgebraElement:
        if token[0] == 'symbol':
            return AlgebraElement.constant(self.table, symbol(token[1]) ** token[2])
        chord = token[1]
        if chord == self.pinched:
            return AlgebraElement.constant(self.table, self.s)
        if recursive:
            return self.image(chord)
        return AlgebraElement.generator(self.table, chord)

    def image(self, chord: str) -> AlgebraElement:
        if chord in self.cache:
            return self.cache[chord]
        if chord in self.stack:
            raise PinchError(f"pinch recursion does not terminate: {' -> '.join(self.stack + [chord])}")
        if len(self.stack) >= self.max_depth:
            raise PinchError(f"pinch recursion deeper than {self.max_depth} at {' -> '.join(self.stack)}")
        self.stack.append(chord)
        try:
            total = AlgebraElement.generator(self.table, chord)
            for disk in self.disks.get(chord, ()):
                left = AlgebraElement.unit(self.table)
                for token in disk.omega1:
                    left = mul(left, self._token(token, True))
                right = AlgebraElement.unit(self.table)
                for token in disk.omega2:
                    right = mul(right, self._token(token, False))
                coeff = disk.sign * (-1) ** (disk.omega1_degree % 2) / self.s
                total = total + mul(left, right).scale(coeff)
        finally:
            self.stack.pop()
        self.cache[chord] = total
        return total


def pinch_map(d: Diagram, a: str, label: str = 's', source: Optional[DGA] = None,
              automorphism: Optional[Mapping[str, object]] = None,
              check_proper: bool = True) -> Tuple[Diagram, ChainMap]:
    """
    Pinch the chord ``a`` and build Phi_a = Phi_in o Phi_out o Phi_0.

    Phi_0 sends a to s; Phi_out(a_i) = a_i + sum over disks whose corner at
    a has both strands leaving of (-1)^|w1| sgn Phi_out(w1) s^-1 w2, and
    Phi_in likewise over disks with both strands entering.

    Args:
        d: diagram before the pinch
        a: proper contractible chord
        label: symbol of the new basepoint pair s, -s^-1
        source: DGA of ``d`` when already computed
        automorphism: optional basepoint symbol substitution composed after

    Returns:
        (pinched diagram, verified chain map)
    """
    if check_proper:
        report = proper_check(d, a)
        if not report.proper:
            raise PinchError(f"cannot pinch {a}: {report.reason}")
    pinched, junction = resolve_crossing(d, a, label)
    source = source or differential(d)
    target = differential(pinched)
    table = target.table

    outgoing: Dict[str, List[PinchDisk]] = {}
    incoming: Dict[str, List[PinchDisk]] = {}
    try:
        for chord in table:
            for disk in pinch_disks(d, a, chord):
                bucket = outgoing if disk.direction == OUTGOING else incoming
                bucket.setdefault(chord, []).append(disk)
    except DiskEnumerationError as exc:
        raise PinchError(f"cannot pinch {a}: {exc}") from exc
    depth = setting('LCH_PINCH_MAX_DEPTH')
    phi_out = _PinchRecursion(table, a, label, outgoing, depth)
    phi_in = _PinchRecursion(table, a, label, incoming, depth)
    in_images = {chord: phi_in.image(chord) for chord in table}

    images = {a: AlgebraElement.constant(table, symbol(label))}
    for chord in table:
        images[chord] = substitute(in_images, phi_out.image(chord), table)
    coefficients = {k: laurent(v) for k, v in (automorphism or {}).items()}
    if coefficients:
        images = {k: v.map_coefficients(coefficients) for k, v in images.items()}
    logger.info("pinched %s on %s: %d outgoing and %d incoming disks", a, d.name or 'diagram',
                sum(map(len, outgoing.values())), sum(map(len, incoming.values())))
    phi = ChainMap(source, target, images, coefficients, f"pinch({a};{label})")
    return pinched, phi.verify()


# ---------------------------------------------------------------------------
# minimum cobordisms
# ---------------------------------------------------------------------------

def _component_chords(d: Diagram, component: int) -> List[str]:
    return [c.id for c in d.crossings if component in (c.upper_component, c.lower_component)]


def split_unknots(d: Diagram) -> List[int]:
    """Components that are split one-crossing unknots."""
    found = []
    for component in d.component_labels:
        chords = _component_chords(d, component)
        if len(chords) != 1:
            continue
        c = d.crossing(chords[0])
        piece = d.piece_of_crossing[c.id]
        alone = all(d.piece_of_crossing[other] != piece for other in d.chord_ids if other != c.id)
        if not c.is_mixed and alone:
            found.append(component)
    return found


def cap_map(d: Diagram, component: Optional[int] = None, source: Optional[DGA] = None
            ) -> Tuple[Optional[Diagram], ChainMap]:
    """
    Cap a split max-tb unknot component with its unique filling.

    Its chord u has d u = alpha + beta m for units alpha, beta and the
    component's basepoint monomial m. The chord goes to 0 and the
    lexicographically last symbol carried only by this component is solved
    for from alpha + beta m = 0.

    Returns:
        (remaining diagram or None when nothing is left, verified chain map)
    """
    candidates = split_unknots(d)
    if component is None:
        if not candidates:
            raise MoveError(f"{d.name or 'diagram'} has no split unknot component to cap")
        component = candidates[0]
    if component not in d.component_labels:
        raise MoveError(f"no component {component} in {d.name or 'diagram'}")
    chords = _component_chords(d, component)
    if any(d.crossing(x).is_mixed for x in chords):
        raise MoveError(f"component {component} still has mixed chords {chords}")
    if component not in candidates:
        raise MoveError(f"component {component} is not a split one-crossing unknot")
    u = chords[0]
    source = source or differential(d)
    boundary = source.boundary(u)
    if any(word for word in boundary.words()):
        raise MoveError(f"d({u}) = {boundary.render()} is not a Laurent polynomial")
    p = boundary.coefficient(())
    terms = laurent_terms(p)
    if len(terms) != 2 or any(abs(v) != 1 for v in terms.values()):
        raise MoveError(f"d({u}) = {render_laurent(p)} is not a sum of two units")

    arcs = set(d.components[component - 1])
    own = {bp.label for bp in d.basepoints if bp.arc in arcs}
    shared = {bp.label for bp in d.basepoints if bp.arc not in arcs}
    eliminated, value = None, None
    for name in sorted(set(symbols_of(p)) & (own - shared), key=natural_key, reverse=True):
        solutions = sympy.solve(p, symbol(name))
        if len(solutions) == 1 and is_unit_monomial(solutions[0]):
            eliminated, value = name, laurent(solutions[0])
            break
    if eliminated is None:
        raise MoveError(f"d({u}) = {render_laurent(p)} has no symbol of component {component} to eliminate")

    remaining = [x for x in d.component_labels if x != component]
    rest = sublink(d, remaining) if remaining else None
    try:
        target = source.restricted([x for x in source.table if x != u], name=rest.name if rest else 'empty')
    except DGAError as exc:
        raise MoveError(f"component {component} is not split: {exc}") from exc
    target = dataclasses.replace(target, symbols=tuple(x for x in source.symbols if x != eliminated))
    images = {u: AlgebraElement.zero(target.table)}
    logger.info("capped component %d at %s: %s -> %s", component, u, eliminated, render_laurent(value))
    phi = ChainMap(source, target, images, {eliminated: value}, f"cap({u};{eliminated})")
    return rest, phi.verify()


# ---------------------------------------------------------------------------
# move scripts
# ---------------------------------------------------------------------------

MOVES = ('pinch', 'r3', 'r2_remove', 'basepoint_over', 'cap')


@dataclass(frozen=True)
class Move:
    kind: str
    params: Mapping[str, object] = field(default_factory=dict)

    def describe(self) -> str:
        return f"{self.kind}({', '.join(f'{k}={v}' for k, v in self.params.items())})"


def _move_from_record(record, index: int) -> Move:
    where = f"move {index}"
    if not isinstance(record, dict) or 'move' not in record:
        raise MoveError(f"{where}: expected an object with a 'move' key")
    kind = record['move']
    params = {k: v for k, v in record.items() if k != 'move'}
    required = {
        'pinch': ('chord',),
        'r3': ('site',),
        'r2_remove': ('chords',),
        'basepoint_over': ('crossing', 'symbol', 'side'),
        'cap': (),
    }
    if kind not in required:
        raise MoveError(f"{where}: unknown move '{kind}'; expected one of {', '.join(MOVES)}")
    missing = [k for k in required[kind] if k not in params]
    if missing:
        raise MoveError(f"{where}: {kind} needs {', '.join(missing)}")
    if kind == 'r2_remove' and (not isinstance(params['chords'], list) or len(params['chords']) != 2):
        raise MoveError(f"{where}: r2_remove needs two chords")
    if kind == 'r3' and (not isinstance(params['site'], list) or len(params['site']) != 3):
        raise MoveError(f"{where}: r3 needs a site of three chords")
    return Move(kind, params)


@dataclass(frozen=True)
class MoveScript:
    """An ordered decomposable-filling script."""
    moves: Tuple[Move, ...]
    name: str = ''

    @classmethod
    def from_records(cls, records: Sequence, name: str = '') -> 'MoveScript':
        if isinstance(records, dict):
            name = records.get('name', name)
            records = records.get('moves')
        if not isinstance(records, list):
            raise MoveError("a move script is a JSON list of move records")
        return cls(tuple(_move_from_record(r, i) for i, r in enumerate(records, start=1)), name)

    @classmethod
    def parse(cls, text: str, name: str = '') -> 'MoveScript':
        try:
            records = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MoveError(f"move script is not valid JSON: {exc.msg} at line {exc.lineno}") from exc
        return cls.from_records(records, name)

    @property
    def pinch_count(self) -> int:
        return sum(1 for m in self.moves if m.kind == 'pinch')

    def as_list(self) -> List[dict]:
        return [dict(move=m.kind, **m.params) for m in self.moves]


def _step(state: Diagram, g: DGA, move: Move, pinch_index: int) -> Tuple[Optional[Diagram], ChainMap]:
    p = move.params
    if move.kind == 'pinch':
        label = str(p.get('label') or f"s{pinch_index}")
        return pinch_map(state, str(p['chord']), label, source=g, automorphism=p.get('automorphism'))
    if move.kind == 'r3':
        moved, direction = braid_r3(state, p['site'])
        if p.get('direction', direction) != direction:
            raise MoveError(f"R3 site {p['site']} reads as a {direction} move")
        return moved, r3_map(g, p['site'], direction, target=differential(moved))
    if move.kind == 'r2_remove':
        first, second = p['chords']
        moved = remove_bigon(state, first, second)
        return moved, r2_remove_map(g, first, second, target=differential(moved))
    if move.kind == 'basepoint_over':
        moved = slide_basepoint(state, str(p['crossing']), str(p['symbol']))
        return moved, basepoint_move_map(g, str(p['crossing']), str(p['symbol']), str(p['side']),
                                         target=differential(moved))
    component = p.get('component')
    return cap_map(state, int(component) if component is not None else None, source=g)


def run_script(d: Diagram, script: MoveScript) -> Tuple[Optional[Diagram], ChainMap]:
    """Execute the moves in order, returning the final diagram and the composite map."""
    state: Optional[Diagram] = d
    g = differential(d)
    composite = ChainMap.identity(g)
    pinches = 0
    for index, move in enumerate(script.moves, start=1):
        if state is None:
            raise MoveError(f"move {index} ({move.describe()}) comes after the diagram is empty")
        if move.kind == 'pinch':
            pinches += 1
        try:
            state, phi = _step(state, g, move, pinches)
        except LCHError as exc:
            logger.warning("move %d (%s) failed: %s", index, move.describe(), exc)
            raise
        composite = phi.compose(composite)
        g = phi.target
        logger.debug("move %d %s: %d generators left", index, move.describe(), len(g.table))
    return state, composite


def filling_system(d: Diagram, script: MoveScript, label: str = ''):
    """
    The augmentation induced by a decomposable filling.

    Returns:
        AugmentationSystem over Z[s_1^±1, ..., s_k^±1], one symbol per pinch
    """
    from .augment import augmentation

    state, composite = run_script(d, script)
    if state is not None or len(composite.target.table):
        left = f"generators {list(composite.target.table)}" if state is None else f"components {list(state.component_labels)}"
        raise MoveError(f"script incomplete: {left} remain after the last move")
    source = composite.source
    values = {}
    for chord in source.table:
        image = composite.image(chord)
        value = image.coefficient(())
        if source.table[chord] != 0:
            if not image.is_zero():
                raise ChainMapError(f"filling sends the degree-{source.table[chord]} chord {chord} "
                                    f"to {image.render()}")
            continue
        values[chord] = value
    symbol_values = {name: composite.coefficient(name) for name in source.symbols}
    targets, index = [], 0
    for move in script.moves:
        if move.kind == 'pinch':
            index += 1
            targets.append(str(move.params.get('label') or f"s{index}"))
    return augmentation(source, values, symbol_values, targets,
                        label=label or script.name or f"filling of {d.name}")
