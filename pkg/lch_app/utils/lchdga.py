# lch_app/utils/lchdga.py
"""
The Chekanov-Eliashberg DGA of a Lagrangian diagram.

Disks are found by walking their boundary counterclockwise from the positive
corner: at every crossing the boundary either goes straight through or turns
left into a negative quadrant. A closed walk is kept when its winding numbers
are non-negative, vanish on the unbounded face and satisfy the combinatorial
Gauss-Bonnet count for a disk with convex corners.
"""
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .coeffalg import (MIXED, AlgebraElement, GeneratorTable, leibniz_extend, natural_key,
                       parse_element, symbol)
from .conf import setting
from .diagram import Dart, Diagram, dart_text
from .errors import AlgebraError, DGAError, DiskEnumerationError

logger = logging.getLogger(__name__)

LIE_GROUP = 'lie-group'
NULL_COBORDANT = 'null-cobordant'
CONVENTIONS = (LIE_GROUP, NULL_COBORDANT)

# corner tags along a disk boundary
NEGATIVE = 'negative'
POSITIVE = 'positive'
CONCAVE = 'concave'
BASEPOINT = 'basepoint'


@dataclass(frozen=True)
class Disk:
    """
    An admissible immersed disk with one positive corner.

    ``corners`` lists the negative corners in counterclockwise order,
    ``boundary_word`` interleaves chords and basepoint factors in the same order.
    """
    chord: str
    quadrant: int
    darts: Tuple[Dart, ...]
    corners: Tuple[Tuple[str, int], ...]
    faces: Tuple[Tuple[str, int], ...]
    basepoints: Tuple[Tuple[str, int], ...]
    sign: int
    coefficient: sympy.Expr
    boundary_word: Tuple[str, ...]

    @property
    def word(self) -> Tuple[str, ...]:
        return tuple(cid for cid, _ in self.corners)

    @property
    def itinerary(self) -> Tuple[str, ...]:
        return tuple(dart_text(d) for d in self.darts)

    def element(self, table: GeneratorTable) -> AlgebraElement:
        return AlgebraElement.monomial(table, self.word, self.sign * self.coefficient)

    def as_dict(self):
        return {
            'chord': self.chord,
            'quadrant': self.quadrant,
            'itinerary': list(self.itinerary),
            'corners': [f"{cid}:q{q}" for cid, q in self.corners],
            'faces': {face: mult for face, mult in self.faces},
            'sign': self.sign,
            'word': ' '.join(self.boundary_word),
        }


class _DiskSearch:
    """Depth-first search of boundary walks starting at one positive corner."""

    def __init__(self, d: Diagram, chord: str, quadrant: int, multiplicity: int, limit: int):
        self.d = d
        self.chord = chord
        self.quadrant = quadrant
        self.multiplicity = multiplicity
        self.limit = limit
        self.crossing = d.crossing(chord)
        self.closing_slot = (quadrant + 1) % 4
        self.piece = d.piece_of_crossing[chord]
        self.outer = set(d.unbounded_faces.values())
        faces = [f for f in d.faces if d.piece_of_face(f.id) == self.piece]
        lift = d.realization
        self.areas = lift.areas if lift is not None else {f.id: f.area for f in d.faces if f.bounded}
        self.budget = sum((self.areas[f.id] for f in faces if f.bounded), 0) * multiplicity
        # a closed walk encloses h(chord) minus what its turns spend
        self.heights = lift.heights if lift is not None else None
        self.ceiling = self.heights[chord] if self.heights is not None else None
        self.steps = 0
        self.path: List[Dart] = []
        self.turns: List[Optional[Tuple[str, int, str]]] = []

    def _blocked(self, dart: Dart) -> bool:
        return self.d.face_of_dart[dart] in self.outer

    def _cost(self, cid: str, leave: int):
        """Drop in z when the walk switches strands at ``cid`` and leaves by slot ``leave``."""
        height = self.heights[cid]
        return -height if leave in self.d.crossing_map[cid].over else height

    def _options(self, dart: Dart):
        """Yield (kind, crossing, leaving slot, corner record) for the next step."""
        cid, slot = self.d.arrival(dart)
        crossing = self.d.crossing_map[cid]
        corner = (slot - 1) % 4
        if cid == self.chord and slot == self.closing_slot:
            yield ('close', cid, None, None)
        if crossing.reeb_signs[corner] < 0:
            yield ('turn', cid, corner, (cid, corner, NEGATIVE))
        yield ('straight', cid, (slot + 2) % 4, None)

    def run(self) -> list:
        start = self.d.departure(self.chord, self.quadrant)
        if self._blocked(start):
            return []
        self.path = [start]
        self.turns = [None]
        uses = {start: 1}
        spent = [0]
        stack = [self._options(start)]
        found = []
        while stack:
            self.steps += 1
            if self.steps > self.limit:
                raise DiskEnumerationError(
                    f"disk search at {self.chord} exceeded {self.limit} steps (multiplicity {self.multiplicity})")
            option = next(stack[-1], None)
            if option is None:
                stack.pop()
                if stack:
                    dart = self.path.pop()
                    self.turns.pop()
                    spent.pop()
                    uses[dart] -= 1
                continue
            kind, cid, leave, record = option
            if kind == 'close':
                result = self._close()
                if result is not None:
                    found.append(result)
                continue
            energy = spent[-1]
            if record is not None and self.ceiling is not None:
                energy += self._cost(cid, leave)
                if energy >= self.ceiling:
                    continue
            nxt = self.d.departure(cid, leave)
            if uses.get(nxt, 0) >= self.multiplicity or self._blocked(nxt):
                continue
            self.path.append(nxt)
            self.turns.append(record)
            spent.append(energy)
            uses[nxt] = uses.get(nxt, 0) + 1
            stack.append(self._options(nxt))
        return found

    def _winding(self) -> Optional[Dict[str, int]]:
        """Face multiplicities of the current closed walk, None unless it bounds an immersed disk."""
        d = self.d
        net: Dict[str, int] = {}
        for arc, direction in self.path:
            net[arc] = net.get(arc, 0) + direction
        winding = d.winding_numbers(net, self.piece)
        if winding is None or any(value < 0 for value in winding.values()):
            return None
        records = [t for t in self.turns if t is not None]
        euler = 1 + sum(-1 if tag == CONCAVE else 1 for _, _, tag in records)
        area = 0
        for face_id, mult in winding.items():
            face = d.face_map[face_id]
            euler += mult * (4 - face.corner_count)
            area += mult * self.areas.get(face_id, face.area)
        if euler != 4 or area > self.budget:
            return None
        return winding

    def _letters(self):
        """Corners and basepoints in boundary order, with the accumulated sign."""
        d = self.d
        sign = self.crossing.orientation_signs[self.quadrant]
        letters = []
        for index, dart in enumerate(self.path):
            record = self.turns[index]
            if record is not None:
                cid, quadrant, tag = record
                sign *= d.crossing_map[cid].orientation_signs[quadrant]
                letters.append((tag, cid, quadrant))
            for bp in d.basepoints_along(dart):
                sign *= bp.sign
                letters.append((BASEPOINT, bp, dart[1]))
        return sign, letters

    def _close(self) -> Optional[Disk]:
        winding = self._winding()
        if winding is None:
            return None
        sign, letters = self._letters()
        coefficient = sympy.Integer(1)
        corners, basepoints, boundary_word = [], [], []
        for tag, item, extra in letters:
            if tag == BASEPOINT:
                exponent = item.exponent_for(extra)
                coefficient *= symbol(item.label) ** exponent
                basepoints.append((item.id, extra))
                boundary_word.append(item.label if exponent == 1 else f"{item.label}^{exponent}")
            else:
                corners.append((item, extra))
                boundary_word.append(item)
        faces = tuple(sorted(((f, m) for f, m in winding.items() if m), key=lambda fm: natural_key(fm[0])))
        return Disk(self.chord, self.quadrant, tuple(self.path), tuple(corners), faces, tuple(basepoints),
                    sign, coefficient, tuple(boundary_word))


def _search(d: Diagram, chord: str, multiplicity: int, limit: int) -> List[Disk]:
    disks = []
    for quadrant in d.crossing(chord).positive_quadrants():
        disks.extend(_DiskSearch(d, chord, quadrant, multiplicity, limit).run())
    return sorted(disks, key=lambda disk: (disk.quadrant, disk.itinerary))


def enumerate_disks(d: Diagram, chord: str, max_multiplicity: Optional[int] = None,
                    limit: Optional[int] = None) -> List[Disk]:
    """
    All admissible disks with positive corner at ``chord``.

    The multiplicity bound M on each boundary dart is raised from 1 until two
    consecutive bounds give the same disks.

    Args:
        d: validated diagram
        chord: crossing id
        max_multiplicity: ceiling for M (LCH_DISK_MAX_MULTIPLICITY)
        limit: DFS step cap per search (LCH_DISK_SEARCH_LIMIT)

    Returns:
        Disks sorted by positive quadrant and itinerary
    """
    ceiling = max_multiplicity or setting('LCH_DISK_MAX_MULTIPLICITY')
    limit = limit or setting('LCH_DISK_SEARCH_LIMIT')
    d.crossing(chord)
    previous = None
    for multiplicity in range(1, ceiling + 1):
        current = _search(d, chord, multiplicity, limit)
        keys = [disk.darts for disk in current]
        if previous is not None and keys == previous:
            logger.debug("disks at %s stable at multiplicity %d: %d found", chord, multiplicity, len(current))
            return current
        previous = keys
    raise DiskEnumerationError(f"disk enumeration did not stabilize (chord {chord}, M = {ceiling})")


@dataclass(frozen=True, eq=False)
class DGA:
    """
    A semi-free DGA over Z[s_i^±1, t_i^±1].

    ``chord_components`` maps a chord to (upper, lower) component labels when
    the DGA comes from a link diagram.
    """
    name: str
    table: GeneratorTable
    differential: Mapping[str, AlgebraElement]
    symbols: Tuple[str, ...]
    provenance: str = 'presentation'
    convention: str = LIE_GROUP
    chord_components: Mapping[str, Tuple[int, int]] = field(default_factory=dict)
    symbol_components: Mapping[str, int] = field(default_factory=dict)
    disks: Mapping[str, Tuple[Disk, ...]] = field(default_factory=dict, repr=False)

    @property
    def generators(self) -> Tuple[str, ...]:
        return tuple(self.table)

    def grading(self, chord: str) -> int:
        return self.table[chord]

    def generators_in_degree(self, degree: int) -> Tuple[str, ...]:
        return tuple(g for g in self.table if self.table[g] == degree)

    def element(self, text: str) -> AlgebraElement:
        return parse_element(self.table, text)

    def generator(self, chord: str) -> AlgebraElement:
        return AlgebraElement.generator(self.table, chord)

    def boundary(self, chord: str) -> AlgebraElement:
        return self.differential.get(chord, AlgebraElement.zero(self.table))

    def d(self, x: AlgebraElement) -> AlgebraElement:
        images = {g: self.boundary(g) for g in self.table}
        return leibniz_extend(images, x)

    @property
    def spin_symbols(self) -> Tuple[str, ...]:
        return tuple(s for s in self.symbols if s.startswith('t'))

    def with_convention(self, convention: str) -> 'DGA':
        """Switch spin convention by t_i -> -t_i on the link basepoint symbols."""
        if convention not in CONVENTIONS:
            raise DGAError(f"unknown spin convention '{convention}'")
        if convention == self.convention:
            return self
        flip = {s: -symbol(s) for s in self.spin_symbols}
        differential = {g: x.map_coefficients(flip) for g, x in self.differential.items()}
        return DGA(self.name, self.table, differential, self.symbols, self.provenance, convention,
                   self.chord_components, self.symbol_components, self.disks)

    def restricted(self, generators: Sequence[str], name: Optional[str] = None) -> 'DGA':
        """Sub-DGA on a set of generators closed under the differential."""
        table = self.table.restricted(generators)
        differential = {}
        for g in table:
            image = self.boundary(g)
            stray = [x for x in image.letters() if x not in table]
            if stray:
                raise DGAError(f"d({g}) leaves the generator set through {stray}")
            differential[g] = AlgebraElement(table, image.terms())
        return DGA(name or self.name, table, differential, self.symbols, self.provenance,
                   self.convention, {g: c for g, c in self.chord_components.items() if g in table},
                   self.symbol_components)

    def render(self) -> str:
        lines = [f"# {self.name} ({self.provenance}, {self.convention})"]
        for g in self.table:
            lines.append(f"d({g}) = {self.boundary(g).render()}")
        return '\n'.join(lines) + '\n'

    def as_dict(self) -> dict:
        return {
            'name': self.name,
            'provenance': self.provenance,
            'convention': self.convention,
            'generators': [{'id': g, 'grading': self.table[g]} for g in self.table],
            'symbols': list(self.symbols),
            'differential': {g: self.boundary(g).render() for g in self.table},
        }


def _chord_components(d: Diagram) -> Dict[str, Tuple[int, int]]:
    return {c.id: (c.upper_component, c.lower_component) for c in d.crossings}


def differential(d: Diagram, workers: Optional[int] = None, max_multiplicity: Optional[int] = None) -> DGA:
    """
    Assemble d(a) = sum of sgn(D) w(D) over the disks with positive corner a.

    Chords are searched independently, in a thread pool when ``workers`` > 1;
    the result does not depend on the pool size.
    """
    table = GeneratorTable({c.id: c.grading for c in d.crossings})
    chords = list(table)
    workers = workers or setting('LCH_DISK_WORKERS') or 1
    if d.realization is None:
        logger.warning("no Legendrian lift for %s: disks are bounded by listed areas only", d.name or 'diagram')

    def disks_of(chord):
        return enumerate_disks(d, chord, max_multiplicity=max_multiplicity)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(disks_of, chords))
    else:
        results = [disks_of(chord) for chord in chords]

    images = {}
    disks = {}
    for chord, found in zip(chords, results):
        total = AlgebraElement.zero(table)
        for disk in found:
            total = total + disk.element(table)
        images[chord] = total
        disks[chord] = tuple(found)
    symbols = tuple(sorted({bp.label for bp in d.basepoints}, key=natural_key))
    symbol_components = {bp.label: d.component_of_arc(bp.arc) for bp in d.basepoints}
    logger.info("differential of %s: %d chords, %d disks", d.name or 'diagram', len(chords),
                sum(len(x) for x in disks.values()))
    return DGA(d.name, table, images, symbols, f"diagram:{d.name}", LIE_GROUP,
               _chord_components(d), symbol_components, disks)


@dataclass(frozen=True)
class DSquaredReport:
    passed: bool
    residues: Dict[str, str]
    degree_failures: Dict[str, str] = field(default_factory=dict)

    def as_dict(self):
        return {'passed': self.passed, 'residues': self.residues, 'degree_failures': self.degree_failures}


def degree_failures(g: DGA) -> Dict[str, str]:
    """Generators whose differential is not homogeneous of degree |a| - 1."""
    failures = {}
    for chord in g.table:
        degree = g.boundary(chord).grading()
        if degree is None:
            continue
        if degree == MIXED or degree != g.table[chord] - 1:
            failures[chord] = g.boundary(chord).render()
    return failures


def check_d_squared(g: DGA) -> DSquaredReport:
    """Compute d(d(a)) for every generator and collect non-zero residues."""
    residues = {}
    for chord in g.table:
        residue = g.d(g.boundary(chord))
        if not residue.is_zero():
            residues[chord] = residue.render()
    degrees = degree_failures(g)
    if residues:
        logger.warning("d^2 != 0 on %s at %s", g.name, ', '.join(residues))
    return DSquaredReport(not residues and not degrees, residues, degrees)


def composability_check(g: DGA) -> List[Tuple[str, str]]:
    """
    Monomials of d(a) whose letters do not chain along link components.

    Reading a disk boundary counterclockwise from its positive corner, the
    boundary leaves a on its upper strand and returns on its lower one, and
    consecutive negative corners b, b' satisfy lower(b) = upper(b').
    """
    if not g.chord_components:
        return []
    bad = []
    for chord in g.table:
        upper, lower = g.chord_components[chord]
        for word in g.boundary(chord).words():
            current = upper
            ok = True
            for letter in word:
                letter_upper, letter_lower = g.chord_components[letter]
                if letter_upper != current:
                    ok = False
                    break
                current = letter_lower
            if not ok or current != lower:
                bad.append((chord, ' '.join(word) or '1'))
    return bad


def presentation_dga(spec: Mapping) -> DGA:
    """
    Build a DGA from a hand-entered listing and check its invariants.

    Args:
        spec: {'name', 'generators': {id: grading}, 'differential': {id: text},
               optional 'symbols', 'components': {id: [upper, lower]}, 'convention'}

    Returns:
        DGA with degree drop and d^2 = 0 verified
    """
    raw_generators = spec.get('generators')
    if isinstance(raw_generators, list):
        raw_generators = {item['id']: item['grading'] for item in raw_generators}
    if not isinstance(raw_generators, dict) or not raw_generators:
        raise DGAError("a presentation needs a non-empty 'generators' table")
    try:
        table = GeneratorTable(raw_generators)
    except (TypeError, ValueError) as exc:
        raise DGAError(f"bad generator table: {exc}") from exc
    images = {}
    for chord, text in (spec.get('differential') or {}).items():
        if chord not in table:
            raise DGAError(f"differential given for unknown generator '{chord}'")
        try:
            images[chord] = parse_element(table, str(text))
        except AlgebraError as exc:
            raise DGAError(f"d({chord}): {exc}") from exc
    for chord in table:
        images.setdefault(chord, AlgebraElement.zero(table))
    symbols = set(spec.get('symbols') or ())
    for image in images.values():
        symbols.update(image.coefficient_symbols())
    components = {k: tuple(v) for k, v in (spec.get('components') or {}).items()}
    convention = spec.get('convention', LIE_GROUP)
    if convention not in CONVENTIONS:
        raise DGAError(f"unknown spin convention '{convention}'")
    g = DGA(spec.get('name', 'presentation'), table, images,
            tuple(sorted(symbols, key=natural_key)), 'presentation', convention, components,
            dict(spec.get('symbol_components') or {}))
    bad_degrees = degree_failures(g)
    if bad_degrees:
        chord = next(iter(bad_degrees))
        raise DGAError(f"d({chord}) = {bad_degrees[chord]} does not have degree {table[chord] - 1}")
    report = check_d_squared(g)
    if not report.passed:
        chord = next(iter(report.residues))
        raise DGAError(f"d^2 != 0: d(d({chord})) = {report.residues[chord]}")
    return g


def load_presentation(text: str) -> DGA:
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DGAError(f"presentation is not valid JSON: {exc.msg} at line {exc.lineno}") from exc
    return presentation_dga(spec)
