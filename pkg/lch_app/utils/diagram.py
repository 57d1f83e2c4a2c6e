# lch_app/utils/diagram.py
"""
Lagrangian-projection diagrams of oriented Legendrian links.

A diagram is a 4-valent planar map given by a rotation system: every crossing
lists its four arc ends counterclockwise. Quadrant q_i of a crossing lies
between end i and end i+1. Faces, Reeb signs, orientation signs and crossing
signs are all derived from that data, so every constructor and every move goes
through ``build_diagram`` on a LagJSON-shaped dict.
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import sympy
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, lpmin

from .coeffalg import natural_key
from .errors import DiagramError, MoveError, PinchError

logger = logging.getLogger(__name__)

OUT = 'out'
IN = 'in'

# ccw slots used by the constructors: north-east, north-west, south-west, south-east
NE, NW, SW, SE = 0, 1, 2, 3

Dart = Tuple[str, int]


def dart_text(dart: Dart) -> str:
    return f"{dart[0]}:{'+' if dart[1] > 0 else '-'}"


@dataclass(frozen=True)
class ArcEnd:
    arc: str
    end: str

    def ref(self) -> str:
        return f"{self.arc}:{self.end}"

    @classmethod
    def parse(cls, text, field_path):
        if not isinstance(text, str) or ':' not in text:
            raise DiagramError(f"expected 'arc:out' or 'arc:in', got {text!r}", field=field_path)
        arc, end = text.rsplit(':', 1)
        if end not in (OUT, IN):
            raise DiagramError(f"arc end must be 'out' or 'in', got {end!r}", field=field_path)
        return cls(arc, end)


@dataclass(frozen=True)
class Arc:
    id: str
    tail: str
    head: str
    component: int


@dataclass(frozen=True)
class Crossing:
    """
    A double point of the projection, i.e. a Reeb chord.

    ``ends`` are ccw; ``over`` holds the two opposite slots of the over strand
    (the upper endpoint a+ of the chord).
    """
    id: str
    grading: int
    ends: Tuple[ArcEnd, ArcEnd, ArcEnd, ArcEnd]
    over: Tuple[int, int]
    smooth_sign: int
    reeb_signs: Tuple[int, int, int, int]
    orientation_signs: Tuple[int, int, int, int]
    upper_component: int = 0
    lower_component: int = 0

    def position(self, end: ArcEnd) -> int:
        return self.ends.index(end)

    def slot(self, role: str) -> int:
        """Slot of 'o_out', 'o_in', 'u_out' or 'u_in'."""
        strand, direction = role.split('_')
        for index, end in enumerate(self.ends):
            on_over = index in self.over
            if (strand == 'o') == on_over and end.end == direction:
                return index
        raise DiagramError(f"crossing {self.id} has no {role} end")

    @property
    def is_mixed(self) -> bool:
        return self.upper_component != self.lower_component

    def positive_quadrants(self) -> Tuple[int, ...]:
        return tuple(q for q in range(4) if self.reeb_signs[q] > 0)


@dataclass(frozen=True)
class BasePoint:
    """
    A marked point decorated with sign * label^exponent. Crossing it along the
    link orientation contributes label^exponent, against it label^-exponent.
    """
    id: str
    label: str
    arc: str
    position: float
    sign: int = 1
    exponent: int = 1

    def exponent_for(self, direction: int) -> int:
        return self.exponent if direction > 0 else -self.exponent


@dataclass(frozen=True)
class Face:
    id: str
    darts: Tuple[Dart, ...]
    corners: Tuple[Tuple[str, int], ...]
    bounded: bool
    area: Fraction = Fraction(1)

    @property
    def corner_count(self) -> int:
        return len(self.corners)


@dataclass(frozen=True)
class Realization:
    """
    Face areas and chord heights of a Legendrian lift of the diagram.

    A closed boundary walk with non-negative winding encloses area h(a) minus
    the heights of its negative corners, where a is its positive corner.
    """
    areas: Dict[str, Fraction]
    heights: Dict[str, Fraction]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ''


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[Check]:
        return [check for check in self.checks if not check.passed]

    def as_dict(self):
        return {
            'passed': self.passed,
            'checks': [
                {'name': c.name, 'passed': c.passed, 'detail': c.detail} for c in self.checks
            ],
        }


@dataclass(frozen=True)
class Diagram:
    name: str
    crossings: Tuple[Crossing, ...]
    arcs: Tuple[Arc, ...]
    components: Tuple[Tuple[str, ...], ...]
    basepoints: Tuple[BasePoint, ...]
    unbounded: Tuple[Dart, ...]
    faces: Tuple[Face, ...] = ()
    face_areas: Tuple[Tuple[Dart, Fraction], ...] = ()
    braid: Optional[Tuple[Tuple[int, ...], int]] = None
    problems: Tuple[Check, ...] = field(default=(), compare=False)

    # lookups

    @cached_property
    def crossing_map(self) -> Dict[str, Crossing]:
        return {c.id: c for c in self.crossings}

    @cached_property
    def arc_map(self) -> Dict[str, Arc]:
        return {a.id: a for a in self.arcs}

    def crossing(self, cid: str) -> Crossing:
        try:
            return self.crossing_map[cid]
        except KeyError:
            raise DiagramError(f"unknown crossing '{cid}'") from None

    @property
    def chord_ids(self) -> Tuple[str, ...]:
        return tuple(c.id for c in self.crossings)

    @cached_property
    def basepoints_by_arc(self) -> Dict[str, Tuple[BasePoint, ...]]:
        grouped: Dict[str, List[BasePoint]] = {}
        for bp in self.basepoints:
            grouped.setdefault(bp.arc, []).append(bp)
        return {arc: tuple(sorted(bps, key=lambda b: (b.position, natural_key(b.id))))
                for arc, bps in grouped.items()}

    def basepoints_along(self, dart: Dart) -> Tuple[BasePoint, ...]:
        """Basepoints met while traversing a dart, in traversal order."""
        bps = self.basepoints_by_arc.get(dart[0], ())
        return bps if dart[1] > 0 else tuple(reversed(bps))

    def component_of_arc(self, arc_id: str) -> int:
        return self.arc_map[arc_id].component

    @property
    def component_labels(self) -> Tuple[int, ...]:
        return tuple(range(1, len(self.components) + 1))

    def component_symbols(self, component: int) -> Tuple[BasePoint, ...]:
        arcs = set(self.components[component - 1])
        return tuple(bp for bp in self.basepoints if bp.arc in arcs)

    # rotation system

    def arrival(self, dart: Dart) -> Tuple[str, int]:
        arc = self.arc_map[dart[0]]
        if dart[1] > 0:
            crossing = self.crossing_map[arc.head]
            return arc.head, crossing.position(ArcEnd(arc.id, IN))
        crossing = self.crossing_map[arc.tail]
        return arc.tail, crossing.position(ArcEnd(arc.id, OUT))

    def departure(self, cid: str, slot: int) -> Dart:
        end = self.crossing_map[cid].ends[slot % 4]
        return (end.arc, 1 if end.end == OUT else -1)

    @property
    def darts(self) -> Tuple[Dart, ...]:
        ordered = sorted(self.arc_map, key=natural_key)
        return tuple(d for a in ordered for d in ((a, 1), (a, -1)))

    @cached_property
    def face_of_dart(self) -> Dict[Dart, str]:
        return {dart: face.id for face in self.faces for dart in face.darts}

    @cached_property
    def face_map(self) -> Dict[str, Face]:
        return {face.id: face for face in self.faces}

    @cached_property
    def realization(self) -> Optional[Realization]:
        return realize(self)

    @cached_property
    def pieces(self) -> Tuple[Tuple[str, ...], ...]:
        """Connected pieces of the planar map as sorted crossing-id tuples."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.crossing_map)
        for arc in self.arcs:
            graph.add_edge(arc.tail, arc.head, key=arc.id)
        pieces = [tuple(sorted(part, key=natural_key)) for part in nx.connected_components(graph)]
        return tuple(sorted(pieces, key=lambda p: natural_key(p[0])))

    @cached_property
    def piece_of_crossing(self) -> Dict[str, int]:
        return {cid: index for index, piece in enumerate(self.pieces) for cid in piece}

    def piece_of_face(self, face_id: str) -> int:
        first = self.face_map[face_id].corners[0][0]
        return self.piece_of_crossing[first]

    @cached_property
    def unbounded_faces(self) -> Dict[int, str]:
        """piece index -> id of its unbounded face."""
        found = {}
        for dart in self.unbounded:
            face_id = self.face_of_dart.get(dart)
            if face_id is not None:
                found[self.piece_of_face(face_id)] = face_id
        return found

    @cached_property
    def dual_graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.face_map)
        for arc in self.arcs:
            left = self.face_of_dart[(arc.id, 1)]
            right = self.face_of_dart[(arc.id, -1)]
            graph.add_edge(left, right, key=arc.id)
        return graph

    def winding_numbers(self, net_use: Dict[str, int], piece: int) -> Optional[Dict[str, int]]:
        """
        Winding numbers of a closed dart path around the faces of one piece.

        Args:
            net_use: arc id -> (forward uses - backward uses)
            piece: index of the piece the path lives in

        Returns:
            face id -> winding number, or None when the path is not closed
        """
        root = self.unbounded_faces.get(piece)
        if root is None:
            return None
        winding = {root: 0}
        graph = self.dual_graph
        for parent, child in nx.bfs_edges(graph, root):
            arc_id = next(iter(graph.get_edge_data(parent, child)))
            net = net_use.get(arc_id, 0)
            if self.face_of_dart[(arc_id, 1)] == parent:
                winding[child] = winding[parent] - net
            else:
                winding[child] = winding[parent] + net
        for left, right, arc_id in graph.edges(keys=True):
            if left not in winding:
                continue
            net = net_use.get(arc_id, 0)
            if self.face_of_dart[(arc_id, 1)] == left:
                if winding[left] - winding[right] != net:
                    return None
            elif winding[right] - winding[left] != net:
                return None
        return winding


# ---------------------------------------------------------------------------
# building and validation
# ---------------------------------------------------------------------------

def _require(raw, key, field_path, kind=None):
    if not isinstance(raw, dict) or key not in raw:
        raise DiagramError(f"missing field '{key}'", field=field_path)
    value = raw[key]
    if kind is not None and not isinstance(value, kind):
        raise DiagramError(f"field '{key}' has the wrong type", field=f"{field_path}.{key}")
    return value


def _sign(value, field_path):
    if value not in (1, -1):
        raise DiagramError(f"expected +1 or -1, got {value!r}", field=field_path)
    return value


def _parse_side(raw, field_path) -> Dart:
    arc = _require(raw, 'arc', field_path, str)
    side = _require(raw, 'side', field_path, str)
    if side not in ('left', 'right'):
        raise DiagramError("side must be 'left' or 'right'", field=f"{field_path}.side")
    return (arc, 1 if side == 'left' else -1)


def derived_reeb_signs(over: Sequence[int]) -> Tuple[int, int, int, int]:
    """q_i is positive when rotating ccw from an over end to an under end."""
    return tuple(1 if (q in over and (q + 1) % 4 not in over) else -1 for q in range(4))


def derived_smooth_sign(ends: Sequence[ArcEnd], over: Sequence[int]) -> int:
    o_out = next(i for i in over if ends[i].end == OUT)
    u_out = next(i for i in range(4) if i not in over and ends[i].end == OUT)
    return 1 if u_out == (o_out + 1) % 4 else -1


def derived_orientation_signs(ends: Sequence[ArcEnd], over: Sequence[int], smooth_sign: int):
    """Positive crossings carry -1 on the two quadrants adjacent to the outgoing overstrand."""
    if smooth_sign < 0:
        return (1, 1, 1, 1)
    o_out = next(i for i in over if ends[i].end == OUT)
    return tuple(-1 if q in (o_out, (o_out - 1) % 4) else 1 for q in range(4))


def build_diagram(raw: dict, strict: bool = True) -> Diagram:
    """
    Build a Diagram from a LagJSON-shaped dict, deriving faces and signs.

    Args:
        raw: parsed LagJSON
        strict: raise on the first failed invariant instead of recording it

    Returns:
        Diagram with derived data populated
    """
    name = raw.get('name') or ''
    raw_crossings = _require(raw, 'crossings', 'diagram', list)
    raw_arcs = _require(raw, 'arcs', 'diagram', list)
    raw_components = _require(raw, 'components', 'diagram', list)
    raw_basepoints = raw.get('basepoints', [])

    arcs_spec = {}
    for index, item in enumerate(raw_arcs):
        path = f"arcs[{index}]"
        arc_id = _require(item, 'id', path, str)
        if arc_id in arcs_spec:
            raise DiagramError(f"duplicate arc id '{arc_id}'", field=path)
        arcs_spec[arc_id] = (_require(item, 'from', path, str), _require(item, 'to', path, str))

    seen_ends = {}
    crossings = []
    for index, item in enumerate(raw_crossings):
        path = f"crossings[{index}]"
        cid = _require(item, 'id', path, str)
        grading = _require(item, 'grading', path, int)
        ends_raw = _require(item, 'ends', path, list)
        if len(ends_raw) != 4:
            raise DiagramError("a crossing needs exactly four arc ends", invariant='four-valent',
                               field=f"{path}.ends")
        ends = tuple(ArcEnd.parse(e, f"{path}.ends[{i}]") for i, e in enumerate(ends_raw))
        for slot, end in enumerate(ends):
            if end.arc not in arcs_spec:
                raise DiagramError(f"unknown arc '{end.arc}'", field=f"{path}.ends[{slot}]")
            expected = arcs_spec[end.arc][0 if end.end == OUT else 1]
            if expected != cid:
                raise DiagramError(f"arc '{end.arc}' does not {end.end == OUT and 'leave' or 'enter'} "
                                   f"crossing '{cid}'", invariant='arc endpoints',
                                   field=f"{path}.ends[{slot}]")
            if end in seen_ends:
                raise DiagramError(f"arc end {end.ref()} used twice", invariant='four-valent',
                                   field=f"{path}.ends[{slot}]")
            seen_ends[end] = cid
        over_raw = _require(item, 'over', path, list)
        if len(over_raw) != 2:
            raise DiagramError("'over' lists the two ends of the over strand", field=f"{path}.over")
        over_ends = [ArcEnd.parse(e, f"{path}.over") for e in over_raw]
        if any(e not in ends for e in over_ends):
            raise DiagramError("'over' ends must belong to the crossing", field=f"{path}.over")
        over = tuple(sorted(ends.index(e) for e in over_ends))
        if over[1] - over[0] != 2 or ends[over[0]].end == ends[over[1]].end:
            raise DiagramError("over strand must use two opposite ends, one in and one out",
                               invariant='strand structure', field=f"{path}.over")
        smooth = derived_smooth_sign(ends, over)
        if 'smooth_sign' in item:
            smooth_given = _sign(item['smooth_sign'], f"{path}.smooth_sign")
        else:
            smooth_given = smooth
        reeb = tuple(item['reeb_signs']) if 'reeb_signs' in item else derived_reeb_signs(over)
        orientation = (tuple(item['orientation_signs']) if 'orientation_signs' in item
                       else derived_orientation_signs(ends, over, smooth_given))
        for label, values in (('reeb_signs', reeb), ('orientation_signs', orientation)):
            if len(values) != 4:
                raise DiagramError("four quadrant signs expected", field=f"{path}.{label}")
            for q, value in enumerate(values):
                _sign(value, f"{path}.{label}[{q}]")
        crossings.append(Crossing(cid, grading, ends, over, smooth_given, reeb, orientation))

    cids = [c.id for c in crossings]
    if len(set(cids)) != len(cids):
        raise DiagramError("duplicate crossing ids", field='crossings')
    for arc_id, (tail, head) in arcs_spec.items():
        for end, cid in ((ArcEnd(arc_id, OUT), tail), (ArcEnd(arc_id, IN), head)):
            if seen_ends.get(end) != cid:
                raise DiagramError(f"arc end {end.ref()} is not attached to crossing '{cid}'",
                                   invariant='arc endpoints', field='arcs')

    # components: ordered arc cycles
    arc_component = {}
    components = []
    crossing_by_id = {c.id: c for c in crossings}
    for index, comp in enumerate(raw_components):
        path = f"components[{index}]"
        if not isinstance(comp, list) or not comp:
            raise DiagramError("component must be a non-empty list of arc ids", field=path)
        for arc_id in comp:
            if arc_id not in arcs_spec:
                raise DiagramError(f"unknown arc '{arc_id}'", field=path)
            if arc_id in arc_component:
                raise DiagramError(f"arc '{arc_id}' listed in two components", field=path)
            arc_component[arc_id] = index + 1
        components.append(tuple(comp))
    missing = sorted(set(arcs_spec) - set(arc_component), key=natural_key)
    if missing:
        raise DiagramError(f"arcs {missing} belong to no component", invariant='components',
                           field='components')

    arcs = tuple(
        Arc(arc_id, tail, head, arc_component[arc_id])
        for arc_id, (tail, head) in sorted(arcs_spec.items(), key=lambda kv: natural_key(kv[0]))
    )
    completed = []
    for c in sorted(crossings, key=lambda c: natural_key(c.id)):
        upper = arc_component[c.ends[c.over[0]].arc]
        lower_slot = (c.over[0] + 1) % 4
        lower = arc_component[c.ends[lower_slot].arc]
        completed.append(Crossing(c.id, c.grading, c.ends, c.over, c.smooth_sign, c.reeb_signs,
                                  c.orientation_signs, upper, lower))

    basepoints = []
    for index, item in enumerate(raw_basepoints):
        path = f"basepoints[{index}]"
        bp_id = item.get('id') or _require(item, 'label', path, str)
        label = item.get('label') or bp_id
        arc_id = _require(item, 'arc', path, str)
        if arc_id not in arcs_spec:
            raise DiagramError(f"unknown arc '{arc_id}'", field=f"{path}.arc")
        position = float(item.get('position', 0.5))
        if not 0 <= position < 1:
            raise DiagramError("position must lie in [0, 1)", field=f"{path}.position")
        basepoints.append(BasePoint(
            bp_id, label, arc_id, position,
            _sign(item.get('sign', 1), f"{path}.sign"),
            _sign(item.get('exponent', 1), f"{path}.exponent"),
        ))
    basepoints.sort(key=lambda b: natural_key(b.id))

    unbounded = tuple(_parse_side(u, f"unbounded[{i}]") for i, u in enumerate(raw.get('unbounded', [])))
    face_areas = []
    for index, item in enumerate(raw.get('face_areas', [])):
        path = f"face_areas[{index}]"
        area = Fraction(str(_require(item, 'area', path)))
        if area <= 0:
            raise DiagramError("face areas must be positive", field=f"{path}.area")
        face_areas.append((_parse_side(item, path), area))

    braid = None
    if raw.get('braid'):
        braid = (tuple(raw['braid']['word']), int(raw['braid']['strands']))

    diagram = Diagram(name, tuple(completed), arcs, tuple(components), tuple(basepoints),
                      unbounded, (), tuple(face_areas), braid)
    faces = _trace_faces(diagram)
    diagram = Diagram(name, diagram.crossings, arcs, diagram.components, diagram.basepoints,
                      unbounded, faces, tuple(face_areas), braid)

    if 'faces' in raw and raw['faces'] is not None:
        given = {frozenset(tuple(f['darts'])) for f in raw['faces']}
        derived = {frozenset(dart_text(d) for d in face.darts) for face in faces}
        if given != derived:
            raise DiagramError("listed faces do not match the rotation system", invariant='faces',
                               field='faces')

    report = validate(diagram)
    if not report.passed:
        if strict:
            failed = report.failures()[0]
            raise DiagramError(failed.detail or 'invariant violated', invariant=failed.name)
        diagram = Diagram(name, diagram.crossings, arcs, diagram.components, diagram.basepoints,
                          unbounded, faces, tuple(face_areas), braid, tuple(report.failures()))
    return diagram


def _trace_faces(d: Diagram) -> Tuple[Face, ...]:
    areas = dict(d.face_areas)
    visited = set()
    walks = []
    for start in d.darts:
        if start in visited:
            continue
        darts, corners = [], []
        dart = start
        while dart not in visited:
            visited.add(dart)
            darts.append(dart)
            cid, slot = d.arrival(dart)
            leave = (slot - 1) % 4
            corners.append((cid, leave))
            dart = d.departure(cid, leave)
        if dart != start:
            raise DiagramError("face walk did not close", invariant='planar embedding (Euler)')
        walks.append((tuple(darts), tuple(corners)))
    walks.sort(key=lambda w: min((natural_key(a), -s) for a, s in w[0]))
    unbounded = set(d.unbounded)
    faces = []
    for index, (darts, corners) in enumerate(walks, start=1):
        area = next((areas[x] for x in darts if x in areas), Fraction(1))
        faces.append(Face(f"F{index}", darts, corners, not unbounded.intersection(darts), area))
    return tuple(faces)


def validate(d: Diagram) -> ValidationReport:
    """Check every diagram invariant and report each one."""
    checks = []

    if not d.crossings:
        checks.append(Check('non-empty', False, 'a Lagrangian projection needs at least one crossing'))
        return ValidationReport(tuple(checks))
    checks.append(Check('non-empty', True))

    # Euler characteristic per piece
    faces_per_piece: Dict[int, int] = {}
    for face in d.faces:
        piece = d.piece_of_face(face.id)
        faces_per_piece[piece] = faces_per_piece.get(piece, 0) + 1
    euler_ok, detail = True, ''
    for index, piece in enumerate(d.pieces):
        members = set(piece)
        v = len(piece)
        e = sum(1 for arc in d.arcs if arc.tail in members)
        f = faces_per_piece.get(index, 0)
        if v - e + f != 2:
            euler_ok = False
            detail = f"piece {index + 1}: V - E + F = {v} - {e} + {f} = {v - e + f}"
    checks.append(Check('planar embedding (Euler)', euler_ok, detail))

    graph = nx.Graph()
    for arc in d.arcs:
        graph.add_edge(arc.tail, ('mid', arc.id, 0))
        graph.add_edge(('mid', arc.id, 0), ('mid', arc.id, 1))
        graph.add_edge(('mid', arc.id, 1), arc.head)
    planar, _ = nx.check_planarity(graph)
    checks.append(Check('underlying graph planar', planar))

    per_piece = d.unbounded_faces
    missing_pieces = [i + 1 for i in range(len(d.pieces)) if i not in per_piece]
    checks.append(Check('unbounded face designated', not missing_pieces,
                        f"pieces without an unbounded face: {missing_pieces}" if missing_pieces else ''))

    alternation, agreement, pattern, handedness = [], [], [], []
    for c in d.crossings:
        signs = c.reeb_signs
        if any(signs[q] == signs[(q + 1) % 4] for q in range(4)):
            alternation.append(c.id)
        if signs != derived_reeb_signs(c.over):
            agreement.append(c.id)
        orient = c.orientation_signs
        negatives = [q for q in range(4) if orient[q] < 0]
        if c.smooth_sign > 0:
            ok = len(negatives) == 2 and (negatives[1] - negatives[0]) in (1, 3)
        else:
            ok = not negatives
        if not ok:
            pattern.append(c.id)
        if c.smooth_sign != derived_smooth_sign(c.ends, c.over):
            handedness.append(c.id)
    checks.append(Check('Reeb sign alternation', not alternation,
                        f"crossings {alternation}" if alternation else ''))
    checks.append(Check('Reeb signs match over/under data', not agreement,
                        f"crossings {agreement}" if agreement else ''))
    checks.append(Check('orientation sign pattern', not pattern,
                        f"crossings {pattern}" if pattern else ''))
    checks.append(Check('crossing sign matches strand orientations', not handedness,
                        f"crossings {handedness}" if handedness else ''))

    orientation_ok, detail = True, ''
    for index, comp in enumerate(d.components, start=1):
        for pos, arc_id in enumerate(comp):
            arc = d.arc_map[arc_id]
            nxt = d.arc_map[comp[(pos + 1) % len(comp)]]
            crossing = d.crossing_map[arc.head]
            slot = crossing.position(ArcEnd(arc.id, IN))
            if crossing.ends[(slot + 2) % 4] != ArcEnd(nxt.id, OUT):
                orientation_ok = False
                detail = f"component {index}: {arc.id} does not continue into {nxt.id}"
    checks.append(Check('components consistently oriented', orientation_ok, detail))

    carried = {d.component_of_arc(bp.arc) for bp in d.basepoints}
    bare = [i for i in d.component_labels if i not in carried]
    checks.append(Check('basepoint on every component', not bare,
                        f"missing basepoint on components {bare}" if bare else ''))
    keys = [(bp.label, bp.exponent, bp.arc) for bp in d.basepoints]
    ids = [bp.id for bp in d.basepoints]
    checks.append(Check('basepoints distinct', len(set(keys)) == len(keys) and len(set(ids)) == len(ids)))
    return ValidationReport(tuple(checks))


def parse_diagram(text: str, strict: bool = True) -> Diagram:
    """
    Parse LagJSON text.

    Args:
        text: UTF-8 JSON document
        strict: raise on semantic failures (see build_diagram)

    Returns:
        Diagram
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(exc.msg, invariant='syntax', field=f"line {exc.lineno}, column {exc.colno}") from exc
    if not isinstance(raw, dict):
        raise DiagramError("top level must be an object", invariant='syntax')
    return build_diagram(raw, strict=strict)


def diagram_to_dict(d: Diagram, include_faces: bool = False) -> dict:
    def side(dart):
        return {'arc': dart[0], 'side': 'left' if dart[1] > 0 else 'right'}

    out = {
        'name': d.name,
        'crossings': [
            {
                'id': c.id,
                'grading': c.grading,
                'ends': [e.ref() for e in c.ends],
                'over': [c.ends[i].ref() for i in c.over],
                'smooth_sign': c.smooth_sign,
                'reeb_signs': list(c.reeb_signs),
                'orientation_signs': list(c.orientation_signs),
            }
            for c in d.crossings
        ],
        'arcs': [{'id': a.id, 'from': a.tail, 'to': a.head} for a in d.arcs],
        'components': [list(comp) for comp in d.components],
        'basepoints': [
            {'id': b.id, 'label': b.label, 'arc': b.arc, 'position': b.position,
             'sign': b.sign, 'exponent': b.exponent}
            for b in d.basepoints
        ],
        'unbounded': [side(x) for x in d.unbounded],
    }
    if d.face_areas:
        out['face_areas'] = [dict(side(x), area=str(a)) for x, a in d.face_areas]
    if d.braid:
        out['braid'] = {'word': list(d.braid[0]), 'strands': d.braid[1]}
    if include_faces:
        out['faces'] = [{'darts': [dart_text(x) for x in f.darts]} for f in d.faces]
    return out


def serialize_diagram(d: Diagram) -> str:
    """Canonical LagJSON: keys sorted, arrays in id order."""
    return json.dumps(diagram_to_dict(d), sort_keys=True, indent=2) + '\n'


def compute_tb(d: Diagram) -> dict:
    """
    Writhe of the projection, total and per component (self-crossings only).

    Returns:
        {'total': int, 'components': {label: int}}
    """
    per_component = {label: 0 for label in d.component_labels}
    for c in d.crossings:
        if not c.is_mixed:
            per_component[c.upper_component] += c.smooth_sign
    return {'total': sum(c.smooth_sign for c in d.crossings), 'components': per_component}


def genus_candidates(d: Diagram) -> dict:
    """Both genus readings of tb found in the literature; neither is asserted."""
    tb = compute_tb(d)['total']
    c = len(d.components)
    return {
        'from_tb_equals_2g_minus_2c_plus_1': Fraction(tb + 2 * c - 1, 2),
        'from_g_equals_tb_plus_c_minus_2_over_2': Fraction(tb + c - 2, 2),
    }


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def realize(d: Diagram) -> Optional[Realization]:
    """
    Solve for face areas and chord heights of a Legendrian lift.

    Each crossing gets a z-value on its over and under strand. Along an arc z
    rises by the integral of y dx, so the rises around a bounded face sum to
    minus its area. Areas listed in the diagram are kept fixed, the others
    are at least 1, every height z(over) - z(under) is at least 1, and the
    total of areas and heights is minimized.

    Returns:
        Realization with exact areas and heights, or None when the over/under
        data admit no lift with the listed areas
    """
    if not d.faces:
        return None
    z = {(c.id, strand): sympy.Symbol(f"z_{c.id}_{strand}") for c in d.crossings for strand in 'ou'}

    def point(cid: str, end: ArcEnd):
        c = d.crossing_map[cid]
        return z[cid, 'o' if c.position(end) in c.over else 'u']

    rise = {arc.id: point(arc.head, ArcEnd(arc.id, IN)) - point(arc.tail, ArcEnd(arc.id, OUT))
            for arc in d.arcs}
    listed = {d.face_of_dart[dart] for dart, _ in d.face_areas if dart in d.face_of_dart}
    areas, constraints = {}, []
    for face in d.faces:
        if not face.bounded:
            continue
        if face.id in listed:
            areas[face.id] = sympy.Rational(face.area.numerator, face.area.denominator)
        else:
            areas[face.id] = sympy.Symbol(f"A_{face.id}")
            constraints.append(areas[face.id] >= 1)
        stokes = sympy.expand(sum(direction * rise[arc] for arc, direction in face.darts) + areas[face.id])
        if stokes.is_number:
            if stokes != 0:
                return None
            continue
        constraints.append(sympy.Eq(stokes, 0))
    heights = {c.id: z[c.id, 'o'] - z[c.id, 'u'] for c in d.crossings}
    constraints.extend(h >= 1 for h in heights.values())
    try:
        _, solution = lpmin(sum(areas.values()) + sum(heights.values()), constraints)
    except (InfeasibleLPError, UnboundedLPError):
        logger.warning("%s admits no Legendrian lift with its listed areas", d.name or 'diagram')
        return None
    free = {s: 0 for s in set(z.values()) - set(solution)}

    def value(expr) -> Fraction:
        return _to_fraction(sympy.sympify(expr).xreplace(solution).xreplace(free))

    return Realization({fid: value(a) for fid, a in areas.items()},
                       {cid: value(h) for cid, h in heights.items()})


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

class _MapBuilder:
    """Accumulates crossings and arcs in LagJSON form; arcs are named e1, e2, ..."""

    def __init__(self):
        self.crossings: Dict[str, dict] = {}
        self.arcs: List[dict] = []

    def add_crossing(self, cid: str, grading: int, over=(NW, SE)):
        self.crossings[cid] = {'id': cid, 'grading': grading, 'ends': [None] * 4, 'over_slots': over}

    def connect(self, source: Tuple[str, int], target: Tuple[str, int]) -> str:
        arc_id = f"e{len(self.arcs) + 1}"
        self.arcs.append({'id': arc_id, 'from': source[0], 'to': target[0]})
        self.crossings[source[0]]['ends'][source[1]] = f"{arc_id}:{OUT}"
        self.crossings[target[0]]['ends'][target[1]] = f"{arc_id}:{IN}"
        return arc_id

    def crossings_raw(self) -> List[dict]:
        out = []
        for item in self.crossings.values():
            ends = item['ends']
            out.append({'id': item['id'], 'grading': item['grading'], 'ends': list(ends),
                        'over': [ends[s] for s in item['over_slots']]})
        return out


def _next_arc(crossing_ends: Dict[str, List[str]], arcs: Dict[str, Tuple[str, str]], arc_id: str) -> str:
    ends = crossing_ends[arcs[arc_id][1]]
    slot = ends.index(f"{arc_id}:{IN}")
    return ends[(slot + 2) % 4].rsplit(':', 1)[0]


def _trace_components(raw: dict, starts: Sequence[str] = ()) -> List[List[str]]:
    """Arc cycles of the link, beginning with the given arcs in order."""
    crossing_ends = {c['id']: c['ends'] for c in raw['crossings']}
    arcs = {a['id']: (a['from'], a['to']) for a in raw['arcs']}
    seen = set()
    components = []
    for start in list(starts) + sorted(arcs, key=natural_key):
        if start in seen or start not in arcs:
            continue
        cycle = []
        arc_id = start
        while arc_id not in seen:
            seen.add(arc_id)
            cycle.append(arc_id)
            arc_id = _next_arc(crossing_ends, arcs, arc_id)
        components.append(cycle)
    return components


def _place_missing_basepoints(raw: dict):
    """One basepoint t_k on the first arc of every component that carries none."""
    carried = {bp['arc'] for bp in raw.get('basepoints', [])}
    labels = {bp['label'] for bp in raw.get('basepoints', [])}
    index = 1
    for comp in raw['components']:
        if carried.intersection(comp):
            continue
        while f"t{index}" in labels:
            index += 1
        label = f"t{index}"
        labels.add(label)
        raw.setdefault('basepoints', []).append(
            {'id': label, 'label': label, 'arc': comp[0], 'position': 0.5, 'sign': 1, 'exponent': 1})


def parse_braid_word(word) -> Tuple[int, ...]:
    """
    Read a positive braid word.

    Args:
        word: sequence of ints, or text such as '1 2 1', 's1 s2 s1' or '1,2,1'

    Returns:
        Tuple of generator indices
    """
    if isinstance(word, str):
        tokens = word.replace(',', ' ').split()
        letters = []
        for token in tokens:
            body = token.lstrip('sσ')
            try:
                letters.append(int(body))
            except ValueError:
                raise DiagramError(f"cannot read braid letter {token!r}", field='braid') from None
    else:
        letters = [int(x) for x in word]
    for letter in letters:
        if letter <= 0:
            raise DiagramError(f"braid letter {letter} is not a positive generator", field='braid')
    return tuple(letters)


def minus_one_closure(word, strands: int, name: str = '') -> Diagram:
    """
    Lagrangian projection of the (-1)-closure of a positive braid.

    Braid crossings are named b1, b2, ... in word order and carry grading 0.
    Every strand closes up through a kink a_h (grading 1) whose small loop
    bounds a monogon.

    Args:
        word: positive braid word (see parse_braid_word)
        strands: number of strands

    Returns:
        Validated Diagram with braid provenance recorded
    """
    letters = parse_braid_word(word)
    if strands < 1:
        raise DiagramError("a braid needs at least one strand", field='braid')
    for letter in letters:
        if letter >= strands:
            raise DiagramError(f"braid letter {letter} out of range for {strands} strands", field='braid')

    builder = _MapBuilder()
    for h in range(1, strands + 1):
        builder.add_crossing(f"a{h}", 1)
    for k in range(1, len(letters) + 1):
        builder.add_crossing(f"b{k}", 0)

    open_end = {h: (f"a{h}", NW) for h in range(1, strands + 1)}
    for k, i in enumerate(letters, start=1):
        cid = f"b{k}"
        builder.connect(open_end[i], (cid, SW))
        builder.connect(open_end[i + 1], (cid, NW))
        open_end[i + 1] = (cid, NE)
        open_end[i] = (cid, SE)
    closure_arcs = {}
    for h in range(1, strands + 1):
        closure_arcs[h] = builder.connect(open_end[h], (f"a{h}", SW))
        builder.connect((f"a{h}", NE), (f"a{h}", SE))

    raw = {
        'name': name or f"closure({' '.join(map(str, letters)) or 'id'}; {strands})",
        'crossings': builder.crossings_raw(),
        'arcs': builder.arcs,
        'unbounded': [{'arc': closure_arcs[1], 'side': 'right'}],
        'braid': {'word': list(letters), 'strands': strands},
    }
    raw['components'] = _trace_components(raw, [closure_arcs[h] for h in range(1, strands + 1)])
    if len(raw['components']) == 1:
        raw['basepoints'] = [{'id': 't', 'label': 't', 'arc': raw['components'][0][0], 'position': 0.5}]
    else:
        raw['basepoints'] = [
            {'id': f"t{k}", 'label': f"t{k}", 'arc': comp[0], 'position': 0.5}
            for k, comp in enumerate(raw['components'], start=1)
        ]
    return build_diagram(raw)


def beta_ab(a: int, b: int) -> Diagram:
    """Closure of (s2 s1 s3 s2) s3^a s1^b on four strands."""
    if a < 0 or b < 0:
        raise DiagramError("twist exponents must be non-negative", field='braid')
    word = (2, 1, 3, 2) + (3,) * a + (1,) * b
    return minus_one_closure(word, 4, name=f"beta_{a}{b}")


# ---------------------------------------------------------------------------
# moves on the planar map
# ---------------------------------------------------------------------------

class _Splicer:
    """
    Joins arcs through removed crossings on a LagJSON dict.

    ``join(a, b)`` glues the head of chain a to the tail of chain b; chain b's
    basepoints move behind a's.
    """

    def __init__(self, raw: dict):
        self.raw = raw
        self.arcs = {a['id']: [a['from'], a['to']] for a in raw['arcs']}
        self.crossings = {c['id']: c for c in raw['crossings']}
        self.alias: Dict[str, str] = {}

    def find(self, arc_id: str) -> str:
        while arc_id in self.alias:
            arc_id = self.alias[arc_id]
        return arc_id

    def join(self, first: str, second: str):
        keep, drop = self.find(first), self.find(second)
        if keep == drop:
            raise DiagramError(f"joining {first} to {second} closes a loop with no crossing",
                               invariant='non-empty')
        head = self.arcs[drop][1]
        self.arcs[keep][1] = head
        if head in self.crossings:
            crossing = self.crossings[head]
            for key in ('ends', 'over'):
                refs = crossing[key]
                if f"{drop}:{IN}" in refs:
                    refs[refs.index(f"{drop}:{IN}")] = f"{keep}:{IN}"
        del self.arcs[drop]
        self.alias[drop] = keep
        for bp in self.raw.get('basepoints', []):
            if bp['arc'] == keep:
                bp['position'] = bp['position'] / 2
            elif bp['arc'] == drop:
                bp['arc'] = keep
                bp['position'] = 0.5 + (1 + bp['position']) / 4

    def finish(self, removed: Sequence[str], starts: Sequence[str]) -> dict:
        """Drop removed crossings and rebuild arcs, components and side references."""
        removed = set(removed)
        raw = self.raw
        raw['crossings'] = [c for c in raw['crossings'] if c['id'] not in removed]
        raw['arcs'] = [{'id': a, 'from': ends[0], 'to': ends[1]}
                       for a, ends in sorted(self.arcs.items(), key=lambda kv: natural_key(kv[0]))]
        live = set(self.arcs)
        for bucket in ('unbounded', 'face_areas'):
            kept, seen = [], set()
            for item in raw.get(bucket, []):
                arc = self.find(item['arc'])
                if arc not in live or (arc, item['side']) in seen:
                    continue
                seen.add((arc, item['side']))
                kept.append(dict(item, arc=arc))
            raw[bucket] = kept
        raw['basepoints'] = [bp for bp in raw.get('basepoints', []) if bp['arc'] in live]
        order = []
        for arc in starts:
            arc = self.find(arc)
            if arc in live and arc not in order:
                order.append(arc)
        raw['components'] = _trace_components(raw, order)
        raw.pop('braid', None)
        return raw


def _raw_pieces(raw: dict) -> List[set]:
    graph = nx.MultiGraph()
    graph.add_nodes_from(c['id'] for c in raw['crossings'])
    for arc in raw['arcs']:
        graph.add_edge(arc['from'], arc['to'], key=arc['id'])
    pieces = []
    for part in nx.connected_components(graph):
        pieces.append({a['id'] for a in raw['arcs'] if a['from'] in part})
    return pieces


def _designate_unbounded(raw: dict, candidates: Sequence[Dart]) -> List[int]:
    """Give every piece without an unbounded side the first candidate dart inside it."""
    designated = {u['arc'] for u in raw.get('unbounded', [])}
    missing = []
    for index, piece in enumerate(_raw_pieces(raw)):
        if designated & piece:
            continue
        dart = next((d for d in candidates if d[0] in piece), None)
        if dart is None:
            missing.append(index + 1)
            continue
        raw.setdefault('unbounded', []).append(
            {'arc': dart[0], 'side': 'left' if dart[1] > 0 else 'right'})
    return missing


def _starts(d: Diagram) -> List[str]:
    return [comp[0] for comp in d.components]


def twist_region_extend(d: Diagram, chord: str, count: int, names: Optional[Sequence[str]] = None) -> Diagram:
    """
    Insert ``count`` crossings in series after a positive crossing, each a
    copy of its slot layout, lengthening the twist region it sits in.

    Args:
        d: diagram
        chord: id of a positive crossing
        count: number of crossings to add
        names: ids for the new crossings (default chord id suffixed _2, _3, ...)

    Returns:
        Diagram with components recomputed; new components get a basepoint
    """
    if count < 0:
        raise DiagramError("count must be non-negative")
    if count == 0:
        return d
    base = d.crossing(chord)
    if base.smooth_sign < 0:
        raise DiagramError(f"crossing {chord} is negative; twist regions extend positive crossings")
    names = list(names) if names is not None else [f"{chord}_{k}" for k in range(2, count + 2)]
    if len(names) != count:
        raise DiagramError("one name per inserted crossing is needed")
    clash = set(names) & set(d.crossing_map)
    if clash or len(set(names)) != len(names):
        raise DiagramError(f"crossing ids already in use: {sorted(clash, key=natural_key)}")

    raw = diagram_to_dict(d)
    crossings = {c['id']: c for c in raw['crossings']}
    arc_index = max((int(a.id[1:]) for a in d.arcs if a.id[1:].isdigit()), default=0)
    o_out, u_out = base.slot('o_out'), base.slot('u_out')
    o_in, u_in = base.slot('o_in'), base.slot('u_in')
    previous = chord
    for new_id in names:
        prev = crossings[previous]
        old_o = prev['ends'][o_out].rsplit(':', 1)[0]
        old_u = prev['ends'][u_out].rsplit(':', 1)[0]
        arc_index += 1
        to_under = f"e{arc_index}"
        arc_index += 1
        to_over = f"e{arc_index}"
        ends = [None] * 4
        ends[o_out] = f"{old_o}:{OUT}"
        ends[u_out] = f"{old_u}:{OUT}"
        ends[u_in] = f"{to_under}:{IN}"
        ends[o_in] = f"{to_over}:{IN}"
        prev['ends'][o_out] = f"{to_under}:{OUT}"
        prev['ends'][u_out] = f"{to_over}:{OUT}"
        prev['over'] = [prev['ends'][s] for s in base.over]
        for arc in raw['arcs']:
            if arc['id'] in (old_o, old_u):
                arc['from'] = new_id
        raw['arcs'].append({'id': to_under, 'from': previous, 'to': new_id})
        raw['arcs'].append({'id': to_over, 'from': previous, 'to': new_id})
        crossing = {'id': new_id, 'grading': base.grading, 'ends': ends,
                    'over': [ends[base.over[0]], ends[base.over[1]]]}
        crossings[new_id] = crossing
        raw['crossings'].append(crossing)
        previous = new_id
    for item in raw['crossings']:
        item.pop('reeb_signs', None)
        item.pop('orientation_signs', None)
        item.pop('smooth_sign', None)
    raw['components'] = _trace_components(raw, _starts(d))
    _place_missing_basepoints(raw)
    raw.pop('braid', None)
    logger.debug("extended twist region at %s by %d crossings", chord, count)
    return build_diagram(raw)


def lambda_n(n: int, base: Optional[Diagram] = None) -> Diagram:
    """
    The family member whose b-twist region has n crossings b1..bn.

    Args:
        n: twist count, at least 1
        base: the n = 1 diagram; defaults to the bundled lambda1 asset
    """
    if n < 1:
        raise DiagramError("n must be at least 1")
    if base is None:
        from .corpus import load_diagram
        base = load_diagram('lambda1')
    result = twist_region_extend(base, 'b1', n - 1, names=[f"b{k}" for k in range(2, n + 1)])
    if n > 1:
        raw = diagram_to_dict(result)
        raw['name'] = f"lambda_{n}"
        result = build_diagram(raw)
    return result


def _strand_joins(c: Crossing) -> List[Tuple[str, str]]:
    """(in arc, out arc) of both strands through a crossing."""
    joins = []
    for slot, end in enumerate(c.ends):
        if end.end == IN:
            joins.append((end.arc, c.ends[(slot + 2) % 4].arc))
    return joins


def sublink(d: Diagram, keep: Sequence[int]) -> Diagram:
    """
    Delete every component not in ``keep`` (1-based labels), merging the arcs
    of kept strands through crossings with deleted components.
    """
    keep = sorted(set(int(k) for k in keep))
    labels = set(d.component_labels)
    if not keep or not set(keep) <= labels:
        raise MoveError(f"components {keep} are not a non-empty subset of {sorted(labels)}")
    if len(keep) == len(labels):
        return d
    raw = diagram_to_dict(d)
    dropped_arcs = {a.id for a in d.arcs if a.component not in keep}
    splicer = _Splicer(raw)
    removed = []
    for c in d.crossings:
        kept_upper = c.upper_component in keep
        kept_lower = c.lower_component in keep
        if kept_upper and kept_lower:
            continue
        removed.append(c.id)
        for in_arc, out_arc in _strand_joins(c):
            if in_arc not in dropped_arcs:
                try:
                    splicer.join(in_arc, out_arc)
                except DiagramError:
                    raise MoveError(f"a kept component loses all of its crossings at {c.id}") from None
    for arc_id in dropped_arcs:
        splicer.arcs.pop(arc_id, None)
    raw = splicer.finish(removed, [comp[0] for comp in d.components
                                  if d.component_of_arc(comp[0]) in keep])
    missing = _designate_unbounded(raw, ())
    if missing:
        raise MoveError(f"pieces {missing} lose their unbounded face designation")
    raw['name'] = f"{d.name}[{','.join(map(str, keep))}]"
    return build_diagram(raw)


def resolve_crossing(d: Diagram, chord: str, label: str = 's') -> Tuple[Diagram, dict]:
    """
    Oriented smoothing of a positive crossing.

    The strand entering over is joined to the strand leaving under, and the
    strand entering under to the strand leaving over. The first chain carries
    +label, the second -label^-1, both at the junction.

    Returns:
        (diagram, junction) where junction names the two chains and the labels
    """
    c = d.crossing(chord)
    if c.smooth_sign < 0:
        raise MoveError(f"crossing {chord} is negative; only positive crossings are pinched")
    labels = {bp.label for bp in d.basepoints}
    if label in labels:
        raise MoveError(f"basepoint label '{label}' already in use")
    o_in = c.ends[c.slot('o_in')].arc
    u_in = c.ends[c.slot('u_in')].arc
    o_out = c.ends[c.slot('o_out')].arc
    u_out = c.ends[c.slot('u_out')].arc

    raw = diagram_to_dict(d)
    splicer = _Splicer(raw)
    try:
        splicer.join(o_in, u_out)
        splicer.join(u_in, o_out)
    except DiagramError as exc:
        raise PinchError(f"cannot smooth {chord}: {exc}") from None
    first, second = splicer.find(o_in), splicer.find(u_in)
    raw = splicer.finish([chord], _starts(d) + [first, second])
    raw['basepoints'].extend([
        {'id': f"{label}+", 'label': label, 'arc': first, 'position': 0.5, 'sign': 1, 'exponent': 1},
        {'id': f"{label}-", 'label': label, 'arc': second, 'position': 0.5, 'sign': -1, 'exponent': -1},
    ])
    missing = _designate_unbounded(raw, [(first, -1), (second, 1)])
    if missing:
        raise PinchError(f"pieces {missing} have no unbounded face after smoothing {chord}")
    raw['name'] = f"{d.name}/{chord}"
    junction = {'crossing': chord, 'label': label, 'over_chain': first, 'under_chain': second}
    return build_diagram(raw), junction


def remove_bigon(d: Diagram, first: str, second: str) -> Diagram:
    """Undo a Reidemeister II move: delete two crossings cornering the same bigon face."""
    pair = {first, second}
    bigon = next((f for f in d.faces if f.corner_count == 2 and {x[0] for x in f.corners} == pair), None)
    if bigon is None or first == second:
        raise MoveError(f"crossings {first} and {second} do not bound a bigon")
    raw = diagram_to_dict(d)
    splicer = _Splicer(raw)
    try:
        for cid in (first, second):
            for in_arc, out_arc in _strand_joins(d.crossing(cid)):
                splicer.join(in_arc, out_arc)
    except DiagramError as exc:
        raise MoveError(f"removing the bigon at {first}, {second} leaves a bare loop") from exc
    raw = splicer.finish([first, second], _starts(d))
    candidates = [(splicer.find(arc), side) for arc, side in bigon.darts]
    missing = _designate_unbounded(raw, candidates)
    if missing:
        raise MoveError(f"pieces {missing} have no unbounded face after the move")
    _place_missing_basepoints(raw)
    raw['name'] = f"{d.name}-{first}{second}"
    return build_diagram(raw)


def slide_basepoint(d: Diagram, chord: str, label: str) -> Diagram:
    """
    Push the basepoint ``label`` through the crossing ``chord`` along its strand.

    The basepoint must be the one nearest the crossing on an arc ending or
    starting there; it lands on the arc across the crossing, again nearest it.
    """
    c = d.crossing(chord)
    matches = [bp for bp in d.basepoints if bp.label == label]
    if len(matches) != 1:
        raise MoveError(f"basepoint label '{label}' must occur exactly once, found {len(matches)}")
    bp = matches[0]
    joins = _strand_joins(c)
    by_arc = d.basepoints_by_arc
    target = None
    for in_arc, out_arc in joins:
        if bp.arc == in_arc and bp == by_arc[in_arc][-1]:
            target, position = out_arc, min((b.position for b in by_arc.get(out_arc, ())), default=1.0) / 2
        elif bp.arc == out_arc and bp == by_arc[out_arc][0]:
            target, position = in_arc, (1 + max((b.position for b in by_arc.get(in_arc, ())), default=0.0)) / 2
        if target is not None:
            break
    if target is None:
        raise MoveError(f"basepoint '{label}' is not adjacent to crossing {chord}")
    raw = diagram_to_dict(d)
    for item in raw['basepoints']:
        if item['id'] == bp.id:
            item['arc'] = target
            item['position'] = position
    return build_diagram(raw)


R3_FORWARD = 'forward'
R3_REVERSE = 'reverse'


def braid_r3(d: Diagram, site: Sequence[str]) -> Tuple[Diagram, str]:
    """
    Apply s_i s_{i+1} s_i <-> s_{i+1} s_i s_{i+1} to a braid closure.

    ``site`` names three consecutive braid crossings b_k, b_{k+1}, b_{k+2};
    the rebuilt closure keeps crossing ids by position in the word.

    Returns:
        (diagram, direction) with direction 'forward' for s_i s_{i+1} s_i
    """
    if d.braid is None:
        raise MoveError(f"{d.name or 'diagram'} has no braid provenance; R3 needs a braid closure")
    word, strands = d.braid
    try:
        positions = [int(x[1:]) for x in site]
    except (TypeError, ValueError):
        raise MoveError(f"R3 site {list(site)} does not name braid crossings") from None
    if len(positions) != 3 or any(not x.startswith('b') for x in site):
        raise MoveError(f"R3 site {list(site)} does not name three braid crossings")
    k = positions[0]
    if positions != [k, k + 1, k + 2] or k < 1 or k + 2 > len(word):
        raise MoveError(f"R3 site {list(site)} is not three consecutive braid crossings")
    first, middle, last = word[k - 1:k + 2]
    if first != last or abs(first - middle) != 1:
        raise MoveError(f"letters {first} {middle} {last} at {list(site)} are not an R3 pattern")
    direction = R3_FORWARD if middle == first + 1 else R3_REVERSE
    swapped = word[:k - 1] + (middle, first, middle) + word[k + 2:]
    return minus_one_closure(swapped, strands, name=d.name), direction
