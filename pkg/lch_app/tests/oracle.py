# lch_app/tests/oracle.py
"""
Brute-force count of embedded disks, used to cross-check the disk search.

Every subset of bounded faces is tried as a region. A region is kept when
it is a closed disk whose boundary turns only at convex corners, exactly
one of them positive. Nothing here walks dart paths; the region is judged
from face incidences alone, so it shares no code with the search.
"""
import itertools
from collections import Counter

import networkx as nx

from lch_app.utils.diagram import Diagram


def _quadrant_faces(d: Diagram):
    owner = {}
    for face in d.faces:
        for corner in face.corners:
            owner[corner] = face.id
    return owner


def _is_disk(d: Diagram, region: frozenset, owner: dict):
    """Convex corners of the region as (crossing, quadrant), or None when it is not a disk."""
    convex = []
    touched = 0
    for c in d.crossings:
        inside = [q for q in range(4) if owner[(c.id, q)] in region]
        if not inside:
            continue
        touched += 1
        if len(inside) == 1:
            convex.append((c.id, inside[0]))
        elif len(inside) == 2:
            first, second = inside
            if (second - first) % 4 == 2:
                return None
        elif len(inside) == 3:
            return None

    edges = 0
    graph = nx.MultiGraph()
    graph.add_nodes_from(region)
    for arc in d.arcs:
        left = d.face_of_dart[(arc.id, 1)]
        right = d.face_of_dart[(arc.id, -1)]
        if left in region or right in region:
            edges += 1
        if left in region and right in region:
            if left == right:
                return None
            graph.add_edge(left, right, key=arc.id)
    if not nx.is_connected(graph):
        return None
    if touched - edges + len(region) != 1:
        return None
    return convex


def embedded_disks(d: Diagram):
    """
    Every embedded disk with one positive convex corner.

    Returns:
        Counter of (chord, positive quadrant, sorted negative corners, faces)
    """
    owner = _quadrant_faces(d)
    crossing = d.crossing_map
    bounded = [f.id for f in d.faces if f.bounded]
    found = Counter()
    for size in range(1, len(bounded) + 1):
        for combo in itertools.combinations(bounded, size):
            region = frozenset(combo)
            convex = _is_disk(d, region, owner)
            if not convex:
                continue
            positive = [(cid, q) for cid, q in convex if crossing[cid].reeb_signs[q] > 0]
            if len(positive) != 1:
                continue
            negative = tuple(sorted(x for x in convex if x not in positive))
            found[(positive[0][0], positive[0][1], negative, tuple(sorted(region)))] += 1
    return found


def search_embedded(disks):
    """The disks of a search result with multiplicity one on every face, keyed like embedded_disks."""
    found = Counter()
    for disk in disks:
        if any(m != 1 for _, m in disk.faces):
            continue
        found[(disk.chord, disk.quadrant, tuple(sorted(disk.corners)),
               tuple(sorted(f for f, _ in disk.faces)))] += 1
    return found
