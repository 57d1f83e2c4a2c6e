# lch_app/utils/shcert.py
"""
Symplectic homology non-vanishing certificates.

A representation rho of a sublink DGA into rational matrices with
rho(t_k) = -Id certifies SH(X_Lambda) != 0. Certificates carry a transcript
of every relation checked and can be re-verified from their JSON alone.
"""
import dataclasses
import hashlib
import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .coeffalg import AlgebraElement, laurent_terms, natural_key
from .conf import setting
from .errors import AugmentationError, RepresentationError, SearchCapExceeded
from .lchdga import DGA, check_d_squared

logger = logging.getLogger(__name__)

NOT_FLEXIBLE = 'SH(X_Lambda) != 0; not flexible'
NO_CONCLUSION = 'no conclusion'

MAX_SEARCH_RANK = 3
MAX_SEARCH_ENTRY = 2


def _rational_matrix(rows) -> sympy.Matrix:
    try:
        return sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in rows])
    except (TypeError, ValueError, SyntaxError) as exc:
        raise RepresentationError(f"matrix entries must be rationals: {exc}") from None


def _matrix_rows(m: sympy.Matrix) -> List[List[str]]:
    return [[str(sympy.Rational(x)) for x in row] for row in m.tolist()]


def _render_matrix(m: sympy.Matrix) -> str:
    return json.dumps(_matrix_rows(m), separators=(',', ':'))


def _is_t(name: str) -> bool:
    return name.startswith('t')


def components_of(g: DGA) -> Tuple[int, ...]:
    labels = set(g.symbol_components.values())
    for upper, lower in g.chord_components.values():
        labels.update((upper, lower))
    return tuple(sorted(labels)) or (1,)


def _component_symbols(g: DGA) -> Dict[int, List[str]]:
    out: Dict[int, List[str]] = {}
    if g.symbol_components:
        for name, component in g.symbol_components.items():
            if _is_t(name):
                out.setdefault(component, []).append(name)
    elif len(components_of(g)) == 1:
        out[components_of(g)[0]] = [s for s in g.symbols if _is_t(s)]
    return {k: sorted(v, key=natural_key) for k, v in out.items()}


def sublink_dga(g: DGA, components: Sequence[int]) -> DGA:
    """
    The DGA of a sublink: chords with both ends on kept components, and
    their differentials with every word through a dropped chord removed.
    """
    keep = set(components)
    if not keep or not keep <= set(components_of(g)):
        raise RepresentationError(f"sublink {sorted(keep)} is not a subset of components {components_of(g)}")
    if keep == set(components_of(g)):
        return g
    if not g.chord_components:
        raise RepresentationError(f"{g.name} does not record chord components")
    chords = [c for c in g.table if set(g.chord_components[c]) <= keep]
    table = g.table.restricted(chords)
    differential = {}
    for chord in table:
        terms = {w: c for w, c in g.boundary(chord).terms().items() if all(x in table for x in w)}
        differential[chord] = AlgebraElement(table, terms)
    sub = dataclasses.replace(
        g, name=f"{g.name}[{','.join(map(str, sorted(keep)))}]", table=table, differential=differential,
        symbols=tuple(s for s in g.symbols if g.symbol_components.get(s, min(keep)) in keep),
        chord_components={c: g.chord_components[c] for c in table},
        symbol_components={s: k for s, k in g.symbol_components.items() if k in keep},
        disks={})
    if not check_d_squared(sub).passed:
        raise RepresentationError(f"the sublink differential on {sorted(keep)} has d^2 != 0")
    return sub


@dataclass(frozen=True, eq=False)
class Representation:
    """Rational matrices for degree-0 chords and t symbols; other chords go to 0."""
    dga: DGA
    components: Tuple[int, ...]
    rank: int
    matrices: Mapping[str, sympy.Matrix]

    def matrix(self, name: str) -> sympy.Matrix:
        if name in self.matrices:
            return self.matrices[name]
        if name in self.dga.table:
            return sympy.zeros(self.rank, self.rank)
        raise RepresentationError(f"no matrix for symbol '{name}'")

    def coefficient(self, p) -> sympy.Matrix:
        total = sympy.zeros(self.rank, self.rank)
        for powers, value in laurent_terms(p).items():
            term = sympy.eye(self.rank) * value
            for name, exp in powers:
                term = term * self.matrix(name) ** exp
            total += term
        return total

    def evaluate(self, x: AlgebraElement) -> sympy.Matrix:
        total = sympy.zeros(self.rank, self.rank)
        for word, coeff in x.terms().items():
            term = self.coefficient(coeff)
            for letter in word:
                term = term * self.matrix(letter)
                if term.is_zero_matrix:
                    break
            total += term
        return total

    def as_dict(self) -> dict:
        return {
            'rank': self.rank,
            'components': list(self.components),
            'matrices': {k: _matrix_rows(v) for k, v in sorted(self.matrices.items(),
                                                                 key=lambda kv: natural_key(kv[0]))},
        }


@dataclass(frozen=True)
class TranscriptEntry:
    relation: str
    lhs: str
    rhs: str
    passed: bool

    def as_dict(self):
        return {'relation': self.relation, 'lhs': self.lhs, 'rhs': self.rhs, 'passed': self.passed}


@dataclass(frozen=True)
class Transcript:
    entries: Tuple[TranscriptEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> List[TranscriptEntry]:
        return [e for e in self.entries if not e.passed]

    def digest(self) -> str:
        payload = json.dumps([e.as_dict() for e in self.entries], sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def verify_representation(g: DGA, rho: Representation) -> Transcript:
    """
    Check rho(t_k) = -Id on the selected components, rho(x) = 0 for |x| != 0
    and rho(d a) = 0 for every degree-1 generator a.

    Returns:
        Transcript; a failed entry names the violated relation
    """
    entries = []
    r = rho.rank
    if r < 1:
        raise RepresentationError("a representation needs rank at least 1")
    for name, m in sorted(rho.matrices.items(), key=lambda kv: natural_key(kv[0])):
        if m.shape != (r, r):
            entries.append(TranscriptEntry(f"rho({name}) is {r}x{r}", str(m.shape), f"({r}, {r})", False))
        elif name in g.table and g.table[name] != 0:
            entries.append(TranscriptEntry("rho(x) = 0 for |x| != 0", f"rho({name})", _render_matrix(m),
                                           m.is_zero_matrix))
    if any(not e.passed for e in entries):
        return Transcript(tuple(entries))
    minus = -sympy.eye(r)
    by_component = _component_symbols(g)
    for component in rho.components:
        names = by_component.get(component, [])
        if len(names) > 1:
            m = sympy.eye(r)
            for name in names:
                m = m * rho.matrix(name)
            entries.append(TranscriptEntry(f"rho({' '.join(names)}) = -Id", _render_matrix(m),
                                           _render_matrix(minus), m == minus))
            continue
        for name in names:
            m = rho.matrix(name)
            entries.append(TranscriptEntry("rho(t_k) = -Id", f"rho({name}) = {_render_matrix(m)}",
                                           _render_matrix(minus), m == minus))
    zero = sympy.zeros(r, r)
    for chord in g.generators_in_degree(1):
        value = rho.evaluate(g.boundary(chord))
        entries.append(TranscriptEntry(f"rho(d {chord}) = 0", _render_matrix(value), _render_matrix(zero),
                                       value == zero))
    transcript = Transcript(tuple(entries))
    if not transcript.passed:
        logger.info("representation of %s fails: %s", g.name, transcript.failures[0].relation)
    return transcript


@dataclass(frozen=True, eq=False)
class Certificate:
    sublink: Tuple[int, ...]
    representation: Representation
    transcript: Transcript
    complete: bool = True

    @property
    def rank(self) -> int:
        return self.representation.rank

    def as_dict(self) -> dict:
        g = self.representation.dga
        return {
            'dga': g.name,
            'convention': g.convention,
            'sublink': list(self.sublink),
            'rank': self.rank,
            'search': 'exhaustive' if self.complete else 'bounded (incomplete)',
            'matrices': self.representation.as_dict()['matrices'],
            'transcript': [e.as_dict() for e in self.transcript.entries],
            'transcript_sha256': self.transcript.digest(),
        }


def certificate_to_json(cert: Certificate) -> str:
    return json.dumps(cert.as_dict(), sort_keys=True, indent=2) + '\n'


def certificate_from_json(text, g: DGA) -> Certificate:
    """Rebuild a certificate against the sublink DGA it was issued for."""
    data = json.loads(text) if isinstance(text, str) else text
    try:
        rank = int(data['rank'])
        sublink = tuple(int(k) for k in data['sublink'])
        matrices = {name: _rational_matrix(rows) for name, rows in data['matrices'].items()}
        entries = tuple(TranscriptEntry(e['relation'], e['lhs'], e['rhs'], bool(e['passed']))
                        for e in data['transcript'])
    except (KeyError, TypeError, ValueError) as exc:
        raise RepresentationError(f"malformed certificate: {exc}") from None
    rho = Representation(g, sublink, rank, matrices)
    return Certificate(sublink, rho, Transcript(entries), data.get('search') == 'exhaustive')


def reverify_certificate(text, g: DGA) -> Tuple[bool, Transcript]:
    """
    Re-check a stored certificate from its matrices.

    Passes when every relation holds again and the fresh transcript hashes to
    the stored one.
    """
    data = json.loads(text) if isinstance(text, str) else text
    cert = certificate_from_json(data, g)
    fresh = verify_representation(g, cert.representation)
    ok = fresh.passed and fresh.digest() == data.get('transcript_sha256')
    return ok, fresh


def _selected(g: DGA, sublink: Optional[Sequence[int]],
              one_basepoint: bool = True) -> Tuple[DGA, Tuple[int, ...]]:
    components = tuple(sorted(set(sublink))) if sublink else components_of(g)
    sub = sublink_dga(g, components)
    by_component = _component_symbols(sub)
    for component in components:
        count = len(by_component.get(component, []))
        if count == 0 or (one_basepoint and count != 1):
            raise RepresentationError(
                f"component {component} carries t symbols {by_component.get(component, [])}; "
                "merge them into one basepoint first")
    return sub, components


def rank1_certificate(g: DGA, sublink: Optional[Sequence[int]] = None, bound: int = 1,
                      cap: Optional[int] = None) -> Optional[Certificate]:
    """
    Search integer augmentations in [-bound, bound] of the sublink DGA with
    every t_k sent to -1; the first one found is a rank-1 certificate.

    Returns:
        Verified Certificate, or None when the bounded search finds nothing
    """
    from .augment import CoefficientRing, enumerate_augmentations

    sub, components = _selected(g, sublink)
    t_values = {name: -1 for names in _component_symbols(sub).values() for name in names}
    others = [s for s in sub.symbols if s not in t_values]
    if others:
        raise RepresentationError(f"symbols {others} have no prescribed value in a certificate")
    specialized = dataclasses.replace(
        sub, differential={c: sub.boundary(c).map_coefficients(t_values) for c in sub.table},
        symbols=(), symbol_components={})
    try:
        found = enumerate_augmentations(specialized, CoefficientRing(bound=bound), cap)
    except AugmentationError as exc:
        raise RepresentationError(str(exc)) from exc
    if not found:
        logger.info("no rank-1 certificate for %s with entries in [-%d, %d]", sub.name, bound, bound)
        return None
    eps = found[0]
    matrices = {c: sympy.Matrix([[eps(c)]]) for c in sub.generators_in_degree(0)}
    matrices.update({name: sympy.Matrix([[-1]]) for name in t_values})
    return _issue(sub, components, 1, matrices, complete=True)


def rank1_from_augmentation(system, eta, sublink: Optional[Sequence[int]] = None) -> Certificate:
    """
    A rank-1 certificate from an augmentation specialized by a local system.

    A component may carry several t symbols here; their product must be -1.
    Raises RepresentationError when eta does not make the values a representation.
    """
    sub, components = _selected(system.dga, sublink, one_basepoint=False)
    matrices = {}
    for chord in sub.generators_in_degree(0):
        matrices[chord] = sympy.Matrix([[eta.apply(system(chord))]])
    for names in _component_symbols(sub).values():
        for name in names:
            matrices[name] = sympy.Matrix([[eta.apply(system(name))]])
    return _issue(sub, components, 1, matrices, complete=True)


def _issue(sub: DGA, components, rank: int, matrices, complete: bool) -> Certificate:
    rho = Representation(sub, components, rank, matrices)
    transcript = verify_representation(sub, rho)
    if not transcript.passed:
        failure = transcript.failures[0]
        raise RepresentationError(f"{failure.relation} violated: {failure.lhs}")
    logger.info("certificate of rank %d for %s", rank, sub.name)
    return Certificate(tuple(components), rho, transcript, complete)


def representation_search(g: DGA, rank: int, sublink: Optional[Sequence[int]] = None, bound: int = 1,
                          cap: Optional[int] = None) -> Optional[Certificate]:
    """
    Bounded search for a rank 2 or 3 representation with integer entries in
    [-bound, bound]; a miss proves nothing.
    """
    if not 1 <= rank <= MAX_SEARCH_RANK:
        raise RepresentationError(f"representation search supports rank 1..{MAX_SEARCH_RANK}")
    if not 0 <= bound <= MAX_SEARCH_ENTRY:
        raise RepresentationError(f"entry bound must lie in 0..{MAX_SEARCH_ENTRY}")
    cap = cap or setting('LCH_AUGMENTATION_SEARCH_CAP')
    sub, components = _selected(g, sublink)
    t_names = [n for names in _component_symbols(sub).values() for n in names]
    chords = list(sub.generators_in_degree(0))
    position = {c: i for i, c in enumerate(chords)}
    ready: Dict[int, List[AlgebraElement]] = {}
    for chord in sub.generators_in_degree(1):
        image = sub.boundary(chord)
        part = AlgebraElement(sub.table, {w: c for w, c in image.terms().items()
                                          if all(sub.table[x] == 0 for x in w)})
        last = max((position[x] for x in part.letters()), default=-1)
        ready.setdefault(last, []).append(part)
    matrices = {name: -sympy.eye(rank) for name in t_names}
    rho = Representation(sub, components, rank, matrices)
    for part in ready.get(-1, []):
        if not rho.evaluate(part).is_zero_matrix:
            return None
    candidates = [sympy.Matrix(rank, rank, list(entries))
                  for entries in itertools.product(range(-bound, bound + 1), repeat=rank * rank)]
    nodes = 0

    def extend(index: int) -> bool:
        nonlocal nodes
        if index == len(chords):
            return True
        for candidate in candidates:
            nodes += 1
            if nodes > cap:
                raise SearchCapExceeded(f"rank-{rank} representation search exceeded {cap} nodes")
            matrices[chords[index]] = candidate
            if all(rho.evaluate(p).is_zero_matrix for p in ready.get(index, ())) and extend(index + 1):
                return True
        del matrices[chords[index]]
        return False

    if not extend(0):
        logger.info("bounded rank-%d search on %s found nothing (%d nodes)", rank, sub.name, nodes)
        return None
    return _issue(sub, components, rank, dict(matrices), complete=False)


def flexibility_flag(cert: Optional[Certificate]) -> str:
    return NOT_FLEXIBLE if cert is not None and cert.transcript.passed else NO_CONCLUSION


# ---------------------------------------------------------------------------
# the LC^H0 slice and rho-tilde
# ---------------------------------------------------------------------------

CHECK = 'check'
HAT = 'hat'
TAU = 'tau'


@dataclass(frozen=True)
class SliceImage:
    """d_H0 of one basis element: checked words, hatted words and tau coefficients."""
    checked: AlgebraElement
    hatted: AlgebraElement
    taus: Mapping[int, sympy.Expr] = field(default_factory=dict)
    out_of_slice: bool = False


@dataclass(frozen=True, eq=False)
class CyclicComplexSlice:
    """Basis elements of LC^H0 built from cyclically composable words of length <= bound."""
    dga: DGA
    bound: int
    components: Tuple[int, ...]
    words: Tuple[Tuple[str, ...], ...]
    images: Mapping[tuple, SliceImage]

    @property
    def basis(self) -> List[tuple]:
        return ([(CHECK, w) for w in self.words] + [(HAT, w) for w in self.words]
                + [(TAU, k) for k in self.components])


def _ends(g: DGA, chord: str) -> Tuple[int, int]:
    return g.chord_components.get(chord, (1, 1))


def cyclic_words(g: DGA, bound: int) -> List[Tuple[str, ...]]:
    """Cyclically composable words of non-empty chords, shortest first."""
    words = []
    chords = list(g.table)

    def grow(word, current):
        if _ends(g, word[-1])[1] == _ends(g, word[0])[0]:
            words.append(tuple(word))
        if len(word) == bound:
            return
        for c in chords:
            if _ends(g, c)[0] == current:
                grow(word + [c], _ends(g, c)[1])

    for c in chords:
        grow([c], _ends(g, c)[1])
    return sorted(words, key=g.table.word_key)


def cyclic_slice(g: DGA, bound: int) -> CyclicComplexSlice:
    """
    d_H0 on the slice: d(w check) = (d w, 0, delta(w check)) with delta
    non-zero only on single pure chords, where it is the constant term of
    d c times tau of its component; d(v hat) = (c1 check ... - ... ck check,
    d v hat, 0), whose two checked terms are one word and cancel; d(tau_k) = 0.
    """
    if bound < 1:
        raise RepresentationError("the slice bound must be at least 1")
    words = cyclic_words(g, bound)
    table = g.table
    zero = AlgebraElement.zero(table)
    images = {}
    for word in words:
        image = g.d(AlgebraElement.monomial(table, word))
        terms = image.terms()
        constant = terms.pop((), 0)
        out = any(len(w) > bound for w in terms)
        taus = {}
        if len(word) == 1 and constant != 0:
            taus[_ends(g, word[0])[0]] = constant
        nonempty = AlgebraElement(table, terms)
        images[(CHECK, word)] = SliceImage(nonempty, zero, taus, out)
        images[(HAT, word)] = SliceImage(zero, nonempty, {}, out)
    for k in components_of(g):
        images[(TAU, k)] = SliceImage(zero, zero, {})
    return CyclicComplexSlice(g, bound, components_of(g), tuple(words), images)


class _RhoTilde:
    """The block map rho' on End(V^n) and its extension rho-tilde."""

    def __init__(self, g: DGA, rho: Representation):
        self.g = g
        self.rho = rho
        self.components = components_of(g)
        self.index = {k: i for i, k in enumerate(self.components)}
        self.size = len(self.components) * rho.rank

    def block(self, k: int, r: int, m: sympy.Matrix) -> sympy.Matrix:
        out = sympy.zeros(self.size, self.size)
        n = self.rho.rank
        i, j = self.index[k] * n, self.index[r] * n
        out[i:i + n, j:j + n] = m
        return out

    def chord(self, c: str) -> sympy.Matrix:
        upper, lower = _ends(self.g, c)
        selected = set(self.rho.components)
        if upper not in selected or lower not in selected or c not in self.rho.dga.table:
            return sympy.zeros(self.size, self.size)
        return self.block(upper, lower, self.rho.matrix(c))

    def tau(self, k: int) -> sympy.Matrix:
        if k not in self.rho.components:
            return sympy.zeros(self.size, self.size)
        return self.block(k, k, sympy.eye(self.rho.rank))

    def scalar(self, p) -> sympy.Matrix:
        """Coefficients act through rho(t_k); symbols of unselected components act as 1."""
        known = {s for s in self.rho.matrices if s not in self.rho.dga.table}
        total = sympy.zeros(self.rho.rank, self.rho.rank)
        for powers, value in laurent_terms(p).items():
            term = sympy.eye(self.rho.rank) * value
            for name, exp in powers:
                if name in known:
                    term = term * self.rho.matrices[name] ** exp
            total += term
        return sympy.diag(*([total] * len(self.components)))

    def element(self, x: AlgebraElement) -> sympy.Matrix:
        total = sympy.zeros(self.size, self.size)
        for word, coeff in x.terms().items():
            term = self.scalar(coeff)
            for letter in word:
                term = term * self.chord(letter)
                if term.is_zero_matrix:
                    break
            total += term
        return total

    def image(self, value: SliceImage) -> sympy.Matrix:
        """Hatted words map to 0; a checked word maps to rho' of the word wherever the check sits."""
        total = self.element(value.checked)
        for k, p in value.taus.items():
            total += self.scalar(p) * self.tau(k)
        return total


@dataclass(frozen=True)
class RhoTildeReport:
    bound: int
    checked: int
    skipped: Tuple[str, ...]
    failures: Mapping[str, str]
    taus: Mapping[int, dict]

    @property
    def passed(self) -> bool:
        return not self.failures and all(t['nonzero'] and t['rho_t_minus_id'] for t in self.taus.values())

    def as_dict(self):
        return {
            'bound': self.bound,
            'passed': self.passed,
            'checked': self.checked,
            'skipped': list(self.skipped),
            'failures': dict(self.failures),
            'taus': {str(k): v for k, v in self.taus.items()},
        }


def _basis_text(key) -> str:
    kind, item = key
    if kind == TAU:
        return f"tau{item}"
    mark = '^' if kind == HAT else 'v'
    return f"{mark}({' '.join(item)})"


def rho_tilde_check(g: DGA, rho: Representation, bound: int) -> RhoTildeReport:
    """
    Check rho-tilde(d_H0 x) = 0 on every slice element whose differential
    stays inside the slice, and that each tau_k is a cycle with
    rho-tilde(tau_k) != 0.
    """
    piece = cyclic_slice(g, bound)
    tilde = _RhoTilde(g, rho)
    checked, skipped, failures = 0, [], {}
    for key in piece.basis:
        value = piece.images[key]
        if value.out_of_slice:
            skipped.append(_basis_text(key))
            continue
        checked += 1
        residue = tilde.image(value)
        if not residue.is_zero_matrix:
            failures[_basis_text(key)] = _render_matrix(residue)
    taus = {}
    minus = -sympy.eye(rho.rank)
    by_component = _component_symbols(g)
    for k in rho.components:
        value = piece.images[(TAU, k)]
        cycle = value.checked.is_zero() and value.hatted.is_zero() and not value.taus
        taus[k] = {
            'cycle': cycle,
            'nonzero': not tilde.tau(k).is_zero_matrix,
            'rho_t_minus_id': all(rho.matrix(t) == minus for t in by_component.get(k, [])),
        }
    if skipped:
        logger.info("rho-tilde check on %s skipped %d elements leaving the slice", g.name, len(skipped))
    return RhoTildeReport(bound, checked, tuple(skipped), failures, taus)
