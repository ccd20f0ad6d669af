"""
J2 and HS as rank 3 permutation groups of degree 100.

Each acts on a strongly regular graph with a base vertex ∞ whose stabilizer is a group
we can write down directly: U3(3) for the Hall-Janko graph, M22 for the Higman-Sims graph.
A graph automorphism moving ∞ is found by backtracking. Its commutator with a stabilizer
generator lies in the simple group and moves ∞, so together with the stabilizer it
generates the whole group.

Vertices are numbered from 0, and vertex 0 is ∞.
"""

import functools
import itertools
import logging
import os

import numpy as np

from blackbox.group import BlackBoxGroup, read_generators
from blackbox.operations import conjugate, has_order_in
from blackbox.permutation import Permutation, sympy_group
from common import DEFAULT_SEED, GENERATORS_DIR
from errors import EnumerationOverflow, ReconstructionError
from oracle.enumeration import EnumeratedGroup
from oracle.subgroups import closure, generators_for, keyset
from randomness import make_rng

U33_ORDER = 6048
J2_ORDER = 604800
HS_ORDER = 44352000

# (vertices, valency, common neighbours of adjacent vertices, of non-adjacent vertices)
HALL_JANKO = (100, 36, 14, 12)
HIGMAN_SIMS = (100, 22, 0, 6)

DEFAULT_NODE_LIMIT = 10**5

def _expect(what: str, found, expected):
    if found != expected:
        raise ReconstructionError(f"{what}: expected {expected}, found {found}")

# GF(9) = GF(3)[i] with i^2 = -1; a + b·i is stored as a + 3b
GF9_I = 3

def _gf9(a: int, b: int) -> int:
    return a % 3 + 3 * (b % 3)

def gf9_add(x: int, y: int) -> int:
    return _gf9(x % 3 + y % 3, x // 3 + y // 3)

def gf9_mul(x: int, y: int) -> int:
    (a, b), (c, d) = (x % 3, x // 3), (y % 3, y // 3)
    return _gf9(a * c - b * d, a * d + b * c)

def gf9_conj(x: int) -> int:
    """The Frobenius map x -> x^3, taking a + b·i to a - b·i."""
    return _gf9(x % 3, -(x // 3))

GF9_INVERSE = {x: next(y for y in range(1, 9) if gf9_mul(x, y) == 1) for x in range(1, 9)}

def hermitian(x, y) -> int:
    total = 0
    for u, v in zip(x, y):
        total = gf9_add(total, gf9_mul(u, gf9_conj(v)))
    return total

def _normalise(v) -> tuple:
    scale = GF9_INVERSE[next(c for c in v if c)]
    return tuple(gf9_mul(scale, c) for c in v)

def isotropic_points() -> list:
    """The 28 projective points of GF(9)^3 with h(v, v) = 0, each scaled to a leading 1."""
    vectors = (v for v in itertools.product(range(9), repeat=3) if any(v))
    return sorted({_normalise(v) for v in vectors if hermitian(v, v) == 0})

def _transvection(points: list, index: dict, v: tuple, c: int) -> Permutation:
    # x -> x + c·h(x, v)·v preserves h when c + c^3 = 0
    images = []
    for x in points:
        s = gf9_mul(c, hermitian(x, v))
        images.append(index[_normalise(tuple(gf9_add(xk, gf9_mul(s, vk)) for xk, vk in zip(x, v)))])
    return Permutation(images, one_based=False)

def unitary_group() -> EnumeratedGroup:
    """ U3(3) on the 28 isotropic points, generated by its unitary transvections.

    Raises:
        ReconstructionError: if the point count or the group order is off
    """
    points = isotropic_points()
    _expect('isotropic points', len(points), 28)
    index = {p: i for i, p in enumerate(points)}
    transvections = [_transvection(points, index, v, GF9_I) for v in points]
    try:
        U = EnumeratedGroup(transvections, cap=U33_ORDER, label='U3(3)')
    except EnumerationOverflow:
        raise ReconstructionError("the transvections generate more than U3(3)")
    _expect('|U3(3)|', len(U), U33_ORDER)
    return U

def is_strongly_regular(A: np.ndarray, parameters: tuple) -> bool:
    """ Whether A is the adjacency matrix of a strongly regular graph with these parameters.

    Args:
        A (np.ndarray): square boolean matrix
        parameters (tuple): (n, k, lambda, mu)
    """
    n, k, lam, mu = parameters
    if A.shape != (n, n) or A.diagonal().any() or not (A == A.T).all():
        return False
    M = A.astype(np.int64)
    if not (M.sum(axis=1) == k).all():
        return False
    I = np.eye(n, dtype=np.int64)
    return bool((M @ M == k * I + lam * M + mu * (1 - M - I)).all())

def graph_automorphism(A: np.ndarray, source: int, target: int, node_limit: int = DEFAULT_NODE_LIMIT) -> list:
    """ An automorphism of a graph mapping source to target, by backtracking.

    Every unmapped vertex keeps the images still consistent with its adjacencies to the
    mapped vertices; the vertex with the fewest left is mapped next.

    Returns:
        list[int] | None: 0-based image of each vertex, or None if there is no such automorphism

    Raises:
        ReconstructionError: if the search visits more than node_limit nodes
    """
    A = np.asarray(A, dtype=bool)
    n = len(A)
    nodes = 0

    def assign(candidates: np.ndarray, v: int, w: int) -> np.ndarray:
        # Neighbours of v go to neighbours of w, non-neighbours to non-neighbours
        narrowed = candidates & (A[v][:, None] == A[w][None, :])
        narrowed[:, w] = False
        narrowed[v, :] = False
        narrowed[v, w] = True
        return narrowed

    def extend(candidates: np.ndarray, images: np.ndarray):
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise ReconstructionError(f"no automorphism found within {node_limit} search nodes")
        unmapped = np.flatnonzero(images < 0)
        if unmapped.size == 0:
            return images
        counts = candidates[unmapped].sum(axis=1)
        if counts.min() == 0:
            return None
        v = int(unmapped[np.argmin(counts)])
        for w in np.flatnonzero(candidates[v]):
            mapped = images.copy()
            mapped[v] = w
            found = extend(assign(candidates, v, int(w)), mapped)
            if found is not None:
                return found
        return None

    images = np.full(n, -1, dtype=np.intp)
    images[source] = target
    found = extend(assign(np.ones((n, n), dtype=bool), source, target), images)
    logging.debug(f"(oracle): automorphism search visited {nodes} nodes")
    if found is None:
        return None
    if not (A[np.ix_(found, found)] == A).all():
        raise ReconstructionError("backtracking returned a map that is not an automorphism")
    return found.tolist()

def extend_by_automorphism(stabilizer: list, A: np.ndarray, order: int, label: str) -> BlackBoxGroup:
    """ Complete the stabilizer of vertex 0 to a group of the given order.

    Args:
        stabilizer (list[Permutation]): generators of the stabilizer, maximal in the group sought
        A (np.ndarray): adjacency matrix the stabilizer preserves
        order (int): order of the group sought
        label (str): label of the result

    Raises:
        ReconstructionError: no automorphism moves vertex 0, or the generated group has another order
    """
    images = graph_automorphism(A, 0, 1)
    if images is None:
        raise ReconstructionError(f"{label}: no automorphism moves vertex 0")
    sigma = Permutation(images, one_based=False)

    # [sigma, u] fixes vertex 0 exactly when u fixes the preimage of 0 under sigma
    base = sigma.inverse()(1)
    u = next(g for g in stabilizer if g(base) != base)
    c = sigma.inverse() * u.inverse() * sigma * u

    generators = list(stabilizer) + [c]
    _expect(f"|{label}|", sympy_group(generators).order(), order)
    logging.info(f"(oracle): constructed {label} on {len(A)} points with {len(generators)} generators")
    return BlackBoxGroup(generators, label)

def _subgroup_key(elements) -> frozenset:
    return frozenset(x.key for x in elements)

def hall_janko_vertices(U: EnumeratedGroup, rng) -> tuple:
    """ The 36 subgroups L2(7) and the 63 involutions of U3(3), with U3(3) acting on the 100 vertices.

    Vertex 1 + i is subgroups[i] and vertex 37 + j is involutions[j]; U3(3) acts on both by
    conjugation.

    Returns:
        tuple: (subgroups as element lists, involutions, generators on the vertices)
    """
    gens = generators_for(U.elements, rng)
    involutions = [x for x in U if has_order_in(x, {2})]
    _expect('involutions of U3(3)', len(involutions), 63)

    # An element of order 7 lies in exactly one L2(7), which contains 21 of the involutions
    s = next(x for x in U if has_order_in(x, {7}))
    L = None
    for t in involutions:
        try:
            candidate = closure([s, t], cap=168)
        except EnumerationOverflow:
            continue
        if len(candidate) == 168:
            L = candidate.elements
            break
    if L is None:
        raise ReconstructionError("no L2(7) through an element of order 7")

    subgroups = [L]
    position = {_subgroup_key(L): 0}
    frontier = [L]
    while frontier:
        nxt = []
        for S in frontier:
            for g in gens:
                image = [conjugate(x, g) for x in S]
                key = _subgroup_key(image)
                if key not in position:
                    position[key] = len(subgroups)
                    subgroups.append(image)
                    nxt.append(image)
        frontier = nxt
    _expect('conjugates of L2(7)', len(subgroups), 36)

    involution_position = {t.key: j for j, t in enumerate(involutions)}
    def on_vertices(g) -> Permutation:
        images = [0]
        images += [1 + position[_subgroup_key(conjugate(x, g) for x in S)] for S in subgroups]
        images += [37 + involution_position[conjugate(t, g).key] for t in involutions]
        return Permutation(images, one_based=False)

    return subgroups, involutions, [on_vertices(g) for g in gens]

def _orbits(stabilizer: np.ndarray, block: list) -> list:
    """Orbits on block of the group whose elements are the rows of stabilizer (vertex images)."""
    seen = set()
    orbits = []
    for v in block:
        if v not in seen:
            orbit = sorted(set(stabilizer[:, v].tolist()))
            seen.update(orbit)
            orbits.append(orbit)
    return orbits

def _unions_of_size(orbits: list, size: int):
    for r in range(1, len(orbits) + 1):
        for combo in itertools.combinations(orbits, r):
            if sum(len(o) for o in combo) == size:
                yield sorted(itertools.chain.from_iterable(combo))

def hall_janko_graphs(subgroups: list, involutions: list, vertex_group: EnumeratedGroup):
    """ Candidate Hall-Janko graphs on the 100 vertices, as boolean adjacency matrices.

    ∞ is joined to the 36 subgroups and each subgroup to its 21 involutions. The remaining
    edges are unions of U3(3)-orbitals: 14 more neighbours for a subgroup, 24 for an
    involution. Every choice that is strongly regular with parameters (100, 36, 14, 12)
    is yielded.
    """
    base = np.zeros((100, 100), dtype=bool)
    base[0, 1:37] = base[1:37, 0] = True
    for i, S in enumerate(subgroups):
        keys = keyset(S)
        for j, t in enumerate(involutions):
            if t.key in keys:
                base[1 + i, 37 + j] = base[37 + j, 1 + i] = True

    images = np.array([list(x.key) for x in vertex_group], dtype=np.intp)
    near_orbits = _orbits(images[images[:, 1] == 1], list(range(2, 37)))
    far_orbits = _orbits(images[images[:, 37] == 37], list(range(38, 100)))
    for near in _unions_of_size(near_orbits, 14):
        for far in _unions_of_size(far_orbits, 24):
            A = base.copy()
            A[images[:, [1]], images[:, near]] = True
            A[images[:, [37]], images[:, far]] = True
            if is_strongly_regular(A, HALL_JANKO):
                yield A

@functools.lru_cache(maxsize=None)
def hall_janko_group(seed: int = DEFAULT_SEED) -> BlackBoxGroup:
    """ J2 on the 100 vertices of the Hall-Janko graph.

    Raises:
        ReconstructionError: if no candidate graph extends U3(3) to a group of order 604800
    """
    U = unitary_group()
    subgroups, involutions, gens = hall_janko_vertices(U, make_rng(seed))
    vertex_group = EnumeratedGroup(gens, cap=U33_ORDER, label='U3(3) on 100 points')
    _expect('|U3(3) on 100 points|', len(vertex_group), U33_ORDER)

    for A in hall_janko_graphs(subgroups, involutions, vertex_group):
        try:
            return extend_by_automorphism(gens, A, J2_ORDER, 'j2')
        except ReconstructionError as e:
            logging.debug(f"(oracle): candidate graph rejected: {e}")
    raise ReconstructionError("no orbital union gives the Hall-Janko graph")

def hexads(m22: BlackBoxGroup) -> list:
    """ The 77 hexads of the Steiner system S(3, 6, 22) preserved by M22, as sorted 0-based lists.

    The pointwise stabilizer of three points has one orbit of length 3, which completes
    them to their hexad; the other hexads are its images.
    """
    stabilizer = sympy_group(m22.generators).pointwise_stabilizer([0, 1, 2])
    rest = [o for o in stabilizer.orbits() if len(o) == 3 and not o & {0, 1, 2}]
    _expect('orbits of length 3 completing a hexad', len(rest), 1)

    first = frozenset({0, 1, 2} | set(rest[0]))
    found = {first}
    frontier = [first]
    while frontier:
        nxt = []
        for h in frontier:
            for g in m22.generators:
                image = frozenset(g.key[p] for p in h)
                if image not in found:
                    found.add(image)
                    nxt.append(image)
        frontier = nxt
    _expect('hexads', len(found), 77)
    return sorted(sorted(h) for h in found)

@functools.lru_cache(maxsize=None)
def higman_sims_group() -> BlackBoxGroup:
    """ HS on the 100 vertices of the Higman-Sims graph.

    Vertex 0 is ∞, vertices 1..22 the points of M22 and 23..99 the hexads. ∞ is joined to
    every point, a point to the 21 hexads through it, and two hexads when they are disjoint.
    """
    m22 = read_generators(os.path.join(GENERATORS_DIR, 'm22.gens'))
    blocks = [frozenset(h) for h in hexads(m22)]
    vertex = {h: 23 + i for i, h in enumerate(blocks)}

    A = np.zeros((100, 100), dtype=bool)
    A[0, 1:23] = A[1:23, 0] = True
    for h in blocks:
        for p in h:
            A[1 + p, vertex[h]] = A[vertex[h], 1 + p] = True
        for k in blocks:
            if not h & k:
                A[vertex[h], vertex[k]] = True
    if not is_strongly_regular(A, HIGMAN_SIMS):
        raise ReconstructionError("the hexad graph is not strongly regular (100, 22, 0, 6)")

    gens = []
    for g in m22.generators:
        images = [0] + [1 + g.key[p] for p in range(22)]
        images += [vertex[frozenset(g.key[p] for p in h)] for h in blocks]
        gens.append(Permutation(images, one_based=False))
    return extend_by_automorphism(gens, A, HS_ORDER, 'hs')
