"""Independent oracles and instance generators shared by the test modules."""
import json
import math
import random
from itertools import combinations, product
from pathlib import Path

from congrue.newton import NewtonPoly, evaluate, lcm_upto


def brute_force_crt(system):
    """Solutions in [0, lcm) of a system with positive moduli, by enumeration."""
    period = math.lcm(*(m for _, m in system)) if system else 1
    return period, [x for x in range(period) if all((x - a) % m == 0 for a, m in system)]


def random_certified_poly(rng, max_degree=8, scale=3):
    deg = rng.randint(0, max_degree)
    return NewtonPoly(tuple(lcm_upto(k) * rng.randint(-scale, scale) for k in range(deg + 1)))


def random_preserving_map(rng, lo=-6, hi=6, max_size=5):
    """Values p(x) + t_x * L for a certified p and L the lcm of all point differences."""
    size = rng.randint(0, max_size)
    dom = rng.sample(range(lo, hi + 1), size)
    p = random_certified_poly(rng)
    L = math.lcm(*(abs(x - y) for x, y in combinations(dom, 2))) if size > 1 else 1
    return {x: evaluate(p, x) + rng.randint(-2, 2) * L for x in dom}


def break_map(rng, pm):
    """Perturb one value so some pair fails divisibility; None if impossible."""
    if len(pm) < 2:
        return None
    x = rng.choice(sorted(pm))
    others = [y for y in pm if y != x and abs(y - x) > 1]
    if not others:
        return None
    y = rng.choice(others)
    out = dict(pm)
    out[x] += 1  # x - y does not divide 1
    return out


def pairs_preserve(pm):
    return all((pm[x] - pm[y]) % (x - y) == 0 for x, y in combinations(pm, 2))


def seeded(seed):
    return random.Random(seed)


FIXTURES = Path(__file__).parent / "fixtures"


def load_lattices():
    """Lattices of size <= 6 up to isomorphism, from the cached fixture."""
    from congrue.ultra import semilattice_from_json

    with open(FIXTURES / "lattices.json", encoding="utf-8") as fh:
        return [semilattice_from_json(doc) for doc in json.load(fh)]


def pointed_tables(V):
    """Every ultrametric table on V's carrier with d(0, x) = x."""
    m, b = V.size, V.bottom
    free = [(x, y) for x, y in combinations(range(m), 2) if b not in (x, y)]
    for values in product(range(m), repeat=len(free)):
        d = [[b] * m for _ in range(m)]
        for x in range(m):
            if x != b:
                d[b][x] = d[x][b] = x
        for (x, y), v in zip(free, values):
            d[x][y] = d[y][x] = v
        if all(V.leq[d[x][y]][V.join[d[x][z]][d[z][y]]] for x in range(m) for y in range(m) for z in range(m)):
            yield d


def small_spaces(max_points=4, max_size=5):
    """(V, S) for every lattice |V| <= max_size and space |E| <= max_points."""
    from congrue.ultra import iter_spaces

    for V in load_lattices():
        if V.size > max_size:
            continue
        for n in range(1, max_points + 1):
            for S in iter_spaces(V, n):
                yield V, S


def relation(p):
    return {(x, y) for x in range(p.n) for y in range(p.n) if p.related(x, y)}


def compose_rel(r, s):
    """{(x, y) : x r z and z s y}."""
    return {(x, y) for x, z in r for w, y in s if z == w}


def ball_relation_failures(S):
    """Names of the failing checks among: eq_d inside cong_d, contractions are the
    eq_d-preserving maps, least congruences sit below ball relations, and
    convexity matches composition of ball relations."""
    from congrue.eqvlat import preserves
    from congrue.ultra import (
        contractions,
        cong_d,
        delta_least_cong,
        eq_d,
        equiv_at,
        is_contraction,
        is_convex,
    )

    V, n = S.V, S.n
    bad = []
    E, C = eq_d(S), cong_d(S)
    if not set(E) <= set(C):
        bad.append("eq_d in cong_d")
    members = list(E)
    maps = set(contractions(S))
    for f in product(range(n), repeat=n):
        by_eq = all(preserves(f, p) for p in members)
        if by_eq != (f in maps) or by_eq != is_contraction(S, f):
            bad.append("contraction iff preserves eq_d")
            break
    for x, y in product(range(n), repeat=2):
        if not delta_least_cong(S, x, y) <= equiv_at(S, S.d[x][y]):
            bad.append("least congruence below the ball relation")
            break
    rels = [relation(equiv_at(S, r)) for r in range(V.size)]
    commuting = all(
        compose_rel(rels[r], rels[s]) == rels[V.join[r][s]] for r in range(V.size) for s in range(V.size)
    )
    if commuting != is_convex(S):
        bad.append("convex iff balls relations compose to the join")
    return bad
