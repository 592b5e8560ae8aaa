import random

import pytest

from eigenposet.gposet import GPoset, make_poset
from eigenposet.homology import order_complex
from eigenposet.refl import ReflCoset, parse_group_spec

# (group spec, eigenvalue orders) for the verification battery
BATTERY = [
    ("sym:3", (1, 2, 3)),
    ("sym:4", (1, 2, 3, 4)),
    ("gmpn:2,1,2", (1, 2, 4)),
    ("gmpn:3,1,2", (1, 3)),
    ("gmpn:2,2,3", (1, 2)),
    ("st:4", (1, 4)),
]

BATTERY_INSTANCES = [(spec, m) for spec, ms in BATTERY for m in ms]


@pytest.fixture(scope="session")
def groups():
    return {spec: parse_group_spec(spec) for spec, _ in BATTERY}


@pytest.fixture(scope="session")
def cosets(groups):
    return {spec: ReflCoset(g) for spec, g in groups.items()}


# -- random G-posets for the randomized criteria -----------------------------

def _find_automorphisms(p: GPoset, rng, want=4, node_budget=4000):
    n = p.n
    down = p.leq.sum(axis=0)
    up = p.leq.sum(axis=1)
    inv = [(int(down[i]), int(up[i])) for i in range(n)]
    found = []
    nodes = 0

    def backtrack(phi, used, i):
        nonlocal nodes
        if len(found) >= want:
            return
        if i == n:
            found.append(tuple(phi))
            return
        cands = [j for j in range(n) if not used[j] and inv[j] == inv[i]]
        rng.shuffle(cands)
        for j in cands:
            nodes += 1
            if nodes > node_budget:
                return
            ok = True
            for k in range(i):
                if bool(p.leq[k, i]) != bool(p.leq[phi[k], j]) or \
                   bool(p.leq[i, k]) != bool(p.leq[j, phi[k]]):
                    ok = False
                    break
            if ok:
                phi[i] = j
                used[j] = True
                backtrack(phi, used, i + 1)
                used[j] = False
                phi[i] = -1

    backtrack([-1] * n, [False] * n, 0)
    return found


def _close_perms(gens, n, cap=48):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(a[g[i]] for i in range(n))
                if c not in seen:
                    if len(seen) >= cap:
                        return None
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


def random_gposet(rng, max_n=12, max_simplices=900):
    """A random poset of at most max_n elements with a random subgroup of
    its automorphism group recorded as the action."""
    while True:
        n = rng.randint(3, max_n)
        less = [(i, j) for i in range(n) for j in range(i + 1, n)
                if rng.random() < 0.22]
        p = make_poset(list(range(n)), less)
        total = sum(len(level) for level in order_complex(p).chains)
        if total > max_simplices:
            continue
        autos = _find_automorphisms(p, rng)
        gens = [a for a in autos if a != tuple(range(n))]
        rng.shuffle(gens)
        perms = None
        for k in (2, 1, 0):
            perms = _close_perms(gens[:k], n)
            if perms is not None:
                break
        return GPoset(p.payloads, p.leq, group=None, perms=perms, tag="random")


def random_stable_upper_ideal(p: GPoset, rng):
    """A random action-stable upper order ideal."""
    n = p.n
    ideal = set()
    for s in rng.sample(range(n), rng.randint(1, n)):
        ideal.add(s)
    changed = True
    while changed:
        changed = False
        for i in list(ideal):
            for j in range(n):
                if p.less(i, j) and j not in ideal:
                    ideal.add(j)
                    changed = True
            for perm in p.perms:
                if perm[i] not in ideal:
                    ideal.add(perm[i])
                    changed = True
    return ideal


def random_minimal_extension_ideal(p: GPoset, rng, tries=40):
    """An action-stable upper ideal whose complement consists of minimal
    elements, each with something above it inside the ideal."""
    mins = p.minimal_indices()
    min_set = set(mins)
    for _ in range(tries):
        chosen = {m for m in mins if rng.random() < 0.6}
        # orbit closure of the removed set, staying within the minimals
        changed = True
        while changed:
            changed = False
            for m in list(chosen):
                for perm in p.perms:
                    if perm[m] not in chosen:
                        chosen.add(perm[m])
                        changed = True
        if not chosen <= min_set:
            continue
        ideal = set(range(p.n)) - chosen
        if not chosen:
            continue
        if all(any(p.less(m, j) for j in ideal) for m in chosen):
            return ideal
    return None
