"""Permutation groups with deterministic stabiliser chains.

A permutation on 0..k-1 is a numpy int32 array of images; the product
convention is ``x^(gh) = (x^g)^h``, so ``compose(g, h)`` applies g first.
PermGroup keeps a lazily built Schreier-Sims chain with Schreier-vector
transversals; base points are chosen ascending (smallest moved point),
which makes every derived count reproducible.  A caller that already
knows the group order can pass it in: the chain build then stops as soon
as the product of fundamental orbit lengths reaches it, which is both
exact and very fast for the large-degree lifted groups.
"""

from __future__ import annotations

import threading
from collections import deque

import numpy as np

DTYPE = np.int32


class GroupError(ValueError):
    pass


# ---------------------------------------------------------------------------
# permutations as arrays
# ---------------------------------------------------------------------------


def identity_perm(n):
    return np.arange(n, dtype=DTYPE)


def is_identity(p):
    return bool(np.all(p == np.arange(len(p), dtype=p.dtype)))


def compose(g, h):
    """g followed by h: (g*h)[x] = h[g[x]]."""
    return h[g]


def inverse(p):
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def conjugate(g, h):
    """h^-1 g h."""
    hi = inverse(h)
    return h[g[hi]]


def perm_order(p):
    order = 1
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = int(p[j])
            length += 1
        order = int(np.lcm(order, length))
    return order


def from_cycles(n, cycles):
    p = identity_perm(n)
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            p[a] = b
    return p


def cycle_string(p):
    out = []
    seen = set()
    for i in range(len(p)):
        if i in seen or p[i] == i:
            seen.add(i)
            continue
        cyc = [i]
        j = int(p[i])
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = int(p[j])
        seen.add(i)
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) if out else "()"


def check_perm(p, degree=None):
    p = np.asarray(p, dtype=DTYPE)
    n = len(p) if degree is None else degree
    if len(p) != n or not np.all(np.sort(p) == np.arange(n, dtype=DTYPE)):
        raise GroupError("not a permutation of 0..%d" % (n - 1))
    return p


# a Perm value is just an image array
Perm = np.ndarray


# ---------------------------------------------------------------------------
# stabiliser chain
# ---------------------------------------------------------------------------


class _Level:
    __slots__ = ("base", "gens", "inv_gens", "via", "parent", "orbit", "pending")

    def __init__(self, degree, base):
        self.base = base
        self.gens = []
        self.inv_gens = []
        self.via = np.full(degree, -2, dtype=DTYPE)
        self.via[base] = -1
        self.parent = np.full(degree, -1, dtype=DTYPE)
        self.orbit = [base]
        self.pending = deque()


class ChainOrderMismatch(GroupError):
    pass


class StabChain:
    """Deterministic Schreier-Sims stabiliser chain."""

    def __init__(self, degree, gens, base_hint=(), known_order=None):
        self.degree = degree
        self.levels: list[_Level] = []
        self.base_hint = list(base_hint)
        self.known_order = known_order
        self.complete = False
        seen = set()
        todo = []
        for g in gens:
            key = g.tobytes()
            if key in seen or is_identity(g):
                continue
            seen.add(key)
            todo.append(np.asarray(g, dtype=DTYPE))
        for g in todo:
            if self.complete:
                # group already fully known; just confirm membership
                resid, _ = self._strip(g, 0)
                if not is_identity(resid):
                    raise GroupError("early-exit chain rejected a generator")
                continue
            resid, lvl = self._strip(g, 0)
            if not is_identity(resid):
                self._introduce(lvl, resid)
                self._check_known()
        self._process_pending()
        if self.known_order is not None and not self.complete:
            raise ChainOrderMismatch(
                "chain closed at order %d, expected %d" % (self.order(), self.known_order)
            )

    # -- queries ------------------------------------------------------------

    def order(self):
        n = 1
        for lev in self.levels:
            n *= len(lev.orbit)
        return n

    def base(self):
        return [lev.base for lev in self.levels]

    def contains(self, p):
        resid, _ = self._strip(np.asarray(p, dtype=DTYPE), 0)
        return is_identity(resid)

    def stabiliser_gens(self, level=1):
        """Strong generators fixing the first `level` base points."""
        if level < len(self.levels):
            return list(self.levels[level].gens)
        return []

    # -- construction internals ----------------------------------------------

    def _strip(self, h, from_level):
        for i in range(from_level, len(self.levels)):
            lev = self.levels[i]
            b = lev.base
            beta = int(h[b])
            if beta == b:
                continue
            if lev.via[beta] == -2:
                return h, i
            while beta != b:
                gi = lev.inv_gens[lev.via[beta]]
                h = gi[h]
                beta = int(gi[beta])
        return h, len(self.levels)

    def _introduce(self, level, g):
        """Install non-identity strong generator g, which fixes bases < level."""
        if level == len(self.levels):
            base = None
            for hint in self.base_hint[len(self.levels) :]:
                if g[hint] != hint:
                    base = int(hint)
                    break
            if base is None:
                base = int(np.nonzero(g != np.arange(self.degree, dtype=DTYPE))[0][0])
            self.levels.append(_Level(self.degree, base))
        ginv = inverse(g)
        for lv in range(level + 1):
            lev = self.levels[lv]
            lev.gens.append(g)
            lev.inv_gens.append(ginv)
            self._extend_orbit(lev, len(lev.gens) - 1)

    def _extend_orbit(self, lev, new_gen_idx=None):
        queue = deque()
        if new_gen_idx is not None:
            g = lev.gens[new_gen_idx]
            for pt in list(lev.orbit):
                img = int(g[pt])
                if lev.via[img] == -2:
                    lev.via[img] = new_gen_idx
                    lev.parent[img] = pt
                    lev.orbit.append(img)
                    queue.append(img)
                else:
                    lev.pending.append((pt, new_gen_idx))
        while queue:
            pt = queue.popleft()
            for k, g in enumerate(lev.gens):
                img = int(g[pt])
                if lev.via[img] == -2:
                    lev.via[img] = k
                    lev.parent[img] = pt
                    lev.orbit.append(img)
                    queue.append(img)
                else:
                    lev.pending.append((pt, k))

    def _transversal(self, lev, pt):
        """Permutation u with base^u = pt (None = identity)."""
        idxs = []
        q = pt
        while q != lev.base:
            idxs.append(lev.via[q])
            q = int(lev.parent[q])
        u = None
        for k in reversed(idxs):
            g = lev.gens[k]
            u = g if u is None else g[u]
        return u

    def _check_known(self):
        if self.known_order is not None and self.order() == self.known_order:
            self.complete = True
            for lev in self.levels:
                lev.pending.clear()

    def _process_pending(self):
        if self.complete:
            return
        while True:
            i = len(self.levels) - 1
            while i >= 0 and not self.levels[i].pending:
                i -= 1
            if i < 0:
                break
            lev = self.levels[i]
            pt, k = lev.pending.popleft()
            u = self._transversal(lev, pt)
            s = lev.gens[k]
            w = s if u is None else s[u]
            resid, j = self._strip(w, i)
            if not is_identity(resid):
                self._introduce(j, resid)
                self._check_known()
                if self.complete:
                    return
        self.complete = self.known_order is None or self.order() == self.known_order


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


class PermGroup:
    """Finite permutation group on 0..degree-1 given by generators."""

    __slots__ = ("degree", "gens", "name", "_known_order", "_chains",
                 "base_hint", "_lock")

    def __init__(self, degree, gens, name=None, known_order=None, base_hint=()):
        self.degree = int(degree)
        self.base_hint = tuple(int(b) for b in base_hint)
        self._lock = threading.Lock()
        cleaned = []
        seen = set()
        for g in gens:
            g = check_perm(np.asarray(g, dtype=DTYPE), self.degree)
            key = g.tobytes()
            if key in seen or is_identity(g):
                continue
            seen.add(key)
            g.setflags(write=False)
            cleaned.append(g)
        self.gens = cleaned
        self.name = name
        self._known_order = known_order
        self._chains = {}

    def __repr__(self):
        label = self.name or "PermGroup"
        return "<%s degree=%d gens=%d>" % (label, self.degree, len(self.gens))

    def chain(self, base_hint=None):
        key = self.base_hint if base_hint is None else tuple(base_hint)
        ch = self._chains.get(key)
        if ch is None:
            with self._lock:  # lazy build must not race under HATC_THREADS > 1
                ch = self._chains.get(key)
                if ch is None:
                    try:
                        ch = StabChain(self.degree, self.gens, base_hint=key,
                                       known_order=self._known_order)
                    except ChainOrderMismatch:
                        ch = StabChain(self.degree, self.gens, base_hint=key)
                    self._chains[key] = ch
                    self._known_order = ch.order()
        return ch

    def order(self):
        return self.chain().order()

    def is_trivial(self):
        return not self.gens

    def contains(self, p):
        p = np.asarray(p, dtype=DTYPE)
        if len(p) != self.degree:
            raise GroupError("degree mismatch: %d vs %d" % (len(p), self.degree))
        return self.chain().contains(p)

    def orbit(self, point):
        if point >= self.degree:
            raise GroupError("point %d out of range" % point)
        seen = np.zeros(self.degree, dtype=bool)
        seen[point] = True
        frontier = [point]
        out = [point]
        while frontier:
            pts = np.array(frontier, dtype=DTYPE)
            frontier = []
            for g in self.gens:
                imgs = g[pts]
                new = imgs[~seen[imgs]]
                if new.size:
                    new = np.unique(new)
                    new = new[~seen[new]]
                    seen[new] = True
                    out.extend(int(x) for x in new)
                    frontier.extend(int(x) for x in new)
        return set(out)

    def orbits(self, points=None):
        todo = range(self.degree) if points is None else points
        seen = set()
        parts = []
        for p in todo:
            if p in seen:
                continue
            orb = self.orbit(p)
            seen |= orb
            parts.append(orb)
        return parts

    def point_stabiliser(self, point):
        movers = [g for g in self.gens if g[point] != point]
        if not movers:
            return PermGroup(self.degree, self.gens, known_order=self.order())
        order = self.order()
        ordered = movers + [g for g in self.gens if g[point] == point]
        ch = StabChain(self.degree, ordered, base_hint=(int(point),), known_order=order)
        if ch.levels[0].base != point:
            raise GroupError("stabiliser chain failed to anchor at the point")
        stab_order = order // len(ch.levels[0].orbit)
        return PermGroup(self.degree, ch.stabiliser_gens(1), known_order=stab_order)

    def elements(self, cap=200_000_000):
        """All elements as an (order, degree) array, BFS order from identity."""
        if self.order() * self.degree > cap:
            raise GroupError("group too large to enumerate (%d elements)" % self.order())
        rows = [identity_perm(self.degree)]
        index = {rows[0].tobytes(): 0}
        frontier = [0]
        while frontier:
            fresh = []
            block = np.stack([rows[i] for i in frontier])
            for g in self.gens:
                prods = g[block]
                for row in prods:
                    key = row.tobytes()
                    if key not in index:
                        index[key] = len(rows)
                        rows.append(row.copy())
                        fresh.append(len(rows) - 1)
            frontier = fresh
        if len(rows) != self.order():
            raise GroupError("element enumeration disagrees with chain order")
        return np.stack(rows), index


# ---------------------------------------------------------------------------
# operation-style wrappers
# ---------------------------------------------------------------------------


def group_order(g: PermGroup) -> int:
    return g.order()


def orbit(g: PermGroup, point: int) -> set:
    return g.orbit(point)


def orbits(g: PermGroup):
    return g.orbits()


def point_stabiliser(g: PermGroup, point: int) -> PermGroup:
    return g.point_stabiliser(point)


def is_member(g: PermGroup, p) -> bool:
    return g.contains(p)


def is_semiregular(n: PermGroup, points) -> bool:
    """True iff the stabiliser in n of every listed point is trivial."""
    points = list(points)
    if not points:
        raise GroupError("is_semiregular needs a non-empty point set")
    order = n.order()
    seen = set()
    for p in points:
        if p in seen:
            continue
        orb = n.orbit(p)
        seen |= orb
        if len(orb) != order:
            return False
    return True


def normal_closure(g: PermGroup, seeds) -> PermGroup:
    """Smallest normal subgroup of g containing the given elements."""
    degree = g.degree
    gens = []
    for s in seeds:
        s = np.asarray(s, dtype=DTYPE)
        if not g.contains(s):
            raise GroupError("seed element lies outside the group")
        if not is_identity(s):
            gens.append(s)
    if not gens:
        return PermGroup(degree, [])
    closure = list(gens)
    ch = StabChain(degree, closure)
    queue = deque(closure)
    g_invs = [inverse(x) for x in g.gens]
    while queue:
        k = queue.popleft()
        for gg, gi in zip(g.gens, g_invs):
            c = gg[k[gi]]  # g^-1 * k * g
            resid, lvl = ch._strip(c, 0)
            if not is_identity(resid):
                ch._introduce(lvl, resid)
                ch._process_pending()
                closure.append(c)
                queue.append(c)
    return PermGroup(degree, closure, known_order=ch.order())


def derived_subgroup(g: PermGroup) -> PermGroup:
    comms = []
    for i, a in enumerate(g.gens):
        ai = inverse(a)
        for b in g.gens[i + 1 :]:
            bi = inverse(b)
            comms.append(b[a[bi[ai]]])  # a^-1 b^-1 a b
    return normal_closure(g, comms)


def is_solvable(g: PermGroup, max_depth=64) -> bool:
    h = g
    order = h.order()
    for _ in range(max_depth):
        if order == 1:
            return True
        d = derived_subgroup(h)
        d_order = d.order()
        if d_order == order:
            return False
        h, order = d, d_order
    raise GroupError("derived series did not terminate within %d steps" % max_depth)


def is_dihedral_8(h: PermGroup) -> bool:
    """Dihedral of order 8 (recognised by involution count, vs Q8)."""
    if h.order() != 8:
        return False
    if _is_abelian(h):
        return False
    els, _ = h.elements()
    invol = sum(1 for e in els if not is_identity(e) and is_identity(e[e]))
    return invol > 1


def is_elementary_abelian(h: PermGroup) -> bool:
    if h.is_trivial():
        return True
    if not _is_abelian(h):
        return False
    primes = {perm_order(g) for g in h.gens}
    if len(primes) != 1:
        return False
    p = primes.pop()
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def _is_abelian(h: PermGroup) -> bool:
    for i, a in enumerate(h.gens):
        for b in h.gens[i + 1 :]:
            if not np.array_equal(a[b], b[a]):
                return False
    return True


# ---------------------------------------------------------------------------
# group catalog files
# ---------------------------------------------------------------------------


def read_group_file(path) -> PermGroup:
    """Parse the one-group-per-file catalog format.

    Lines: ``group <name>``, ``degree <k>``, optional ``order <n>``
    (verified), then ``gen <i0> ... <i_{k-1}>`` per generator.
    """
    name = None
    degree = None
    order = None
    gens = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            if head == "group":
                name = rest.strip()
            elif head == "degree":
                degree = int(rest)
            elif head == "order":
                order = int(rest)
            elif head == "gen":
                if degree is None:
                    raise GroupError("%s:%d: gen before degree" % (path, lineno))
                images = np.array(rest.split(), dtype=DTYPE)
                if len(images) != degree:
                    raise GroupError("%s:%d: expected %d images" % (path, lineno, degree))
                gens.append(check_perm(images, degree))
            else:
                raise GroupError("%s:%d: unknown directive %r" % (path, lineno, head))
    if degree is None:
        raise GroupError("%s: missing degree" % path)
    grp = PermGroup(degree, gens, name=name)
    if order is not None and grp.order() != order:
        raise GroupError(
            "%s: declared order %d but chain gives %d" % (path, order, grp.order())
        )
    return grp


def write_group_file(grp: PermGroup, path, name=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("group %s\n" % (name or grp.name or "unnamed"))
        fh.write("degree %d\n" % grp.degree)
        fh.write("order %d\n" % grp.order())
        for g in grp.gens:
            fh.write("gen %s\n" % " ".join(str(int(x)) for x in g))
