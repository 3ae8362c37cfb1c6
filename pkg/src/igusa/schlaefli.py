"""Incidence combinatorics of the 27 lines on a cubic surface: double sixes,
tritangent trios, the incidence automorphism group and counting lemmas."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property


class IncidentPair(ValueError):
    """The two lines meet, but the operation needs disjoint lines."""


def line_labels() -> tuple:
    a = [f"a{i}" for i in range(1, 7)]
    b = [f"b{i}" for i in range(1, 7)]
    c = [f"c{i}{j}" for i, j in itertools.combinations(range(1, 7), 2)]
    return tuple(a + b + c)


def _parse(label: str):
    kind = label[0]
    return kind, {int(ch) for ch in label[1:]}


def incident(l: str, m: str) -> bool:
    """Classical incidence rule for distinct labels."""
    if l == m:
        return False
    (k1, s1), (k2, s2) = _parse(l), _parse(m)
    if k1 > k2:
        (k1, s1), (k2, s2) = (k2, s2), (k1, s1)
    if k1 == k2 and k1 in "ab":
        return False
    if (k1, k2) == ("a", "b"):
        return s1 != s2
    if k2 == "c" and k1 in "ab":
        return s1 <= s2
    return not (s1 & s2)


@dataclass(frozen=True)
class DoubleSix:
    six1: tuple
    six2: tuple

    def key(self) -> frozenset:
        return frozenset((frozenset(self.six1), frozenset(self.six2)))

    def labels(self) -> frozenset:
        return frozenset(self.six1) | frozenset(self.six2)

    def side_of(self, l: str) -> int | None:
        if l in self.six1:
            return 0
        if l in self.six2:
            return 1
        return None

    def to_json(self):
        return [list(self.six1), list(self.six2)]


class SchlaefliConfig:
    """The 27 labels with adjacency stored as bit masks."""

    def __init__(self):
        self.labels = line_labels()
        self.index = {l: i for i, l in enumerate(self.labels)}
        n = len(self.labels)
        self.adj = [0] * n
        for i, j in itertools.combinations(range(n), 2):
            if incident(self.labels[i], self.labels[j]):
                self.adj[i] |= 1 << j
                self.adj[j] |= 1 << i

    def __len__(self):
        return len(self.labels)

    def meets(self, l: str, m: str) -> bool:
        return bool(self.adj[self.index[l]] >> self.index[m] & 1)

    def skew(self, l: str, m: str) -> bool:
        return l != m and not self.meets(l, m)

    def _names(self, mask: int) -> list[str]:
        return [self.labels[i] for i in range(len(self.labels)) if mask >> i & 1]

    def neighborhood(self, l: str) -> dict:
        i = self.index[l]
        full = (1 << len(self.labels)) - 1
        return {
            "incident": self._names(self.adj[i]),
            "disjoint": self._names(full & ~self.adj[i] & ~(1 << i)),
        }

    def disjoint_pairs(self, ordered: bool = True) -> list[tuple]:
        pairs = [(l, m) for l in self.labels for m in self.labels if self.skew(l, m)]
        if ordered:
            return pairs
        return [(l, m) for l, m in pairs if self.index[l] < self.index[m]]

    # -- cliques --------------------------------------------------------------

    def _skew_masks(self) -> list[int]:
        full = (1 << len(self.labels)) - 1
        return [full & ~a & ~(1 << i) for i, a in enumerate(self.adj)]

    def sixes(self) -> list[frozenset]:
        """All sets of six pairwise disjoint lines."""
        skew = self._skew_masks()
        out = []

        def grow(chosen, cand, start):
            if len(chosen) == 6:
                out.append(frozenset(self.labels[i] for i in chosen))
                return
            for i in range(start, len(self.labels)):
                if cand >> i & 1:
                    grow(chosen + [i], cand & skew[i], i + 1)

        grow([], (1 << len(self.labels)) - 1, 0)
        return out

    def max_disjoint_set(self) -> int:
        skew = self._skew_masks()
        best = 0

        def grow(size, cand):
            nonlocal best
            best = max(best, size)
            if size + bin(cand).count("1") <= best:
                return
            while cand:
                i = cand.bit_length() - 1
                cand &= ~(1 << i)
                grow(size + 1, cand & skew[i])

        grow(0, (1 << len(self.labels)) - 1)
        return best

    # -- double sixes and trios -----------------------------------------------

    @cached_property
    def double_sixes(self) -> tuple:
        sixes = self.sixes()
        seen = {}
        for S in sixes:
            for T in sixes:
                if S & T:
                    continue
                if all(sum(self.meets(s, t) for t in T) == 5 for s in S) and \
                        all(sum(self.meets(s, t) for s in S) == 5 for t in T):
                    D = self._ordered_double_six(S, T)
                    seen.setdefault(D.key(), D)
        return tuple(sorted(seen.values(), key=lambda D: [self.index[l] for l in D.six1]))

    def _ordered_double_six(self, S, T) -> DoubleSix:
        if min(self.index[l] for l in T) < min(self.index[l] for l in S):
            S, T = T, S
        six1 = sorted(S, key=self.index.get)
        six2 = [next(t for t in T if self.skew(s, t)) for s in six1]
        return DoubleSix(tuple(six1), tuple(six2))

    def is_double_six(self, D: DoubleSix) -> bool:
        if len(set(D.six1) | set(D.six2)) != 12:
            return False
        for S in (D.six1, D.six2):
            if any(self.meets(x, y) for x, y in itertools.combinations(S, 2)):
                return False
        for i, s in enumerate(D.six1):
            for j, t in enumerate(D.six2):
                if self.meets(s, t) != (i != j):
                    return False
        return True

    def double_sixes_containing(self, l: str) -> list[DoubleSix]:
        return [D for D in self.double_sixes if l in D.labels()]

    def five_lines_lemma(self, l: str, n: str) -> list[str]:
        """Lines disjoint from l and meeting n (l, n disjoint)."""
        if not self.skew(l, n):
            raise IncidentPair(f"{l} and {n} are not disjoint")
        return [m for m in self.labels if m not in (l, n) and self.skew(l, m) and self.meets(n, m)]

    def unique_double_six(self, l: str, n: str) -> DoubleSix:
        """The double six with l and n on opposite sides, built from the five lines."""
        first = [l] + self.five_lines_lemma(l, n)
        second = [n] + self.five_lines_lemma(n, l)
        D = self._ordered_double_six(frozenset(first), frozenset(second))
        if not self.is_double_six(D):
            raise AssertionError("five-line construction did not give a double six")
        return D

    def separating_double_sixes(self, l: str, n: str) -> list[DoubleSix]:
        return [D for D in self.double_sixes
                if D.side_of(l) is not None and D.side_of(n) is not None and D.side_of(l) != D.side_of(n)]

    @cached_property
    def trios(self) -> tuple:
        out = []
        for i, j, k in itertools.combinations(range(len(self.labels)), 3):
            if self.adj[i] >> j & 1 and self.adj[i] >> k & 1 and self.adj[j] >> k & 1:
                out.append(frozenset((self.labels[i], self.labels[j], self.labels[k])))
        return tuple(out)

    def trios_through(self, l: str) -> list[frozenset]:
        return [t for t in self.trios if l in t]

    # -- automorphisms ----------------------------------------------------------

    def is_automorphism(self, perm) -> bool:
        n = len(self.labels)
        return sorted(perm) == list(range(n)) and all(
            bool(self.adj[perm[i]] >> perm[j] & 1) == bool(self.adj[i] >> j & 1)
            for i in range(n) for j in range(i + 1, n)
        )

    def extend(self, partial: dict) -> list[int] | None:
        """An automorphism extending the partial map, by backtracking with pruning."""
        n = len(self.labels)
        fwd = dict(partial)
        used = set(fwd.values())
        for u, v in fwd.items():
            for w, x in fwd.items():
                if (self.adj[u] >> w & 1) != (self.adj[v] >> x & 1):
                    return None

        def candidates(i):
            out = []
            for c in range(n):
                if c in used:
                    continue
                if all((self.adj[i] >> u & 1) == (self.adj[c] >> v & 1) for u, v in fwd.items()):
                    out.append(c)
            return out

        def search():
            if len(fwd) == n:
                return True
            best, best_c = None, None
            for i in range(n):
                if i in fwd:
                    continue
                c = candidates(i)
                if best is None or len(c) < len(best_c):
                    best, best_c = i, c
                    if len(c) <= 1:
                        break
            for c in best_c:
                fwd[best] = c
                used.add(c)
                if search():
                    return True
                del fwd[best]
                used.discard(c)
            return False

        return [fwd[i] for i in range(n)] if search() else None

    @cached_property
    def automorphism_group(self) -> AutomorphismGroup:
        """Stabilizer chain: at each level, the orbit of the next base point under
        the pointwise stabilizer of the earlier ones, with one transversal element
        per orbit point found by the extension search."""
        n = len(self.labels)
        base, levels = [], []
        fixed: dict = {}
        for b in range(n):
            transversal = {}
            for c in range(n):
                if c in fixed:
                    continue
                g = self.extend(fixed | {b: c})
                if g is not None:
                    transversal[c] = tuple(g)
            if len(transversal) > 1:
                base.append(b)
                levels.append(transversal)
            fixed[b] = b
        return AutomorphismGroup(self, tuple(base), tuple(levels))


def compose(g, h) -> tuple:
    """(g o h)(x) = g(h(x))."""
    return tuple(g[h[i]] for i in range(len(h)))


@dataclass(frozen=True)
class AutomorphismGroup:
    config: SchlaefliConfig
    base: tuple
    levels: tuple

    @property
    def order(self) -> int:
        out = 1
        for t in self.levels:
            out *= len(t)
        return out

    @property
    def orbit_sizes(self) -> tuple:
        return tuple(len(t) for t in self.levels)

    def generators(self) -> list[tuple]:
        ident = tuple(range(len(self.config)))
        return [g for t in self.levels for g in t.values() if g != ident]

    def random_element(self, rng: random.Random) -> tuple:
        g = tuple(range(len(self.config)))
        for t in self.levels:
            keys = sorted(t)
            g = compose(g, t[keys[rng.randrange(len(keys))]])
        return g

    def act(self, g, labels) -> frozenset:
        cfg = self.config
        return frozenset(cfg.labels[g[cfg.index[l]]] for l in labels)

    def act_double_six(self, g, D: DoubleSix) -> frozenset:
        return frozenset((self.act(g, D.six1), self.act(g, D.six2)))

    def orbit(self, start, action) -> set:
        seen = {start}
        frontier = [start]
        gens = self.generators()
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = action(g, x)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    def line_orbit(self) -> set:
        return self.orbit("a1", lambda g, l: self.config.labels[g[self.config.index[l]]])

    def double_six_orbit(self) -> set:
        D = self.config.double_sixes[0]
        return self.orbit(D.key(), lambda g, k: frozenset(self.act(g, s) for s in k))

    def trio_orbit(self) -> set:
        return self.orbit(self.config.trios[0], lambda g, t: self.act(g, t))


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


def theorem_d_lemmas(cfg: SchlaefliConfig | None = None) -> dict:
    cfg = cfg or SchlaefliConfig()
    pattern_ok, unique_ok = True, True
    for l, lb in cfg.disjoint_pairs(ordered=True):
        only_l = [m for m in cfg.labels if cfg.meets(m, l) and not cfg.meets(m, lb)]
        only_lb = [m for m in cfg.labels if cfg.meets(m, lb) and not cfg.meets(m, l)]
        both = [m for m in cfg.labels if cfg.meets(m, l) and cfg.meets(m, lb)]
        if (len(only_l), len(only_lb), len(both)) != (5, 5, 5):
            pattern_ok = False
        D = cfg._ordered_double_six(frozenset([l] + only_lb), frozenset([lb] + only_l))
        sep = cfg.separating_double_sixes(l, lb)
        if not cfg.is_double_six(D) or len(sep) != 1 or sep[0].key() != D.key():
            unique_ok = False
    return {
        "max_disjoint": cfg.max_disjoint_set(),
        "five_five_five": pattern_ok,
        "unique_double_six": unique_ok,
    }


def degree_bookkeeping(cfg: SchlaefliConfig | None = None) -> dict:
    cfg = cfg or SchlaefliConfig()
    nb = cfg.neighborhood("a1")
    n_ds = len(cfg.double_sixes)
    through = len(cfg.double_sixes_containing("a1"))
    incidences = sum(len(D.labels()) for D in cfg.double_sixes)
    return {
        "lines": len(cfg.labels),
        "split": (1, len(nb["incident"]), len(nb["disjoint"])),
        "split_total": 1 + len(nb["incident"]) + len(nb["disjoint"]),
        "double_sixes": n_ds,
        "double_sixes_per_line": through,
        "incidences_by_sixes": n_ds * 12,
        "incidences_by_lines": len(cfg.labels) * through,
        "incidences_enumerated": incidences,
        "two_torsion_times_trios": 2 ** 4 * len(cfg.trios_through("a1")),
    }
