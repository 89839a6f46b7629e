"""Symmetric-group machinery and the partial trace of pairing permutations.

Permutations act on {1..n} and compose right to left: (p*q)(x) = p(q(x)).
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from functools import lru_cache
from itertools import permutations as _iperms
from math import factorial, prod
from typing import Iterable, Iterator, Sequence

import numpy as np


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(x) for x in images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation of 1..{len(imgs)}: {imgs}")
        self.images = imgs

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> "Permutation":
        cycles = [tuple(c) for c in cycles]
        top = max((max(c) for c in cycles if c), default=0)
        n = top if n is None else n
        if top > n:
            raise ValueError(f"cycle entry {top} exceeds degree {n}")
        imgs = list(range(1, n + 1))
        seen: set[int] = set()
        for c in cycles:
            for i, x in enumerate(c):
                if x < 1 or x in seen:
                    raise ValueError(f"bad or repeated cycle entry {x}")
                seen.add(x)
                imgs[x - 1] = c[(i + 1) % len(c)]
        return cls(imgs)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        """Parse cycle notation such as '(1 5)(2 17)'; '()' is the identity."""
        t = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s*,?\s*\d+)*)?\s*\))+", t):
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = [tuple(int(v) for v in re.findall(r"\d+", grp))
                  for grp in re.findall(r"\(([^)]*)\)", t)]
        return cls.from_cycles([c for c in cycles if c], n)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, y in enumerate(self.images, 1):
            inv[y - 1] = i
        return Permutation(inv)

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * (self.degree + 1)
        out = []
        for start in range(1, self.degree + 1):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x - 1]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> "CycleType":
        return CycleType(len(c) for c in self.cycles(include_fixed=True))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) if cyc else "()"

    def __repr__(self) -> str:
        return f"Permutation({self}, n={self.degree})"


class CycleType:
    """Conjugacy-class label, stored as a weakly decreasing tuple of cycle lengths."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int]):
        p = tuple(sorted((int(x) for x in parts), reverse=True))
        if any(x <= 0 for x in p):
            raise ValueError(f"cycle lengths must be positive: {p}")
        self.parts = p

    @classmethod
    def from_multiplicities(cls, mult: dict[int, int]) -> "CycleType":
        return cls(k for k, c in mult.items() for _ in range(c))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def class_size(self) -> int:
        return factorial(self.n) // prod(k ** c * factorial(c) for k, c in self.multiplicities.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CycleType) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return "[" + " ".join(f"{k}^{c}" for k, c in sorted(self.multiplicities.items(), reverse=True)) + "]"


def compose(p: Permutation, q: Permutation) -> Permutation:
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    pi = p.images
    return Permutation(pi[y - 1] for y in q.images)


def cycle_count(p: Permutation) -> int:
    return len(p.cycles(include_fixed=True))


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def _as_cycle_type(t) -> CycleType:
    return t if isinstance(t, CycleType) else CycleType(t)


def class_elements(n: int, t) -> list[Permutation]:
    """All permutations of S_n with cycle type t, without duplicates."""
    t = _as_cycle_type(t)
    if t.n != n:
        raise ValueError(f"cycle type {t} is not a cycle type of {n}")
    out: list[Permutation] = []

    def rec(remaining: tuple[int, ...], lengths: Counter, imgs: list[int]):
        if not remaining:
            out.append(Permutation(imgs))
            return
        first, others = remaining[0], remaining[1:]
        for L in sorted(lengths):
            if lengths[L] == 0:
                continue
            lengths[L] -= 1
            for tail in _iperms(others, L - 1):
                cyc = (first,) + tail
                for i, x in enumerate(cyc):
                    imgs[x - 1] = cyc[(i + 1) % L]
                rest = tuple(x for x in others if x not in tail)
                rec(rest, lengths, imgs)
            lengths[L] += 1

    rec(tuple(range(1, n + 1)), Counter(t.parts), list(range(1, n + 1)))
    return out


def pairings(n2: int) -> list[Permutation]:
    """Fixed-point-free involutions of {1..n2} (the class [2^{n2/2}])."""
    if n2 % 2:
        raise ValueError("pairings need an even degree")
    return class_elements(n2, CycleType([2] * (n2 // 2)))


# --- characters --------------------------------------------------------------

def _check_partition(lam: Sequence[int]) -> tuple[int, ...]:
    lam = tuple(int(x) for x in lam)
    if any(x <= 0 for x in lam) or any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        lam = tuple(x for x in lam if x != 0)
        if any(x < 0 for x in lam) or any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
            raise ValueError(f"not a partition: {lam}")
    return lam


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], mu: tuple[int, ...]) -> int:
    # beta: strictly decreasing bead positions; mu: remaining cycle lengths
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    beads = set(beta)
    total = 0
    for b in beta:
        if b - k < 0 or (b - k) in beads:
            continue
        between = sum(1 for c in beta if b - k < c < b)
        new = tuple(sorted((beads - {b}) | {b - k}, reverse=True))
        total += (-1) ** between * _mn(new, rest)
    return total


def sn_character(R: Sequence[int], t) -> int:
    """Murnaghan-Nakayama character chi_R on the class t."""
    lam = _check_partition(R)
    t = _as_cycle_type(t)
    if sum(lam) != t.n:
        raise ValueError(f"|R| = {sum(lam)} but class is in S_{t.n}")
    ell = len(lam)
    beta = tuple(lam[i] + ell - 1 - i for i in range(ell))
    return _mn(beta, t.parts)


def sn_dimension(R: Sequence[int]) -> int:
    """Hook-length formula."""
    lam = _check_partition(R)
    n = sum(lam)
    conj = [sum(1 for x in lam if x > j) for j in range(lam[0])] if lam else []
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return factorial(n) // hooks


# --- polynomials in N and weighted sums ---------------------------------------

class WeightedPermSum:
    """Map Permutation -> integer polynomial in N ({exponent: coefficient})."""

    def __init__(self, degree: int):
        self.degree = degree
        self._terms: dict[Permutation, Counter] = {}

    def add(self, perm: Permutation, exponent: int, coeff: int = 1) -> None:
        if perm.degree != self.degree:
            raise ValueError("degree mismatch")
        poly = self._terms.setdefault(perm, Counter())
        poly[exponent] += coeff
        if poly[exponent] == 0:
            del poly[exponent]
        if not poly:
            del self._terms[perm]

    def coefficient(self, perm: Permutation) -> dict[int, int]:
        return dict(self._terms.get(perm, {}))

    def items(self):
        return sorted(((p, dict(c)) for p, c in self._terms.items()), key=lambda pc: pc[0])

    def __sub__(self, other: "WeightedPermSum") -> "WeightedPermSum":
        out = WeightedPermSum(self.degree)
        for p, poly in self._terms.items():
            for e, c in poly.items():
                out.add(p, e, c)
        for p, poly in other._terms.items():
            for e, c in poly.items():
                out.add(p, e, -c)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeightedPermSum) and self.items() == other.items()

    def evaluate(self, N: int) -> dict[Permutation, int]:
        return {p: sum(c * N ** e for e, c in poly.items()) for p, poly in self._terms.items()}

    def __len__(self) -> int:
        return len(self._terms)


def format_poly(poly: dict[int, int], var: str = "N") -> str:
    if not poly:
        return "0"
    parts = []
    for e in sorted(poly, reverse=True):
        c = poly[e]
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if mono and abs(c) == 1:
            s = mono
        else:
            s = str(abs(c)) + ("*" + mono if mono else "")
        parts.append(("-" if c < 0 else "+") + s)
    out = "".join(parts)
    return out[1:] if out[0] == "+" else out


# --- partial trace -------------------------------------------------------------

def _alpha(n: int) -> Permutation:
    return Permutation([x + n for x in range(1, n + 1)] + list(range(1, n + 1)))


def _check_pairing(gamma: Permutation) -> int:
    if gamma.degree % 2:
        raise ValueError("partial trace needs a permutation of even degree 2n")
    if any(gamma(x) == x or gamma(gamma(x)) != x for x in range(1, gamma.degree + 1)):
        raise ValueError(f"{gamma} is not in the class [2^n]")
    return gamma.degree // 2


def partial_trace(gamma: Permutation) -> tuple[int, Permutation]:
    """Partial trace over the second tensor factor of gamma*alpha.

    Returns (e, rho) meaning N^e * rho.
    """
    n = _check_pairing(gamma)
    eta = compose(gamma, _alpha(n))
    eta_inv = eta.inverse()
    p_f = {x for x in range(1, n + 1) if gamma(x) <= n}
    p_i = {x - n for x in range(n + 1, 2 * n + 1) if gamma(x) > n}
    s = len(p_f)
    assert len(p_i) == s
    nu_f = Permutation.from_cycles([(x, gamma(x)) for x in p_f if x < gamma(x)], n)
    nu_i = Permutation.from_cycles(
        [(x - n, gamma(x) - n) for x in range(n + 1, 2 * n + 1) if x < gamma(x)], n)
    mu = [0] * n
    for x in range(1, n + 1):
        if x not in p_i:
            mu[x - 1] = eta(x)
            continue
        y = x
        for _ in range(2 * n + 1):
            if y in p_f:
                break
            y = eta_inv(y)
        else:
            raise AssertionError(f"orbit of {x} never re-entered p_f")
        mu[x - 1] = y
    mu_p = Permutation(mu)
    return cycle_count(mu_p) - s, compose(nu_f, compose(mu_p, nu_i))


def partial_trace_strands(gamma: Permutation) -> tuple[int, Permutation]:
    """Independent route: follow strands of gamma*alpha through the traced slots."""
    n = _check_pairing(gamma)
    eta = compose(gamma, _alpha(n))
    out = []
    for x in range(1, n + 1):
        y = eta(x)
        while y > n:
            y = eta(y)
        out.append(y)
    loops = sum(1 for c in eta.cycles(include_fixed=True) if min(c) > n)
    return loops, Permutation(out)


@lru_cache(maxsize=8)
def _index_grid(N: int, slots: int) -> np.ndarray:
    return np.indices((N,) * slots).reshape(slots, -1).T.copy()


def permutation_operator_matrix(p: Permutation, N: int) -> np.ndarray:
    """Matrix of p on (C^N)^{(x)n}; tensor slot k is moved to slot p(k)."""
    n = p.degree
    grid = _index_grid(N, n)
    out_idx = np.empty_like(grid)
    out_idx[:, [p(k) - 1 for k in range(1, n + 1)]] = grid
    weights = N ** np.arange(n - 1, -1, -1)
    mat = np.zeros((N ** n, N ** n), dtype=np.int64)
    mat[out_idx @ weights, grid @ weights] = 1
    return mat


def partial_trace_oracle(gamma: Permutation, N: int) -> np.ndarray:
    """Delta contraction of the last n slots of the operator gamma*alpha."""
    n = _check_pairing(gamma)
    if N ** n > 10 ** 6:
        raise ValueError(f"N^n = {N ** n} exceeds the desk-scale bound 10^6")
    eta = compose(gamma, _alpha(n))
    grid = _index_grid(N, 2 * n)
    out_idx = np.empty_like(grid)
    out_idx[:, [eta(k) - 1 for k in range(1, 2 * n + 1)]] = grid
    keep = np.all(out_idx[:, n:] == grid[:, n:], axis=1)
    weights = N ** np.arange(n - 1, -1, -1)
    rows = out_idx[keep, :n] @ weights
    cols = grid[keep, :n] @ weights
    mat = np.zeros((N ** n, N ** n), dtype=np.int64)
    np.add.at(mat, (rows, cols), 1)
    return mat


def lemma_sum(n: int) -> tuple[WeightedPermSum, WeightedPermSum]:
    """(sum over gamma in [2^n] of P2Tr(gamma alpha), sum over rho of N^cy(rho) rho)."""
    if n < 1 or n > 6:
        raise ValueError("lemma_sum supports 1 <= n <= 6")
    lhs = WeightedPermSum(n)
    for gamma in pairings(2 * n):
        e, rho = partial_trace(gamma)
        lhs.add(rho, e)
    rhs = WeightedPermSum(n)
    for imgs in _iperms(range(1, n + 1)):
        rho = Permutation(imgs)
        rhs.add(rho, cycle_count(rho))
    return lhs, rhs


def degree_deficits(lhs: WeightedPermSum, rhs: WeightedPermSum) -> dict[Permutation, float]:
    """deg(rhs coefficient) - deg((lhs - rhs) coefficient), inf when they agree."""
    diff = lhs - rhs
    out = {}
    for rho, poly in rhs.items():
        d = diff.coefficient(rho)
        out[rho] = float("inf") if not d else max(poly) - max(d)
    for rho, poly in diff.items():
        if rho not in out:
            out[rho] = float("-inf")
    return out
