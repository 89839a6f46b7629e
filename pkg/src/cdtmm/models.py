"""Model definitions: propagator tables, kinetic inversion, coupling maps, Wick words.

Kernels: 'delta' is <X_ij Y_kl> = w delta_il delta_kj / N and 'c2' is
<X_ij Y_kl> = w C_il C_kj / N, with C the constraint matrix C_2.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
import sympy as sp

from .cmspec import charpoly_cm
from .gaussavg import oracle_chiA2
from .glchar import class_sum_ratio, expansion_coefficient_exact, gl_dimension_poly

GAMMA = sp.Symbol("gamma")
NSYM = sp.Symbol("N", positive=True)
GSYM = sp.Symbol("g")

KERNELS = ("zero", "delta", "c2")


@dataclass
class PropagatorSpec:
    symbols: tuple[str, ...]
    kinds: dict[str, str]           # symbol -> 'delta' (spacelike) or 'c2' (timelike)
    weights: dict[tuple[str, str], sp.Expr]

    def pair(self, x: str, y: str) -> tuple[str, sp.Expr]:
        key = (x, y) if (x, y) in self.weights else (y, x)
        w = self.weights.get(key, sp.Integer(0))
        if w == 0:
            return "zero", sp.Integer(0)
        return self.kinds[x], w

    def weight_matrix(self) -> sp.Matrix:
        s = self.symbols
        return sp.Matrix(len(s), len(s), lambda i, j: self.pair(s[i], s[j])[1])

    def kinetic_form(self) -> sp.Matrix:
        """Forward quadratic form: inverse of the weight matrix."""
        return sp.simplify(self.weight_matrix().inv())

    def subs(self, **values) -> "PropagatorSpec":
        rep = {sp.Symbol(k): v for k, v in values.items()}
        return PropagatorSpec(self.symbols, dict(self.kinds),
                              {k: sp.simplify(w.subs(rep)) for k, w in self.weights.items()})

    def table(self) -> list[dict]:
        rows = []
        s = self.symbols
        for i in range(len(s)):
            for j in range(i, len(s)):
                kern, w = self.pair(s[i], s[j])
                rows.append({"pair": [s[i], s[j]], "kernel": kern, "weight": str(w)})
        return rows


def invert_kinetic(form, symbols: Sequence[str], kinds: dict[str, str]) -> PropagatorSpec:
    """Propagator weights are the entries of form^{-1}; mixing delta and c2 fields must vanish."""
    Q = sp.Matrix(form)
    if Q.shape != (len(symbols), len(symbols)) or Q != Q.T:
        raise ValueError("kinetic form must be a symmetric matrix matching the symbols")
    det = sp.simplify(Q.det())
    if det == 0:
        raise ValueError("singular kinetic form")
    inv = Q.inv()
    weights = {}
    for i, x in enumerate(symbols):
        for j in range(i, len(symbols)):
            y = symbols[j]
            w = sp.simplify(inv[i, j])
            if w != 0 and kinds[x] != kinds[y]:
                raise ValueError(f"kinetic form mixes {x} and {y} of different kernel kinds")
            if w != 0:
                weights[(x, y)] = w
    return PropagatorSpec(tuple(symbols), dict(kinds), weights)


def _gamma(gamma):
    if gamma is None:
        return GAMMA
    return sp.nsimplify(gamma) if isinstance(gamma, float) else sp.sympify(gamma)


def model_spec(name: str, gamma=None) -> PropagatorSpec:
    """Propagators at g = 0 for 'cdt', 'ising' or 'cdt-ising'."""
    g = _gamma(gamma)
    if name == "cdt":
        return invert_kinetic(sp.eye(2), ["A", "B"], {"A": "delta", "B": "c2"})
    if name == "ising":
        q = sp.Matrix([[1, -g ** -2], [-g ** -2, 1]]) if g != 0 else None
        if q is None:
            raise ValueError("the Ising model needs gamma != 0")
        return invert_kinetic(q, ["M+", "M-"], {"M+": "delta", "M-": "delta"})
    if name == "cdt-ising":
        block = sp.Matrix([[1, -g], [-g, 1]])
        q = sp.diag(block, block)
        return invert_kinetic(q, ["A+", "A-", "B+", "B-"],
                              {"A+": "delta", "A-": "delta", "B+": "c2", "B-": "c2"})
    raise ValueError(f"unknown model {name!r}")


MODELS = ("cdt", "ising", "cdt-ising")


# --- coupling transformation ------------------------------------------------------------

@dataclass(frozen=True)
class CouplingMap:
    gamma: float
    g: float
    gamma_p: float
    g_p: float
    g_p_printed: float   # the sqrt(2) g variant; fails the action check by a factor 2

    def as_dict(self) -> dict:
        return {"gamma": self.gamma, "g": self.g, "gamma_prime": self.gamma_p,
                "g_prime": self.g_p, "g_prime_printed": self.g_p_printed}


def coupling_transform(gamma: float, g: float) -> CouplingMap:
    """gamma'^{-2} = (gamma - 1/gamma)/(gamma + 1/gamma), g' = gamma'^{-3/2} g / (sqrt2 (1-gamma^{-2})^{3/2})."""
    if abs(gamma) <= 1:
        raise ValueError("coupling_transform needs |gamma| > 1")
    gp = math.sqrt((gamma + 1 / gamma) / (gamma - 1 / gamma))
    base = gp ** -1.5 * g / (1 - gamma ** -2) ** 1.5
    return CouplingMap(gamma, g, gp, base / math.sqrt(2), base * math.sqrt(2))


def ising_action(Mp: np.ndarray, Mm: np.ndarray, gamma: float, g: float) -> float:
    N = Mp.shape[0]
    tr = lambda X: np.trace(X).real
    return N * (tr(Mp @ Mp) / 2 + tr(Mm @ Mm) / 2 - gamma ** -2 * tr(Mp @ Mm)
                - g * tr(Mp @ Mp @ Mp) - g * tr(Mm @ Mm @ Mm))


def face_spin_action(U: np.ndarray, V: np.ndarray, cm: CouplingMap, printed: bool = False) -> float:
    N = U.shape[0]
    tr = lambda X: np.trace(X).real
    gp = cm.g_p_printed if printed else cm.g_p
    return N * (tr(U @ U) / (2 * cm.gamma_p) + cm.gamma_p * tr(V @ V) / 2
                - gp * tr(U @ U @ U) - 3 * gp * tr(U @ V @ V))


def random_hermitian(N: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    return (X + X.conj().T) / 2


def action_check(gamma: float, g: float, N: int = 3, seed: int = 0, printed: bool = False) -> float:
    """Relative difference of the two actions on a random Hermitian pair."""
    cm = coupling_transform(gamma, g)
    rng = np.random.default_rng(seed)
    Mp, Mm = random_hermitian(N, rng), random_hermitian(N, rng)
    K, L = (Mp + Mm) / math.sqrt(2), (Mp - Mm) / math.sqrt(2)
    s = math.sqrt(cm.gamma_p * (1 - gamma ** -2))
    a = ising_action(Mp, Mm, gamma, g)
    b = face_spin_action(s * K, s * L, cm, printed)
    return abs(a - b) / max(abs(a), 1e-300)


# --- Wick words -----------------------------------------------------------------------

_TRACE = re.compile(r"Tr\(([^()]*)\)")
_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*[+-]?)(?:\^(\d+))?")


@dataclass(frozen=True)
class Word:
    traces: tuple[tuple[str, ...], ...]

    def __str__(self) -> str:
        return "".join("Tr(" + " ".join(t) + ")" for t in self.traces)


def parse_word(text: str, constraint: str = "C") -> Word:
    """'Tr(A^2 C A^2 C)' or products like 'Tr(A A) Tr(B)'; C marks a C_2 insertion."""
    text = text.strip()
    traces, pos = [], 0
    for m in _TRACE.finditer(text):
        if text[pos:m.start()].strip(" *"):
            raise ValueError(f"cannot parse word near {text[pos:m.start()]!r}")
        pos = m.end()
        letters = []
        body = m.group(1).replace("*", " ")
        bpos = 0
        for t in _TOKEN.finditer(body):
            if body[bpos:t.start()].strip():
                raise ValueError(f"bad token in {body!r}")
            bpos = t.end()
            letters.extend([t.group(1)] * int(t.group(2) or 1))
        if body[bpos:].strip():
            raise ValueError(f"bad token in {body!r}")
        if not letters:
            raise ValueError("empty trace")
        traces.append(tuple(letters))
    if text[pos:].strip(" *") or not traces:
        raise ValueError(f"cannot parse word {text!r}")
    return Word(tuple(traces))


def _matchings(items: list[int]):
    if not items:
        yield []
        return
    a = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1:]
        for m in _matchings(rest):
            yield [(a, items[k])] + m


@dataclass
class LoopRule:
    """Tr(C^p) substitution: large-N (N delta_{p,2}) or exact traces at a fixed N."""
    N: Union[int, None] = None

    @property
    def symbolic(self) -> bool:
        return self.N is None

    def n_value(self):
        return NSYM if self.N is None else sp.Integer(self.N)

    def trace(self, p: int):
        if p == 0:
            return self.n_value()
        if self.N is None:
            return NSYM if p == 2 else sp.Integer(0)
        return sp.Rational(*_frac(power_sums(self.N, p)[p - 1]))


def _frac(x: Fraction) -> tuple[int, int]:
    return x.numerator, x.denominator


def power_sums(N: int, pmax: int) -> list[Fraction]:
    """Tr(C_2^p), p = 1..pmax, from the exact characteristic polynomial by Newton's identities."""
    if N % 2:
        raise ValueError("C_2 needs even N")
    e = charpoly_cm(N, 2).coeffs
    p: list[Fraction] = []
    for k in range(1, pmax + 1):
        acc = sum(((-1) ** (i - 1) * e[i] * p[k - i - 1] for i in range(1, min(k, N + 1))), Fraction(0))
        if k <= N:
            acc += (-1) ** (k - 1) * k * e[k]
        p.append(acc)
    return p


def parse_rule(text: str) -> LoopRule:
    if text in ("large-n", "largeN", "large"):
        return LoopRule(None)
    m = re.fullmatch(r"spectrum:(\d+)", text)
    if not m:
        raise ValueError(f"unknown N-rule {text!r}; use large-n or spectrum:N")
    return LoopRule(int(m.group(1)))


@dataclass
class WickResult:
    value: sp.Expr
    pairings: int
    orientation_consistent: bool


def wick_word_average(word: Union[str, Word], spec: PropagatorSpec, rule: LoopRule = LoopRule(None),
                      constraint: str = "C") -> WickResult:
    """Sum over all pairings of the field letters; index loops give Tr(C^p)."""
    if isinstance(word, str):
        word = parse_word(word, constraint)
    # slots: (trace, position); node of index i_t is (trace, t); factor t spans node t -> node t+1
    fields, cedges = [], []
    for a, tr in enumerate(word.traces):
        k = len(tr)
        for t, letter in enumerate(tr):
            src, dst = (a, t), (a, (t + 1) % k)
            if letter == constraint:
                cedges.append((src, dst))
            elif letter in spec.symbols:
                fields.append((letter, src, dst))
            else:
                raise ValueError(f"unknown symbol {letter!r}")
    if len(fields) > 12:
        raise ValueError("word too long (at most 12 field letters)")
    if len(fields) % 2:
        return WickResult(sp.Integer(0), 0, True)
    total = sp.Integer(0)
    count = 0
    consistent = True
    Nv = rule.n_value()
    for match in _matchings(list(range(len(fields)))):
        w = sp.Integer(1)
        edges = list(("C", s, d) for s, d in cedges)
        for x, y in match:
            (lx, rx, cx), (ly, ry, cy) = fields[x], fields[y]
            kern, wt = spec.pair(lx, ly)
            if kern == "zero":
                w = 0
                break
            w *= wt / Nv
            # X_{ij} Y_{kl}: i=rx, j=cx, k=ry, l=cy
            if kern == "delta":
                edges += [("d", rx, cy), ("d", ry, cx)]
            else:
                edges += [("C", rx, cy), ("C", ry, cx)]
        if w == 0:
            continue
        count += 1
        loops, ok = _loops(edges)
        consistent &= ok
        for p in loops:
            w *= rule.trace(p)
        total += w
    return WickResult(sp.simplify(total), count, consistent)


def _loops(edges: list[tuple[str, tuple, tuple]]) -> tuple[list[int], bool]:
    """C-edge counts of the cycles of a degree-2 multigraph, plus an orientation flag."""
    adj: dict = {}
    for idx, (_, s, d) in enumerate(edges):
        adj.setdefault(s, []).append((idx, d, +1))
        adj.setdefault(d, []).append((idx, s, -1))
    for node, lst in adj.items():
        if len(lst) != 2:
            raise AssertionError(f"index {node} has degree {len(lst)}")
    used = [False] * len(edges)
    out, consistent = [], True
    for start in range(len(edges)):
        if used[start]:
            continue
        kind, s, d = edges[start]
        used[start] = True
        p = 1 if kind == "C" else 0
        dirs = {+1} if kind == "C" else set()
        node = d
        while True:
            nxt = next(((i, o, sg) for i, o, sg in adj[node] if not used[i]), None)
            if nxt is None:
                break
            i, node, sg = nxt
            used[i] = True
            if edges[i][0] == "C":
                p += 1
                dirs.add(sg)
        consistent &= len(dirs) <= 1
        out.append(p)
    return out, consistent


# --- order g^2 cross-check -------------------------------------------------------------

@dataclass
class OrderG2:
    route1: sp.Expr
    route2: sp.Expr
    contributions: dict[tuple[int, ...], sp.Expr] = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return sp.simplify(self.route1 - self.route2) == 0


def z_order_g2(g=GSYM) -> OrderG2:
    """g^2 coefficient of Z/Z_0 for exp(-N Tr[A^2/2 - g^2/2 (A^2 C)^2]) under the large-N rule.

    Route 1: character expansion over n = 2 representations.
    Route 2: (N g^2 / 2) <Tr(A^2 C A^2 C)>.
    """
    N = NSYM
    pre = N * g ** 2 / 2
    contrib = {}
    for lam in ((2,), (1, 1)):
        coeff = expansion_coefficient_exact(lam)      # c_R / c_trivial
        chiC = N * _rat(class_sum_ratio(lam) * _sn_dim_over_fact(lam))   # N^{n/2} sum chi / n!
        d = gl_dimension_poly(lam).subs(sp.Symbol("N"), N)
        avg = oracle_chiA2(lam, "symbolic").subs(sp.Symbol("N"), N)
        contrib[lam] = sp.simplify(pre * _rat(coeff) * chiC * avg / d)
    route1 = sp.simplify(sum(contrib.values()))
    route2 = sp.simplify(pre * wick_word_average("Tr(A^2 C A^2 C)", model_spec("cdt")).value)
    return OrderG2(route1, route2, contrib)


def _sn_dim_over_fact(lam) -> Fraction:
    from .permgroup import sn_dimension
    return Fraction(sn_dimension(lam), math.factorial(sum(lam)))


def _rat(x) -> sp.Expr:
    x = Fraction(x)
    return sp.Rational(x.numerator, x.denominator)


def double_expansion_prefactor(n1: int, n2: int, gamma=None, g=GSYM) -> sp.Expr:
    """(N g^2/(4(1-gamma)))^{n1/2} (N g^2/(4(1+gamma)))^{n2/2} of the two-representation sum."""
    gm = _gamma(gamma)
    return (NSYM * g ** 2 / (4 * (1 - gm))) ** sp.Rational(n1, 2) * (NSYM * g ** 2 / (4 * (1 + gm))) ** sp.Rational(n2, 2)
