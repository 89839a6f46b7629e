"""The constraint matrix C_m: characteristic polynomial, spectra, density, traces."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .exactnum import bareiss_det, factorial

KAPPA = -math.exp(-1.0)  # principal contour constant; other branches are not modelled


class ConvergenceError(RuntimeError):
    def __init__(self, msg: str, best=None):
        super().__init__(msg)
        self.best = best


@dataclass(frozen=True)
class CharPoly:
    """det(C - lam) = sum_k coeffs[k] (-lam)^{N-k}."""

    N: int
    m: int
    coeffs: tuple[Fraction, ...]

    def __call__(self, lam):
        N = self.N
        return sum(complex(c) * (-lam) ** (N - k) for k, c in enumerate(self.coeffs) if c)

    def monomial_coeffs(self) -> list[Fraction]:
        """Coefficients of lam^N, lam^{N-1}, ..., lam^0."""
        N = self.N
        return [c * (-1) ** (N - k) for k, c in enumerate(self.coeffs)]


def girard_newton(traces: Sequence) -> list[Fraction]:
    """Elementary symmetric functions e_0..e_N from power traces t_1..t_N."""
    t = [Fraction(x) for x in traces]
    N = len(t)
    if N < 1:
        raise ValueError("need at least one power trace")
    e = [Fraction(1)]
    for k in range(1, N + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * t[i - 1] for i in range(1, k + 1))
        e.append(acc / k)
    return e


def girard_newton_det(traces: Sequence) -> list[Fraction]:
    """Determinant form pi_k = det[a_ij] / k!; slow, kept as a cross-check."""
    t = [Fraction(x) for x in traces]
    out = [Fraction(1)]
    for k in range(1, len(t) + 1):
        a = [[(t[j - i] if i <= j else (Fraction(j + 1) if i == j + 1 else Fraction(0)))
              for j in range(k)] for i in range(k)]
        out.append(bareiss_det(a) / factorial(k))
    return out


def charpoly_cm(N: int, m: int) -> CharPoly:
    if m < 1 or N < 1 or N % m:
        raise ValueError(f"m={m} must divide N={N}")
    coeffs = [Fraction(0)] * (N + 1)
    for r in range(N // m + 1):
        coeffs[m * r] = Fraction((-1) ** (m * r) * N ** r, (-m) ** r * factorial(r))
    return CharPoly(N, m, tuple(coeffs))


def power_traces(eigs, qmax: int) -> np.ndarray:
    eigs = np.asarray(eigs, dtype=complex)
    out = np.empty(qmax, dtype=complex)
    pw = np.ones_like(eigs)
    # large q may overflow; callers treat non-finite traces as failures
    with np.errstate(over="ignore", invalid="ignore"):
        for q in range(qmax):
            pw = pw * eigs
            out[q] = pw.sum()
    return out


# --- Lambert W -------------------------------------------------------------------

def _w_seed(z: np.ndarray) -> np.ndarray:
    w = np.empty_like(z)
    near = np.abs(z + math.exp(-1.0)) <= 1.0
    small = (np.abs(z) < 0.5) & ~near
    big = (np.abs(z) > math.e) & ~near
    mid = ~(near | small | big)
    # branch-point series; the principal sqrt picks the upper sheet above the cut
    p = np.sqrt(2.0 * (math.e * z[near] + 1.0))
    w[near] = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    zs = z[small]
    w[small] = zs - zs * zs + 1.5 * zs ** 3
    w[mid] = np.log1p(z[mid])
    L1 = np.log(z[big])
    L2 = np.log(L1)
    w[big] = L1 - L2 + L2 / L1
    return w


def lambert_w0(z, tol: float = 1e-13, maxiter: int = 100) -> np.ndarray:
    """Principal-branch Lambert W by Halley iteration (vectorised)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = _w_seed(z)
    scale = np.maximum(1.0, np.abs(z))
    for _ in range(maxiter):
        ew = np.exp(w)
        f = w * ew - z
        done = np.abs(f) <= tol * scale
        if done.all():
            return w
        wp1 = w + 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        step = np.where(done | ~np.isfinite(step), 0.0, step)
        w = w - step
    f = np.abs(w * np.exp(w) - z)
    if np.any(f > 10 * tol * scale):
        raise ConvergenceError("Lambert W did not converge (near the branch point?)", best=w)
    return w


def lambert_w_principal(z: complex) -> complex:
    if z == 0:
        return 0j
    return complex(lambert_w0(np.array([z]))[0])


# --- spectra -------------------------------------------------------------------

@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    source: str  # "exact-roots" or "lambert-approx"
    N: int
    m: int
    residual: float = float("nan")
    extra: dict = field(default_factory=dict)

    def traces(self, qmax: int) -> np.ndarray:
        return power_traces(self.eigenvalues, qmax)


def approx_spectrum(N: int, m: int) -> Spectrum:
    """lam_ts = e^{2 pi i s/m} W(-e^{2 pi m i (t-1/2)/N - 1})^{-1/m}."""
    if m < 1 or N % m:
        raise ValueError(f"m={m} must divide N={N}")
    n = N // m
    t = np.arange(1, n + 1)
    z = -np.exp(2j * np.pi * m * (t - 0.5) / N - 1.0)
    w = lambert_w0(z)
    base = w ** (-1.0 / m)
    phases = np.exp(2j * np.pi * np.arange(1, m + 1) / m)
    lam = (base[:, None] * phases[None, :]).reshape(-1)

    def refine(dps: int) -> list:
        with mpmath.workdps(dps):
            out = []
            for tt, w0 in zip(t, w):
                z = -mpmath.exp(2j * mpmath.pi * m * (int(tt) - mpmath.mpf(1) / 2) / N - 1)
                b = _mp_lambert_w0(z, complex(w0)) ** (-mpmath.mpf(1) / m)
                out.extend(b * mpmath.expjpi(mpmath.mpf(2 * s) / m) for s in range(1, m + 1))
            return out

    return Spectrum(lam, "lambert-approx", N, m, extra={"t": np.repeat(t, m),
                                                         "s": np.tile(np.arange(1, m + 1), n),
                                                         "refine": refine})


def _mp_lambert_w0(z, seed: complex):
    # Halley polish at the current mpmath precision, from a double-precision seed
    w = mpmath.mpc(seed)
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps + 5)
    for _ in range(200):
        ew = mpmath.exp(w)
        f = w * ew - z
        if abs(f) <= eps * max(1, abs(z)):
            return w
        step = f / (ew * (w + 1) - (w + 2) * f / (2 * w + 2))
        w -= step
        if abs(step) <= eps * abs(w):
            return w
    raise ConvergenceError("high-precision Lambert W did not converge", best=w)


def _aberth(coeffs: list, seeds: list, dps: int, maxiter: int):
    # coeffs are highest degree first; Gauss-Seidel sweeps, fixed order
    deg = len(coeffs) - 1
    dcoeffs = [c * (deg - k) for k, c in enumerate(coeffs[:-1])]
    z = list(seeds)
    eps = mpmath.mpf(10) ** -22  # far below double precision
    for it in range(maxiter):
        worst = mpmath.mpf(0)
        for i in range(deg):
            zi = z[i]
            p = coeffs[0]
            for c in coeffs[1:]:
                p = p * zi + c
            dp = dcoeffs[0]
            for c in dcoeffs[1:]:
                dp = dp * zi + c
            if p == 0:
                continue
            ratio = p / dp
            s = mpmath.mpc(0)
            for j in range(deg):
                if j != i:
                    s += 1 / (zi - z[j])
            w = ratio / (1 - ratio * s)
            z[i] = zi - w
            rel = abs(w) / max(abs(z[i]), mpmath.mpf(1) * eps)
            if rel > worst:
                worst = rel
        if worst < eps:
            return z, it + 1
    raise ConvergenceError(f"Aberth iteration did not converge in {maxiter} sweeps", best=z)


def exact_spectrum(N: int, m: int, tol: float = 1e-12, maxiter: int = 500) -> Spectrum:
    """All roots of det(C_m - lam) via Aberth iteration on y = lam^m."""
    if N > 2000:
        raise ValueError("N > 2000 is beyond the supported range")
    cp = charpoly_cm(N, m)
    n = N // m
    # p(lam) = sum_r pi_{mr} (-1)^{N-mr} y^{n-r}
    yc = [cp.coeffs[m * r] * (-1) ** (N - m * r) for r in range(n + 1)]
    # the power basis loses about 0.25 n digits near roots with Re(y) < 0
    dps = 30 + int(math.ceil(0.3 * n))
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in yc]
        seeds = [mpmath.mpc(complex(1.0 / w)) for w in
                 lambert_w0(-np.exp(2j * np.pi * m * (np.arange(1, n + 1) - 0.5) / N - 1.0))]
        # nudge coincident seeds apart
        seeds = [s * (1 + mpmath.mpf(10) ** -6 * (k + 1)) for k, s in enumerate(seeds)]
        ys, sweeps = _aberth(coeffs, seeds, dps, maxiter)
        lams = []
        for y in ys:
            root = y ** (mpmath.mpf(1) / m)
            for s in range(m):
                lams.append(root * mpmath.expjpi(mpmath.mpf(2 * s) / m))
        pcoef = [mpmath.mpf(c.numerator) / c.denominator for c in cp.monomial_coeffs()]
        worst = mpmath.mpf(0)
        for lam in lams:
            val = mpmath.mpc(0)
            scale = mpmath.mpf(0)
            for c in pcoef:
                val = val * lam + c
                scale = scale * abs(lam) + abs(c)
            worst = max(worst, abs(val) / scale)
        eigs = np.array([complex(x) for x in lams])
    if worst >= tol:
        raise ConvergenceError(f"relative residual {float(worst):.3g} above tol {tol}", best=eigs)

    def refine(dps_new: int) -> list:
        # Newton polish of the y-roots at higher precision
        with mpmath.workdps(max(dps_new, dps)):
            cs = [mpmath.mpf(c.numerator) / c.denominator for c in yc]
            dcs = [c * (n - k) for k, c in enumerate(cs[:-1])]
            eps = mpmath.mpf(10) ** (-mpmath.mp.dps + 5)
            out = []
            for y in ys:
                y = mpmath.mpc(y)
                for _ in range(100):
                    step = mpmath.polyval(cs, y) / mpmath.polyval(dcs, y)
                    y -= step
                    if abs(step) <= eps * abs(y):
                        break
                root = y ** (mpmath.mpf(1) / m)
                out.extend(root * mpmath.expjpi(mpmath.mpf(2 * s) / m) for s in range(m))
            return out

    return Spectrum(eigs, "exact-roots", N, m, residual=float(worst),
                    extra={"sweeps": sweeps, "refine": refine})


def q_max(spec: Spectrum, tol: float = 0.5, qcap: int | None = None, precise: bool = True) -> int:
    """Largest q with |Tr(C^p)/N - delta_{p,m}| < tol for every p <= q (capped at qcap).

    With precise=True the power sums are accumulated in mpmath with enough
    digits to absorb the cancellation in sum lam^p (|lam| exceeds 1); with
    precise=False they are plain double-precision sums.
    """
    qcap = qcap if qcap is not None else 2 * spec.N + 10
    target = {spec.m: 1.0}
    if not precise or "refine" not in spec.extra:
        tr = power_traces(spec.eigenvalues, qcap) / spec.N
        for p in range(1, qcap + 1):
            val = tr[p - 1]
            if not np.isfinite(val) or abs(val - target.get(p, 0.0)) >= tol:
                return p - 1
        return qcap
    top = max(1.0, float(np.max(np.abs(spec.eigenvalues))))
    dps = 30 + int(math.ceil(qcap * math.log10(top))) + int(math.ceil(math.log10(spec.N)))
    with mpmath.workdps(dps):
        lams = spec.extra["refine"](dps)
        pw = [mpmath.mpc(1)] * len(lams)
        for p in range(1, qcap + 1):
            pw = [a * b for a, b in zip(pw, lams)]
            val = mpmath.fsum(pw) / spec.N
            if abs(val - target.get(p, 0)) >= tol:
                return p - 1
    return qcap


def match_spectra(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Permutation of b closest to a (optimal assignment on |a_i - b_j|)."""
    from scipy.optimize import linear_sum_assignment
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    out = np.empty_like(a)
    out[rows] = b[cols]
    return out


def max_relative_error(approx: Spectrum, exact: Spectrum) -> float:
    ex = match_spectra(approx.eigenvalues, exact.eigenvalues)
    return float(np.max(np.abs(approx.eigenvalues - ex) / np.abs(ex)))


# --- density and resolvent ---------------------------------------------------

def spectral_density(lam: complex, m: int) -> complex:
    if lam == 0:
        raise ValueError("spectral density is singular at lambda = 0")
    return -(1.0 / (2j * math.pi)) * (lam ** -1 + lam ** (-m - 1))


def density_curve(m: int, samples: int = 4001):
    """Points of the support curve lam^{-m} = W(-e^{i theta - 1}), all m sheets."""
    theta = np.linspace(0.0, 2 * np.pi, samples)
    w = lambert_w0(-np.exp(1j * theta - 1.0))
    base = w ** (-1.0 / m)
    with np.errstate(divide="ignore", invalid="ignore"):
        dw = 1j * w / (1.0 + w)
        dbase = -(1.0 / m) * w ** (-1.0 / m - 1.0) * dw
    return theta, base, dbase


def density_mass(m: int, samples: int = 20001) -> tuple[complex, float]:
    """(integral of rho dlam, integral of |rho dlam|) over the m sheets."""
    theta, base, dbase = density_curve(m, samples)
    tot = 0j
    tot_abs = 0.0
    for s in range(m):
        ph = cmath.exp(2j * math.pi * (s + 1) / m)
        lam = base * ph
        with np.errstate(invalid="ignore"):
            integrand = -(1.0 / (2j * math.pi)) * (1.0 / lam + lam ** (-m - 1)) * dbase * ph
        # the curve passes through the branch point, where dbase blows up mildly
        ok = np.isfinite(integrand)
        tot += np.trapezoid(integrand[ok], theta[ok])
        tot_abs += np.trapezoid(np.abs(integrand[ok]), theta[ok])
    return complex(tot), float(tot_abs)


def resolvent(spec: Spectrum, mu: complex) -> complex:
    return complex(np.mean(1.0 / (1.0 - mu * spec.eigenvalues)))
