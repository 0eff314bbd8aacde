"""Circle-method applications: weighted triple counts, Euler local factors,
the local-global density formulas, and the extremal sign-pattern constants.

Counting oracles run through exact convolution (FFT with integer rounding
checks) or raw double loops; predictions assemble an archimedean factor, a
principality gate, and per-prime local factors evaluated as exact finite
residue sums mod p^e.  Local sums are computed by pushing gcd-stratified
weights onto residues and convolving, never by raw triple loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np
from scipy.fft import next_fast_len

from .characters import DirichletCharacter
from .errors import DomainError
from .multfunc import (
    KappaFunction,
    MultFunc,
    SmallLargeSplit,
    eval_range,
    mu_mean,
    split_small_large,
    twist,
)
from .pretentious import Frame, select_global_frame
from .sieve import SieveTable, get_sieve


# ---------------------------------------------------------------------------
# problems and exact counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TripleProblem:
    """Weighted count of a l + b m = c n with l, m, n <= x (mode "linear"),
    or of l + m + n = N with l, m, n >= 1 (mode "partition", a = b = c = 1)."""

    f: MultFunc
    g: MultFunc
    h: MultFunc
    a: int = 1
    b: int = 1
    c: int = 1
    x: int | None = None
    N: int | None = None
    mode: str = "linear"

    def __post_init__(self):
        if self.mode not in ("linear", "partition"):
            raise DomainError(f"unknown mode {self.mode}")
        if min(self.a, self.b, self.c) < 1:
            raise DomainError("coefficients must be positive integers")
        if self.mode == "linear" and (self.x is None or self.x < 2):
            raise DomainError("linear mode needs x >= 2")
        if self.mode == "partition":
            if self.N is None or self.N < 2:
                raise DomainError("partition mode needs N >= 2")
            if (self.a, self.b, self.c) != (1, 1, 1):
                raise DomainError("partition mode is the unit-coefficient equation")

    @property
    def scale(self) -> int:
        return self.x if self.mode == "linear" else self.N


def triple_sum_direct(prob: TripleProblem, sieve: SieveTable | None = None) -> complex:
    """Exact double loop; the third variable is solved from the equation."""
    if prob.mode == "linear":
        x = prob.x
        fv = eval_range(prob.f, x, sieve).astype(np.complex128)
        gv = eval_range(prob.g, x, sieve).astype(np.complex128)
        hv = eval_range(prob.h, x, sieve).astype(np.complex128)
        m = np.arange(1, x + 1)
        total = 0.0 + 0.0j
        for ell in range(1, x + 1):
            s = prob.a * ell + prob.b * m
            n, rem = np.divmod(s, prob.c)
            ok = (rem == 0) & (n <= x)
            total += fv[ell] * np.sum(gv[m[ok]] * hv[n[ok]])
        return complex(total)
    N = prob.N
    fv = eval_range(prob.f, N, sieve).astype(np.complex128)
    gv = eval_range(prob.g, N, sieve).astype(np.complex128)
    hv = eval_range(prob.h, N, sieve).astype(np.complex128)
    total = 0.0 + 0.0j
    for ell in range(1, N - 1):
        m = np.arange(1, N - ell)
        total += fv[ell] * np.sum(gv[m] * hv[N - ell - m])
    return complex(total)


def triple_sum_fft(prob: TripleProblem, sieve: SieveTable | None = None) -> complex:
    """The same count through one discrete convolution of coefficient arrays.

    With {-1,0,1}-valued weights the convolution is rounded to integers and
    the rounding residual is asserted below 0.4.
    """
    exact = prob.f.exact_int and prob.g.exact_int and prob.h.exact_int
    if prob.mode == "linear":
        x = prob.x
        fa = np.zeros(prob.a * x + 1)
        ga = np.zeros(prob.b * x + 1)
        if exact:
            fa[prob.a * np.arange(1, x + 1)] = eval_range(prob.f, x, sieve)[1:]
            ga[prob.b * np.arange(1, x + 1)] = eval_range(prob.g, x, sieve)[1:]
        else:
            fa = fa.astype(np.complex128)
            ga = ga.astype(np.complex128)
            fa[prob.a * np.arange(1, x + 1)] = eval_range(prob.f, x, sieve)[1:]
            ga[prob.b * np.arange(1, x + 1)] = eval_range(prob.g, x, sieve)[1:]
        L = int(next_fast_len(len(fa) + len(ga) - 1))
        conv = np.fft.ifft(np.fft.fft(fa, L) * np.fft.fft(ga, L))[: len(fa) + len(ga) - 1]
        hv = eval_range(prob.h, x, sieve)
        n = np.arange(1, x + 1)
        idx = prob.c * n
        idx = idx[idx < len(conv)]
        if exact:
            rounded = np.rint(conv.real)
            resid = float(np.max(np.abs(conv[idx] - rounded[idx])))
            if resid >= 0.4:
                raise DomainError(f"convolution rounding residual {resid} too large")
            tot = np.sum(rounded[idx] * hv[n[: len(idx)]].astype(np.float64))
            return complex(round(float(tot)))
        return complex(np.sum(conv[idx] * hv[n[: len(idx)]].astype(np.complex128)))
    N = prob.N
    fa = np.zeros(N, dtype=np.float64 if exact else np.complex128)
    ga = np.zeros(N, dtype=np.float64 if exact else np.complex128)
    fa[1:N] = eval_range(prob.f, N - 1, sieve)[1:N]
    ga[1:N] = eval_range(prob.g, N - 1, sieve)[1:N]
    L = int(next_fast_len(2 * N))
    conv = np.fft.ifft(np.fft.fft(fa, L) * np.fft.fft(ga, L))
    hv = eval_range(prob.h, N, sieve)
    n = np.arange(1, N - 1)
    vals = conv[N - n]
    if exact:
        rounded = np.rint(vals.real)
        resid = float(np.max(np.abs(vals - rounded)))
        if resid >= 0.4:
            raise DomainError(f"convolution rounding residual {resid} too large")
        return complex(round(float(np.sum(rounded * hv[n].astype(np.float64)))))
    return complex(np.sum(vals * hv[n].astype(np.complex128)))


# ---------------------------------------------------------------------------
# local factors: exact residue sums mod p^e
# ---------------------------------------------------------------------------


def smallest_cap_exponent(p: int, z: float) -> int:
    """Smallest e with p^e > z^2."""
    e = 1
    while p**e <= z * z:
        e += 1
    return e


def _capped_valuations(p: int, e: int) -> np.ndarray:
    """min(v_p(u), e) for u = 0..p^e-1 (u = 0 counts as e)."""
    pe = p**e
    v = np.zeros(pe, dtype=np.int64)
    for k in range(1, e + 1):
        v[:: p**k] = k
    v[0] = e
    return v


def _pushforward(p: int, e: int, weights_by_val: np.ndarray, mult: int) -> np.ndarray:
    """Array W with W[(mult*u) mod p^e] accumulating weights_by_val[v_p(u)]."""
    pe = p**e
    u = np.arange(pe)
    w = weights_by_val[_capped_valuations(p, e)]
    idx = (mult % pe) * u % pe
    out = np.bincount(idx, weights=w.real, minlength=pe).astype(np.complex128)
    out += 1j * np.bincount(idx, weights=w.imag, minlength=pe)
    return out


def local_triple_sum(
    p: int,
    e: int,
    weights: list[np.ndarray],
    mults: list[int],
    target: int = 0,
) -> complex:
    """(1/p^{2e}) sum over u, v, w mod p^e with m1 u + m2 v + m3 w = target
    of w1[v(u)] w2[v(v)] w3[v(w)], via cyclic convolution."""
    pe = p**e
    A = _pushforward(p, e, np.asarray(weights[0], dtype=np.complex128), mults[0])
    B = _pushforward(p, e, np.asarray(weights[1], dtype=np.complex128), mults[1])
    C = _pushforward(p, e, np.asarray(weights[2], dtype=np.complex128), mults[2])
    conv = np.fft.ifft(np.fft.fft(A) * np.fft.fft(B))
    idx = (target - np.arange(pe)) % pe
    total = np.sum(C * conv[idx])
    return complex(total / pe**2)


def _dagger_weights(f: MultFunc, frame: Frame, p: int, e: int) -> np.ndarray:
    """f-dagger values at p^k, k = 0..e: (f(p) p^{-it})^k off the conductor,
    the k = 0 spike on it."""
    out = np.zeros(e + 1, dtype=np.complex128)
    out[0] = 1.0
    if frame.r % p == 0:
        return out
    base = f.prime_value(p) * np.exp(-1j * frame.t * math.log(p))
    for k in range(1, e + 1):
        out[k] = out[k - 1] * base
    return out


def _plain_weights(f: MultFunc, p: int, e: int) -> np.ndarray:
    """f(p^k) for k = 0..e."""
    out = np.zeros(e + 1, dtype=np.complex128)
    out[0] = 1.0
    base = f.prime_value(p)
    for k in range(1, e + 1):
        out[k] = out[k - 1] * base
    return out


def euler_factor_E(
    p: int,
    prob: TripleProblem,
    frames: tuple[Frame, Frame, Frame],
    z: float,
) -> complex:
    """The finite-modulus local factor at p: the exact residue sum mod p^e,
    e the smallest exponent with p^e > z^2."""
    e = smallest_cap_exponent(p, z)
    wf = _dagger_weights(prob.f, frames[0], p, e)
    wg = _dagger_weights(prob.g, frames[1], p, e)
    wh = _dagger_weights(prob.h, frames[2], p, e)
    if prob.mode == "linear":
        return local_triple_sum(p, e, [wf, wg, wh], [prob.a, prob.b, -prob.c], 0)
    return local_triple_sum(p, e, [wf, wg, wh], [1, 1, 1], prob.N % p**e)


def estar_exact(
    p: int,
    f: MultFunc,
    g: MultFunc,
    h: MultFunc,
    mode: str = "linear",
    N: int | None = None,
    cap: int = 1 << 14,
) -> float:
    """E*(p) from the exact residue sum at depth p^e >= cap, normalized by
    (1 - 1/p)^3 prod (1 - f(p)/p)^{-1} as in the real-valued reduction."""
    e = 1
    while p**e < cap:
        e += 1
    wf, wg, wh = (_plain_weights(fn, p, e) for fn in (f, g, h))
    if mode == "linear":
        val = local_triple_sum(p, e, [wf, wg, wh], [1, 1, -1], 0)
    else:
        if N is None:
            raise DomainError("partition-mode E* needs N")
        val = local_triple_sum(p, e, [wf, wg, wh], [1, 1, 1], N % p**e)
    norm = (1.0 - 1.0 / p) ** -3
    for fn in (f, g, h):
        norm *= 1.0 - complex(fn.prime_value(p)).real / p
    return float((val * norm).real)


def estar(p: int, f: MultFunc, g: MultFunc, h: MultFunc) -> float:
    """E*(p) for the equation l + m = n and real-valued weights.

    Closed forms: 1 when any of f(p), g(p), h(p) equals 1; the quadratic
    expression when all equal -1; 1 - 1/(p-1)^2 when all equal 0.  Other
    sign patterns fall back to the exact residue sum.
    """
    vals = [complex(fn.prime_value(p)) for fn in (f, g, h)]
    if any(abs(v - 1) < 1e-12 for v in vals):
        return 1.0
    if all(abs(v + 1) < 1e-12 for v in vals):
        return 1.0 - 8.0 * p * p / ((p - 1.0) ** 2 * (p * p + 1.0))
    if all(abs(v) < 1e-12 for v in vals):
        return 1.0 - 1.0 / (p - 1.0) ** 2
    return estar_exact(p, f, g, h, "linear")


def estar_N(p: int, f: MultFunc, g: MultFunc, h: MultFunc, N: int) -> float:
    """E*_N(p) for l + m + n = N; closed in the 1- and 0-value cases, exact
    residue sum otherwise (the all-(-1) case has no simple closed form)."""
    vals = [complex(fn.prime_value(p)) for fn in (f, g, h)]
    if any(abs(v - 1) < 1e-12 for v in vals):
        return 1.0
    if all(abs(v) < 1e-12 for v in vals):
        if N % p == 0:
            return 1.0 - 1.0 / (p - 1.0) ** 2
        return 1.0 + 1.0 / (p - 1.0) ** 3
    return estar_exact(p, f, g, h, "partition", N)


# ---------------------------------------------------------------------------
# archimedean factor
# ---------------------------------------------------------------------------

_GLA, _GLW = np.polynomial.legendre.leggauss(24)


def archimedean_E(
    a: float,
    b: float,
    c: float,
    t_f: float = 0.0,
    t_g: float = 0.0,
    t_h: float = 0.0,
    target: float = 0.0,
) -> complex:
    """(1/|c|) integral over 0 <= u, v, w <= 1 with a u + b v + c w = target
    of u^{i t_f} v^{i t_g} w^{i t_h} du dv."""
    if c == 0:
        raise DomainError("archimedean factor needs c != 0")

    def v_interval(u: float) -> tuple[float, float]:
        # w = (target - a u - b v)/c in [0, 1]
        lo_w = (target - a * u) / b  # v where w = 0
        hi_w = (target - a * u - c) / b  # v where w = 1
        v0, v1 = (min(lo_w, hi_w), max(lo_w, hi_w))
        return max(0.0, v0), min(1.0, v1)

    bps = {0.0, 1.0}
    for rhs in (target, target - b, target - c, target - b - c):
        if a != 0:
            u = rhs / a
            if 0.0 < u < 1.0:
                bps.add(u)
    edges = sorted(bps)

    def inner(u: float) -> complex:
        v0, v1 = v_interval(u)
        if v1 <= v0:
            return 0.0
        if t_g == 0.0 and t_h == 0.0:
            return v1 - v0
        m = 0.5 * (v0 + v1) + 0.5 * (v1 - v0) * _GLA
        w = (target - a * u - b * m) / c
        w = np.maximum(w, 1e-300)
        vals = np.exp(1j * (t_g * np.log(np.maximum(m, 1e-300)) + t_h * np.log(w)))
        return complex(0.5 * (v1 - v0) * np.sum(_GLW * vals))

    total = 0.0 + 0.0j
    for e0, e1 in zip(edges[:-1], edges[1:]):
        for lo, hi in zip(
            np.linspace(e0, e1, 9)[:-1], np.linspace(e0, e1, 9)[1:]
        ):
            m = 0.5 * (lo + hi) + 0.5 * (hi - lo) * _GLA
            if t_f == 0.0:
                vals = np.array([inner(float(u)) for u in m])
            else:
                vals = np.array(
                    [inner(float(u)) * np.exp(1j * t_f * math.log(max(u, 1e-300))) for u in m]
                )
            total += 0.5 * (hi - lo) * np.sum(_GLW * vals)
    return complex(total / abs(c))


# ---------------------------------------------------------------------------
# density prediction
# ---------------------------------------------------------------------------


def _product_principal(psis: list[DirichletCharacter]) -> bool:
    L = 1
    for psi in psis:
        L = L * psi.q // gcd(L, psi.q)
    n = np.arange(L)
    vals = np.ones(L, dtype=np.complex128)
    for psi in psis:
        vals = vals * psi.values()[n % psi.q]
    units = np.abs(vals) > 0.5
    if not np.any(units):
        return True
    return bool(np.max(np.abs(vals[units] - 1.0)) < 1e-9)


@dataclass
class TripleReport:
    problem_scale: int
    mode: str
    oracle_count: complex
    oracle_density: complex
    predicted_density: complex
    path: str  # "real-unit" or "generic"
    factors: dict = field(default_factory=dict)

    @property
    def abs_discrepancy(self) -> float:
        return abs(self.oracle_density - self.predicted_density)

    @property
    def rel_discrepancy(self) -> float:
        return self.abs_discrepancy / max(abs(self.predicted_density), 1e-300)

    def to_dict(self) -> dict:
        return {
            "scale": self.problem_scale,
            "mode": self.mode,
            "oracle_count": [self.oracle_count.real, self.oracle_count.imag],
            "oracle_density": [self.oracle_density.real, self.oracle_density.imag],
            "predicted_density": [self.predicted_density.real, self.predicted_density.imag],
            "path": self.path,
            "factors": self.factors,
            "abs_discrepancy": self.abs_discrepancy,
            "rel_discrepancy": self.rel_discrepancy,
        }


def predict_triples(
    prob: TripleProblem,
    z: float | None = None,
    sieve: SieveTable | None = None,
    r_max: int = 12,
    pmax: int = 10**6,
) -> TripleReport:
    """Density prediction against the exact convolution oracle.

    Real {-1,0,1}-valued weights with principal frames use the product of the
    three plain mean values times the E* local product (extended over all
    p <= pmax where closed forms apply, with the truncation tail reported).
    Everything else takes the generic route: large-prime mean values times
    2 E(infinity) x^{it} delta times the finite-modulus local factors.
    """
    x = prob.scale
    if z is None:
        z = math.log(x)
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    count = triple_sum_fft(prob, sieve)
    density = count / (x * x / 2.0)

    frames = tuple(select_global_frame(fn, x, r_max) for fn in (prob.f, prob.g, prob.h))
    factors: dict = {"z": z}
    real_ok = (
        prob.f.exact_int
        and prob.g.exact_int
        and prob.h.exact_int
        and all(fr.r == 1 and abs(fr.t) < 1e-3 for fr in frames)
        and (prob.mode == "partition" or (prob.a, prob.b, prob.c) == (1, 1, 1))
    )

    if real_ok:
        mus = [complex(mu_mean(fn, x, sieve)).real for fn in (prob.f, prob.g, prob.h)]
        primes = sieve.primes_upto(pmax) if sieve.limit >= pmax else get_sieve(pmax).primes
        fv = np.rint(np.asarray(prob.f.prime_values(primes), dtype=np.float64)).astype(np.int64)
        gv = np.rint(np.asarray(prob.g.prime_values(primes), dtype=np.float64)).astype(np.int64)
        hv = np.rint(np.asarray(prob.h.prime_values(primes), dtype=np.float64)).astype(np.int64)
        local = 1.0
        ep_list = []
        if prob.mode == "linear":
            all_zero = (fv == 0) & (gv == 0) & (hv == 0)
            zero_ps = primes[all_zero].astype(np.float64)
            local *= float(np.prod(1.0 - 1.0 / (zero_ps - 1.0) ** 2))
            all_neg = (fv == -1) & (gv == -1) & (hv == -1)
            neg_ps = primes[all_neg].astype(np.float64)
            local *= float(
                np.prod(1.0 - 8.0 * neg_ps**2 / ((neg_ps - 1.0) ** 2 * (neg_ps**2 + 1.0)))
            )
            mixed = ~all_zero & ~all_neg & (fv != 1) & (gv != 1) & (hv != 1)
            for p in primes[mixed].tolist():
                val = estar(int(p), prob.f, prob.g, prob.h)
                ep_list.append((int(p), val))
                local *= val
        else:
            N = prob.N
            all_zero = (fv == 0) & (gv == 0) & (hv == 0)
            zps = primes[all_zero]
            div = zps[N % zps == 0].astype(np.float64)
            ndiv = zps[N % zps != 0].astype(np.float64)
            local *= float(np.prod(1.0 + 1.0 / (ndiv - 1.0) ** 3))
            local *= float(np.prod(1.0 - 1.0 / (div - 1.0) ** 2))
            mixed = ~all_zero & (fv != 1) & (gv != 1) & (hv != 1)
            for p in primes[mixed].tolist():
                val = estar_N(int(p), prob.f, prob.g, prob.h, N)
                ep_list.append((int(p), val))
                local *= val
        predicted = mus[0] * mus[1] * mus[2] * local
        tail = 1.0 / (pmax * math.log(pmax))  # crude bound on sum_{p > pmax} (p-1)^{-2}
        factors.update(
            {
                "mu": mus,
                "local_product": local,
                "exact_local_factors": ep_list,
                "pmax": pmax,
                "tail_bound": tail,
            }
        )
        return TripleReport(x, prob.mode, count, complex(density), complex(predicted), "real-unit", factors)

    # generic route
    splits: list[SmallLargeSplit] = [
        split_small_large(fn, fr.psi, fr.t, max(z, 2.0))
        for fn, fr in zip((prob.f, prob.g, prob.h), frames)
    ]
    means = [complex(mu_mean(sp.F_l, x, sieve)) for sp in splits]
    delta = 1.0 if _product_principal([fr.psi for fr in frames]) else 0.0
    tsum = sum(fr.t for fr in frames)
    if prob.mode == "linear":
        einf = archimedean_E(prob.a, prob.b, -prob.c, frames[0].t, frames[1].t, frames[2].t, 0.0)
    else:
        einf = archimedean_E(1.0, 1.0, 1.0, frames[0].t, frames[1].t, frames[2].t, 1.0)
    ps = [int(p) for p in sieve.primes_upto(max(z, 2)).tolist()]
    for p in sorted({q for q in _prime_divisors(prob.a * prob.b * prob.c)} - set(ps)):
        ps.append(p)
    ep = []
    local = 1.0 + 0.0j
    for p in sorted(ps):
        val = euler_factor_E(p, prob, frames, z)
        ep.append((p, complex(val)))
        local *= val
    predicted = (
        means[0]
        * means[1]
        * means[2]
        * 2.0
        * einf
        * np.exp(1j * tsum * math.log(x))
        * delta
        * local
    )
    factors.update(
        {
            "large_means": [[m.real, m.imag] for m in means],
            "Einf": [einf.real, einf.imag],
            "delta_principal": delta,
            "Ep": [(p, [v.real, v.imag]) for p, v in ep],
            "frame_r": [fr.r for fr in frames],
            "frame_t": [fr.t for fr in frames],
        }
    )
    return TripleReport(x, prob.mode, count, complex(density), complex(predicted), "generic", factors)


def _prime_divisors(n: int) -> list[int]:
    return [p for p, _ in get_sieve(max(n, 2)).factor(n)]


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def delta0() -> float:
    """-1 + 2 log(1 + sqrt(e)) - 4 int_1^sqrt(e) log(t)/(t+1) dt = 0.656999..."""
    from scipy.integrate import quad

    val, err = quad(lambda u: math.log(u) / (u + 1.0), 1.0, math.sqrt(math.e), epsabs=1e-13)
    if err > 1e-10:
        raise RuntimeError(f"delta0 quadrature error {err}")
    return -1.0 + 2.0 * math.log(1.0 + math.sqrt(math.e)) - 4.0 * val


def cor2_constants() -> tuple[float, float]:
    """(kappa, kappa') = ((1+delta0)^3/8, (1-delta0)^3/8)."""
    d = delta0()
    return (1.0 + d) ** 3 / 8.0, (1.0 - d) ** 3 / 8.0


def _alpha_P(P: tuple[int, ...]) -> float:
    return math.prod((p - 1.0) / (p + 1.0) for p in P)


def _C_P(P: tuple[int, ...]) -> float:
    return math.prod(1.0 - 8.0 * p * p / ((p - 1.0) ** 2 * (p * p + 1.0)) for p in P)


def _onepattern_value(P: tuple[int, ...], t: float) -> float:
    """(1/8)(1 + a t - a^2 t^2 - C a^3 t^3) with a = alpha_P, C = C_P."""
    a, C = _alpha_P(P), _C_P(P)
    return (1.0 + a * t - a * a * t * t - C * a**3 * t**3) / 8.0


def c2_product(pmax: int = 10**6, sieve: SieveTable | None = None) -> float:
    """prod over p <= pmax of |1 - 8 p^2 / ((p-1)^2 (p^2+1))| (ascending p)."""
    sieve = sieve if sieve is not None and sieve.limit >= pmax else get_sieve(pmax)
    p = sieve.primes_upto(pmax).astype(np.float64)
    terms = np.abs(1.0 - 8.0 * p * p / ((p - 1.0) ** 2 * (p * p + 1.0)))
    return float(np.exp(np.sum(np.log(terms))))


def extremal_table(pmax: int = 10**6, sieve: SieveTable | None = None) -> dict:
    """The extremal sign-pattern constants, each reproduced by maximizing the
    cubic density expression over small prime sets and the allowed t range."""
    d0 = delta0()
    csets = [(), (2,), (3,), (5,), (2, 3), (2, 5), (3, 5)]

    best_pp = max(
        ((P, t) for P in csets for t in np.linspace(0, 1, 2001)),
        key=lambda pt: _onepattern_value(pt[0], pt[1]),
    )
    val_pp = _onepattern_value(*best_pp)

    best_mm = max(
        ((P, t) for P in csets for t in np.linspace(0, d0, 2001)),
        key=lambda pt: _onepattern_value(pt[0], pt[1]),
    )
    val_mm = _onepattern_value(*best_mm)

    return {
        "delta0": d0,
        "kappa": cor2_constants()[0],
        "kappa_prime": cor2_constants()[1],
        "C2_product": c2_product(pmax, sieve),
        "eight_forty_fifths": val_pp,
        "eight_forty_fifths_argmax": {"P": list(best_pp[0]), "t": float(best_pp[1])},
        "two_minus_one_max": val_mm,
        "two_minus_one_argmax": {"P": list(best_mm[0]), "t": float(best_mm[1])},
        "mixed_max": {"mu1": (1.0 + d0) / 2.0, "mu2": ((1.0 + d0) / 2.0) ** 2},
    }


# ---------------------------------------------------------------------------
# sign patterns
# ---------------------------------------------------------------------------


def signpattern_density(
    f: MultFunc,
    g: MultFunc,
    h: MultFunc,
    eps1: int,
    eps2: int,
    eps3: int,
    x: int,
    z: float | None = None,
    sieve: SieveTable | None = None,
) -> tuple[float, float]:
    """(oracle, predicted) density of a + b = c <= x with f(a) = eps1,
    g(b) = eps2, h(c) = eps3, for {-1,1}-valued weights.

    Oracle: the eight expanded convolution counts of the indicator product.
    Prediction: the independent-product form corrected by (C_P - 1) on the
    triple term, P = {p <= z : f(p) = g(p) = h(p) = -1}.
    """
    if any(e not in (-1, 1) for e in (eps1, eps2, eps3)):
        raise DomainError("sign pattern entries must be +-1")
    x = int(x)
    if z is None:
        z = math.log(x)
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    from .multfunc import One

    one = One()
    total = 0.0
    norm = x * x / 2.0
    for sf in (False, True):
        for sg in (False, True):
            for sh in (False, True):
                prob = TripleProblem(
                    f if sf else one, g if sg else one, h if sh else one, 1, 1, 1, x=x
                )
                cnt = triple_sum_fft(prob, sieve).real
                w = (eps1 if sf else 1) * (eps2 if sg else 1) * (eps3 if sh else 1)
                total += w * cnt
    oracle = total / (8.0 * norm)

    deltas = [complex(mu_mean(fn, x, sieve)).real for fn in (f, g, h)]
    primes = sieve.primes_upto(z)
    P = [
        int(p)
        for p in primes.tolist()
        if all(abs(complex(fn.prime_value(int(p))) + 1) < 1e-12 for fn in (f, g, h))
    ]
    CP = _C_P(tuple(P))
    predicted = (
        (1.0 + eps1 * deltas[0]) * (1.0 + eps2 * deltas[1]) * (1.0 + eps3 * deltas[2])
        + eps1 * eps2 * eps3 * deltas[0] * deltas[1] * deltas[2] * (CP - 1.0)
    ) / 8.0
    return float(oracle), float(predicted)


# ---------------------------------------------------------------------------
# mean of F_s over a sumset (the friable-convolution identity)
# ---------------------------------------------------------------------------


def _friable_integers(z: float, limit: int, sieve: SieveTable) -> list[int]:
    ps = [int(p) for p in sieve.primes_upto(z).tolist()]
    out = []

    def rec(i: int, val: int):
        if i == len(ps):
            out.append(val)
            return
        p = ps[i]
        while True:
            rec(i + 1, val)
            if val > limit // p:
                break
            val *= p

    rec(0, 1)
    return sorted(out)


def fs_mean_over_sumset(
    split: SmallLargeSplit,
    A: np.ndarray,
    B: np.ndarray,
    sieve: SieveTable | None = None,
) -> tuple[complex, complex]:
    """(unfolded value, direct value) for the mean of F_s(a + b) over A x B.

    F_s(n) = n^{it} ((kappa restricted to z-friable support) * psi)(n), so the
    mean unfolds into kappa-weighted psi-sums over multiples; the sum over
    friable m is finite since m never exceeds max(A) + max(B).
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    smax = int(A.max() + B.max())
    sieve = sieve if sieve is not None and sieve.limit >= smax else get_sieve(max(smax, 2))
    wts = np.zeros(smax + 1)
    ia = np.zeros(int(A.max()) + 1)
    ib = np.zeros(int(B.max()) + 1)
    ia[A] = 1.0
    ib[B] = 1.0
    L = int(next_fast_len(len(ia) + len(ib)))
    conv = np.fft.ifft(np.fft.fft(ia, L) * np.fft.fft(ib, L)).real
    wts[: len(ia) + len(ib) - 1] = np.rint(conv[: len(ia) + len(ib) - 1])
    denom = float(len(A) * len(B))

    fs_vals = eval_range(split.F_s, smax, sieve).astype(np.complex128)
    s = np.arange(smax + 1)
    direct = complex(np.sum(wts * fs_vals) / denom)

    kappa = KappaFunction(split.f, split.psi, split.t)
    psi_tab = split.psi.values()
    r = split.psi.q
    t = split.t
    unfolded = 0.0 + 0.0j
    for m in _friable_integers(split.z, smax, sieve):
        km = kappa.eval(m, sieve)
        if abs(km) < 1e-15:
            continue
        mult = np.arange(m, smax + 1, m)
        w = wts[mult]
        nz = w != 0
        if not np.any(nz):
            continue
        mult = mult[nz]
        w = w[nz]
        vals = psi_tab[(mult // m) % r] * np.exp(1j * t * np.log(mult.astype(np.float64)))
        unfolded += km * np.sum(w * vals)
    return complex(unfolded / denom), direct


# ---------------------------------------------------------------------------
# principality gate (residue sums over a composite modulus)
# ---------------------------------------------------------------------------


def residue_triple_gate(
    N: int,
    f: MultFunc,
    g: MultFunc,
    h: MultFunc,
    frames: tuple[Frame, Frame, Frame],
    coeffs: tuple[int, int, int] = (1, 1, -1),
    sieve: SieveTable | None = None,
) -> complex:
    """(1/N^2) sum over u, v, w mod N with a u + b v + c w = 0 of
    f-dagger(u) g-dagger(v) h-dagger(w), the dagger built per prime power of
    N with the frame's character riding along.  Vanishes exactly when the
    product of the frame characters is non-principal."""
    sieve = sieve if sieve is not None and sieve.limit >= N else get_sieve(max(N, 2))

    def dagger_table(fn: MultFunc, fr: Frame) -> np.ndarray:
        n = np.arange(N)
        tab = np.ones(N, dtype=np.complex128)
        for p, e in sieve.factor(N):
            star = twist(fn, fr.psi, fr.t)
            w = _plain_weights(star, p, e)
            v = np.minimum(_capped_valuations(p, e)[n % p**e], e)
            tab *= w[v]
        tab *= fr.psi.values()[n % fr.psi.q]
        return tab

    ft = dagger_table(f, frames[0])
    gt = dagger_table(g, frames[1])
    ht = dagger_table(h, frames[2])
    a, b, c = coeffs
    FA = np.bincount(a % N * np.arange(N) % N, weights=ft.real, minlength=N).astype(np.complex128)
    FA += 1j * np.bincount(a % N * np.arange(N) % N, weights=ft.imag, minlength=N)
    GB = np.bincount(b % N * np.arange(N) % N, weights=gt.real, minlength=N).astype(np.complex128)
    GB += 1j * np.bincount(b % N * np.arange(N) % N, weights=gt.imag, minlength=N)
    HC = np.bincount(c % N * np.arange(N) % N, weights=ht.real, minlength=N).astype(np.complex128)
    HC += 1j * np.bincount(c % N * np.arange(N) % N, weights=ht.imag, minlength=N)
    conv = np.fft.ifft(np.fft.fft(FA) * np.fft.fft(GB))
    total = np.sum(HC * conv[(-np.arange(N)) % N])
    return complex(total / N**2)
