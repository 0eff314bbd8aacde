"""Exact exponential sums R_f(alpha, x) and their main-term predictors.

The oracles are honest O(x) summations with compensated accumulation.  The
predictors assemble, per ranked frame (psi_j mod r_j, t_j), the term

    conj(psi_j)(a) g(psi_j) kappa_j(q/r_j) I(x, beta, t_j) S_{f_j}(x) / phi(q)

plus the literal error budget; they report the discrepancy against the
oracle rather than asserting any unproved bound.  Arcs are classified by
continued-fraction convergents.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .characters import DirichletCharacter, PeriodicFunction, pseudo_gauss
from .errors import DomainError
from .multfunc import (
    KappaFunction,
    MultFunc,
    eval_range,
    k_factor,
    mean_value,
    twist,
)
from .oscint import I_value
from .pretentious import Frame, select_frames, select_global_frame
from .sieve import SieveTable, divisors, euler_phi, get_sieve

TAU = (2.0 - math.sqrt(2.0)) / 3.0
ETA = 1.0 - 2.0 / math.pi


def _fsum_complex(re: np.ndarray, im: np.ndarray) -> complex:
    return complex(math.fsum(re), math.fsum(im))


# ---------------------------------------------------------------------------
# exact sums
# ---------------------------------------------------------------------------


def direct_sum(f: MultFunc, alpha: float, x: int, sieve: SieveTable | None = None) -> complex:
    """R_f(alpha, x) = sum_{n <= x} f(n) e(n alpha), exact summation."""
    vals = eval_range(f, x, sieve).astype(np.complex128)
    n = np.arange(x + 1)
    ph = np.exp(2j * np.pi * np.mod(n * float(alpha), 1.0))
    z = vals * ph
    return _fsum_complex(z.real, z.imag)


def direct_sum_rational(
    f: MultFunc, a: int, q: int, beta: float, x: int, sieve: SieveTable | None = None
) -> complex:
    """R_f(a/q + beta, x) with the rational phase folded exactly mod q."""
    vals = eval_range(f, x, sieve).astype(np.complex128)
    n = np.arange(x + 1)
    roots = np.exp(2j * np.pi * np.arange(q) / q)
    z = vals * roots[(n * (a % q)) % q]
    if beta != 0.0:
        z = z * np.exp(2j * np.pi * np.mod(n * beta, 1.0))
    return _fsum_complex(z.real, z.imag)


def friable_sum(
    f: MultFunc, alpha: float, x: int, y: float, sieve: SieveTable | None = None
) -> complex:
    """R restricted to y-friable n (largest prime factor <= y; n = 1 counts)."""
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    vals = eval_range(f, x, sieve).astype(np.complex128)
    n = np.arange(x + 1)
    mask = sieve.lpf[: x + 1] <= y
    mask[0] = False
    z = vals[mask] * np.exp(2j * np.pi * np.mod(n[mask] * float(alpha), 1.0))
    return _fsum_complex(z.real, z.imag)


# ---------------------------------------------------------------------------
# arcs
# ---------------------------------------------------------------------------


def _convergents(fr: Fraction) -> list[tuple[int, int]]:
    num, den = fr.numerator, fr.denominator
    h0, k0, h1, k1 = 0, 1, 1, 0
    out = []
    while den:
        a = num // den
        num, den = den, num - a * den
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append((h1, k1))
    return out


@dataclass
class ArcDecomposition:
    alpha: float
    a: int
    q: int
    beta: float
    x: int
    eps: float
    Q: float
    Q1: float
    Q3: float
    regime: str  # "major" iff some convergent with q0 <= Q1 puts alpha in its arc
    major_sec6: bool  # literal narrow-arc tag: denominator <= x/Q
    in_qrange_window: bool  # |beta| <= log q loglog q / x with q <= Q1

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "a": self.a,
            "q": self.q,
            "beta": self.beta,
            "x": self.x,
            "eps": self.eps,
            "Q": self.Q,
            "Q1": self.Q1,
            "Q3": self.Q3,
            "regime": self.regime,
            "major_sec6": self.major_sec6,
            "in_qrange_window": self.in_qrange_window,
        }


def thresholds(x: int, eps: float = 0.1) -> tuple[float, float]:
    """(Q, Q1) for scale x: Q = x/(log x)^{tau - eps}, Q1 = (log x)^2 (loglog x)^{1+eps}."""
    lx = math.log(x)
    Q = x / lx ** (TAU - eps)
    Q1 = lx * lx * math.log(lx) ** (1.0 + eps)
    return Q, Q1


def arc_halfwidth(q: int, x: int) -> float:
    """Half-width of the regime window around a/q: log(x) / (q x).

    The asymptotic window (log x)^{tau-eps}/(q x) moves by less than one FFT
    grid cell between adjacent test scales, so energy trends computed with it
    are dominated by quantization; log x keeps arcs pairwise disjoint for
    q <= Q1 (q <= x/(2 log x) guarantees window points are convergents) while
    growing fast enough to resolve.
    """
    return math.log(x) / (q * x)


def _qrange_width(q: int, x: int) -> float:
    if q < 3:
        return 0.0
    return max(0.0, math.log(q) * math.log(math.log(q))) / x


def classify_alpha(alpha, x: int, eps: float = 0.1) -> ArcDecomposition:
    """Dirichlet approximation of alpha by its continued-fraction convergents.

    Returns the last convergent with denominator <= Q (so |beta| <= 1/(qQ)
    automatically).  The regime is "major" when alpha lies within
    arc_halfwidth of any convergent with denominator <= Q1; at computable
    scales the literal narrow-arc threshold x/Q stays below 2, which would
    make every nontrivial rational minor, so that tag is reported separately
    as major_sec6.
    """
    if x < 3:
        raise DomainError("classify_alpha needs x >= 3")
    fr = Fraction(alpha) if not isinstance(alpha, Fraction) else alpha
    fr = fr - Fraction(math.floor(fr))
    Q, Q1 = thresholds(x, eps)
    convs = _convergents(fr) or [(0, 1)]
    kept = [(p, q) for (p, q) in convs if q <= Q] or [convs[0]]
    a, q = kept[-1]
    alpha_f = float(fr)
    beta = float(fr - Fraction(a, q))
    major = False
    sec6 = False
    for p0, q0 in kept:
        d = abs(fr - Fraction(p0, q0))
        if q0 <= Q1 and d <= Fraction(arc_halfwidth(q0, x)):
            major = True
        if q0 <= x / Q and d <= Fraction(1) / (Fraction(q0) * Fraction(Q)):
            sec6 = True
    q3 = (
        x / (q * math.log(q) * math.log(math.log(q)))
        if q >= 3 and math.log(math.log(q)) > 0
        else float("inf")
    )
    return ArcDecomposition(
        alpha=alpha_f,
        a=a,
        q=q,
        beta=beta,
        x=x,
        eps=eps,
        Q=Q,
        Q1=Q1,
        Q3=q3,
        regime="major" if major else "minor",
        major_sec6=sec6,
        in_qrange_window=(q <= Q1 and abs(beta) <= _qrange_width(q, x)),
    )


# ---------------------------------------------------------------------------
# prediction reports
# ---------------------------------------------------------------------------


@dataclass
class FrameTerm:
    j: int
    chi_exponents: tuple[int, ...]
    r: int
    t: float
    coefficient: complex  # everything multiplying I * S / phi(q)
    I: complex
    S: complex
    value: complex

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "chi": list(self.chi_exponents),
            "r": self.r,
            "t": self.t,
            "coefficient": [self.coefficient.real, self.coefficient.imag],
            "I": [self.I.real, self.I.imag],
            "S": [self.S.real, self.S.imag],
            "value": [self.value.real, self.value.imag],
        }


@dataclass
class PredictionReport:
    oracle: complex
    predicted: complex
    terms: list[FrameTerm]
    err_budget: float
    timings: dict = field(default_factory=dict)

    @property
    def abs_discrepancy(self) -> float:
        return abs(self.oracle - self.predicted)

    @property
    def rel_discrepancy(self) -> float:
        scale = max(abs(self.oracle), 1e-300)
        return self.abs_discrepancy / scale

    def to_dict(self, with_timings: bool = False) -> dict:
        out = {
            "oracle": [self.oracle.real, self.oracle.imag],
            "predicted": [self.predicted.real, self.predicted.imag],
            "terms": [t.to_dict() for t in self.terms],
            "err_budget": self.err_budget,
            "abs_discrepancy": self.abs_discrepancy,
            "rel_discrepancy": self.rel_discrepancy,
        }
        if with_timings:
            out["timings"] = self.timings
        return out


def err_budget(x: int, q: int, J: int) -> float:
    """The literal error-term shape with all implied constants set to 1:
    x (q/phi(q)) (loglog x)^2 ((log x)^{-(1-1/sqrt J)} + (log x)^{-eta}/sqrt q)."""
    lx = math.log(x)
    llx = math.log(lx)
    return (
        x
        * (q / euler_phi(q))
        * llx**2
        * (lx ** -(1.0 - 1.0 / math.sqrt(J)) + lx**-ETA / math.sqrt(q))
    )


# ---------------------------------------------------------------------------
# Theorem-style predictors
# ---------------------------------------------------------------------------


def predict_theorem1(
    f: MultFunc,
    a: int,
    q: int,
    beta: float,
    x: int,
    J: int = 3,
    eps: float = 0.1,
    sieve: SieveTable | None = None,
    frames: list[Frame] | None = None,
    with_oracle: bool = True,
) -> PredictionReport:
    """Main-term prediction for R_f(a/q + beta, x) from the top J-1 frames."""
    if q < 1 or gcd(a, q) != 1:
        raise DomainError(f"predict_theorem1 needs gcd(a, q) = 1, got ({a}, {q})")
    _, Q1 = thresholds(x, eps)
    if q > Q1:
        import warnings

        warnings.warn(f"q={q} is outside the supported range q <= Q1 = {Q1:.1f}; computing anyway")
    t0 = time.time()
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    if frames is None:
        frames = select_frames(f, x, q, J, sieve)
    t_frames = time.time() - t0

    phi_q = euler_phi(q)
    terms = []
    total = 0.0 + 0.0j
    for j, fr in enumerate(frames, start=1):
        kappa = KappaFunction(f, fr.psi, fr.t)
        coeff = fr.psi.conjugate()(a) * fr.psi.gauss_sum() * kappa.eval(q // fr.r, sieve)
        Ival = I_value(x, beta, fr.t)
        S = mean_value(twist(f, fr.psi, fr.t), x, None, sieve)
        val = coeff * Ival * S / phi_q
        terms.append(
            FrameTerm(j, fr.chi.exponents, fr.r, fr.t, complex(coeff), Ival, complex(S), val)
        )
        total += val
    t_terms = time.time() - t0 - t_frames

    oracle = direct_sum_rational(f, a, q, beta, x, sieve) if with_oracle else complex("nan")
    budget = (1.0 + abs(beta) * x) * err_budget(x, q, J)
    return PredictionReport(
        oracle=oracle,
        predicted=total,
        terms=terms,
        err_budget=budget,
        timings={
            "frames_s": t_frames,
            "terms_s": t_terms,
            "oracle_s": time.time() - t0 - t_frames - t_terms,
        },
    )


def twisted_coefficient(
    f: MultFunc,
    h: PeriodicFunction,
    fr: Frame,
    sieve: SieveTable,
) -> complex:
    """c_j = sum over r_j | n | q of k_j(n) kappa_j(q/n) G_h(n; psi_j)."""
    q = h.period
    kappa = KappaFunction(f, fr.psi, fr.t)
    f_j = twist(f, fr.psi, fr.t)
    total = 0.0 + 0.0j
    for n in divisors(q, sieve):
        if n % fr.r:
            continue
        total += k_factor(f_j, n, sieve) * kappa.eval(q // n, sieve) * pseudo_gauss(h, n, fr.psi)
    return total


def predict_twisted(
    f: MultFunc,
    h: PeriodicFunction,
    x: int,
    J: int = 3,
    sieve: SieveTable | None = None,
) -> PredictionReport:
    """Prediction for sum_{n <= x} f(n) h(n), h of period q, via pseudo-Gauss sums."""
    q = h.period
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    frames = select_frames(f, x, q, J, sieve) if q > 1 else select_frames(f, x, 1, J, sieve)
    phi_q = euler_phi(q)
    terms = []
    total = 0.0 + 0.0j
    for j, fr in enumerate(frames, start=1):
        coeff = twisted_coefficient(f, h, fr, sieve)
        Ival = I_value(x, 0.0, fr.t)
        S = mean_value(twist(f, fr.psi, fr.t), x, None, sieve)
        val = coeff * Ival * S / phi_q
        terms.append(
            FrameTerm(j, fr.chi.exponents, fr.r, fr.t, complex(coeff), Ival, complex(S), val)
        )
        total += val
    vals = eval_range(f, x, sieve).astype(np.complex128)
    n = np.arange(x + 1)
    z = vals * h.values_on(n)
    oracle = _fsum_complex(z.real, z.imag)
    return PredictionReport(oracle=oracle, predicted=total, terms=terms, err_budget=float("nan"))


def ap_sum(
    f: MultFunc,
    a: int,
    q: int,
    x: int,
    mode: str = "direct",
    J: int = 3,
    sieve: SieveTable | None = None,
):
    """Sum of f over n <= x, n = a mod q: exact count or frame prediction."""
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    if mode == "direct":
        vals = eval_range(f, x, sieve)
        n = np.arange(x + 1)
        sel = vals[n % q == a % q]
        if sel.dtype == np.int8:
            return int(np.sum(sel, dtype=np.int64))
        return _fsum_complex(sel.real, sel.imag)
    if mode != "predicted":
        raise DomainError(f"ap_sum mode must be direct or predicted, got {mode}")
    if gcd(a, q) != 1:
        raise DomainError("predicted ap_sum needs gcd(a, q) = 1")
    frames = select_frames(f, x, q, J, sieve)
    phi_q = euler_phi(q)
    terms = []
    total = 0.0 + 0.0j
    for j, fr in enumerate(frames, start=1):
        f_j = twist(f, fr.psi, fr.t)
        coeff = fr.psi(a) * k_factor(f_j, q, sieve)
        Ival = I_value(x, 0.0, fr.t)
        S = mean_value(f_j, x, None, sieve)
        val = coeff * Ival * S / phi_q
        terms.append(
            FrameTerm(j, fr.chi.exponents, fr.r, fr.t, complex(coeff), Ival, complex(S), val)
        )
        total += val
    oracle = ap_sum(f, a, q, x, "direct", J, sieve)
    lx = math.log(x)
    budget = x / euler_phi(q) * math.log(lx) ** 2 * lx**-ETA
    return PredictionReport(oracle=complex(oracle), predicted=total, terms=terms, err_budget=budget)


def s_f_chi_predict(
    f: MultFunc,
    chi: DirichletCharacter,
    ell: int,
    x: int,
    sieve: SieveTable | None = None,
) -> PredictionReport:
    """S_f(x/ell, chi) against I(x,0,t)/ell^{1+it} prod_{p|q}(1 - f(p)conj(psi)(p)/p^{1+it}) S_{f_j}(x)."""
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    from .pretentious import select_t

    psi, r = chi.primitive()
    g = twist(f, psi, 0.0)
    t = select_t(g, x, math.log(x))
    f_j = twist(f, psi, t)
    S = mean_value(f_j, x, None, sieve)
    prod = 1.0 + 0.0j
    for p, _ in sieve.factor(chi.q) if chi.q > 1 else []:
        prod *= 1.0 - f.prime_value(p) * np.conj(psi(p)) * p ** -(1.0 + 1j * t)
    Ival = I_value(x, 0.0, t)
    predicted = Ival / ell ** (1.0 + 1j * t) * prod * S
    oracle = mean_value(f, x // ell, chi, sieve)
    term = FrameTerm(1, chi.exponents, r, t, complex(prod / ell ** (1 + 1j * t)), Ival, complex(S), complex(predicted))
    return PredictionReport(
        oracle=complex(oracle), predicted=complex(predicted), terms=[term], err_budget=float("nan")
    )


# ---------------------------------------------------------------------------
# M_f / E_f decomposition and minor-arc energy
# ---------------------------------------------------------------------------


@dataclass
class ArcSplit:
    arc: ArcDecomposition
    R: complex
    M: complex
    E: complex
    frame_r: int
    r_divides_q: bool

    def to_dict(self) -> dict:
        return {
            "arc": self.arc.to_dict(),
            "R": [self.R.real, self.R.imag],
            "M": [self.M.real, self.M.imag],
            "E": [self.E.real, self.E.imag],
            "frame_r": self.frame_r,
            "r_divides_q": self.r_divides_q,
        }


def arc_decompose_Rf(
    f: MultFunc,
    alpha,
    x: int,
    eps: float = 0.1,
    r_max: int = 12,
    sieve: SieveTable | None = None,
    frame: Frame | None = None,
) -> ArcSplit:
    """R_f = M_f + E_f with the single global frame; M_f = 0 on minor arcs
    and carries the r | q indicator on major ones."""
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    arc = classify_alpha(alpha, x, eps)
    if frame is None:
        frame = select_global_frame(f, x, r_max)
    R = direct_sum_rational(f, arc.a, arc.q, arc.beta, x, sieve)
    r_div = arc.q % frame.r == 0
    M = 0.0 + 0.0j
    if arc.regime == "major" and r_div:
        kappa = KappaFunction(f, frame.psi, frame.t)
        S = mean_value(twist(f, frame.psi, frame.t), x, None, sieve)
        M = (
            frame.psi.conjugate()(arc.a)
            * frame.psi.gauss_sum()
            * kappa.eval(arc.q // frame.r, sieve)
            * I_value(x, arc.beta, frame.t)
            * S
            / euler_phi(arc.q)
        )
    return ArcSplit(arc=arc, R=R, M=complex(M), E=complex(R - M), frame_r=frame.r, r_divides_q=r_div)


def exponential_sum_grid(f: MultFunc, x: int, M: int, sieve: SieveTable | None = None) -> np.ndarray:
    """R_f(k/M, x) for k = 0..M-1 via one FFT of the coefficient vector.

    For M <= x the coefficients are folded mod M first (e(nk/M) only sees
    n mod M), so the values stay exact for any grid size.
    """
    vals = eval_range(f, x, sieve).astype(np.complex128)
    if M >= x + 1:
        buf = np.zeros(M, dtype=np.complex128)
        buf[: x + 1] = vals
    else:
        n = np.arange(x + 1) % M
        buf = np.bincount(n, weights=vals.real, minlength=M).astype(np.complex128)
        buf += 1j * np.bincount(n, weights=vals.imag, minlength=M)
    return np.fft.ifft(buf) * M


def _mark_major(M: int, x: int, eps: float) -> np.ndarray:
    """Boolean mask over the grid k/M of membership in some arc with q <= Q1."""
    _, Q1 = thresholds(x, eps)
    mask = np.zeros(M, dtype=bool)
    for q in range(1, int(Q1) + 1):
        w = arc_halfwidth(q, x)
        for a in range(q + 1):
            if gcd(a, q) != 1:
                continue
            lo = int(math.ceil((a / q - w) * M))
            hi = int(math.floor((a / q + w) * M))
            if lo <= hi:
                mask[np.arange(lo, hi + 1) % M] = True
    return mask


@dataclass
class EnergyReport:
    x: int
    M: int
    eps: float
    total_energy: float  # (1/M) sum |R|^2 = sum |f(n)|^2 exactly for M > 2x
    coefficient_energy: float
    minor_energy: float
    major_energy: float
    minor_ratio: float  # minor energy / x

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "M": self.M,
            "eps": self.eps,
            "total_energy": self.total_energy,
            "coefficient_energy": self.coefficient_energy,
            "minor_energy": self.minor_energy,
            "major_energy": self.major_energy,
            "minor_ratio": self.minor_ratio,
        }


def minor_arc_energy(
    f: MultFunc,
    x: int,
    M: int | None = None,
    eps: float = 0.1,
    sieve: SieveTable | None = None,
) -> EnergyReport:
    """Grid measurement of int over minor arcs of |R_f|^2.

    M >= 2x + 1 makes the grid mean of |R|^2 equal the integral exactly
    (|R|^2 is a trigonometric polynomial of degree 2x), so total agrees with
    the coefficient energy sum |f(n)|^2 to rounding.
    """
    if M is None:
        # 4x beyond the exactness bound: spacing ~ x/M in the scaled frequency
        # must resolve the arc windows, not just make Parseval exact
        from scipy.fft import next_fast_len

        M = int(next_fast_len(8 * (x + 1)))
    if M < 2 * x + 1:
        raise DomainError(f"grid size {M} below the exactness bound 2x+1 = {2 * x + 1}")
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    R = exponential_sum_grid(f, x, M, sieve)
    p2 = np.abs(R) ** 2
    total = float(np.sum(p2) / M)
    vals = eval_range(f, x, sieve)
    coeff = float(np.sum(np.abs(vals.astype(np.complex128)) ** 2))
    mask = _mark_major(M, x, eps)
    major = float(np.sum(p2[mask]) / M)
    minor = float(np.sum(p2[~mask]) / M)
    return EnergyReport(
        x=x,
        M=M,
        eps=eps,
        total_energy=total,
        coefficient_energy=coeff,
        minor_energy=minor,
        major_energy=major,
        minor_ratio=minor / x,
    )


# ---------------------------------------------------------------------------
# diagnostic bounds and identities
# ---------------------------------------------------------------------------


@dataclass
class BoundReport:
    arc: ArcDecomposition
    absR: float
    bound_general: float  # x/log x + x sqrt(log R loglog R / R), R = min(q, x/q)
    bound_folklore: float  # x/log x + x/sqrt(q)
    bound_refined: float  # x/log x + x/sqrt(q(1+|beta|x))
    ratios: dict

    def to_dict(self) -> dict:
        return {
            "arc": self.arc.to_dict(),
            "absR": self.absR,
            "bound_general": self.bound_general,
            "bound_folklore": self.bound_folklore,
            "bound_refined": self.bound_refined,
            "ratios": self.ratios,
        }


def bound_report(
    f: MultFunc, alpha, x: int, eps: float = 0.1, sieve: SieveTable | None = None
) -> BoundReport:
    """|R_f| against the three bound shapes with unit implied constants."""
    arc = classify_alpha(alpha, x, eps)
    R = abs(direct_sum_rational(f, arc.a, arc.q, arc.beta, x, sieve))
    lx = math.log(x)
    Rq = min(arc.q, x / max(arc.q, 1))
    if Rq >= 3:
        gen = x / lx + x * math.sqrt(math.log(Rq) * math.log(math.log(Rq)) / Rq)
    else:
        gen = float("inf")
    folk = x / lx + x / math.sqrt(arc.q)
    refined = x / lx + x / math.sqrt(arc.q * (1.0 + abs(arc.beta) * x))
    ratios = {
        "general": R / gen if math.isfinite(gen) else 0.0,
        "folklore": R / folk,
        "refined": R / refined,
    }
    return BoundReport(arc, R, gen, folk, refined, ratios)


def identity_41_residual(
    f: MultFunc, a: int, q: int, beta: float, x: int, sieve: SieveTable | None = None
) -> float:
    """Relative residual of the exact Abel-summation identity
    R_f(x, a/q + beta) = e(beta x) R_f(x, a/q) - 2 pi i beta
    int_1^x e(beta v) R_f(v, a/q) dv."""
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    vals = eval_range(f, x, sieve).astype(np.complex128)
    n = np.arange(x + 1)
    roots = np.exp(2j * np.pi * np.arange(q) / q)
    base = vals * roots[(n * (a % q)) % q]
    P = np.cumsum(base)
    lhs = direct_sum_rational(f, a, q, beta, x, sieve)
    if beta == 0.0:
        return abs(lhs - P[x]) / x
    k = np.arange(1, x)
    seg = (np.exp(2j * np.pi * beta * (k + 1)) - np.exp(2j * np.pi * beta * k)) / (
        2j * np.pi * beta
    )
    integral = np.sum(P[k] * seg)
    rhs = np.exp(2j * np.pi * beta * x) * P[x] - 2j * np.pi * beta * integral
    return float(abs(lhs - rhs)) / x


def pls_tail(
    f: MultFunc, x: int, q: int, J: int = 3, sieve: SieveTable | None = None
) -> float:
    """sum over chi mod q outside the top J-1 of |S_f(x, chi)|^2."""
    from .pretentious import rank_characters

    ranking = rank_characters(f, math.sqrt(x), q, J, sieve)
    total = 0.0
    for chi, _ in ranking.entries[J - 1 :]:
        total += abs(mean_value(f, x, chi, sieve)) ** 2
    return total
