"""Selection of maximizing twist parameters (psi, t) and character rankings.

The score of a candidate twist is the Euler-product modulus
|F(1 + 1/log x + it)| of the twisted function over primes up to x.  Ranking
characters mod q instead uses the windowed partial-sum statistic
s_f(X, chi) = max |S_f(v, chi)| / v sampled on a geometric grid, which is
what the arithmetic-progression and exponential-sum predictors order their
frames by.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characters import DirichletCharacter, enumerate_characters
from .errors import DomainError
from .multfunc import MultFunc, eval_range, twist
from .sieve import SieveTable, get_sieve

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _prime_data(f: MultFunc, x: int, sigma: float):
    sieve = get_sieve(max(int(x), 2))
    primes = sieve.primes_upto(x)
    fp = np.asarray(f.prime_values(primes), dtype=np.complex128)
    keep = np.abs(fp) > 1e-15
    primes, fp = primes[keep], fp[keep]
    lnp = np.log(primes.astype(np.float64))
    w = np.abs(fp) * np.exp(-sigma * lnp)
    theta = np.angle(fp)
    return lnp, w, theta


def _log_modulus(ts: np.ndarray, lnp, w, theta) -> np.ndarray:
    """log |F(sigma + it)| for each t, F the Euler product over the primes."""
    out = np.empty(len(ts))
    w2 = w * w
    chunk = max(1, int(4e6 // max(len(lnp), 1)))
    for i in range(0, len(ts), chunk):
        tt = ts[i : i + chunk]
        phases = theta[None, :] - tt[:, None] * lnp[None, :]
        out[i : i + chunk] = -0.5 * np.sum(np.log1p(w2 - 2.0 * w * np.cos(phases)), axis=1)
    return out


def dirichlet_modulus(f: MultFunc, x: int, t: float, sieve: SieveTable | None = None) -> float:
    """|F(1 + 1/log x + it)| as a truncated Euler product over p <= x."""
    if x < 3:
        raise DomainError(f"dirichlet_modulus needs x >= 3, got {x}")
    sigma = 1.0 + 1.0 / math.log(x)
    lnp, w, theta = _prime_data(f, x, sigma)
    if len(lnp) == 0:
        return 1.0
    return float(np.exp(_log_modulus(np.array([t]), lnp, w, theta)[0]))


_COARSE_CUT = 100_000


@lru_cache(maxsize=512)
def select_t(f: MultFunc, x: int, T: float) -> float:
    """The t in [-T, T] maximizing |F(1 + 1/log x + it)|.

    Uniform grid of step 1/(4 log x) (symmetric, containing 0) plus a
    golden-section refinement to width 1e-4 around the best grid point.
    Ties resolve to the smallest t.

    For large x the grid is scanned in two exact stages: primes above 1e5
    perturb the log-score by at most B = sum (w + w^2), so only grid points
    whose truncated score is within 2B of the truncated maximum can carry
    the true maximum; those are re-scored with all primes.
    """
    if x < 3:
        raise DomainError(f"select_t needs x >= 3, got {x}")
    if T > math.log(x) * (1 + 1e-9):
        import warnings

        warnings.warn(f"select_t range T={T} exceeds log x = {math.log(x):.3f}")
    sigma = 1.0 + 1.0 / math.log(x)
    lnp, w, theta = _prime_data(f, x, sigma)
    if len(lnp) == 0:
        return 0.0  # empty Euler product: |F| = 1 for every t
    step = 1.0 / (4.0 * math.log(x))
    K = int(math.floor(T / step))
    ts = np.arange(-K, K + 1) * step
    cut = math.log(_COARSE_CUT)
    if lnp[-1] > cut and len(lnp) > 2 * _COARSE_CUT ** 0.5:
        head = lnp <= cut
        tail_b = float(np.sum(w[~head] + w[~head] ** 2))
        coarse = _log_modulus(ts, lnp[head], w[head], theta[head])
        cand = np.nonzero(coarse >= np.max(coarse) - 2.0 * tail_b)[0]
        scores_c = _log_modulus(ts[cand], lnp, w, theta)
        best_c = int(np.argmax(scores_c))
        best = int(cand[best_c])
        t_best, s_best = float(ts[best]), float(scores_c[best_c])
    else:
        scores = _log_modulus(ts, lnp, w, theta)
        best = int(np.argmax(scores))
        t_best, s_best = float(ts[best]), float(scores[best])

    lo = max(-T, t_best - step)
    hi = min(T, t_best + step)
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)

    def g(t):
        return float(_log_modulus(np.array([t]), lnp, w, theta)[0])

    fc, fd = g(c), g(d)
    while (b - a) > 1e-4:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = g(d)
    for t, s in ((c, fc), (d, fd)):
        if s > s_best + 1e-13:
            t_best, s_best = t, s
    return t_best


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """One main-term frame: chi mod q ranked for f, its inducing primitive
    psi mod r, and the maximizing t for the twisted function."""

    chi: DirichletCharacter
    psi: DirichletCharacter
    r: int
    t: float
    score: float
    s_value: float = float("nan")


@dataclass
class CharacterRanking:
    q: int
    X: float
    entries: list[tuple[DirichletCharacter, float]]  # (chi, s_f) descending

    def top(self, J: int) -> list[tuple[DirichletCharacter, float]]:
        return self.entries[: max(J - 1, 1)]


def rank_characters(
    f: MultFunc,
    X: float,
    q: int,
    J: int = 3,
    sieve: SieveTable | None = None,
    n_points: int = 32,
) -> CharacterRanking:
    """Order characters mod q by s_f(X, chi) = max |S_f(v, chi)|/v over a
    geometric grid of at least n_points points in [sqrt(X), X^2]."""
    hi = int(math.ceil(X * X))
    sieve = sieve if sieve is not None and sieve.limit >= hi else get_sieve(max(hi, 2))
    if q > sieve.limit:
        raise DomainError(f"modulus {q} exceeds sieve limit {sieve.limit}")
    pts = np.unique(
        np.rint(np.geomspace(math.sqrt(X), X * X, n_points)).astype(np.int64)
    )
    pts = pts[pts >= 1]
    vals = eval_range(f, hi, sieve)
    n = np.arange(hi + 1)
    entries = []
    for idx, chi in enumerate(enumerate_characters(q)):
        ct = chi.values_exact()
        if ct is not None and vals.dtype == np.int8:
            prod = vals.astype(np.int64) * ct[n % q]
            sums = np.cumsum(prod)
        else:
            prod = vals.astype(np.complex128) * np.conj(chi.values())[n % q]
            sums = np.cumsum(prod)
        s = float(np.max(np.abs(sums[pts]) / pts))
        entries.append((idx, chi, s))
    entries.sort(key=lambda e: (-e[2], e[0]))
    return CharacterRanking(q, X, [(chi, s) for _, chi, s in entries])


def select_frames(
    f: MultFunc,
    x: int,
    q: int,
    J: int = 3,
    sieve: SieveTable | None = None,
) -> list[Frame]:
    """Top J-1 frames for f mod q: rank by s_f(sqrt(x), .), then pick each
    frame's t as the maximizer for the psi-twisted function at scale x."""
    ranking = rank_characters(f, math.sqrt(x), q, J, sieve)
    frames = []
    for chi, s in ranking.top(J):
        psi, r = chi.primitive()
        g = twist(f, psi, 0.0)
        t = select_t(g, x, math.log(x))
        score = dirichlet_modulus(g, x, t)
        frames.append(Frame(chi=chi, psi=psi, r=r, t=t, score=score, s_value=s))
    return frames


def primitive_candidates(r_max: int) -> list[DirichletCharacter]:
    out = []
    for r in range(1, r_max + 1):
        if r % 4 == 2:
            continue  # no primitive characters for r = 2 mod 4
        for chi in enumerate_characters(r):
            if chi.is_primitive:
                out.append(chi)
    return out


@lru_cache(maxsize=128)
def select_global_frame(f: MultFunc, x: int, r_max: int = 12) -> Frame:
    """Best (psi, t) over all primitive psi with modulus up to r_max,
    scored by the twisted Euler-product modulus at scale x."""
    best: Frame | None = None
    for psi in primitive_candidates(r_max):
        g = twist(f, psi, 0.0)
        t = select_t(g, x, math.log(x))
        score = dirichlet_modulus(g, x, t)
        if best is None or score > best.score * (1 + 1e-12):
            best = Frame(chi=psi, psi=psi, r=psi.q, t=t, score=score)
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# pretentious distance and the bounded-distance criterion
# ---------------------------------------------------------------------------


def pretentious_distance(
    f: MultFunc,
    psi: DirichletCharacter,
    t: float,
    y: float,
    x: float,
    sieve: SieveTable | None = None,
) -> float:
    """sum over y < p <= x of (1 - Re f(p) conj(psi)(p) p^{-it}) / p."""
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(int(x), 2))
    primes = sieve.primes_upto(x)
    primes = primes[primes > y]
    if len(primes) == 0:
        return 0.0
    fp = np.asarray(f.prime_values(primes), dtype=np.complex128)
    pv = np.conj(psi.values())[primes % psi.q]
    ph = np.exp(-1j * t * np.log(primes.astype(np.float64)))
    re = np.real(fp * pv * ph)
    return float(np.sum((1.0 - re) / primes))


@dataclass
class BrudernReport:
    x: int
    frame: Frame
    distance_x: float
    distance_x2: float
    growth: float
    threshold: float
    bounded: bool

    @property
    def verdict(self) -> str:
        return "bounded" if self.bounded else "growing"


def brudern_check(
    f: MultFunc,
    x: int,
    threshold: float = 0.5,
    r_max: int = 12,
    sieve: SieveTable | None = None,
) -> BrudernReport:
    """Bounded-distance criterion: compare the distance at scales x and x^2
    at the best frame; growth above the threshold means the distance diverges
    (minor arcs then carry a positive share of the energy, and conversely).
    """
    x2 = x * x
    sieve = sieve if sieve is not None and sieve.limit >= x2 else get_sieve(max(x2, 2))
    # frame selected at the base scale; the growth test then probes [x, x^2]
    frame = select_global_frame(f, x, r_max)
    d1 = pretentious_distance(f, frame.psi, frame.t, 1.5, x, sieve)
    d2 = d1 + pretentious_distance(f, frame.psi, frame.t, x, x2, sieve)
    growth = d2 - d1
    return BrudernReport(
        x=x,
        frame=frame,
        distance_x=d1,
        distance_x2=d2,
        growth=growth,
        threshold=threshold,
        bounded=growth <= threshold,
    )


# ---------------------------------------------------------------------------
# numerical residuals for the two partial-sum identities used downstream
# ---------------------------------------------------------------------------


def lemsumt_residual(f: MultFunc, x: int, sieve: SieveTable | None = None) -> float:
    """|S_f(x) - x^{it}/(1+it) S_{f n^{-it}}(x)| / x at t = t_f(x, log x)."""
    from .multfunc import mean_value

    t = select_t(f, x, math.log(x))
    s_plain = mean_value(f, x, None, sieve)
    tw = twist(f, DirichletCharacter(1, ()), t)
    s_tw = mean_value(tw, x, None, sieve)
    pred = np.exp(1j * t * math.log(x)) / (1 + 1j * t) * s_tw
    return float(abs(s_plain - pred)) / x


def adapt_residual(f: MultFunc, x: int, w: float, sieve: SieveTable | None = None) -> float:
    """|S_f(x/w) - w^{-(1+it)} S_f(x)| / (x/w) at t = t_f(x, log x)."""
    from .multfunc import mean_value

    t = select_t(f, x, math.log(x))
    s_small = mean_value(f, int(x / w), None, sieve)
    s_big = mean_value(f, x, None, sieve)
    pred = w ** (-(1 + 1j * t)) * s_big
    return float(abs(s_small - pred)) / (x / w)


def frame_stability(
    f: MultFunc, q: int, xs: list[int], sieve: SieveTable | None = None
) -> list[tuple[int, ...]]:
    """Exponent tuple of the top-ranked character mod q at each scale."""
    out = []
    for x in xs:
        ranking = rank_characters(f, math.sqrt(x), q, 2, sieve)
        out.append(ranking.entries[0][0].exponents)
    return out
