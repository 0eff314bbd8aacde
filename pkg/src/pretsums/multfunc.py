"""Completely multiplicative functions with values in the closed unit disc.

A MultFunc is determined by its values on primes; everything here evaluates
through a shared smallest-prime-factor sieve.  Functions taking only the
values -1, 0, 1 run on an exact integer fast path (int8 ranges, int64 sums),
which the sign-pattern applications rely on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characters import DirichletCharacter
from .errors import DomainError
from .sieve import SieveTable, get_sieve


# ---------------------------------------------------------------------------
# prime predicates (rules picking out sets of primes)
# ---------------------------------------------------------------------------


class PrimeRule:
    def matches(self, p: int) -> bool:
        raise NotImplementedError

    def mask(self, primes: np.ndarray) -> np.ndarray:
        return np.array([self.matches(int(p)) for p in primes], dtype=bool)


@dataclass(frozen=True)
class AllPrimes(PrimeRule):
    label: str = "all"

    def matches(self, p: int) -> bool:
        return True

    def mask(self, primes: np.ndarray) -> np.ndarray:
        return np.ones(len(primes), dtype=bool)


@dataclass(frozen=True)
class ResidueRule(PrimeRule):
    """Primes p with p mod modulus in residues."""

    modulus: int
    residues: tuple[int, ...]

    def matches(self, p: int) -> bool:
        return p % self.modulus in self.residues

    def mask(self, primes: np.ndarray) -> np.ndarray:
        return np.isin(primes % self.modulus, np.array(self.residues))


@dataclass(frozen=True)
class ThresholdRule(PrimeRule):
    """Primes p <= bound (op "le") or p > bound (op "gt")."""

    op: str
    bound: float

    def matches(self, p: int) -> bool:
        return p <= self.bound if self.op == "le" else p > self.bound

    def mask(self, primes: np.ndarray) -> np.ndarray:
        return primes <= self.bound if self.op == "le" else primes > self.bound


@dataclass(frozen=True)
class ListRule(PrimeRule):
    primes: frozenset[int]

    def matches(self, p: int) -> bool:
        return p in self.primes

    def mask(self, primes: np.ndarray) -> np.ndarray:
        return np.isin(primes, np.array(sorted(self.primes)))


# ---------------------------------------------------------------------------
# multiplicative function kinds
# ---------------------------------------------------------------------------


class MultFunc:
    """Base: completely multiplicative, |f(n)| <= 1, f(1) = 1."""

    exact_int = False  # True when all values lie in {-1, 0, 1}

    def prime_value(self, p: int) -> complex:
        raise NotImplementedError

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def label(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class One(MultFunc):
    exact_int = True

    def prime_value(self, p: int) -> complex:
        return 1

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        return np.ones(len(primes), dtype=np.int8)

    @property
    def label(self) -> str:
        return "one"


@dataclass(frozen=True)
class SignRule(MultFunc):
    """f(p) = -1 where the rule matches, +1 elsewhere."""

    rule: PrimeRule
    exact_int = True

    def prime_value(self, p: int) -> complex:
        return -1 if self.rule.matches(p) else 1

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        out = np.ones(len(primes), dtype=np.int8)
        out[self.rule.mask(primes)] = -1
        return out

    @property
    def label(self) -> str:
        return f"sign({self.rule})"


@dataclass(frozen=True)
class Indicator(MultFunc):
    """f(p) = 1 where the rule matches, 0 elsewhere: indicator of the
    integers generated by the matching primes."""

    rule: PrimeRule
    exact_int = True

    def prime_value(self, p: int) -> complex:
        return 1 if self.rule.matches(p) else 0

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        return self.rule.mask(primes).astype(np.int8)

    @property
    def label(self) -> str:
        return f"smoothset({self.rule})"


@dataclass(frozen=True)
class CharacterMF(MultFunc):
    chi: DirichletCharacter

    @property
    def exact_int(self):  # type: ignore[override]
        return self.chi.is_real

    def prime_value(self, p: int) -> complex:
        return self.chi(p)

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        tab = self.chi.values_exact()
        if tab is not None:
            return tab[primes % self.chi.q]
        return self.chi.values()[primes % self.chi.q]

    @property
    def label(self) -> str:
        return f"char:{self.chi.q}:{','.join(map(str, self.chi.exponents))}"


@dataclass(frozen=True)
class ArchTwist(MultFunc):
    """f(p) = p^{it}."""

    t: float

    @property
    def exact_int(self):  # type: ignore[override]
        return self.t == 0.0

    def prime_value(self, p: int) -> complex:
        return cmath.exp(1j * self.t * math.log(p))

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        if self.t == 0.0:
            return np.ones(len(primes), dtype=np.int8)
        return np.exp(1j * self.t * np.log(primes.astype(np.float64)))

    @property
    def label(self) -> str:
        return f"nit:{self.t}"


@dataclass(frozen=True)
class PrimeTable(MultFunc):
    """Explicit table p -> value; unlisted primes default to 1."""

    items: tuple[tuple[int, complex], ...]

    def __post_init__(self):
        for p, v in self.items:
            if abs(v) > 1 + 1e-12:
                raise DomainError(f"|f({p})| = {abs(v)} exceeds 1")

    @property
    def exact_int(self):  # type: ignore[override]
        return all(v in (-1, 0, 1) for _, v in self.items)

    def _dict(self):
        return dict(self.items)

    def prime_value(self, p: int) -> complex:
        return self._dict().get(p, 1)

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        d = self._dict()
        vals = [d.get(int(p), 1) for p in primes]
        if self.exact_int:
            return np.array([int(complex(v).real) for v in vals], dtype=np.int8)
        return np.array(vals, dtype=np.complex128)

    @property
    def label(self) -> str:
        return f"table[{len(self.items)}]"


@dataclass(frozen=True)
class RandomSign(MultFunc):
    """Seed-fixed random f(p) in {-1, +1}, stable across sieve sizes."""

    seed: int
    exact_int = True

    def prime_value(self, p: int) -> complex:
        return int(self.prime_values(np.array([p], dtype=np.int64))[0])

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        x = primes.astype(np.uint64) ^ np.uint64(self.seed * 0x9E3779B97F4A7C15 % (1 << 64))
        with np.errstate(over="ignore"):
            z = x + np.uint64(0x9E3779B97F4A7C15)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
        return (1 - 2 * (z & np.uint64(1)).astype(np.int8)).astype(np.int8)

    @property
    def label(self) -> str:
        return f"randpm:{self.seed}"


@dataclass(frozen=True)
class PiecewiseZ(MultFunc):
    """f(p) = below(p) for p <= z, above(p) for p > z."""

    below: MultFunc
    above: MultFunc
    z: float

    @property
    def exact_int(self):  # type: ignore[override]
        return self.below.exact_int and self.above.exact_int

    def prime_value(self, p: int) -> complex:
        return self.below.prime_value(p) if p <= self.z else self.above.prime_value(p)

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        lo = self.below.prime_values(primes)
        hi = self.above.prime_values(primes)
        return np.where(primes <= self.z, lo, hi)

    @property
    def label(self) -> str:
        return f"piecewise(z={self.z};{self.below.label};{self.above.label})"


@dataclass(frozen=True)
class ProductMF(MultFunc):
    factors: tuple[MultFunc, ...]

    @property
    def exact_int(self):  # type: ignore[override]
        return all(f.exact_int for f in self.factors)

    def prime_value(self, p: int) -> complex:
        out: complex = 1
        for f in self.factors:
            out *= f.prime_value(p)
        return out

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        if self.exact_int:
            out = np.ones(len(primes), dtype=np.int8)
            for f in self.factors:
                out = out * f.prime_values(primes)
            return out.astype(np.int8)
        out = np.ones(len(primes), dtype=np.complex128)
        for f in self.factors:
            out = out * f.prime_values(primes)
        return out

    @property
    def label(self) -> str:
        return "*".join(f.label for f in self.factors)


def legendre(q: int) -> CharacterMF:
    """The quadratic residue character mod an odd prime q."""
    sieve = get_sieve(max(q, 2))
    if q < 3 or not sieve.is_prime(q) or q % 2 == 0:
        raise DomainError(f"legendre symbol modulus must be an odd prime, got {q}")
    from .characters import character_group

    grp = character_group(q)
    half = grp.components[0].order // 2
    return CharacterMF(DirichletCharacter(q, (half,)))


def liouville() -> SignRule:
    return SignRule(AllPrimes())


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def eval_at(f: MultFunc, n: int, sieve: SieveTable) -> complex:
    """f(n) via the prime factorization of n."""
    if n < 1 or n > sieve.limit:
        raise DomainError(f"eval: n={n} outside [1, {sieve.limit}]")
    out: complex = 1
    for p, e in sieve.factor(n):
        out *= f.prime_value(p) ** e
    if isinstance(out, complex) and out.imag == 0 and float(out.real).is_integer():
        r = out.real
        if r in (-1.0, 0.0, 1.0):
            return int(r)
    return out


_RANGE_CACHE: dict[tuple, np.ndarray] = {}
_PREFIX_CACHE: dict[tuple, np.ndarray] = {}
_CACHE_LIMIT = 24


def _cache_put(cache: dict, key, arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    if len(cache) >= _CACHE_LIMIT:
        cache.pop(next(iter(cache)))
    cache[key] = arr
    return arr


def eval_range(f: MultFunc, x: int, sieve: SieveTable | None = None) -> np.ndarray:
    """Array v with v[n] = f(n) for 1 <= n <= x; v[0] = 0.

    One sieve pass: every prime power q = p^j <= x multiplies the slice
    v[q::q] by f(p), so v[n] picks up f(p) exactly v_p(n) times.  Exact int8
    output for {-1,0,1}-valued kinds, complex128 otherwise.
    """
    if x < 0:
        raise DomainError(f"eval_range: x={x} < 0")
    key = (f, x)
    if key in _RANGE_CACHE:
        return _RANGE_CACHE[key]
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    primes = sieve.primes_upto(x)
    pv = f.prime_values(primes)
    exact = f.exact_int and pv.dtype == np.int8
    vals = np.ones(x + 1, dtype=np.int8 if exact else np.complex128)
    vals[0] = 0
    for p, fp in zip(primes.tolist(), pv.tolist()):
        q = p
        while q <= x:
            vals[q::q] *= fp
            q *= p
    return _cache_put(_RANGE_CACHE, key, vals)


def prefix_sums(f: MultFunc, x: int, sieve: SieveTable | None = None) -> np.ndarray:
    """S[v] = sum of f(n) for n <= v, v = 0..x (int64 when exact)."""
    key = (f, x)
    if key in _PREFIX_CACHE:
        return _PREFIX_CACHE[key]
    vals = eval_range(f, x, sieve)
    if vals.dtype == np.int8:
        out = np.cumsum(vals, dtype=np.int64)
    else:
        out = np.cumsum(vals)
    return _cache_put(_PREFIX_CACHE, key, out)


def _fsum_complex(arr: np.ndarray) -> complex:
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real), math.fsum(arr.imag))
    return complex(math.fsum(arr), 0.0)


def mean_value(
    f: MultFunc,
    x: int,
    chi: DirichletCharacter | None = None,
    sieve: SieveTable | None = None,
) -> complex:
    """S_f(x, chi) = sum_{n <= x} f(n) conj(chi)(n); plain S_f(x) if chi is None."""
    if x <= 0:
        return 0
    vals = eval_range(f, x, sieve)
    if chi is None or chi.q == 1:
        if vals.dtype == np.int8:
            return int(np.sum(vals, dtype=np.int64))
        return _fsum_complex(vals[1:])
    n = np.arange(x + 1)
    ct = chi.values_exact()
    if ct is not None and vals.dtype == np.int8:
        return int(np.sum(vals.astype(np.int64) * ct[n % chi.q].astype(np.int64)))
    cvals = np.conj(chi.values())[n % chi.q]
    return _fsum_complex(vals * cvals)


def mu_mean(f: MultFunc, x: int, sieve: SieveTable | None = None) -> complex:
    """mu(f, x) = S_f(x) / x."""
    if x <= 0:
        raise DomainError("mu_mean needs x >= 1")
    return mean_value(f, x, None, sieve) / x


# ---------------------------------------------------------------------------
# twists and small/large splits
# ---------------------------------------------------------------------------


def twist(f: MultFunc, psi: DirichletCharacter, t: float) -> MultFunc:
    """f_*(p) = f(p) conj(psi)(p) p^{-it}; the identity twist returns f itself."""
    if psi.q == 1 and t == 0.0:
        return f
    factors: list[MultFunc] = [f]
    if psi.q > 1:
        factors.append(CharacterMF(psi.conjugate()))
    if t != 0.0:
        factors.append(ArchTwist(-t))
    return ProductMF(tuple(factors)) if len(factors) > 1 else f


@dataclass(frozen=True)
class SmallLargeSplit:
    """F_s carries f on primes <= z and psi(p) p^{it} above; F_l complements."""

    f: MultFunc
    psi: DirichletCharacter
    t: float
    z: float
    F_s: MultFunc
    F_l: MultFunc


def split_small_large(f: MultFunc, psi: DirichletCharacter, t: float, z: float) -> SmallLargeSplit:
    if z < 2:
        raise DomainError(f"split threshold z={z} must be >= 2")
    pattern: list[MultFunc] = [CharacterMF(psi)] if psi.q > 1 else []
    if t != 0.0:
        pattern.append(ArchTwist(t))
    pat: MultFunc = ProductMF(tuple(pattern)) if len(pattern) > 1 else (pattern[0] if pattern else One())
    F_s = PiecewiseZ(f, pat, z)
    F_l = PiecewiseZ(One(), twist(f, psi, t), z)
    return SmallLargeSplit(f, psi, t, z, F_s, F_l)


def structure_split(f: MultFunc, t: float, z: float) -> tuple[MultFunc, MultFunc]:
    """f^(s)(p) = f(p) p^{-it} below z and 1 above; f^(l) complements."""
    small = twist(f, DirichletCharacter(1, ()), t)
    f_s = PiecewiseZ(small, One(), z)
    f_l = PiecewiseZ(ArchTwist(t), f, z)
    return f_s, f_l


# ---------------------------------------------------------------------------
# kappa and k factors for a frame (psi mod r, t)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KappaFunction:
    """Multiplicative kappa with f(n)/n^{it} = (kappa * chi)(n).

    At p | r:  kappa(p^b) = f(p)^b p^{-ibt}.
    At p !| r: kappa(p^b) = psi(p)^b (f_j(p)^b - f_j(p)^{b-1}) with
               f_j(p) = f(p) conj(psi)(p) p^{-it}.
    """

    f: MultFunc
    psi: DirichletCharacter
    t: float

    def at_prime_power(self, p: int, b: int) -> complex:
        if b == 0:
            return 1
        fp = self.f.prime_value(p)
        if self.psi.q % p == 0:
            return (fp**b) * cmath.exp(-1j * b * self.t * math.log(p))
        psip = self.psi(p)
        fj = fp * psip.conjugate() * cmath.exp(-1j * self.t * math.log(p))
        prev = fj ** (b - 1) if b > 1 else 1
        return (psip**b) * (fj**b - prev)

    def eval(self, m: int, sieve: SieveTable) -> complex:
        out: complex = 1
        for p, b in sieve.factor(m):
            out *= self.at_prime_power(p, b)
        return out


def kappa_eval(kappa: KappaFunction, m: int, sieve: SieveTable) -> complex:
    return kappa.eval(m, sieve)


def k_factor(f_j: MultFunc, m: int, sieve: SieveTable) -> complex:
    """prod over p | m of (1 - f_j(p)/p); the argument is the twisted f_j."""
    out: complex = 1
    for p, _ in sieve.factor(m):
        out *= 1 - f_j.prime_value(p) / p
    is_c = isinstance(out, complex)
    if is_c and out.imag == 0:
        return out.real
    return out


# ---------------------------------------------------------------------------
# extremal construction: align the large primes with a target direction
# ---------------------------------------------------------------------------


def build_adaptive_extremal(
    base: MultFunc, alpha: float, x: int, sieve: SieveTable | None = None
) -> MultFunc:
    """Redefine f on primes in (x/2, x] as e(theta - p alpha), where e(theta)
    points along the sum of f(n) e(n alpha) over n <= x with no prime factor
    above x/2.  Tie-break: theta = 0 when that sum vanishes.
    """
    sieve = sieve if sieve is not None and sieve.limit >= x else get_sieve(max(x, 2))
    vals = eval_range(base, x, sieve).astype(np.complex128)
    n = np.arange(x + 1)
    smooth = sieve.lpf[: x + 1] <= x / 2
    smooth[0] = False
    s = complex(np.sum(vals[smooth] * np.exp(2j * np.pi * alpha * n[smooth])))
    theta = 0.0 if s == 0 else math.atan2(s.imag, s.real) / (2 * math.pi)
    items = []
    for p in sieve.primes_upto(x).tolist():
        if p > x / 2:
            items.append((p, cmath.exp(2j * math.pi * (theta - p * alpha))))
    return PiecewiseZ(base, PrimeTable(tuple(items)), x / 2)


@lru_cache(maxsize=None)
def principal_character() -> DirichletCharacter:
    return DirichletCharacter(1, ())
