import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pretsums.characters import DirichletCharacter, enumerate_characters
from pretsums.errors import DomainError
from pretsums.multfunc import (
    ArchTwist,
    Indicator,
    KappaFunction,
    One,
    PrimeTable,
    RandomSign,
    ResidueRule,
    SignRule,
    ThresholdRule,
    build_adaptive_extremal,
    eval_at,
    eval_range,
    k_factor,
    legendre,
    liouville,
    mean_value,
    split_small_large,
    structure_split,
    twist,
)
from pretsums.sieve import divisors


def test_eval_basic(sieve):
    assert eval_at(liouville(), 12, sieve) == -1
    assert eval_at(One(), 97, sieve) == 1
    v = eval_at(ArchTwist(1.0), 8, sieve)
    assert abs(v - cmath.exp(1j * math.log(8))) < 1e-12
    assert abs(abs(v) - 1.0) < 1e-12


def test_eval_domain_errors(sieve_small):
    with pytest.raises(DomainError):
        eval_at(One(), 0, sieve_small)
    with pytest.raises(DomainError):
        eval_at(One(), sieve_small.limit + 1, sieve_small)


def test_eval_range_examples(sieve):
    assert list(eval_range(One(), 5, sieve)[1:]) == [1, 1, 1, 1, 1]
    r = eval_range(legendre(3), 4, sieve)
    assert r.dtype == np.int8
    assert list(r[1:]) == [1, -1, 0, 1]
    assert list(eval_range(One(), 1, sieve)[1:]) == [1]
    assert len(eval_range(One(), 0, sieve)) == 1  # no valid indices


def test_eval_range_matches_pointwise(sieve):
    for f in (legendre(7), RandomSign(3), ArchTwist(0.7), Indicator(ResidueRule(4, (1,)))):
        r = eval_range(f, 300, sieve)
        for n in (1, 2, 17, 90, 128, 300):
            assert abs(complex(r[n]) - complex(eval_at(f, n, sieve))) < 1e-12


@given(
    m=st.integers(min_value=2, max_value=500),
    n=st.integers(min_value=2, max_value=500),
    seed=st.integers(min_value=0, max_value=5),
)
def test_multiplicativity_fuzz(m, n, seed):
    if math.gcd(m, n) != 1:
        return
    from pretsums.sieve import get_sieve

    s = get_sieve(10**6)
    f = RandomSign(seed)
    vals = eval_range(f, 250000, s)
    assert vals[m * n] == vals[m] * vals[n]
    g = ArchTwist(1.3)
    gv = eval_range(g, 250000, s)
    assert abs(gv[m * n] - gv[m] * gv[n]) < 1e-12


def test_unit_disc_bound(sieve):
    for f in (RandomSign(9), ArchTwist(2.0), legendre(11)):
        vals = eval_range(f, 5000, sieve)
        assert float(np.max(np.abs(vals.astype(np.complex128)))) <= 1 + 1e-12


def test_twist_identity_and_cancellation(sieve):
    f = liouville()
    assert twist(f, DirichletCharacter(1, ()), 0.0) is f
    # f = chi: twisting by chi gives |chi|^2 with values in {0, 1}
    chi5 = legendre(5).chi
    tw = twist(legendre(5), chi5, 0.0)
    vals = eval_range(tw, 100, sieve)
    assert set(np.round(np.asarray(vals, dtype=np.complex128).real).astype(int).tolist()) <= {0, 1}
    # f(p) = psi(p) p^{it} exactly: the twist is 1 away from the conductor
    t = 0.4
    items = tuple(
        (int(p), complex(chi5(int(p)) * cmath.exp(1j * t * math.log(int(p)))))
        for p in sieve.primes_upto(100).tolist()
    )
    g = PrimeTable(items)
    tg = twist(g, chi5, t)
    for p in (2, 3, 7, 11, 13):
        assert abs(tg.prime_value(p) - 1) < 1e-12


def test_split_small_large(sieve):
    chi5 = legendre(5).chi
    sp = split_small_large(liouville(), chi5, 0.3, 10.0)
    a = eval_range(sp.F_s, 3000, sieve)
    b = eval_range(sp.F_l, 3000, sieve)
    c = eval_range(liouville(), 3000, sieve)
    assert float(np.max(np.abs(a * b - c))) < 1e-12
    # F_l is 1 below z on primes
    for p in (2, 3, 5, 7):
        assert sp.F_l.prime_value(p) == 1
    # sign function split: F_s keeps f below z, switches to psi p^{it} above
    sp2 = split_small_large(liouville(), chi5, 0.0, 10.0)
    for p in (2, 3, 5, 7):
        assert sp2.F_s.prime_value(p) == -1
    assert abs(sp2.F_s.prime_value(11) - chi5(11)) < 1e-12
    with pytest.raises(DomainError):
        split_small_large(One(), chi5, 0.0, 1.0)


def test_structure_split(sieve):
    f = liouville()
    fs, fl = structure_split(f, 0.5, 7.0)
    a = eval_range(fs, 2000, sieve)
    b = eval_range(fl, 2000, sieve)
    assert float(np.max(np.abs(a * b - eval_range(f, 2000, sieve)))) < 1e-12
    # t = 0 degenerates to a plain cut at z
    fs0, _ = structure_split(f, 0.0, 7.0)
    assert fs0.prime_value(5) == -1 and fs0.prime_value(11) == 1
    # f(p) = p^{it} for all p makes f^(s) trivial
    g = ArchTwist(0.8)
    gs, _ = structure_split(g, 0.8, 7.0)
    for p in (2, 3, 5):
        assert abs(gs.prime_value(p) - 1) < 1e-12
    # spot value: f^(s)(3) = f(3) 3^{-it}
    leg7 = legendre(7)
    fs7, _ = structure_split(leg7, 0.5, 5.0)
    assert abs(fs7.prime_value(3) - leg7.prime_value(3) * cmath.exp(-0.5j * math.log(3))) < 1e-14


@pytest.mark.parametrize(
    "f,psi_q,t",
    [
        ("lam", 5, 0.3),
        ("leg7", 5, 0.0),
        ("one", 1, 0.0),
        ("rand", 8, 1.2),
    ],
)
def test_kappa_convolution_identity(sieve, f, psi_q, t):
    """f(n)/n^{it} = sum_{de=n} kappa(d) chi(e) for n <= 1000, at 1e-9."""
    funcs = {"lam": liouville(), "leg7": legendre(7), "one": One(), "rand": RandomSign(3)}
    fn = funcs[f]
    if psi_q == 1:
        psi = DirichletCharacter(1, ())
    elif psi_q == 5:
        psi = legendre(5).chi
    else:
        psi = [c.primitive()[0] for c in enumerate_characters(8) if not c.is_principal][0]
    kap = KappaFunction(fn, psi, t)
    fv = eval_range(fn, 1000, sieve).astype(np.complex128)
    worst = 0.0
    for n in range(1, 1001):
        tot = 0
        for d in divisors(n, sieve):
            tot += kap.eval(d, sieve) * psi(n // d)
        lhs = fv[n] * cmath.exp(-1j * t * math.log(n)) if t else fv[n]
        worst = max(worst, abs(tot - lhs))
    assert worst < 1e-9


def test_kappa_examples(sieve):
    kap = KappaFunction(One(), DirichletCharacter(1, ()), 0.0)
    assert kap.eval(1, sieve) == 1
    # f = 1, psi principal: kappa(p) = f(p) - 1 = 0, so kappa(m) = 0 for m > 1
    for m in (2, 3, 4, 6, 100):
        assert abs(kap.eval(m, sieve)) < 1e-15
    # f(p) = psi(p) p^{it}: kappa vanishes off the conductor
    chi5 = legendre(5).chi
    items = tuple((int(p), complex(chi5(int(p)))) for p in sieve.primes_upto(50).tolist())
    kap2 = KappaFunction(PrimeTable(items), chi5, 0.0)
    for p in (2, 3, 7, 11):
        assert abs(kap2.at_prime_power(p, 1)) < 1e-12
        assert abs(kap2.at_prime_power(p, 2)) < 1e-12


def test_k_factor(sieve):
    assert k_factor(One(), 1, sieve) == 1
    assert abs(k_factor(One(), 6, sieve) - (1 - 1 / 2) * (1 - 1 / 3)) < 1e-15
    f2 = PrimeTable(((2, -1),))
    assert abs(k_factor(f2, 4, sieve) - 1.5) < 1e-15
    # k and kappa agree with direct products over p | m
    f = RandomSign(5)
    for m in (2, 12, 360, 9973, 10000):
        direct = 1.0
        for p, _ in sieve.factor(m):
            direct *= 1 - f.prime_value(p) / p
        assert abs(k_factor(f, m, sieve) - direct) < 1e-12


def test_mean_value(sieve):
    assert mean_value(One(), 100, None, sieve) == 100
    assert mean_value(One(), 0, None, sieve) == 0
    chi3 = [c for c in enumerate_characters(3) if not c.is_principal][0]
    assert abs(mean_value(One(), 300, chi3, sieve)) < 1e-12
    # brute-force oracle
    leg5 = legendre(5)
    direct = sum(eval_at(leg5, n, sieve) for n in range(1, 10**4 + 1))
    assert mean_value(leg5, 10**4, None, sieve) == direct


def test_prime_table_rules():
    f = PrimeTable(((2, -1), (3, 0.5 + 0.1j)))
    assert f.prime_value(2) == -1 and f.prime_value(5) == 1
    with pytest.raises(DomainError):
        PrimeTable(((2, 3.0),))
    rule = ThresholdRule("gt", 10.0)
    g = SignRule(rule)
    assert g.prime_value(11) == -1 and g.prime_value(7) == 1


def test_random_sign_stable_across_ranges(sieve):
    f = RandomSign(77)
    small = eval_range(f, 1000, sieve)
    big = eval_range(f, 50000, sieve)
    assert np.array_equal(small, big[:1001])


def test_adaptive_extremal_builder(sieve):
    """The aligned-phase construction drives R_f to the x/log x scale."""
    x = 10**4
    alpha = 2**0.5 - 1
    f = build_adaptive_extremal(One(), alpha, x, sieve)
    vals = eval_range(f, x, sieve).astype(np.complex128)
    n = np.arange(x + 1)
    R = np.sum(vals * np.exp(2j * np.pi * alpha * n))
    assert abs(R) > 0.3 * x / math.log(x)
    assert float(np.max(np.abs(vals))) <= 1 + 1e-9
