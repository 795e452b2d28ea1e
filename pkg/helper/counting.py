import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np
from sympy import factorint, multiplicity, nextprime
from tqdm import tqdm

from helper.errors import BoundExceededError, ConsistencyError, DomainError
from helper.field_tower import split_prime_power
from helper.splitting import classify_prime

SIEVE_LIMIT = 10 ** 8
DISTINCT_LIMIT = 10 ** 7
PARTITION_LIMIT = 10 ** 4
MAX_ORDER_LIMIT = 50
CROSS_CHECK_LIMIT = 10 ** 6

# Printed values of c_m = prod_{k != m} zeta(k/m)
ABELIAN_SUM_CONSTANTS = (2.2948565916, -14.6475663016, 118.6924619727)
KRATZEL_LIMIT = math.log(5) / 4
MAX_ORDER_REMARK_CONSTANT = 2 * math.pi ** 2 / (3 * math.log(5) * math.log(2))

_partition_table = [1]


def partition_count(k):
    """P(k) by Euler's pentagonal-number recurrence"""
    if k < 0:
        raise DomainError(f"k={k} must be non-negative", k=int(k))
    if k > PARTITION_LIMIT:
        raise BoundExceededError(f"k={k} exceeds the partition bound {PARTITION_LIMIT}", k=int(k))
    table = _partition_table
    for j in range(len(table), k + 1):
        total = 0
        i = 1
        while True:
            first = i * (3 * i - 1) // 2
            if first > j:
                break
            sign = 1 if i % 2 else -1
            total += sign * table[j - first]
            second = i * (3 * i + 1) // 2
            if second <= j:
                total += sign * table[j - second]
            i += 1
        table.append(total)
    return table[k]


def partition_table(k):
    """[P(0), ..., P(k)]"""
    partition_count(k)
    return _partition_table[:k + 1]


def _factor(n, sieve=None):
    if sieve is not None and n <= sieve.x:
        return sieve.factorize(n)
    return factorint(n)


def abelian_count(n, sieve=None):
    """a(n), the number of abelian groups of order n"""
    if n < 1:
        raise DomainError(f"n={n} must be positive", n=int(n))
    return math.prod(partition_count(k) for k in _factor(int(n), sieve).values())


def semigroup_member(n, q, sieve=None):
    """True when every prime factor of n is friendly for q"""
    if n < 1:
        raise DomainError(f"n={n} must be positive", n=int(n))
    return all(classify_prime(r, q).friendly for r in _factor(int(n), sieve))


def density_delta(q):
    """Density of the primes that are not friendly for q"""
    p, t = split_prime_power(q)
    lam = int(multiplicity(2, t))
    if p == 2:
        if lam == 0:
            return Fraction(7, 24)
        if lam == 1:
            return Fraction(1, 3)
        return Fraction(1, 3 * 2 ** (lam + 1))
    return Fraction(1, 3 * 2 ** lam)


def li(x):
    """Li(x), the integral of 1/log t from 2 to x"""
    if x < 2:
        raise DomainError(f"Li(x) needs x >= 2, got {x}", x=float(x))
    if x == 2:
        return 0.0
    with mpmath.workdps(30):
        upper = mpmath.mpf(x)
        # breakpoints at powers of ten keep the quadrature accurate for large x
        points = [mpmath.mpf(2)] + [mpmath.mpf(10) ** k for k in range(1, int(math.log10(x)) + 1)
                                    if 10 ** k < x] + [upper]
        value = mpmath.quad(lambda t: 1 / mpmath.log(t), points)
    return float(value)


def cm_constants(dps=20):
    """c_m = prod over k != m of zeta(k/m), for m = 1, 2, 3"""
    values = []
    with mpmath.workdps(dps + 10):
        tolerance = mpmath.mpf(10) ** (-(dps + 5))
        for m in (1, 2, 3):
            product = mpmath.mpf(1)
            k = 1
            while True:
                if k != m:
                    term = mpmath.zeta(mpmath.mpf(k) / m)
                    product *= term
                    if k > 2 * m and abs(term - 1) < tolerance:
                        break
                k += 1
            values.append(float(product))
    return tuple(values)


def friendly_prime_mask(primes, q):
    """Vectorised classification: r is friendly iff y = q^u mod r is 1 or y^2 != 1, u the odd part of r-1"""
    p1, _ = split_prime_power(q)
    r = np.asarray(primes, dtype=np.int64)
    if r.size and int(r.max()) > 3 * 10 ** 9:
        raise BoundExceededError("primes too large for int64 modular products")
    even_part = r - 1
    u = even_part // (even_part & -even_part)
    base = q % r
    result = np.ones_like(r)
    exponent = u.copy()
    while np.any(exponent):
        odd = (exponent & 1) == 1
        result = np.where(odd, result * base % r, result)
        base = base * base % r
        exponent >>= 1
    squared = result * result % r
    return ((result == 1) | (squared != 1)) & (r != p1)


class SieveContext:
    """Prime, smallest-prime-factor and a(n) tables up to x, optionally restricted to the semigroup G_q"""

    def __init__(self, x, q=None, log_func=None):
        x = int(x)
        if x < 1:
            raise DomainError(f"x={x} must be positive", x=x)
        if x > SIEVE_LIMIT:
            raise BoundExceededError(f"x={x} exceeds the sieve bound {SIEVE_LIMIT}", x=x)
        if q is not None:
            split_prime_power(q)
        self.x = x
        self.q = q
        self.log_func = log_func

    def _log(self, message):
        if self.log_func:
            self.log_func(message)

    @cached_property
    def primes(self):
        self._log(f"Sieving primes up to {self.x}")
        is_prime = np.ones(self.x + 1, dtype=bool)
        is_prime[:2] = False
        for p in range(2, math.isqrt(self.x) + 1):
            if is_prime[p]:
                is_prime[p * p::p] = False
        return np.flatnonzero(is_prime)

    @cached_property
    def spf(self):
        """Smallest prime factor of every n <= x (0 for n < 2)"""
        self._log(f"Building smallest-prime-factor table up to {self.x}")
        spf = np.zeros(self.x + 1, dtype=np.int32)
        small = self.primes[self.primes <= math.isqrt(self.x)]
        # larger primes first so the smallest factor is written last
        for p in small[::-1]:
            spf[p * p::p] = p
        spf[self.primes] = self.primes
        return spf

    @cached_property
    def friendly(self):
        """Friendliness of each entry of self.primes"""
        if self.q is None:
            return np.ones(self.primes.size, dtype=bool)
        self._log(f"Classifying {self.primes.size} primes for q={self.q}")
        return friendly_prime_mask(self.primes, self.q)

    @cached_property
    def members(self):
        """Characteristic function of the semigroup on 0..x"""
        mask = np.ones(self.x + 1, dtype=bool)
        mask[0] = False
        if self.q is not None:
            for r in self.primes[~self.friendly]:
                mask[r::r] = False
        return mask

    @cached_property
    def abelian_values(self):
        """a(n) for 0 <= n <= x via prime-power slices"""
        self._log(f"Accumulating a(n) up to {self.x}")
        values = np.ones(self.x + 1, dtype=np.int32)
        values[0] = 0
        table = partition_table(max(2, self.x.bit_length()))
        for p in self.primes[self.primes <= math.isqrt(self.x)]:
            p = int(p)
            k, power = 2, p * p
            while power <= self.x:
                # positions divisible by p^k already carry P(k-1) for the prime p
                values[power::power] = values[power::power] * table[k] // table[k - 1]
                k += 1
                power *= p
        return values

    def factorize(self, n):
        spf = self.spf
        factors = {}
        while n > 1:
            r = int(spf[n])
            k = 0
            while n % r == 0:
                n //= r
                k += 1
            factors[r] = k
        return factors

    def hsd_partial(self, low, high):
        """Sum of a(n) over semigroup members low <= n < high"""
        values = self.abelian_values[low:high]
        return int(values[self.members[low:high]].sum(dtype=np.int64))

    def direct_hsd(self, limit=None):
        """HSD(limit) by factoring every n separately"""
        limit = self.x if limit is None else int(limit)
        spf = self.spf.tolist()
        table = partition_table(max(2, limit.bit_length()))
        verdicts = {}
        total = 0
        for n in range(1, limit + 1):
            m, value = n, 1
            while m > 1:
                r = spf[m]
                k = 0
                while m % r == 0:
                    m //= r
                    k += 1
                friendly = verdicts.get(r)
                if friendly is None:
                    friendly = verdicts[r] = self.q is None or classify_prime(r, self.q).friendly
                if not friendly:
                    value = 0
                    break
                value *= table[k]
            total += value
        return total


def _significant(value, digits):
    if value is None or isinstance(value, (str, int, Fraction)):
        return str(value) if isinstance(value, Fraction) else value
    return float(f"{value:.{digits}g}")


@dataclass
class CountingReport:
    """Exact count next to its predicted main term"""

    quantity: str
    x: int
    exact: int
    predicted: float = None
    constants: dict = field(default_factory=dict)

    @property
    def ratio(self):
        if self.predicted is None or self.predicted <= 0:
            return None
        return self.exact / self.predicted

    @property
    def residual(self):
        return None if self.predicted is None else self.exact - self.predicted

    def to_dict(self, digits=12):
        return {
            "quantity": self.quantity,
            "x": self.x,
            "exact": self.exact,
            "predicted": _significant(self.predicted, digits),
            "ratio": _significant(self.ratio, digits),
            "residual": _significant(self.residual, digits),
            "constants": {k: _significant(v, digits) for k, v in self.constants.items()},
        }

    def to_row(self, digits=12):
        constants = ";".join(f"{k}={_significant(v, digits)}" for k, v in self.constants.items())
        return {
            "x": self.x,
            "exact": self.exact,
            "predicted": _significant(self.predicted, digits),
            "ratio": _significant(self.ratio, digits),
            "constants": constants,
        }


def hsd_count(x, q, b0=None, sieve=None, chunk_count=1, cross_check_limit=CROSS_CHECK_LIMIT,
              log_func=None, show_progress=False, progress=None):
    """HSD(x) = sum of a(n) over n <= x in the semigroup generated by friendly primes

    `progress` wraps the chunk iterator (signature of tqdm); a plain tqdm bar is used when it is None.
    """
    x = int(x)
    sieve = sieve or SieveContext(x, q, log_func)
    if sieve.x < x or sieve.q != q:
        raise DomainError("sieve context does not cover the request")
    bounds = np.linspace(1, x + 1, max(1, int(chunk_count)) + 1).astype(np.int64)
    ranges = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    total = 0
    if progress is None:
        bar = tqdm(ranges, total=len(ranges), desc=f"HSD q={q}", disable=not show_progress)
    else:
        bar = progress(ranges, total=len(ranges), desc=f"HSD q={q}")
    for low, high in bar:
        total += sieve.hsd_partial(low, high)

    if x <= cross_check_limit:
        if log_func:
            log_func(f"Cross-checking HSD({x}) by direct factorisation")
        direct = sieve.direct_hsd(x)
        if direct != total:
            raise ConsistencyError(f"sieve gives HSD({x}) = {total}, direct method gives {direct}")

    delta = density_delta(q)
    constants = {"delta": delta, "tau": float(1 - delta)}
    predicted = None
    if b0 is not None and x > 1:
        constants["b0"] = float(b0)
        predicted = float(b0) * x / math.log(x) ** float(delta)
    return CountingReport("hsd", x, total, predicted, constants)


def pq_count(x, q, sieve=None, log_func=None):
    """Number of friendly primes up to x against (1 - delta(q)) Li(x)"""
    x = int(x)
    sieve = sieve or SieveContext(x, q, log_func)
    within = sieve.primes <= x
    exact = int(sieve.friendly[within].sum())
    delta = density_delta(q)
    predicted = float(1 - delta) * li(x) if x >= 2 else None
    return CountingReport("pq", x, exact, predicted, {"delta": delta, "tau": float(1 - delta)})


def abelian_sum(x, sieve=None, log_func=None):
    """Sum of a(n) for n <= x against c1 x + c2 x^(1/2) + c3 x^(1/3)"""
    x = int(x)
    sieve = sieve or SieveContext(x, None, log_func)
    exact = int(sieve.abelian_values[1:x + 1].sum(dtype=np.int64))
    c1, c2, c3 = ABELIAN_SUM_CONSTANTS
    predicted = c1 * x + c2 * math.sqrt(x) + c3 * x ** (1 / 3)
    return CountingReport("asum", x, exact, predicted, {"c1": c1, "c2": c2, "c3": c3})


def distinct_value_bound(x, slack=1.0):
    """exp(slack * 2 pi sqrt(log x / (3 log log x)))"""
    if x < 3:
        return None
    return math.exp(slack * 2 * math.pi * math.sqrt(math.log(x) / (3 * math.log(math.log(x)))))


def canonical_form_values(x, primes):
    """(n, a(n)) for n <= x of the form p1^e1 p2^e2 ... with e1 >= e2 >= ... >= 1 over `primes`"""
    primes = [int(p) for p in primes]
    table = partition_table(max(2, int(x).bit_length()))
    found = [(1, 1)]

    def extend(position, n, cap, value):
        if position >= len(primes):
            return
        p = primes[position]
        current = n
        for e in range(1, cap + 1):
            current *= p
            if current > x:
                break
            found.append((current, value * table[e]))
            extend(position + 1, current, e, value * table[e])

    extend(0, 1, max(1, int(x).bit_length()), 1)
    return sorted(found)


def distinct_values(x, q=None, slack=1.0, sieve=None, log_func=None):
    """Number of distinct values of a(n) over n <= x in the semigroup (all n when q is None)"""
    x = int(x)
    if x > DISTINCT_LIMIT:
        raise BoundExceededError(f"x={x} exceeds the distinct-values bound {DISTINCT_LIMIT}", x=x)
    sieve = sieve or SieveContext(x, q, log_func)
    values = sieve.abelian_values[1:x + 1][sieve.members[1:x + 1]]
    exact = int(np.unique(values).size)

    generators = sieve.primes[sieve.friendly][:64]
    forms = canonical_form_values(x, generators)
    constants = {"slack": float(slack), "canonical_forms": len(forms),
                 "canonical_distinct": len({value for _, value in forms})}
    if q is not None:
        constants["delta"] = density_delta(q)
    return CountingReport("distinct", x, exact, distinct_value_bound(x, slack), constants)


@dataclass
class MaxOrderRow:
    r: int
    largest_prime: int
    a: int
    A: int
    primes_up_to_A: int
    log_a: float
    log_n: float
    kratzel_ratio: float

    def to_dict(self, digits=12):
        return {
            "r": self.r,
            "largest_prime": self.largest_prime,
            "a": self.a,
            "A": self.A,
            "P(A)": self.primes_up_to_A,
            "log_a": _significant(self.log_a, digits),
            "log_n": _significant(self.log_n, digits),
            "kratzel_ratio": _significant(self.kratzel_ratio, digits),
        }


@dataclass
class MaxOrderReport:
    """The family n_r = prod of the first r generating primes to the fourth power"""

    q: int
    rows: list
    limit: float = KRATZEL_LIMIT
    remark_constant: float = MAX_ORDER_REMARK_CONSTANT

    def to_dict(self, digits=12):
        return {
            "q": self.q,
            "limit": _significant(self.limit, digits),
            "remark_constant": _significant(self.remark_constant, digits),
            "rows": [row.to_dict(digits) for row in self.rows],
        }


def generating_primes(count, q=None):
    """The first `count` primes of P_q (all primes when q is None)"""
    chosen = []
    candidate = 1
    while len(chosen) < count:
        candidate = nextprime(candidate)
        if q is None or classify_prime(candidate, q).friendly:
            chosen.append(int(candidate))
    return chosen


def max_order_suite(r, q=None, log_func=None):
    """a(n_r) = 5^P(A(n_r)) exactly, and the Kratzel ratio, for n_r = prod p_i^4"""
    if r < 1:
        raise DomainError(f"r={r} must be positive", r=int(r))
    if r > MAX_ORDER_LIMIT:
        raise BoundExceededError(f"r={r} exceeds the exact-arithmetic bound {MAX_ORDER_LIMIT}", r=int(r))
    chosen = generating_primes(r, q)
    if log_func:
        log_func(f"Generating primes: {', '.join(str(p) for p in chosen[:8])}{' ...' if r > 8 else ''}")

    rows = []
    for size in range(1, r + 1):
        n = math.prod(p ** 4 for p in chosen[:size])
        a = abelian_count(n)
        # smallest A with prod_{p in P, p <= A} p >= n^(1/4), compared exactly in integers
        product, count, A = 1, 0, None
        for p in chosen:
            product *= p
            count += 1
            if product ** 4 >= n:
                A = p
                break
        if a != 5 ** count:
            raise ConsistencyError(f"a(n_{size}) = {a} differs from 5^{count}")
        log_n = 4 * sum(math.log(p) for p in chosen[:size])
        log_a = count * math.log(5)
        rows.append(MaxOrderRow(size, chosen[size - 1], a, A, count, log_a, log_n,
                                log_a * math.log(log_n) / log_n))
    return MaxOrderReport(q, rows)


@dataclass
class FitReport:
    """Empirical b0 = HSD(x) log^delta(x) / x at several scales"""

    q: int
    delta: Fraction
    samples: list

    @property
    def estimates(self):
        return [sample["b0"] for sample in self.samples]

    @property
    def spread(self):
        values = self.estimates
        return (max(values) - min(values)) / (sum(values) / len(values))

    def to_dict(self, digits=12):
        return {
            "q": self.q,
            "delta": str(self.delta),
            "samples": [{k: _significant(v, digits) for k, v in s.items()} for s in self.samples],
            "spread": _significant(self.spread, digits),
        }


def hsd_fit(xs, q, log_func=None, sieve=None):
    """Estimate b0 at each sample point from one sieve up to max(xs)"""
    xs = sorted({int(x) for x in xs})
    if len(xs) < 3:
        raise DomainError("hsd_fit needs at least three distinct sample points", samples=len(xs))
    if xs[0] < 2:
        raise DomainError("sample points must be at least 2")
    if xs[-1] > SIEVE_LIMIT:
        raise BoundExceededError(f"x={xs[-1]} exceeds the sieve bound {SIEVE_LIMIT}", x=xs[-1])
    sieve = sieve or SieveContext(xs[-1], q, log_func)
    running = np.cumsum(np.where(sieve.members, sieve.abelian_values, 0), dtype=np.int64)
    delta = density_delta(q)
    samples = []
    for x in xs:
        total = int(running[x])
        samples.append({"x": x, "hsd": total, "b0": total * math.log(x) ** float(delta) / x})
    return FitReport(int(q), delta, samples)


def multiplicative_bound_check(x, q=None, sieve=None):
    """f(p^r) = a(p^r) chi(p^r) <= 5^(r/4) for all prime powers p^r <= x; returns (ok, failures)"""
    sieve = sieve or SieveContext(x, q)
    failures = []
    for p, friendly in zip(sieve.primes.tolist(), sieve.friendly.tolist()):
        r, power = 1, p
        while power <= x:
            f = partition_count(r) if friendly else 0
            if f ** 4 > 5 ** r:
                failures.append((p, r))
            r += 1
            power *= p
    return not failures, failures
