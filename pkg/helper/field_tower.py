import math
from functools import lru_cache

import galois
import numpy as np
from sympy import factorint, multiplicity, n_order, primefactors

from helper.errors import BoundExceededError, ConsistencyError, DomainError

FIELD_GUARD = 2 ** 24
SCAN_CHUNK = 1 << 14


def split_prime_power(q):
    """Return (p, t) with q = p**t"""
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or q < 2:
        raise DomainError(f"q={q} is not a prime power", q=str(q))
    factors = factorint(int(q))
    if len(factors) != 1:
        raise DomainError(f"q={q} is not a prime power", q=int(q))
    (p, t), = factors.items()
    return int(p), int(t)


def smallest_irreducible(p, degree):
    """Lexicographically smallest monic irreducible polynomial of the given degree over GF(p)"""
    poly = galois.irreducible_poly(p, degree, method="min")
    if not poly.is_irreducible():
        raise ConsistencyError(f"modulus {poly} failed the irreducibility test")
    return poly


def field_ints(array):
    """Integer encodings of a field array as a plain int64 ndarray"""
    return np.asarray(array.view(np.ndarray), dtype=np.int64)


class FieldTower:
    """The chain F_p < F_q < F = F_{q^2} < K, with K the smallest extension holding the m-th roots of unity"""

    def __init__(self, q, m, field_guard=FIELD_GUARD):
        self.p, self.t = split_prime_power(q)
        self.q = int(q)
        if m < 1:
            raise DomainError(f"group exponent m={m} must be positive", m=int(m))
        if math.gcd(m, self.q) != 1:
            raise DomainError(f"gcd(m={m}, q={q}) != 1", m=int(m), q=self.q)
        self.m = int(m)
        self.lam = int(multiplicity(2, self.t))
        self.s = 1 if self.m == 1 else int(n_order(self.q * self.q % self.m, self.m))

        degree_f = 2 * self.t
        degree_k = degree_f * self.s
        if self.p ** degree_k > field_guard:
            raise BoundExceededError(
                f"extension field of order {self.p}^{degree_k} exceeds the guard {field_guard}",
                order=f"{self.p}^{degree_k}")

        self.prime_field = galois.GF(self.p)
        self.F = galois.GF(self.p ** degree_f, irreducible_poly=smallest_irreducible(self.p, degree_f))
        if self.s == 1:
            # x itself is the smallest root of the modulus in its own field
            self.K = self.F
            self.beta = self.F(self.p)
        else:
            self.K = galois.GF(self.p ** degree_k, irreducible_poly=smallest_irreducible(self.p, degree_k))
            self.beta = self._smallest_root(self.F.irreducible_poly)

        self._embed_table = self._build_embed_table()
        self._image_order = np.argsort(self._embed_table)
        self._image_sorted = self._embed_table[self._image_order]
        self._basis_inverse = self._build_basis_inverse()
        self._zeta = None
        self._validate_embedding()

    def __repr__(self):
        return f"FieldTower(q={self.q}, m={self.m}, F=GF({self.F.order}), K=GF({self.K.order}))"

    @property
    def degree(self):
        """Degree of F over the prime field"""
        return 2 * self.t

    def _smallest_root(self, poly):
        lifted = galois.Poly([int(c) for c in poly.coeffs], field=self.K)
        roots = lifted.roots()
        if roots.size == 0:
            raise ConsistencyError(f"modulus {poly} has no root in GF({self.K.order})")
        return self.K(min(int(r) for r in roots))

    def _build_embed_table(self):
        if self.K is self.F:
            return np.arange(self.F.order, dtype=np.int64)
        digits = field_ints(self.F.elements.vector())
        # vector() lists coefficients from the highest power down
        powers = self.K([int(self.beta ** i) for i in reversed(range(self.degree))])
        return field_ints(self.K(digits) @ powers)

    def _build_basis_inverse(self):
        # Rows are beta^i * x^j, the prime-field basis of K coming from the power basis of K over F
        alpha = self.K(self.p)
        basis = [int((alpha ** j) * (self.beta ** i)) for j in range(self.s) for i in range(self.degree)]
        rows = field_ints(self.K(basis).vector())[:, ::-1]
        return np.linalg.inv(self.prime_field(np.ascontiguousarray(rows)))

    def _validate_embedding(self):
        if int(self._embed_table[1]) != 1:
            raise ConsistencyError("embedding does not map 1 to 1")
        modulus = galois.Poly([int(c) for c in self.F.irreducible_poly.coeffs], field=self.K)
        if modulus(self.beta) != 0:
            raise ConsistencyError("embedding root does not satisfy the modulus of F")

    def embed(self, a):
        """Map elements of F into K"""
        if not isinstance(a, self.F):
            a = self.F(a)
        return self.K(self._embed_table[field_ints(a)])

    def restrict(self, k):
        """Inverse of embed on its image"""
        if not isinstance(k, self.K):
            k = self.K(k)
        if self.K is self.F:
            return k
        values = field_ints(k)
        position = np.clip(np.searchsorted(self._image_sorted, values), 0, self._image_sorted.size - 1)
        if not np.all(self._image_sorted[position] == values):
            raise DomainError("element does not lie in the subfield F")
        return self.F(self._image_order[position])

    def in_subfield(self, k):
        """Elementwise test a^(q^2) = a"""
        if not isinstance(k, self.K):
            k = self.K(k)
        return np.asarray(k ** (self.q * self.q) == k)

    def decompose(self, k):
        """Coordinates of K elements over the power basis of K/F, shape (..., s)"""
        if not isinstance(k, self.K):
            k = self.K(k)
        if self.K is self.F:
            return k[..., np.newaxis]
        flat = k.reshape(-1)
        digits = field_ints(flat.vector())[:, ::-1]
        coords = field_ints(self.prime_field(np.ascontiguousarray(digits)) @ self._basis_inverse)
        coords = coords.reshape(flat.size, self.s, self.degree)[..., ::-1]
        values = self.F.Vector(self.prime_field(np.ascontiguousarray(coords)))
        return values.reshape(k.shape + (self.s,))

    def inverse_of_n(self, n):
        """The element 1/n of the prime field, placed in F"""
        residue = int(n) % self.p
        if residue == 0:
            raise DomainError(f"n={n} is not invertible modulo p={self.p}", n=int(n), p=self.p)
        return self.F(pow(residue, -1, self.p))


@lru_cache(maxsize=None)
def build_tower(q, m, field_guard=FIELD_GUARD):
    """Build (and cache) the field tower for prime power q and exponent m"""
    return FieldTower(q, m, field_guard=field_guard)


def hermitian_conjugate(a, tower):
    """Hermitian conjugation a -> a^q on F"""
    if isinstance(a, tower.K) and tower.K is not tower.F:
        a = tower.restrict(a)
    elif not isinstance(a, tower.F):
        a = tower.F(a)
    return a ** tower.q


def primitive_mth_root(tower):
    """Smallest-encoding element of K of multiplicative order exactly m"""
    if tower._zeta is not None:
        return tower._zeta
    K, m = tower.K, tower.m
    if m == 1:
        tower._zeta = K(1)
        return tower._zeta

    prime_divisors = primefactors(m)
    for low in range(1, K.order, SCAN_CHUNK):
        candidates = K(np.arange(low, min(low + SCAN_CHUNK, K.order)))
        hits = np.asarray(candidates ** m == 1)
        for r in prime_divisors:
            hits &= np.asarray(candidates ** (m // r) != 1)
        found = np.flatnonzero(hits)
        if found.size:
            tower._zeta = candidates[found[0]]
            return tower._zeta
    raise ConsistencyError(f"no element of order {m} in GF({K.order})")


def gamma_solutions(n, tower):
    """All gamma in F with 1/n + gamma^(q+1) = 0, ascending by encoding"""
    if n % 2 == 0:
        raise DomainError(f"n={n} must be odd for the extension", n=int(n))
    target = -tower.inverse_of_n(n)
    elements = tower.F.elements
    return elements[np.flatnonzero(np.asarray(elements ** (tower.q + 1) == target))]


def solve_gamma(n, tower):
    """Canonical (smallest-encoding) solution of 1/n + gamma^(q+1) = 0"""
    solutions = gamma_solutions(n, tower)
    if solutions.size == 0:
        raise ConsistencyError(f"norm equation has no solution for n={n} in GF({tower.F.order})")
    gamma = solutions[0]
    if tower.inverse_of_n(n) + gamma ** (tower.q + 1) != 0:
        raise ConsistencyError("gamma failed re-substitution")
    return gamma
