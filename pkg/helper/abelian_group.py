import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import factorint
from sympy.utilities.iterables import partitions

from helper.errors import DomainError

GROUP_SPEC_PATTERN = re.compile(r"^\s*\d+(\s*[xX*]\s*\d+)*\s*$")


def _invariant_factors(prime_exponents):
    """Combine per-prime exponent lists into the divisibility chain m_1 | m_2 | ..."""
    length = max((len(exps) for exps in prime_exponents.values()), default=0)
    factors = [1] * length
    for p, exps in prime_exponents.items():
        for position, e in enumerate(sorted(exps, reverse=True)):
            factors[length - 1 - position] *= p ** e
    return tuple(factors)


@dataclass(frozen=True)
class GroupShape:
    """Finite abelian group Z_{m_1} x ... x Z_{m_s} in invariant-factor form"""

    factors: tuple = ()

    def __post_init__(self):
        factors = tuple(int(f) for f in self.factors)
        for f in factors:
            if f < 2:
                raise DomainError(f"invariant factor {f} must be at least 2", factors=list(factors))
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise DomainError(f"factors {list(factors)} do not form a divisibility chain",
                                  factors=list(factors))
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_factors(cls, cyclic_orders):
        """Canonical shape of a direct product of cyclic groups given in any order"""
        prime_exponents = {}
        for order in cyclic_orders:
            order = int(order)
            if order < 1:
                raise DomainError(f"cyclic order {order} must be positive")
            for p, e in factorint(order).items():
                prime_exponents.setdefault(p, []).append(e)
        return cls(_invariant_factors(prime_exponents))

    @property
    def order(self):
        return math.prod(self.factors)

    @property
    def exponent(self):
        return self.factors[-1] if self.factors else 1

    @property
    def rank(self):
        return len(self.factors)

    @property
    def label(self):
        """CLI spelling, e.g. "3x9"; the trivial group is "1" """
        return "x".join(str(f) for f in self.factors) or "1"

    @cached_property
    def elements(self):
        """All elements in lexicographic order"""
        return list(itertools.product(*(range(f) for f in self.factors)))

    @cached_property
    def element_array(self):
        return np.array(self.elements, dtype=np.int64).reshape(self.order, self.rank)

    @cached_property
    def _strides(self):
        strides = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * self.factors[i + 1]
        return strides

    def index(self, x):
        """Position of x in the lexicographic element order"""
        return int(sum(int(xi) * int(si) for xi, si in zip(x, self._strides)))

    def index_array(self, rows):
        """Vectorised index for an (N, rank) array of residues"""
        return np.asarray(rows, dtype=np.int64) @ self._strides

    def multiplier_index(self, s):
        """Permutation i -> index(s * elements[i])"""
        moduli = np.array(self.factors, dtype=np.int64)
        return self.index_array((int(s) * self.element_array) % moduli)

    def sum_index(self):
        """Table T[i, j] = index(elements[i] + elements[j])"""
        moduli = np.array(self.factors, dtype=np.int64)
        sums = (self.element_array[:, None, :] + self.element_array[None, :, :]) % moduli
        return self.index_array(sums.reshape(self.order * self.order, self.rank)).reshape(self.order, self.order)

    def difference_index(self):
        """Table T[i, j] = index(elements[i] - elements[j])"""
        moduli = np.array(self.factors, dtype=np.int64)
        diffs = (self.element_array[:, None, :] - self.element_array[None, :, :]) % moduli
        return self.index_array(diffs.reshape(self.order * self.order, self.rank)).reshape(self.order, self.order)

    def zero(self):
        return tuple(0 for _ in self.factors)


def format_element(x):
    return "(" + ",".join(str(v) for v in x) + ")"


def parse_group(spec):
    """Parse "3x9" style group specs into a canonical GroupShape"""
    text = str(spec)
    if not GROUP_SPEC_PATTERN.match(text):
        raise DomainError(f"malformed group spec '{spec}'", group=text)
    orders = [int(part) for part in re.split(r"[xX*]", text)]
    if any(order < 1 for order in orders):
        raise DomainError(f"malformed group spec '{spec}'", group=text)
    return GroupShape.from_factors(orders)


def enumerate_groups(n):
    """All abelian groups of order n up to isomorphism, fewest factors first"""
    if n < 1:
        raise DomainError(f"group order n={n} must be positive", n=int(n))
    per_prime = []
    for p, k in sorted(factorint(int(n)).items()):
        options = []
        for part in partitions(k):
            exponents = [size for size, count in part.items() for _ in range(count)]
            options.append((p, exponents))
        per_prime.append(options)

    shapes = {_invariant_factors(dict(choice)) for choice in itertools.product(*per_prime)}
    return [GroupShape(f) for f in sorted(shapes, key=lambda f: (len(f), f))]


def tau_apply(s, x, G):
    """Multiplication endomorphism x -> s*x"""
    return tuple((int(s) * int(xi)) % mi for xi, mi in zip(x, G.factors))


@dataclass(frozen=True)
class OrbitPartition:
    """Orbits of <tau_s> on G, ordered by their smallest element"""

    shape: GroupShape
    multiplier: int
    orbits: tuple
    orbit_index: tuple

    def orbit_of(self, x):
        return self.orbit_index[self.shape.index(x)]

    def union(self, orbit_ids):
        return frozenset(x for i in orbit_ids for x in self.orbits[i])

    def ids_of(self, elements):
        return frozenset(self.orbit_of(x) for x in elements)

    def is_union(self, elements):
        """True when the set is a union of whole orbits"""
        elements = frozenset(elements)
        return all(set(self.orbits[i]) <= elements for i in self.ids_of(elements))

    def representatives(self):
        return [orbit[0] for orbit in self.orbits]

    def __len__(self):
        return len(self.orbits)


def orbit_partition(G, s):
    """Partition G into orbits of multiplication by the unit s"""
    if math.gcd(int(s), G.exponent) != 1:
        raise DomainError(f"s={s} is not a unit modulo the exponent {G.exponent}",
                          s=int(s), group=G.label)
    image = G.multiplier_index(s)
    orbit_index = [-1] * G.order
    orbits = []
    # Lexicographic traversal makes each orbit's first element its representative
    for start in range(G.order):
        if orbit_index[start] >= 0:
            continue
        members = []
        current = start
        while orbit_index[current] < 0:
            orbit_index[current] = len(orbits)
            members.append(current)
            current = int(image[current])
        orbits.append(tuple(G.elements[i] for i in sorted(members)))
    return OrbitPartition(G, int(s), tuple(orbits), tuple(orbit_index))
