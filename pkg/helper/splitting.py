import math
from dataclasses import dataclass, field
from functools import lru_cache

from sympy import factorint, isprime, n_order

from helper.abelian_group import GroupShape, format_element, orbit_partition, tau_apply
from helper.errors import ConsistencyError, DomainError
from helper.field_tower import split_prime_power

FRIENDLY = "friendly"
OBSTRUCTED = "obstructed"
CHARACTERISTIC = "characteristic"


@dataclass(frozen=True)
class PrimeClassification:
    """Behaviour of a prime r under multiplication by q"""

    r: int
    q: int
    order: int = None
    verdict: str = CHARACTERISTIC

    @property
    def order_mod4(self):
        return None if self.order is None else self.order % 4

    @property
    def friendly(self):
        return self.verdict == FRIENDLY

    def to_dict(self):
        return {"r": self.r, "ord": self.order, "verdict": self.verdict}


@lru_cache(maxsize=65536)
def classify_prime(r, q):
    """Classify r as friendly, obstructed, or the characteristic of F_q"""
    if not isprime(r):
        raise DomainError(f"r={r} is not prime", r=int(r))
    p, _ = split_prime_power(q)
    if r == p:
        return PrimeClassification(int(r), int(q))

    order = int(n_order(q % r, r))
    by_order = order % 4 != 2
    # second criterion: ord odd, or ord_r(q^2) even
    by_square = order % 2 == 1 or int(n_order(q * q % r, r)) % 2 == 0
    if by_order != by_square:
        raise ConsistencyError(f"classification criteria disagree for r={r}, q={q}")
    return PrimeClassification(int(r), int(q), order, FRIENDLY if by_order else OBSTRUCTED)


@dataclass(frozen=True)
class ExistenceReport:
    """Whether groups of order n carry an ideal code with a Hermitian self-dual extension"""

    n: int
    q: int
    exists: bool
    primes: tuple
    reason: str = None

    def to_dict(self):
        payload = {"exists": self.exists, "primes": [c.to_dict() for c in self.primes]}
        if self.reason:
            payload["reason"] = self.reason
        return payload


def exists_hsd(n, q):
    """Existence of a Hermitian self-dual extended group code for groups of order n"""
    split_prime_power(q)
    if n < 1:
        raise DomainError(f"n={n} must be positive", n=int(n))
    if math.gcd(n, q) != 1:
        raise DomainError(f"gcd(n={n}, q={q}) != 1", n=int(n), q=int(q))
    primes = tuple(classify_prime(r, q) for r in sorted(factorint(n)))
    reason = None
    exists = all(c.friendly for c in primes)
    if n % 2 == 0:
        exists = False
        reason = "the extension is only defined for odd n"
    elif not exists:
        bad = [c.r for c in primes if not c.friendly]
        reason = f"obstructed primes: {', '.join(str(r) for r in bad)}"
    return ExistenceReport(int(n), int(q), exists, primes, reason)


@dataclass(frozen=True)
class Obstruction:
    """A nonzero orbit fixed by tau_{-q}: no splitting over {0} exists"""

    shape: GroupShape
    q: int
    orbit: tuple

    @property
    def element_order(self):
        x = self.orbit[0]
        return math.lcm(*(m // math.gcd(m, xi) for xi, m in zip(x, self.shape.factors)))

    def to_dict(self):
        report = exists_hsd(self.element_order, self.q)
        return {
            "group": self.shape.label,
            "q": self.q,
            "fixed_orbit": [element_to_json(x) for x in self.orbit],
            "primes": [c.to_dict() for c in report.primes if not c.friendly],
            "reason": report.reason,
        }


def element_to_json(x):
    """Cyclic groups print elements as integers, others as lists"""
    return int(x[0]) if len(x) == 1 else [int(v) for v in x]


@dataclass(frozen=True)
class Splitting:
    """Partition G = Z u X0 u X1 with tau_multiplier swapping X0 and X1"""

    shape: GroupShape
    q: int
    zero: frozenset
    x0: frozenset
    x1: frozenset
    multiplier: int = None
    partition: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.multiplier is None:
            object.__setattr__(self, "multiplier", -self.q)
        if self.partition is None:
            object.__setattr__(self, "partition", orbit_partition(self.shape, self.q * self.q))

    def swapped(self):
        return Splitting(self.shape, self.q, self.zero, self.x1, self.x0, self.multiplier, self.partition)

    def orbit_ids(self, part):
        return sorted(self.partition.ids_of(getattr(self, part)))

    def to_dict(self, expand=False):
        payload = {"group": self.shape.label, "q": self.q}
        for key, part in (("Z", "zero"), ("X0", "x0"), ("X1", "x1")):
            orbits = [self.partition.orbits[i] for i in self.orbit_ids(part)]
            if expand:
                payload[key] = [[element_to_json(x) for x in orbit] for orbit in orbits]
            else:
                payload[key] = [element_to_json(orbit[0]) for orbit in orbits]
        return payload


def _image(s, elements, G):
    return frozenset(tau_apply(s, x, G) for x in elements)


def build_splitting(G, q):
    """Splitting of G over {0} by -q, or the orbit that obstructs it"""
    split_prime_power(q)
    if math.gcd(G.order, q) != 1:
        raise DomainError(f"gcd(|G|={G.order}, q={q}) != 1", group=G.label, q=int(q))
    partition = orbit_partition(G, q * q)
    zero_orbit = partition.orbit_of(G.zero())
    x0, x1 = set(), set()
    for orbit_id, orbit in enumerate(partition.orbits):
        if orbit_id == zero_orbit:
            continue
        partner = partition.orbit_of(tau_apply(-q, orbit[0], G))
        if partner == orbit_id:
            return Obstruction(G, int(q), orbit)
        # orbit ids follow representative order, so the smaller id holds the smaller rep
        if orbit_id < partner:
            x0.update(orbit)
            x1.update(partition.orbits[partner])

    return Splitting(G, int(q), frozenset([G.zero()]), frozenset(x0), frozenset(x1), -int(q), partition)


def check_splitting(sp, trivial_zero=False):
    """Return (ok, reason) for the splitting axioms; reason names the first failure"""
    everything = frozenset(sp.shape.elements)
    parts = (sp.zero, sp.x0, sp.x1)
    if any(not part <= everything for part in parts):
        return False, "a part contains elements outside the group"
    if sum(len(part) for part in parts) != len(everything) or sp.zero | sp.x0 | sp.x1 != everything:
        return False, "Z, X0 and X1 do not partition the group"
    if math.gcd(int(sp.multiplier), sp.shape.exponent) != 1:
        return False, f"multiplier {sp.multiplier} is not a unit"
    if _image(sp.multiplier, sp.x0, sp.shape) != sp.x1 or _image(sp.multiplier, sp.x1, sp.shape) != sp.x0:
        return False, f"tau_{sp.multiplier} does not swap X0 and X1"
    for name, part in (("Z", sp.zero), ("X0", sp.x0), ("X1", sp.x1)):
        if not sp.partition.is_union(part):
            return False, f"{name} is not a union of tau_{sp.q * sp.q}-orbits"
    if trivial_zero and sp.zero != frozenset([sp.shape.zero()]):
        return False, "Z is not {0}"
    return True, ""


def verify_splitting(sp):
    """Check a splitting over Z = {0}; returns (ok, reason)"""
    return check_splitting(sp, trivial_zero=True)


def product_splitting(parts):
    """Layered product of cyclic splittings along a divisibility chain"""
    if not parts:
        raise DomainError("product_splitting needs at least one part")
    q = parts[0][1].q
    multiplier = parts[0][1].multiplier
    orders = []
    for shape, sp in parts:
        if shape.rank != 1 or sp.shape != shape:
            raise DomainError(f"part {shape.label} is not a cyclic splitting")
        if sp.q != q or (sp.multiplier - multiplier) % shape.exponent:
            raise DomainError("parts use mismatched multipliers", q=[p[1].q for p in parts])
        ok, reason = verify_splitting(sp)
        if not ok:
            raise DomainError(f"invalid splitting of Z_{shape.exponent}: {reason}")
        orders.append(shape.exponent)
    G = GroupShape(tuple(orders))

    # X_t = union over i of {0}^(i) x X_t^(i) x Z_{m_(i+1)} x ... x Z_{m_s}
    layers = {"x0": set(), "x1": set()}
    for x in G.elements:
        lead = next((i for i, xi in enumerate(x) if xi), None)
        if lead is None:
            continue
        local = parts[lead][1]
        for side in layers:
            if (x[lead],) in getattr(local, side):
                layers[side].add(x)

    sp = Splitting(G, q, frozenset([G.zero()]), frozenset(layers["x0"]), frozenset(layers["x1"]), multiplier)
    ok, reason = verify_splitting(sp)
    if not ok:
        raise ConsistencyError(f"product splitting failed verification: {reason}")
    return sp


def restrict_splitting(sp, axis):
    """Intersect a splitting with the canonical cyclic subgroup on one coordinate"""
    if not 0 <= axis < sp.shape.rank:
        raise DomainError(f"axis {axis} out of range for {sp.shape.label}")
    cyclic = GroupShape((sp.shape.factors[axis],))

    def project(part):
        return frozenset((x[axis],) for x in part if all(v == 0 for i, v in enumerate(x) if i != axis))

    return Splitting(cyclic, sp.q, project(sp.zero), project(sp.x0), project(sp.x1), sp.multiplier)


def self_orthogonal_decomposition(G, q, zero_set):
    """Write an orbit-union X as Z u X0 of a splitting by -q, or return None"""
    zero_set = frozenset(zero_set)
    complement = frozenset(G.elements) - zero_set
    x0 = _image(-q, complement, G)
    if not x0 <= zero_set:
        return None
    sp = Splitting(G, int(q), zero_set - x0, x0, complement, -int(q))
    ok, _ = check_splitting(sp)
    return sp if ok else None


def splitting_to_lines(sp):
    """Readable orbit listing used by log output"""
    lines = []
    for name, part in (("Z", "zero"), ("X0", "x0"), ("X1", "x1")):
        reps = [format_element(sp.partition.orbits[i][0]) for i in sp.orbit_ids(part)]
        lines.append(f"{name}: " + " ".join(f"C{rep}" for rep in reps))
    return lines
