import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import galois
import numpy as np

from helper.abelian_group import orbit_partition, tau_apply
from helper.errors import BoundExceededError, ConsistencyError, DomainError
from helper.field_tower import FIELD_GUARD, build_tower, field_ints, primitive_mth_root

WEIGHT_GUARD = 2 ** 24
ENUMERATION_CHUNK = 1 << 12

# Zero sets of the codes attached to a splitting (Z, X0, X1)
SPLIT_CODE_PARTS = {
    "C0": ("x0",),
    "C1": ("x1",),
    "C0Z": ("zero", "x0"),
    "C1Z": ("zero", "x1"),
    "CZ": ("x0", "x1"),
}


def reduced_rows(rows):
    """Reduced row-echelon form with zero rows removed"""
    if rows.shape[0] == 0:
        return rows
    reduced = rows.row_reduce()
    keep = np.any(reduced.view(np.ndarray) != 0, axis=1)
    return reduced[keep]


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Rows spanning a linear code over F = GF(q^2)"""

    rows: galois.FieldArray

    @property
    def field(self):
        return type(self.rows)

    @property
    def k(self):
        return int(self.rows.shape[0])

    @property
    def length(self):
        return int(self.rows.shape[1])

    @property
    def q(self):
        """Square root of |F|, the exponent of Hermitian conjugation"""
        return math.isqrt(self.field.order)

    def rank(self):
        return 0 if self.k == 0 else int(np.linalg.matrix_rank(self.rows))

    def conjugate(self):
        return self.rows ** self.q

    def canonical(self):
        return GeneratorMatrix(reduced_rows(self.rows))


def same_row_space(a, b):
    """True when two generator matrices span the same code"""
    ra, rb = reduced_rows(a.rows), reduced_rows(b.rows)
    return ra.shape == rb.shape and np.array_equal(ra.view(np.ndarray), rb.view(np.ndarray))


def stacked_rank(matrices):
    """Rank of the sum of several codes of the same length"""
    blocks = [field_ints(m.rows) for m in matrices if m.k]
    if not blocks:
        return 0
    field = matrices[0].field
    return int(np.linalg.matrix_rank(field(np.concatenate(blocks, axis=0))))


@dataclass(frozen=True, eq=False)
class IdealCode:
    """The ideal I_X = {f : f(x) = 0 for x in X} of F[G*] with an explicit generator matrix"""

    algebra: "GroupAlgebra"
    zero_set: frozenset
    generator: GeneratorMatrix

    @property
    def shape(self):
        return self.algebra.shape

    @property
    def dimension(self):
        return self.generator.k


@dataclass(frozen=True, eq=False)
class ExtendedCode:
    """C extended by the coordinate -gamma * f(0)"""

    base: IdealCode
    gamma: galois.FieldArray
    generator: GeneratorMatrix

    @property
    def dimension(self):
        return self.generator.k


class GroupAlgebra:
    """F[G*] inside K[G*], characters indexed by group elements via psi_y(x) = zeta^<y,x>"""

    def __init__(self, shape, q, field_guard=FIELD_GUARD):
        if math.gcd(shape.order, q) != 1:
            raise DomainError(f"gcd(|G|={shape.order}, q={q}) != 1", group=shape.label, q=int(q))
        self.shape = shape
        self.q = int(q)
        self.n = shape.order
        self.m = shape.exponent
        self.tower = build_tower(self.q, self.m, field_guard)
        self.F = self.tower.F
        self.K = self.tower.K
        self.zeta = primitive_mth_root(self.tower)
        self.partition = orbit_partition(shape, self.q * self.q)
        self.inv_n = self.tower.inverse_of_n(self.n)

        weights = np.array([self.m // f for f in shape.factors], dtype=np.int64)
        elements = shape.element_array
        self.pairing = ((elements * weights) @ elements.T) % self.m

        power = self.K(1)
        powers = []
        for _ in range(self.m):
            powers.append(int(power))
            power = power * self.zeta
        self.zeta_powers = self.K(powers)
        # characters[y, x] = psi_y(x)
        self.characters = self.zeta_powers[self.pairing]
        self._codes = {}

    def __repr__(self):
        return f"GroupAlgebra(G={self.shape.label}, q={self.q})"

    @cached_property
    def _difference_index(self):
        return self.shape.difference_index()

    def _to_k(self, f):
        if isinstance(f, self.K):
            return f
        return self.tower.embed(f)

    def _to_f(self, f):
        if isinstance(f, self.F):
            return f
        if isinstance(f, self.K):
            return self.tower.restrict(f)
        return self.F(f)

    def _indices(self, elements):
        indices = []
        for x in elements:
            if len(x) != self.shape.rank or any(not 0 <= v < m for v, m in zip(x, self.shape.factors)):
                raise DomainError(f"{x} is not an element of {self.shape.label}")
            indices.append(self.shape.index(x))
        return sorted(indices)

    def identity(self):
        """The trivial character, unit of the algebra"""
        unit = self.K.Zeros(self.n)
        unit[self.shape.index(self.shape.zero())] = 1
        return unit

    def multiply(self, a, b):
        """Convolution product: psi_y * psi_z = psi_(y+z)"""
        a, b = self._to_k(a), self._to_k(b)
        return b[self._difference_index] @ a

    def evaluate_all(self, f):
        """The vector (f(x))_x over K"""
        return self._to_k(f) @ self.characters

    def evaluate(self, f, x):
        """f(x) = sum_psi a_psi psi(x)"""
        return self._to_k(f) @ self.characters[:, self._indices([x])[0]]

    def primitive_idempotent(self, x):
        """e_x = (1/n) sum_psi psi(x)^-1 psi"""
        column = self.pairing[:, self._indices([x])[0]]
        return self.tower.embed(self.inv_n) * self.zeta_powers[(-column) % self.m]

    def idempotent_generator(self, zero_set):
        """e = sum of e_x over x outside the zero set"""
        inside = set(self._indices(zero_set))
        outside = [i for i in range(self.n) if i not in inside]
        if not outside:
            raise DomainError("the zero set is the whole group; the ideal is zero")
        columns = self.zeta_powers[(-self.pairing[:, outside]) % self.m]
        return self.tower.embed(self.inv_n) * columns.sum(axis=1)

    def descends(self, vector):
        """True when every coefficient lies in F"""
        return bool(np.all(self.tower.in_subfield(self._to_k(vector))))

    def code_from_zero_set(self, zero_set):
        """Generator matrix of I_X over F, in reduced row-echelon form"""
        zero_set = frozenset(zero_set)
        if zero_set in self._codes:
            return self._codes[zero_set]
        indices = self._indices(zero_set)
        if not self.partition.is_union(zero_set):
            raise DomainError(f"zero set is not a union of tau_{self.q * self.q}-orbits",
                              group=self.shape.label)
        if not indices:
            rows = self.F.Identity(self.n)
        elif len(indices) == self.n:
            rows = self.F.Zeros((0, self.n))
        else:
            constraints = self.characters[:, indices].T
            # each K-valued constraint becomes s constraints over F
            expanded = field_ints(self.tower.decompose(constraints))
            system = np.ascontiguousarray(np.swapaxes(expanded, 1, 2)).reshape(-1, self.n)
            rows = reduced_rows(self.F(system).null_space())
        if rows.shape[0] != self.n - len(indices):
            raise ConsistencyError(f"I_X has dimension {rows.shape[0]}, expected {self.n - len(indices)}")
        code = IdealCode(self, zero_set, GeneratorMatrix(rows))
        self._codes[zero_set] = code
        return code

    def split_code(self, sp, part):
        """One of C0, C1, C0Z, C1Z, CZ for a splitting"""
        if part not in SPLIT_CODE_PARTS:
            raise DomainError(f"unknown code '{part}', expected one of {', '.join(SPLIT_CODE_PARTS)}")
        zero_set = frozenset().union(*(getattr(sp, name) for name in SPLIT_CODE_PARTS[part]))
        return self.code_from_zero_set(zero_set)

    def hermitian_inner(self, f, g):
        """<f, g>_H by coefficients, checked against the evaluation formula"""
        f, g = self._to_f(f), self._to_f(g)
        if f.shape != g.shape:
            raise DomainError("vectors have different lengths")
        coefficient_form = (f * g ** self.q).sum()

        s = (-pow(self.q, -1, self.m)) % self.m if self.m > 1 else 0
        g_at = self.evaluate_all(g)[self.shape.multiplier_index(s)]
        evaluation_form = self.tower.embed(self.inv_n) * (self.evaluate_all(f) * g_at ** self.q).sum()
        if self.tower.embed(coefficient_form) != evaluation_form:
            raise ConsistencyError("coefficient and evaluation forms of the Hermitian product differ")
        return coefficient_form

    def hermitian_dual_zero_set(self, zero_set):
        """X' = G minus tau_{-q}(X)"""
        image = {tau_apply(-self.q, x, self.shape) for x in zero_set}
        return frozenset(x for x in self.shape.elements if x not in image)

    def mu_action(self, s, f):
        """mu_s(f)(x) = f(s x): the coefficient of psi_y moves to psi_(s y)"""
        if math.gcd(int(s), self.m) != 1:
            raise DomainError(f"s={s} is not a unit modulo {self.m}", s=int(s))
        moved = type(f).Zeros(f.shape)
        moved[self.shape.multiplier_index(s)] = f
        return moved


@lru_cache(maxsize=64)
def group_algebra(shape, q):
    """Cached GroupAlgebra for (G, q)"""
    return GroupAlgebra(shape, q)


def extend_code(code, gamma):
    """Append -gamma * f(0) to every generator row, f(0) being the coefficient sum"""
    algebra = code.algebra
    if algebra.n % 2 == 0:
        raise DomainError(f"extension needs |G| odd, got {algebra.n}", n=algebra.n)
    gamma = gamma if isinstance(gamma, algebra.F) else algebra.F(gamma)
    if algebra.inv_n + gamma ** (algebra.q + 1) != 0:
        raise DomainError(f"gamma={int(gamma)} does not solve 1/n + gamma^(q+1) = 0", gamma=int(gamma))
    rows = code.generator.rows
    extra = -(gamma * rows.sum(axis=1))
    extended = np.concatenate([field_ints(rows), field_ints(extra).reshape(-1, 1)], axis=1)
    return ExtendedCode(code, gamma, GeneratorMatrix(algebra.F(extended)))


def extend_vector(f, gamma):
    """(f, -gamma * f(0)) for a single coefficient vector"""
    tail = -(gamma * f.sum())
    return type(f)(np.append(field_ints(f), int(tail)))


def is_hermitian_self_orthogonal(matrix):
    """M conj(M)^T = 0 with the plain coordinatewise Hermitian form"""
    if matrix.k == 0:
        return True
    gram = matrix.rows @ matrix.conjugate().T
    return bool(np.all(gram.view(np.ndarray) == 0))


def is_hermitian_self_dual(matrix):
    return is_hermitian_self_orthogonal(matrix) and 2 * matrix.rank() == matrix.length


def brute_force_dual(matrix):
    """Hermitian dual by a null-space computation against the conjugated rows"""
    field = matrix.field
    if matrix.k == 0:
        return GeneratorMatrix(field.Identity(matrix.length))
    if matrix.rank() == matrix.length:
        return GeneratorMatrix(field.Zeros((0, matrix.length)))
    return GeneratorMatrix(reduced_rows(matrix.conjugate().null_space()))


def weight_enumeration(matrix, guard=WEIGHT_GUARD):
    """Hamming weight histogram over all codewords"""
    if matrix.k == 0:
        return {0: 1}
    order = matrix.field.order
    total = order ** matrix.k
    if total > guard:
        raise BoundExceededError(f"{total} codewords exceed the enumeration guard {guard}",
                                 codewords=total)
    counts = np.zeros(matrix.length + 1, dtype=np.int64)
    place_values = order ** np.arange(matrix.k, dtype=np.int64)
    for start in range(0, total, ENUMERATION_CHUNK):
        messages = np.arange(start, min(start + ENUMERATION_CHUNK, total), dtype=np.int64)
        digits = (messages[:, None] // place_values) % order
        words = matrix.field(digits) @ matrix.rows
        weights = np.count_nonzero(words.view(np.ndarray), axis=1)
        counts += np.bincount(weights, minlength=matrix.length + 1)
    return {w: int(c) for w, c in enumerate(counts) if c}
