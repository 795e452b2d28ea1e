from dataclasses import dataclass

from helper.errors import ConsistencyError, DomainError, ObstructionError
from helper.field_tower import solve_gamma
from helper.ideal_codes import GroupAlgebra, extend_code, is_hermitian_self_dual
from helper.splitting import Obstruction, build_splitting, splitting_to_lines, verify_splitting


@dataclass
class PipelineReport:
    """Provenance of one splitting -> code -> extension -> verdict run"""

    splitting: object
    gamma: int
    code: object
    extended: object
    self_dual: bool
    extension_degree: int

    def to_dict(self):
        field = self.extended.generator.field
        return {
            "group": self.splitting.shape.label,
            "q": self.splitting.q,
            "n": self.splitting.shape.order,
            "field": {"p": int(field.characteristic), "degree": int(field.degree),
                      "modulus": int(field.irreducible_poly)},
            "extension_degree": self.extension_degree,
            "splitting": self.splitting.to_dict(),
            "gamma": self.gamma,
            "code_dimension": self.code.dimension,
            "extended_length": self.extended.generator.length,
            "extended_dimension": self.extended.dimension,
            "self_dual": self.self_dual,
        }


class PipelineController:
    """Runs the self-dual extension pipeline for one group"""

    def __init__(self, log_func=None, field_guard=None):
        self.log_func = log_func
        self.field_guard = field_guard

    def log(self, message):
        if self.log_func:
            self.log_func(message)

    def pipeline_selfdual(self, shape, q):
        """build_splitting -> code_from_zero_set -> solve_gamma -> extend_code -> is_hermitian_self_dual"""
        if shape.order % 2 == 0:
            raise DomainError(f"|G|={shape.order} must be odd for the extension", group=shape.label)

        self.log(f"Building splitting of {shape.label} by -{q}")
        result = build_splitting(shape, q)
        if isinstance(result, Obstruction):
            details = result.to_dict()
            primes = ", ".join(str(p["r"]) for p in details["primes"])
            self.log(f"Error: orbit of {details['fixed_orbit'][0]} is fixed by tau_-{q}")
            raise ObstructionError(f"no self-dual extension exists (obstructed primes: {primes})", **details)
        ok, reason = verify_splitting(result)
        if not ok:
            raise ConsistencyError(f"built splitting failed verification: {reason}")
        for line in splitting_to_lines(result):
            self.log(line)

        algebra = GroupAlgebra(shape, q) if self.field_guard is None else GroupAlgebra(shape, q, self.field_guard)
        self.log(f"Working in {algebra.tower}")
        code = algebra.split_code(result, "C0")
        gamma = solve_gamma(shape.order, algebra.tower)
        self.log(f"C0 has dimension {code.dimension}; gamma = {int(gamma)}")

        extended = extend_code(code, gamma)
        verdict = is_hermitian_self_dual(extended.generator)
        self.log(f"Extended code [{extended.generator.length}, {extended.dimension}] "
                 f"is {'' if verdict else 'not '}Hermitian self-dual")
        return PipelineReport(result, int(gamma), code, extended, verdict, algebra.tower.s)
