from helper.abelian_group import orbit_partition, parse_group
from helper.errors import ObstructionError
from helper.field_tower import split_prime_power
from helper.ideal_codes import (SPLIT_CODE_PARTS, GroupAlgebra, is_hermitian_self_dual,
                                is_hermitian_self_orthogonal)
from helper.report_io import ReportIO
from helper.splitting import Obstruction, build_splitting, element_to_json, exists_hsd

from .result import CommandResult


class CodeCommands:
    """Subcommands that build groups, splittings and codes"""

    def __init__(self, main_app):
        self.main_app = main_app

    def register(self, subparsers):
        """Add the code-construction subcommands to the parser"""
        parser = subparsers.add_parser("exists", help="existence of a self-dual extended code of order n")
        parser.add_argument("--q", type=int, required=True)
        parser.add_argument("--n", type=int, required=True)
        parser.set_defaults(handler=self.exists)

        parser = subparsers.add_parser("orbits", help="orbits of multiplication by q^2")
        parser.add_argument("--q", type=int, required=True)
        parser.add_argument("--group", required=True)
        parser.set_defaults(handler=self.orbits)

        parser = subparsers.add_parser("split", help="splitting of G over {0} by -q")
        parser.add_argument("--q", type=int, required=True)
        parser.add_argument("--group", required=True)
        parser.add_argument("--expand", action="store_true", help="list whole orbits, not representatives")
        parser.set_defaults(handler=self.split)

        parser = subparsers.add_parser("code", help="generator matrix of a code of the splitting")
        parser.add_argument("--q", type=int, required=True)
        parser.add_argument("--group", required=True)
        parser.add_argument("--part", choices=list(SPLIT_CODE_PARTS), default="C0")
        parser.set_defaults(handler=self.code, default_format="matrix")

        parser = subparsers.add_parser("extend", help="extended code and its self-duality verdict")
        parser.add_argument("--q", type=int, required=True)
        parser.add_argument("--group", required=True)
        parser.set_defaults(handler=self.extend)

        parser = subparsers.add_parser("verify-dual", help="self-duality of a matrix file")
        parser.add_argument("--matrix", required=True)
        parser.set_defaults(handler=self.verify_dual)

    def exists(self, args):
        report = exists_hsd(args.n, args.q)
        self.main_app.log_message(f"n={args.n}, q={args.q}: {'exists' if report.exists else 'does not exist'}")
        return CommandResult(payload=report.to_dict(), rows=[
            {"n": report.n, "q": report.q, "r": c.r, "ord": c.order, "verdict": c.verdict}
            for c in report.primes
        ])

    def orbits(self, args):
        shape = parse_group(args.group)
        split_prime_power(args.q)
        partition = orbit_partition(shape, args.q * args.q)
        orbits = [[element_to_json(x) for x in orbit] for orbit in partition.orbits]
        self.main_app.log_message(f"{shape.label}: {len(orbits)} orbits under tau_{args.q * args.q}")
        rows = [{"orbit": i, "representative": str(orbit[0]), "size": len(orbit)} for i, orbit in enumerate(orbits)]
        return CommandResult(payload={"group": shape.label, "q": args.q, "multiplier": args.q * args.q,
                                      "orbits": orbits}, rows=rows)

    def _splitting(self, shape, q):
        result = build_splitting(shape, q)
        if isinstance(result, Obstruction):
            details = result.to_dict()
            raise ObstructionError(f"{shape.label} has no splitting by -{q}", **details)
        return result

    def split(self, args):
        shape = parse_group(args.group)
        splitting = self._splitting(shape, args.q)
        payload = splitting.to_dict(expand=args.expand)
        rows = [{"part": key, "orbit": str(orbit)} for key in ("Z", "X0", "X1") for orbit in payload[key]]
        return CommandResult(payload=payload, rows=rows)

    def code(self, args):
        shape = parse_group(args.group)
        splitting = self._splitting(shape, args.q)
        algebra = GroupAlgebra(shape, args.q, self.main_app.settings.get("codes", "field_guard"))
        code = algebra.split_code(splitting, args.part)
        self.main_app.log_message(f"{args.part} of {shape.label}: [{shape.order}, {code.dimension}] "
                                  f"over GF({algebra.F.order})")
        payload = {"group": shape.label, "q": args.q, "part": args.part, "length": shape.order,
                   "dimension": code.dimension}
        return CommandResult(payload=payload, matrix=code.generator)

    def extend(self, args):
        shape = parse_group(args.group)
        report = self.main_app.pipeline_controller.pipeline_selfdual(shape, args.q)
        return CommandResult(payload=report.to_dict(), matrix=report.extended.generator)

    def verify_dual(self, args):
        matrix = ReportIO.read_matrix(args.matrix)
        payload = {
            "length": matrix.length,
            "k": matrix.k,
            "rank": matrix.rank(),
            "self_orthogonal": is_hermitian_self_orthogonal(matrix),
            "self_dual": is_hermitian_self_dual(matrix),
        }
        self.main_app.log_message(f"{args.matrix}: {'self-dual' if payload['self_dual'] else 'not self-dual'}")
        return CommandResult(payload=payload)
