import argparse

from helper.counting import (SieveContext, abelian_sum, density_delta, distinct_values, hsd_count, hsd_fit,
                             max_order_suite, pq_count)

from .result import CommandResult


def count_bound(text):
    """Integer bound that also accepts 1e6 and 10**6"""
    text = str(text).strip()
    try:
        if "**" in text:
            base, exponent = text.split("**")
            value = int(base) ** int(exponent)
        elif "e" in text.lower():
            value = float(text)
            if value != int(value):
                raise ValueError
            value = int(value)
        else:
            value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid bound '{text}'")
    return value


class CountingCommands:
    """Subcommands for a(n), P_q, HSD and related counts"""

    def __init__(self, main_app):
        self.main_app = main_app

    def register(self, subparsers):
        """Add the counting subcommands to the parser"""
        parser = subparsers.add_parser("count-hsd", help="HSD(x), exact sieve count")
        parser.add_argument("--q", type=int, required=True)
        parser.add_argument("--x", type=count_bound, nargs="+", required=True)
        parser.add_argument("--b0", type=float, default=None, help="constant for the predicted main term")
        parser.set_defaults(handler=self.count_hsd)

        parser = subparsers.add_parser("density", help="density of non-friendly primes")
        parser.add_argument("--q", type=int, required=True)
        parser.set_defaults(handler=self.density)

        parser = subparsers.add_parser("pq-count", help="friendly primes up to x")
        parser.add_argument("--q", type=int, required=True)
        parser.add_argument("--x", type=count_bound, nargs="+", required=True)
        parser.set_defaults(handler=self.pq_count)

        parser = subparsers.add_parser("asum", help="sum of a(n) up to x")
        parser.add_argument("--x", type=count_bound, nargs="+", required=True)
        parser.set_defaults(handler=self.asum)

        parser = subparsers.add_parser("distinct", help="number of distinct values of a(n)")
        parser.add_argument("--x", type=count_bound, nargs="+", required=True)
        parser.add_argument("--q", type=int, default=None)
        parser.set_defaults(handler=self.distinct)

        parser = subparsers.add_parser("maxorder", help="a(n_r) for n_r = prod of fourth powers")
        parser.add_argument("--r", type=int, required=True)
        parser.add_argument("--q", type=int, default=None)
        parser.set_defaults(handler=self.maxorder)

        parser = subparsers.add_parser("fit-b0", help="empirical b0 at several scales")
        parser.add_argument("--q", type=int, required=True)
        parser.add_argument("--xs", type=count_bound, nargs="+", required=True)
        parser.set_defaults(handler=self.fit_b0)

    @property
    def digits(self):
        return self.main_app.settings.get("output", "float_digits")

    def _reports_result(self, reports):
        payloads = [r.to_dict(self.digits) for r in reports]
        return CommandResult(payload=payloads[0] if len(payloads) == 1 else payloads,
                             rows=[r.to_row(self.digits) for r in reports])

    def _sieve(self, xs, q):
        return SieveContext(max(xs), q, self.main_app.log_message)

    def count_hsd(self, args):
        settings = self.main_app.settings
        sieve = self._sieve(args.x, args.q)
        reports = []
        for x in args.x:
            reports.append(hsd_count(
                x, args.q, b0=args.b0, sieve=sieve,
                chunk_count=settings.get("counting", "chunk_count"),
                cross_check_limit=settings.get("counting", "cross_check_limit"),
                log_func=self.main_app.log_message,
                progress=self.main_app.log_section.progress,
            ))
            self.main_app.log_message(f"HSD({x}) = {reports[-1].exact}")
        return self._reports_result(reports)

    def density(self, args):
        delta = density_delta(args.q)
        return CommandResult(payload={"delta": str(delta)}, rows=[{"q": args.q, "delta": str(delta)}])

    def pq_count(self, args):
        sieve = self._sieve(args.x, args.q)
        return self._reports_result([pq_count(x, args.q, sieve=sieve) for x in args.x])

    def asum(self, args):
        sieve = self._sieve(args.x, None)
        return self._reports_result([abelian_sum(x, sieve=sieve) for x in args.x])

    def distinct(self, args):
        slack = self.main_app.settings.get("counting", "distinct_slack")
        sieve = self._sieve(args.x, args.q)
        return self._reports_result([distinct_values(x, args.q, slack=slack, sieve=sieve) for x in args.x])

    def maxorder(self, args):
        report = max_order_suite(args.r, args.q, log_func=self.main_app.log_message)
        return CommandResult(payload=report.to_dict(self.digits),
                             rows=[row.to_dict(self.digits) for row in report.rows])

    def fit_b0(self, args):
        report = hsd_fit(args.xs, args.q, log_func=self.main_app.log_message)
        self.main_app.log_message(f"b0 estimates spread {report.spread:.3%}")
        rows = [dict(sample) for sample in report.to_dict(self.digits)["samples"]]
        return CommandResult(payload=report.to_dict(self.digits), rows=rows)
