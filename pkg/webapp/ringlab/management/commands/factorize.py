from ...services.problems import DEFAULT_PRIMES
from ..base import RingSimCommand


def _primes(text):
    return [int(p) for p in text.split(",") if p.strip()]


class Command(RingSimCommand):
    help = "Factorize N over the device primes (exit 1 when N is not a product of them)."
    command_name = "factorize"

    def add_command_arguments(self, parser):
        parser.add_argument("N", type=int)
        parser.add_argument(
            "--primes", type=_primes, default=list(DEFAULT_PRIMES),
            help="comma-separated distinct primes (default 3,5,7,11,13)",
        )

    def overrides(self, options):
        return {"N": options["N"], "primes": options["primes"]}
