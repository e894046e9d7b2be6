from ..base import RingSimCommand


class Command(RingSimCommand):
    help = "Sweep the output phase shifters and report resonant paths per grid point."
    command_name = "sweep-phase"
    needs_source = True

    def add_command_arguments(self, parser):
        parser.add_argument("--start", default="0", help='first Ψ, e.g. "0" or "0.5pi"')
        parser.add_argument("--stop", default="2pi", help="last Ψ (inclusive)")
        parser.add_argument("--step", default="0.1pi")
        parser.add_argument("--xlsx", action="store_true", help="add report.xlsx to the --out bundle")

    def overrides(self, options):
        return {
            "start": options["start"], "stop": options["stop"], "step": options["step"],
            "xlsx": options["xlsx"] or None,
        }
