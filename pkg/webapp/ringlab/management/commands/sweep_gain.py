from ..base import RingSimCommand


def _levels(text):
    return [float(v) for v in text.split(",") if v.strip()]


class Command(RingSimCommand):
    help = "Sweep the amplifier gain (A0 units) and report resonant paths per level."
    command_name = "sweep-gain"
    needs_source = True

    def add_command_arguments(self, parser):
        parser.add_argument("--levels", type=_levels, help="comma-separated gains, e.g. 10,9,8")
        parser.add_argument("--xlsx", action="store_true", help="add report.xlsx to the --out bundle")

    def overrides(self, options):
        return {"levels": options["levels"], "xlsx": options["xlsx"] or None}
