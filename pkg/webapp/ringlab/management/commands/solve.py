from ..base import RingSimCommand


class Command(RingSimCommand):
    help = "Solve a mesh problem: phase match, or the shortest path by lowering the gain."
    command_name = "solve"
    needs_source = True

    def add_command_arguments(self, parser):
        parser.add_argument("--sweep-phase", action="store_true", help="sweep Ψ over 0..2π instead")
        parser.add_argument("--step", help='phase step, e.g. "0.1pi"')
        parser.add_argument("--xlsx", action="store_true", help="add report.xlsx to the --out bundle (sweeps only)")

    def overrides(self, options):
        return {
            "sweep_phase": options["sweep_phase"], "step": options["step"],
            "xlsx": options["xlsx"] or None,
        }
