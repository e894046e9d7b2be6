from ...services.capacity import DEFAULT_AMPLITUDE_LEVELS, DEFAULT_PHASE_STEPS
from ..base import RingSimCommand


class Command(RingSimCommand):
    help = "Path counts, instruction count and functional throughput of an n x n device."
    command_name = "capacity"

    def add_command_arguments(self, parser):
        parser.add_argument("--n", type=int, default=5)
        parser.add_argument("--l", type=float, default=100e-6, help="cell size (m)")
        parser.add_argument("--vg", type=float, default=1e4, dest="v_g", help="group velocity (m/s)")
        parser.add_argument("--z", type=int, default=DEFAULT_PHASE_STEPS, help="phases per shifter")
        parser.add_argument("--levels", type=int, default=DEFAULT_AMPLITUDE_LEVELS)

    def overrides(self, options):
        return {k: options[k] for k in ("n", "l", "v_g", "z", "levels")}
