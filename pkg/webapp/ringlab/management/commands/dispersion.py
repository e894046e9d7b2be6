from ...services.dispersion import GEOMETRIES
from ...services.runner import MEDIA
from ..base import RingSimCommand


class Command(RingSimCommand):
    help = "Spin-wave dispersion table for a YIG film; optionally invert f -> k."
    command_name = "dispersion"

    def add_command_arguments(self, parser):
        parser.add_argument("--medium", choices=sorted(MEDIA))
        parser.add_argument("--geometry", choices=GEOMETRIES)
        parser.add_argument("--d0", type=float, help="film thickness (m)")
        parser.add_argument("--m0", type=float, dest="M0_4pi", help="4πM0 (G)")
        parser.add_argument("--h0", type=float, dest="H0", help="bias field (Oe)")
        parser.add_argument("--frequency", type=float, help="GHz; prints k(f)")
        parser.add_argument("--k-min", type=float)
        parser.add_argument("--k-max", type=float)
        parser.add_argument("--points", type=int)

    def overrides(self, options):
        keys = ("medium", "geometry", "d0", "M0_4pi", "H0", "frequency", "k_min", "k_max", "points")
        return {k: options[k] for k in keys}
