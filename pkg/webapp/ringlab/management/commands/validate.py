from ..base import RingSimCommand


class Command(RingSimCommand):
    help = "Load and validate a circuit file or fixture."
    command_name = "validate"
    needs_source = True
