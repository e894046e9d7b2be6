"""
Shared plumbing for the simulator management commands: common flags, the
RunManifest hand-off and the exit-status contract (0 solved, 1 no
resonance, 2 error).
"""

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from ..services.runner import ERROR, NO_RESONANCE, SOURCE_FILE, SOURCE_FIXTURE, RunManifest, run


class RingSimCommand(BaseCommand):
    command_name = None
    needs_source = False

    def add_arguments(self, parser):
        if self.needs_source:
            source = parser.add_mutually_exclusive_group(required=True)
            source.add_argument("--fixture", help="fixture name, e.g. example2")
            source.add_argument("--circuit", metavar="FILE", help="circuit description (JSON)")
        parser.add_argument(
            "--out", nargs="?", const=settings.RINGSIM_OUTPUT_DIR, default=None, metavar="DIR",
            help="write the report bundle (default dir: RINGSIM_OUTPUT_DIR)",
        )
        parser.add_argument("--json", action="store_true", help="print the JSON report")
        parser.add_argument("--tolerance", type=float, help="phase tolerance in radians")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def overrides(self, options):
        return {}

    def handle(self, *args, **options):
        overrides = {k: v for k, v in self.overrides(options).items() if v is not None}
        if options.get("tolerance") is not None:
            overrides["tolerance"] = options["tolerance"]
        manifest = RunManifest(
            command=self.command_name,
            source=options.get("fixture") or options.get("circuit"),
            source_kind=SOURCE_FILE if options.get("circuit") else SOURCE_FIXTURE,
            overrides=overrides,
            output_dir=options.get("out"),
            version=settings.RINGSIM_VERSION,
            seed=settings.RINGSIM_SEED,
        )
        result = run(manifest)
        if result.status == ERROR:
            raise CommandError(result.error, returncode=2)

        if options.get("json") and "report.json" in result.files:
            self.stdout.write(result.files["report.json"], ending="")
        else:
            self.stdout.write(result.summary)
        if result.status == NO_RESONANCE:
            raise CommandError(result.summary.splitlines()[0], returncode=1)
