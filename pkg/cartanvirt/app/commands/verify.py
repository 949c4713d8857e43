import logging

from ..core.errors import SpaceSpecError
from ..core.serialization import format_float
from ..dependencies import catalog_spaces, fd_config_from, resolve_space
from ..models.cli_config import CliConfig
from ..models.report import VerificationReport
from ..services.verification import run_suite

logger = logging.getLogger(__name__)


def render_text(report: VerificationReport) -> str:
    lines = [f"space: {report.space}"]
    for record in report.checks:
        status = "pass" if record.passed else "FAIL"
        lines.append(f"  {status}  {record.name:<40} residual {format_float(record.max_residual)}"
                     f"  tolerance {format_float(record.tolerance)}  samples {record.samples}  ({record.anchor})")
    lines.append(f"overall: {'pass' if report.passed else 'FAIL'}")
    return "\n".join(lines)


def cmd_verify(cli: CliConfig) -> int:
    """Run the identity suite; exit 0 when every record passes, 1 otherwise."""
    cfg = fd_config_from(cli)
    if cli.space_spec == "catalog":
        if cli.lambdas:
            raise SpaceSpecError("--lambda does not apply to --space catalog")
        spaces = catalog_spaces()
    else:
        spaces = [resolve_space(cli.space_spec, cli.lambdas)[0]]

    report = run_suite(spaces[0], cfg)
    for space in spaces[1:]:
        report = report.merge(run_suite(space, cfg))
    logger.info("Verified %s: %s", report.space, "pass" if report.passed else "FAIL")

    print(report.to_json() if cli.output_format == "json" else render_text(report))
    return 0 if report.passed else 1
