import numpy as np

from ..core.serialization import dumps_stable, format_float
from ..dependencies import fd_config_from, resolve_space
from ..models.cli_config import CliConfig
from ..services.bilinear import signature
from ..services.rigidity import RIGIDITY_TOL, equivalence_map, kernel_of_hat_omega, random_isometry
from ..services.virtual_immersion import omega0

CONSTANCY_POINTS = 5


def cmd_uniqueness(cli: CliConfig) -> int:
    """Recover a seeded random isometry iota from Omega_0 and iota o Omega_0."""
    cfg = fd_config_from(cli)
    space, _ = resolve_space(cli.space_spec, cli.lambdas)
    handle = omega0(space)
    iota = random_isometry(handle.v_form, [cfg.seed])
    result = equivalence_map(handle, handle.compose(iota), samples=CONSTANCY_POINTS, seed=[cfg.seed, 1])
    kernel = kernel_of_hat_omega(handle)

    summary = {
        "space": space.descriptor,
        "signature": list(signature(handle.v_form)),
        "kernel_dim": kernel.dim,
        "recovery_error": float(np.max(np.abs(result.L - iota))),
        "isometry_residual": result.isometry_residual,
        "constancy_residual": result.constancy_residual,
        "tolerance": RIGIDITY_TOL,
    }
    summary["pass"] = max(summary["recovery_error"], result.isometry_residual,
                          result.constancy_residual) <= RIGIDITY_TOL

    if cli.output_format == "json":
        print(dumps_stable(summary))
    else:
        print(f"space: {summary['space']}  signature {tuple(summary['signature'])}  kernel dim {kernel.dim}")
        for key in ("recovery_error", "isometry_residual", "constancy_residual"):
            print(f"  {key:<20} {format_float(summary[key])}")
        print(f"recovered: {'yes' if summary['pass'] else 'no'}")
    return 0 if summary["pass"] else 1
