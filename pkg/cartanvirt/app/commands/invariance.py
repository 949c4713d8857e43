from ..core.errors import SpaceSpecError
from ..core.serialization import dumps_stable, format_float
from ..dependencies import fd_config_from, isometry_matrix, parse_gamma, resolve_space
from ..models.cli_config import CliConfig
from ..services.lie_algebra import GroupElement
from ..services.virtual_immersion import check_invariance, omega0


def cmd_invariance(cli: CliConfig) -> int:
    """
    Residual of Omega o dgamma = Omega for each supplied gamma. The verdict is
    reported, not turned into an exit code.
    """
    cfg = fd_config_from(cli)
    space, isometries = resolve_space(cli.space_spec, cli.lambdas)
    gammas = [(spec.name, isometry_matrix(spec.matrix, space.matrix_size)) for spec in isometries]
    gammas += [(text, parse_gamma(text, space.matrix_size)) for text in cli.gammas]
    if not gammas:
        raise SpaceSpecError("No isometry given: use --gamma or an 'isometries' entry in the space file")

    handle = omega0(space)
    rows = []
    for name, matrix in gammas:
        gamma = GroupElement(matrix, space.factor_tag)
        residual = check_invariance(handle, gamma, samples=cfg.samples, seed=cfg.seed)
        rows.append({"gamma": name, "residual": residual, "threshold": cfg.tol_algebraic,
                     "invariant": residual <= cfg.tol_algebraic})

    if cli.output_format == "json":
        print(dumps_stable({"space": space.descriptor, "isometries": rows}))
    else:
        print(f"space: {space.descriptor}")
        for row in rows:
            print(f"  {row['gamma']}: residual {format_float(row['residual'])}, "
                  f"invariant: {'yes' if row['invariant'] else 'no'}")
    return 0
