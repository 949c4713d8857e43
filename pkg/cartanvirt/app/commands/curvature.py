from typing import Any, Dict, List

from ..core.serialization import dumps_stable, format_float
from ..dependencies import fd_config_from, resolve_space
from ..models.cli_config import CliConfig
from ..services.finite_differences import curvature_oracle
from ..services.symmetric_space import orthonormal_m_frame
from ..services.verification import gauss_route
from ..services.virtual_immersion import omega0


def sectional_table(space, cfg) -> List[Dict[str, Any]]:
    """K per orthonormalized coordinate plane, from II (Gauss) and from the FD oracle."""
    handle = omega0(space)
    e = space.identity()
    frame = orthonormal_m_frame(space).T
    rows = []
    for a in range(len(frame)):
        for b in range(a + 1, len(frame)):
            X, Y = frame[a], frame[b]
            # K = -<R(X,Y)Y, X> for orthonormal X, Y
            gauss = -gauss_route(handle, e, X, Y, Y, X) + 0.0
            numeric = curvature_oracle(handle, e, X, Y, Y, cfg.second_step, cfg.second_step, cfg.richardson)
            oracle = -space.metric(handle.tangent_coords(e, numeric), X) + 0.0
            rows.append({"plane": [a, b], "gauss": gauss, "oracle": oracle, "difference": abs(gauss - oracle)})
    return rows


def cmd_curvature(cli: CliConfig) -> int:
    """Sectional curvatures of the coordinate planes; exit 1 if the two routes disagree beyond tol_fd."""
    cfg = fd_config_from(cli)
    space, _ = resolve_space(cli.space_spec, cli.lambdas)
    rows = sectional_table(space, cfg)
    agree = all(row["difference"] <= cfg.tol_fd for row in rows)

    if cli.output_format == "json":
        print(dumps_stable({"space": space.descriptor, "config": cfg.model_dump(), "planes": rows, "pass": agree}))
    else:
        print(f"space: {space.descriptor}")
        print(f"  {'plane':<8} {'K (gauss)':>24} {'K (oracle)':>24} {'difference':>24}")
        for row in rows:
            plane = f"{row['plane'][0]},{row['plane'][1]}"
            print(f"  {plane:<8} {format_float(row['gauss']):>24} {format_float(row['oracle']):>24} "
                  f"{format_float(row['difference']):>24}")
    return 0 if agree else 1
