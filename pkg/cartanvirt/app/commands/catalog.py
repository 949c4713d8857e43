from typing import Any, Dict, List

from ..core.serialization import dumps_stable
from ..models.cli_config import CliConfig
from ..services.symmetric_space import make_factor
from ..services.bilinear import signature

# kind, parameter, lambda default (as printed), algebra, dim m, dim h, example parameter
ENTRIES = (
    ("sphere", "n >= 2", "-1/(2(n-1))", "so(n+1)", "n", "n(n-1)/2", 2),
    ("hyperbolic2", "none", "1/2", "sl(2,R)", "2", "1", None),
    ("hyperbolic", "n >= 2", "1/(2(n-1))", "so(1,n)", "n", "n(n-1)/2", 2),
    ("sl_so", "n >= 2", "1/(4n)", "sl(n,R)", "(n-1)(n+2)/2", "n(n-1)/2", 3),
    ("euclidean", "r >= 1", "identity metric (lambda > 0 scales it)", "R^r", "r", "0", 1),
)


def catalog_entries() -> List[Dict[str, Any]]:
    entries = []
    for kind, parameter, lam, algebra, dim_m, dim_h, example in ENTRIES:
        model = make_factor(kind, example)
        p, q = signature(model.ambient_form)
        entries.append({
            "kind": kind,
            "parameter": parameter,
            "lambda_default": lam,
            "algebra": algebra,
            "dim_m": dim_m,
            "dim_h": dim_h,
            "example": {"space": model.descriptor, "dim_g": model.dim, "dim_m": model.dim_m,
                        "signature": [p, q]},
        })
    return entries


def cmd_list(cli: CliConfig) -> int:
    """List the factor kinds with their parameters, default lambda and dimensions."""
    entries = catalog_entries()
    if cli.output_format == "json":
        print(dumps_stable(entries))
        return 0
    for entry in entries:
        label = entry["kind"] if entry["parameter"] == "none" else f"{entry['kind']}({entry['parameter'][0]})"
        example = entry["example"]
        print(f"{label}: lambda default {entry['lambda_default']}; g = {entry['algebra']}, "
              f"dim m = {entry['dim_m']}, dim h = {entry['dim_h']}; "
              f"e.g. {example['space']} has signature ({example['signature'][0]},{example['signature'][1]})")
    return 0
