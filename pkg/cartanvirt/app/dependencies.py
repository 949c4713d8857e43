"""Resolve command-line input into models, handles and configurations."""
import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from .core.config import Settings, get_settings
from .core.errors import SpaceSpecError
from .models.cli_config import CliConfig
from .models.fd_config import FDConfig
from .models.space_definition import IsometrySpec, SpaceDefinition
from .services.symmetric_space import SymmetricSpaceModel, make_factor, product

logger = logging.getLogger(__name__)

PARAMETER_KEY = {"sphere": "n", "hyperbolic": "n", "sl_so": "n", "euclidean": "r"}

# Spaces run by `verify --space catalog`
CATALOG = (
    {"factors": [{"kind": "sphere", "n": 2}]},
    {"factors": [{"kind": "sphere", "n": 4}]},
    {"factors": [{"kind": "hyperbolic2"}]},
    {"factors": [{"kind": "sl_so", "n": 2}]},
    {"factors": [{"kind": "sl_so", "n": 3}]},
    {"factors": [{"kind": "euclidean", "r": 3}]},
    {"factors": [{"kind": "euclidean", "r": 1}, {"kind": "sphere", "n": 2}]},
    {"factors": [{"kind": "sphere", "n": 2}, {"kind": "hyperbolic2"}]},
    {"factors": [{"kind": "sphere", "n": 2}, {"kind": "hyperbolic2"}, {"kind": "euclidean", "r": 1}]},
)


def parse_space_spec(spec: str) -> SpaceDefinition:
    """
    Shorthand (sphere:2, sl_so:3, euclidean:2, hyperbolic:3, hyperbolic2) or a
    path to a space-definition JSON file.
    """
    try:
        if spec == "hyperbolic2":
            return SpaceDefinition.model_validate({"factors": [{"kind": "hyperbolic2"}]})
        kind, sep, param = spec.partition(":")
        if sep and kind in PARAMETER_KEY:
            return SpaceDefinition.model_validate({"factors": [{"kind": kind, PARAMETER_KEY[kind]: int(param)}]})
        path = Path(spec)
        if not path.is_file():
            raise SpaceSpecError(f"'{spec}' is neither a catalog shorthand nor a readable file")
        return SpaceDefinition.model_validate(json.loads(path.read_text()))
    except (ValueError, ValidationError) as e:
        if isinstance(e, SpaceSpecError):
            raise
        raise SpaceSpecError(f"Invalid space '{spec}': {e}") from e


def build_space(definition: SpaceDefinition, lambdas: Sequence[float] = ()) -> SymmetricSpaceModel:
    """Catalog factors in file order; --lambda values override them one by one."""
    if len(lambdas) > len(definition.factors):
        raise SpaceSpecError(f"{len(lambdas)} lambda overrides for {len(definition.factors)} factors")
    models = []
    for i, factor in enumerate(definition.factors):
        lam = lambdas[i] if i < len(lambdas) else factor.lam
        models.append(make_factor(factor.kind, factor.param, lam))
    return product(models)


def resolve_space(spec: Optional[str], lambdas: Sequence[float] = ()) -> Tuple[SymmetricSpaceModel, List[IsometrySpec]]:
    if not spec:
        raise SpaceSpecError("--space is required")
    definition = parse_space_spec(spec)
    space = build_space(definition, lambdas)
    logger.debug("Resolved '%s' to %s", spec, space.descriptor)
    return space, definition.isometries


def catalog_spaces() -> List[SymmetricSpaceModel]:
    return [build_space(SpaceDefinition.model_validate(entry)) for entry in CATALOG]


def isometry_matrix(rows, size: int) -> np.ndarray:
    try:
        matrix = np.array(rows, dtype=float)
    except (ValueError, TypeError) as e:
        raise SpaceSpecError(f"Malformed isometry matrix: {e}") from e
    if matrix.shape != (size, size):
        raise SpaceSpecError(f"Isometry must be {size}x{size}, got shape {matrix.shape}")
    return matrix


def fd_config_from(cli: CliConfig, settings: Optional[Settings] = None) -> FDConfig:
    """Flags win over the environment, the environment over FDConfig defaults."""
    settings = settings or get_settings()
    values = {
        "seed": cli.seed if cli.seed is not None else settings.CARTANVIRT_SEED,
        "samples": cli.samples if cli.samples is not None else settings.CARTANVIRT_SAMPLES,
    }
    if cli.fd_step is not None:
        values["step"] = cli.fd_step
    if cli.tol_algebraic is not None:
        values["tol_algebraic"] = cli.tol_algebraic
    if cli.tol_fd is not None:
        values["tol_fd"] = cli.tol_fd
    return FDConfig(**values)


def parse_gamma(text: str, size: int) -> np.ndarray:
    """A JSON matrix literal, or -I for minus the identity."""
    if text.strip() == "-I":
        return -np.eye(size)
    try:
        rows = json.loads(text)
    except ValueError as e:
        raise SpaceSpecError(f"Malformed isometry matrix: {e}") from e
    return isometry_matrix(rows, size)
