from .cli_config import CliConfig
from .fd_config import FDConfig
from .report import CheckRecord, VerificationReport
from .space_definition import FactorSpec, IsometrySpec, SpaceDefinition

__all__ = [
    'CliConfig',
    'FDConfig',
    'CheckRecord',
    'VerificationReport',
    'FactorSpec',
    'IsometrySpec',
    'SpaceDefinition',
]
