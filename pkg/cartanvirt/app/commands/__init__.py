from .catalog import cmd_list
from .verify import cmd_verify
from .curvature import cmd_curvature
from .uniqueness import cmd_uniqueness
from .invariance import cmd_invariance

__all__ = ['cmd_list', 'cmd_verify', 'cmd_curvature', 'cmd_uniqueness', 'cmd_invariance']
