"""Script language, result cache and command-line front end."""

from .dsl import Redefinition, SessionScript, UnboundName, parse_script
from .executor import CommandError, ExecOptions, Session, execute_command

__all__ = ["CommandError", "ExecOptions", "Redefinition", "Session", "SessionScript",
           "UnboundName", "execute_command", "parse_script"]
