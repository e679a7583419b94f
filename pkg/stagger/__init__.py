"""Exact combinatorics of staggered t-structures on toric varieties."""

from stagger.errors import ParseError, StaggerError, Violation
from stagger.fan import Fan, builtin_fan, chart_spec
from stagger.perversity import Perversity
from stagger.picard import PLFunction
from stagger.sstructure import SStructure

__all__ = ["Fan", "ParseError", "PLFunction", "Perversity", "SStructure", "StaggerError", "Violation", "builtin_fan",
           "chart_spec"]
