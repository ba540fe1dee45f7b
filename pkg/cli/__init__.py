from .commands import run
from .report import Check, Report
