"""
Shared progress display instance for osc-rnnt.
"""

from osc_rnnt.console import console
from osc_rnnt.logging.rich_progress import RichProgressDisplay

progress_display = RichProgressDisplay(console)
