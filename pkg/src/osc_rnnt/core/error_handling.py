"""
Error handling utilities for command line operations.
"""

from osc_rnnt.console import error_console


def handle_error(e: Exception, error_type: str, suggestion: str | None = None) -> None:
    """
    Handle errors with consistent formatting and messaging.

    Args:
        e: The exception that was raised
        error_type: Type of error to display
        suggestion: Optional suggestion message to display
    """
    error_console.print(f"\n[bold red]{error_type}:")
    error_console.print(getattr(e, "message", str(e)), style="red", markup=False)
    if getattr(e, "details", None):
        error_console.print("\nDetails:")
        error_console.print(e.details, style="red", markup=False)
    if suggestion:
        error_console.print(f"\n{suggestion}", style="yellow")
