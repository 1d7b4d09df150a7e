from osc_rnnt.console import console, error_console


class Application:
    def __init__(self, verbosity: int = 0, enable_color: bool = True) -> None:
        self.verbosity = verbosity
        if not enable_color:
            self.console = console.__class__(color_system=None)
            self.error_console = error_console.__class__(color_system=None, stderr=True)
        else:
            self.console = console
            self.error_console = error_console

    def log(self, message: str, level: str = "info") -> None:
        if self.verbosity < 0 and level != "error":
            return
        if level == "info" or (level == "debug" and self.verbosity > 0):
            self.console.print(f"[{level.upper()}] {message}")
        elif level in ("notice", "warning"):
            self.error_console.print(f"[{level.upper()}] {message}", style="yellow", markup=False)
        elif level == "error":
            self.error_console.print(f"[{level.upper()}] {message}", markup=False)

    def status(self, message: str):
        return self.console.status(f"[bold cyan]{message}[/bold cyan]")
