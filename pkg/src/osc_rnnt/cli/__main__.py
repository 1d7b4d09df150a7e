from osc_rnnt.cli.main import app

# Console entry point defined in pyproject.toml
if __name__ == "__main__":
    app()
