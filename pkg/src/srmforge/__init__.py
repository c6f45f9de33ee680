"""srmforge: SRM detection, taint-spec generation, taint analysis, SARIF reporting."""

__version__ = "0.1.0"
