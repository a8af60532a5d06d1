"""figlang: figurative-language tooling for developer communication."""

__version__ = "0.1.0"
