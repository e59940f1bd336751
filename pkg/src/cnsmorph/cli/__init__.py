"""Command-line interface and the expression language it reads."""
