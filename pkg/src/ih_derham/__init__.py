from ih_derham.__main__ import main

__all__ = ["main"]
