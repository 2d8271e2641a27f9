"""Word problems and membership for one-relator quotients of starred graph products."""
__version__ = "0.1.0"
