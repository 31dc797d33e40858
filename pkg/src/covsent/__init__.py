"""Corpus analytics and neural sentiment pipeline for tweet CSVs."""

__version__ = "0.1.0"
