"""Rate, vulnerability and execution models for hybrid PQC-QKD key distribution."""

__version__ = "0.1.0"
