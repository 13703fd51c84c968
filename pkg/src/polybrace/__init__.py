"""polybrace: exact operadic and shifted-Poisson computer algebra over Q."""

__version__ = "0.1.0"
