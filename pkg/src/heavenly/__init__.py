"""Anti-self-dual Ricci-flat metrics from the general heavenly equation."""

__version__ = "0.1.0"
