"""Self-similar actions, left Rees monoids, inverse semigroups and their K-groups."""

__version__ = "0.1.0"
