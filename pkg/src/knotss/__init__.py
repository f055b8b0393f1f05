"""knotss: exact-arithmetic engine for configuration-space cohomology,
spectral sequences of filtered complexes, operadic Hochschild
differentials, partition-graph combinatorics, exact rational geometry
predicates, and a symbolic ledger for chain-level cancellation
identities."""

__version__ = "0.1.0"
