"""Link Floer homology ranks of links in S^3 computed from grid diagrams."""

__version__ = "0.1.0"
