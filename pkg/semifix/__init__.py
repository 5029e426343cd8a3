"""semifix - fixed-point subgroups and eigenspaces of semilinear automorphisms of classical groups."""

__version__ = "0.1.0"
