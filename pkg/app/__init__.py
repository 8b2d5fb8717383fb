"""vfkit: core graphs, ranks and intersections of free subgroups of virtually free groups."""

__version__ = "0.1.0"
