"""dagpu: compiler and cycle-level simulator for an irregular-DAG accelerator.

The toolchain takes an arbitrary computational DAG (sparse triangular
solves, sum-product circuits, dense GEMV, or generic edge lists), partitions
it into barrier-delimited superlayers of per-CU subgraphs, compiles each
subgraph to decoupled load/processing/store instruction streams, and runs
the result on a deterministic cycle-level model of a 64-compute-unit machine
with a banked global scratchpad, an asymmetric crossbar, single-cycle global
barriers, and precision-scalable posit arithmetic (1x32b / 2x16b / 4x8b).
"""

__version__ = "0.1.0"
