"""Neuroevolution with selection pressure toward information flow versus wiring cost.

Genomes evolve under NEAT-style structural mutation. Ranking uses
performance first and, with a tunable probability, graph measures of
information flow (efficiency, centrality, degree entropy) and the
connection count.
"""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
