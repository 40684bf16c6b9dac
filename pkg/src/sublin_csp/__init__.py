"""Sublinear-time testers for Max Cut, Max E2Lin(q) and Unique Label Cover
on expander graphs, with exact brute-force oracles for desk-scale checks."""

__version__ = "0.1.0"

from .errors import (CertificationError, GraphFormatError, LimitExceeded,  # noqa: E402
                     ParameterError, SamplingError)
from .graph import Decision, Graph, GraphOracle, Verdict, read_graph, write_graph  # noqa: E402

__all__ = ["Graph", "GraphOracle", "Verdict", "Decision", "read_graph", "write_graph",
           "ParameterError", "GraphFormatError", "LimitExceeded", "CertificationError",
           "SamplingError", "__version__"]
