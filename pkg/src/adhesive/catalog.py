"""Named scenarios and causal structures used by ``reproduce`` and the tests."""
from __future__ import annotations

from .causal import CiSet, CiStatement
from .hypergraph import Digraph, Hypergraph

# Bell scenarios: every Alice setting measured jointly with every Bob setting
CHSH = Hypergraph([("A1", "B1"), ("A1", "B2"), ("A2", "B1"), ("A2", "B2")])
BELL33 = Hypergraph([(f"A{i}", f"B{j}") for i in (1, 2, 3) for j in (1, 2, 3)])

# five-variable scenario whose unique triangulation forces D _|_ E | ABC
FIVE_VAR = Hypergraph([("A", "B", "C"), ("B", "C", "D"), ("A", "E"), ("B", "E"), ("C", "E"), ("A", "D")])
FIVE_VAR_CI = CiSet([CiStatement(("D",), ("E",), ("A", "B", "C"))], "ABCDE")
FIVE_VAR_COORDS = ("B", "C", "D", "AD", "AE", "BD", "BE", "CD", "CE", "ABC", "BCD")
# (s1, s2, s3) weights of the three expected non-Shannon rows
FIVE_VAR_WEIGHTS = ((2, 2, 2), (1, 2, 1), (2, 1, 1))

# causal structures over A, B, C, D
M1 = Hypergraph([("A", "B"), ("B", "D"), ("B", "C")])
M2 = Hypergraph([("A", "B", "D"), ("B", "C")])
G1 = Digraph("ABCD", [("B", "A"), ("B", "C"), ("B", "D")])
G2 = Digraph("ABCD", [("B", "A"), ("B", "C"), ("B", "D"), ("A", "D")])

# information causality: inputs X0, X1, message M, guesses Y0, Y1
IC_DAG = Digraph(("X0", "X1", "M", "Y0", "Y1"),
                 [("X0", "M"), ("X1", "M"), ("M", "Y0"), ("M", "Y1")])
IC_SCENARIO = Hypergraph([("X0", "Y0"), ("X1", "Y1"), ("M",)])

# Graham reduction examples: a cyclic hypergraph and its acyclic extension by BCE
GRAHAM_CYCLIC = Hypergraph([("A", "B", "C"), ("B", "D", "E"), ("C", "E", "F")])
GRAHAM_ACYCLIC = Hypergraph([("A", "B", "C"), ("B", "D", "E"), ("C", "E", "F"), ("B", "C", "E")])
