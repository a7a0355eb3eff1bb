"""twoweight: desk-scale numerics for Orlicz bump conditions, sparse
commutator operators, and two-weight norm inequalities on the line."""

__version__ = "0.1.0"
