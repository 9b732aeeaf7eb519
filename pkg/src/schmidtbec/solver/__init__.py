"""Grid-based 3D Gross-Pitaevskii solver, Schmidt decomposition and field files."""
