"""
Analyses over the value types in app.ds

- area: Dirichlet integral, complement area and their oracles
- certify: inequality certificates and the Hadamard criterion
- extension: quasiconformal extensions and their dilatation
- schwarzian: Schwarzian derivative, norm and extremal families
- harmonic: harmonic-map extension criterion on convex domains
"""
