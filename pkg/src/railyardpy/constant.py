"""Numerical defaults shared across the package."""

#: Terms of a float q-Pochhammer product are kept until ``|base|**k`` drops below this.
POCHHAMMER_CUTOFF = 1e-18

#: Successive trapezoid values must agree to this before a contour integral is accepted.
QUADRATURE_TOL = 1e-9
QUADRATURE_MIN_NODES = 64
QUADRATURE_MAX_NODES = 2 ** 16
DOUBLE_QUADRATURE_MAX_NODES = 2 ** 11

#: Target for the last block of an infinite product to differ from 1.
PRODUCT_TOL = 1e-12
PRODUCT_MAX_DEPTH = 4096

#: Default sampler caps on the largest part and the number of parts.
SAMPLER_MAX_PART = 50
SAMPLER_MAX_LENGTH = 50
#: Relative forward weight under which the sequential sampler drops a partition.
SAMPLER_PRUNE = 1e-10
BOUNDARY_OCCUPANCY_TOL = 1e-4

#: Largest universe ``exact_measure`` will enumerate.
UNIVERSE_GUARD = 10 ** 7

#: Movement of the upper half plane root below which the K iteration stops.
ROOT_K_TOL = 1e-10
ROOT_MAX_K = 64

#: Relative distance from a node to a singularity that counts as crossing.
CONTOUR_MARGIN = 0.1

#: Majorant terms of the brute-force tail bound are kept down to this size.
TAIL_RESOLUTION = 1e-30
TAIL_MAX_DEGREE = 10000
