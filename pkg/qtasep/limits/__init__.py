from .contours import KernelSpec, QuadratureGrid
from .kernels import airy_kernel, bbp_kernel, hermite_kernel, hermite_kernel_contour
from .fredholm import fredholm_cdf, gue_cdf, bbp_cdf, gk_cdf
from .gue import gue_largest_eig_sample
from .tables import CdfTable, build_table, load_table, cdf_moments
