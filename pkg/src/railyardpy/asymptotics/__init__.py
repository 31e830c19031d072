from .checks import ProfileReport, profile_check
from .frozen import FrozenBoundary, double_root_defect, frozen_boundary
from .gfactors import GProduct, f_uvk, f_uvk_product, g_chi, g_chi_product, g_factor, master_product
from .laplace import frozen_window, height_from_slope, laplace_from_slope, laplace_limit, w_plus_map
from .ledger import PoleZeroLedger, check_limit_contour, limit_contour
from .master import RootReport, classify_point, cleared_polynomial, limit_shape_slope, solve_master
from .pochhammer import finite_g_defect, finite_g_product, pochhammer_ratio_asym
from .profile import AsymptoticProfile
