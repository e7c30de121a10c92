"""Loop-group construction and verification of Willmore surfaces in spheres.

The pipeline integrates a normalized potential into a meromorphic loop
frame, Iwasawa-factorizes it against the Minkowski real form SO+(1, n+3)
or its compact dual, and projects extended frames to surfaces in S^{n+2}.
"""

from .core import (BlockDecomposition, MinkowskiForm, block_split, group_defect,
                   mink_product, minkowski_matrix, sigma, sigma_matrix)
from .dpw import (ExtendedFrameGrid, MeromorphicFrame, SurfaceGrid, build_surface,
                  integrate_potential, recover_normalized_potential)
from .errors import (BirkhoffCellError, ChartError, DimensionError, IwasawaCellError,
                     LoopsurfError, NotInvertibleError, PairingError, PoleDenseError,
                     PoleError, StencilError, UnsupportedAntiderivativeError)
from .factorize import birkhoff_split, iwasawa_split
from .loops import (LaurentLoop, WienerWeight, compact_basis_matrix,
                    conjugate_reflect, form_inverse, from_compact_basis,
                    identity_loop, loop_add, loop_eval, loop_inverse, loop_mul,
                    loop_scale, reality_defect, to_compact_basis, twist_defect,
                    wiener_norm)
from .oracles import (duality_frame_compact, duality_frame_noncompact,
                      inverse_stereographic, minimal_r4, oracle_eval, rp2_surface,
                      s6_sphere)
from .potentials import (PotentialSpec, RationalFunction, b1_rank, builtin_potential,
                         isotropy_defect, lightlike_pattern_defect,
                         make_spaceform_potential, rp2_symmetry_defect)
from .serialize import (loop_from_text, loop_to_text, potential_from_text,
                        potential_to_text)
from .verify import (CheckResult, ComparisonResult, LiftData, QuadratureResult,
                     VerificationReport, canonical_lift, compare_surfaces,
                     conformal_gauss_defect, duality_potential_match,
                     fit_global_motion, frame_invariant_defect, lift_data_at_point,
                     maurer_cartan_p_defect, rp2_pointwise_symmetry,
                     sphere_and_conformality_defect, sphere_energy_area,
                     willmore_energy_and_area)

__version__ = "0.1.0"
