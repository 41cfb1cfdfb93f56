"""Wavelet frames and scattering transforms on finite groups.

The public surface mirrors the layering of the library: group construction
(`groups`), signals and convolution (`signals`), wavelet kernels and frame
theory (`frames`), the scattering transform and its verifiable properties
(`scattering`), kernel construction recipes (`learning`), the feature/PCA/SVM
pipeline (`pipeline`), dataset generators and loaders (`datasets`), and the
command-line front end (`cli`).
"""

from .errors import (CapacityError, DomainError, FormatError, GScatterError,
                     InvalidParameterError, NumericalIntegrityError,
                     PreconditionError)
from .frames import (AdmissibilityReport, Kernel, RelaxedReport, admissibility,
                     analyze, empirical_frame_check, frame_bounds,
                     kernel_from_csv, kernel_from_prototype_signals,
                     kernel_to_csv, positivity_bound_check, normalize_parseval,
                     random_parseval_kernel, reconstruct,
                     relaxed_admissibility, synthesize, tensor_multiplicities,
                     tensor_support, wavelet_convolve)
from .groups import (CharacterTable, FiniteGroup, build_affine, build_cyclic,
                     build_product, build_symmetric, build_unit_group,
                     cayley_laplacian_check, group_from_descriptor,
                     murnaghan_nakayama, primitive_root)
from .scattering import (Path, ScatteringOutput, check_approx_invariance,
                         check_energy_preservation, check_energy_split,
                         check_equivariance, check_nonexpansive,
                         check_stability, injectivity_witness, paths_up_to,
                         propagate, scatter, scatter_matrix)
from .signals import (Signal, apply_class_function, class_sums, constant,
                      convolve, delta, inner, involute, isotypic_project,
                      modulus, norm, random_signal, signal_from_bytes,
                      signal_from_csv, signal_to_bytes, signal_to_csv,
                      spectral_energies, translate_left, translate_right)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
