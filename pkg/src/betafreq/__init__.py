"""Beta-expansions with prescribed digit frequencies, on certified arithmetic."""

from .balanced import CutPoints, balanced_expand, cut_points, mirror_check
from .beta import (Beta, DigitSeq, Interval, apply_map, greedy_expand, is_feasible, make_beta,
                   partial_sum, sample_points)
from .density import DensityModel, build_density, density_eval, orbit_histogram_compare
from .errors import *  # noqa: F401,F403
from .frequency import FrequencyProfile, freq_profile, is_balanced
from .multiplicity import BranchPoint, enumerate_prefixes, find_branch, variants
from .numerics import (Ball, FieldElement, NumberField, Ordering, PrecisionPolicy,
                       certified_compare, isolate_root)
from .orbit import Orbit, available_backends
from .tuned import (TunedParams, freq_radius, orbit_identities, pseudo_golden, target_to_cut,
                    tuned_expand)

__version__ = "0.1.0"
