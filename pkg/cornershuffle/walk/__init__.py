from cornershuffle.walk.families import Family
from cornershuffle.walk.families import ShuffleFamily
from cornershuffle.walk.families import as_family
from cornershuffle.walk.group import GroupSpace
from cornershuffle.walk.group import full_group_distribution
from cornershuffle.walk.group import group_kernel
from cornershuffle.walk.kernels import STATE_CAP
from cornershuffle.walk.kernels import SparseKernel
from cornershuffle.walk.kernels import TupleSpace
from cornershuffle.walk.kernels import marginal_kernel
from cornershuffle.walk.sampling import sample_positions
from cornershuffle.walk.sampling import sample_trajectory
from cornershuffle.walk.transient import DEFAULT_TOL
from cornershuffle.walk.transient import DistributionVector
from cornershuffle.walk.transient import evolve
from cornershuffle.walk.transient import exact_jump_laws
from cornershuffle.walk.transient import rational_transient
from cornershuffle.walk.transient import transient_distribution
from cornershuffle.walk.transient import uniformize
