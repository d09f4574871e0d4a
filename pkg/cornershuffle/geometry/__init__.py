from cornershuffle.geometry.coupling import CouplingRun
from cornershuffle.geometry.coupling import adversarial_starts
from cornershuffle.geometry.coupling import coupling_times
from cornershuffle.geometry.coupling import maximal_step
from cornershuffle.geometry.coupling import survival
from cornershuffle.geometry.jumps import formula_jump_set
from cornershuffle.geometry.jumps import geometry_report
from cornershuffle.geometry.jumps import jump_matrix
from cornershuffle.geometry.jumps import jump_rate_into
from cornershuffle.geometry.jumps import jump_set
from cornershuffle.geometry.jumps import min_common_jump
from cornershuffle.geometry.jumps import min_jump_rate
from cornershuffle.geometry.regions import Region
from cornershuffle.geometry.regions import cell_region
from cornershuffle.geometry.regions import rectangle
from cornershuffle.geometry.regions import region_a
from cornershuffle.geometry.regions import region_b
from cornershuffle.geometry.regions import region_union
from cornershuffle.geometry.regions import regions
