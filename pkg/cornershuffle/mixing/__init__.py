from cornershuffle.mixing.bounds import bound_curve
from cornershuffle.mixing.bounds import counting_lower_bound
from cornershuffle.mixing.bounds import stuck_card_lower_bound
from cornershuffle.mixing.curve import DistanceCurve
from cornershuffle.mixing.curve import crossing_time
from cornershuffle.mixing.curve import decade_grid
from cornershuffle.mixing.curve import fit_power_law
from cornershuffle.mixing.curve import time_grid
from cornershuffle.mixing.distance import MonteCarloEstimate
from cornershuffle.mixing.distance import array_symmetries
from cornershuffle.mixing.distance import full_tv_curve
from cornershuffle.mixing.distance import full_tv_exact
from cornershuffle.mixing.distance import kset_distance_curve
from cornershuffle.mixing.distance import kset_distance_exact
from cornershuffle.mixing.distance import kset_distance_mc
from cornershuffle.mixing.distance import kset_distance_mc_curve
from cornershuffle.mixing.distance import slowest_cells
from cornershuffle.mixing.distance import start_representatives
